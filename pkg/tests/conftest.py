import time

import numpy as np
import pytest

from slicecauchy import quaternion as qt


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_quats(rng, n, scale=1.0):
    return scale * rng.normal(size=(n, 4))


def same_slice_pairs(rng, n, j=None):
    """Random pairs in one slice, returned with their complex models."""
    j = qt.random_units(rng, 1)[0] if j is None else j
    z = rng.normal(size=(2, n)) + 1j * rng.normal(size=(2, n))
    return qt.embed(z[0], j), qt.embed(z[1], j), z[0], z[1], j


def points_in_ball(rng, n, radius):
    q = rng.normal(size=(n, 4))
    r = radius * rng.uniform(0, 1, n) ** 0.25
    return q / qt.norm(q)[:, None] * r[:, None]


# -- acceptance reporting ---------------------------------------------------------------------

ACCEPTANCE: dict = {}


class _Criterion:
    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget
        self.notes = []

    def note(self, text):
        self.notes.append(text)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and elapsed < self.budget
        detail = "; ".join(self.notes)
        if exc_type is not None:
            detail = (detail + "; " if detail else "") + f"{exc_type.__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        ACCEPTANCE[self.number] = (ok, self.title, elapsed, self.budget, detail)
        line = f"criterion {self.number:2d} {'PASS' if ok else 'FAIL'}  {self.title} ({elapsed:.2f} s / {self.budget:g} s)"
        print("\n" + line + (f"  [{detail}]" if detail else ""))
        if exc_type is None and elapsed >= self.budget:
            raise AssertionError(f"criterion {self.number} exceeded its time budget: {elapsed:.2f} s")
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, title, elapsed, budget, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title} "
                                    f"({elapsed:.2f} s / {budget:g} s)" + (f"  [{detail}]" if detail else ""))
