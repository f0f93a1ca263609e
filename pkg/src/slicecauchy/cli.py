"""Command line front end: one JSON job in, one CSV/JSON artifact out.

Exit codes: 0 success, 2 invalid job, 3 non-convergence or non-finite
output, 4 pole hit.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np
from pydantic import ValidationError

from . import contour as ct
from . import globalop as go
from . import kernel as kn
from . import quaternion as qt
from . import series as se
from . import transform as tr
from .errors import NonConvergence, PoleError, Undecidable
from .specs import JobSpec

COMMANDS = ("eval-kernel", "transform", "split", "jump-check", "holder", "series-fit",
            "verify-fundamental", "solve-global", "report")

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_POLE = 0, 2, 3, 4


class Table:
    """Header plus rows, written as CSV with round-trip float formatting."""

    def __init__(self, header):
        self.header = list(header)
        self.rows = []

    def add(self, *cells):
        row = []
        for c in cells:
            if isinstance(c, (list, tuple, np.ndarray)):
                row.extend(np.asarray(c, dtype=float).ravel().tolist())
            else:
                row.append(c)
        self.rows.append(row)

    def finite(self) -> bool:
        return all(np.isfinite(c) for r in self.rows for c in r if isinstance(c, float))

    def render(self) -> str:
        out = io.StringIO()
        out.write(",".join(self.header) + "\n")
        for r in self.rows:
            out.write(",".join(format(c, ".17g") if isinstance(c, float) else str(c) for c in r) + "\n")
        return out.getvalue()


def _q(prefix):
    return [f"{prefix}{k}" for k in range(4)]


def _points(job):
    if not job.points:
        raise ValueError("this command needs points")
    return np.asarray(job.points, dtype=float)


def cmd_eval_kernel(job: JobSpec) -> Table:
    s = np.asarray(job.s, dtype=float)
    p = _points(job)
    if len(s) != len(p):
        raise ValueError("s and points must have equal length")
    eps = job.tolerances.pole_guard
    t = Table(_q("s") + _q("p") + _q("value") + ["pole_distance"])
    d = kn.pole_distance(s, p)
    if job.kernel == "left":
        val = kn.cauchy_kernel_left(s, p, eps).value
    elif job.kernel == "right":
        val = kn.cauchy_kernel_right(s, p, eps).value
    elif job.kernel == "star_inverse":
        val = kn.star_inverse(s, p, eps)
    else:
        val = kn.phi(s, p, eps)
    for k in range(len(s)):
        t.add(s[k], p[k], val[k], float(d[k]))
    return t


def cmd_transform(job: JobSpec) -> Table:
    C = job.build_contour()
    f = job.build_function(C)
    p = _points(job)
    fn = tr.cauchy_transform if job.chirality == "left" else tr.cauchy_transform_right
    val = fn(f, C, p, tol=job.tolerances.quad_tol, eps_pole=job.tolerances.pole_guard)
    d = C.sphere_distance(p)
    t = Table(_q("p") + _q("value") + ["dist_to_boundary"])
    for k in range(len(p)):
        t.add(p[k], val[k], float(d[k]))
    return t


def cmd_split(job: JobSpec) -> Table:
    C = job.build_contour()
    f = job.build_function(C)
    p = _points(job)
    pair = tr.split(f, C, tol=job.tolerances.quad_tol, chirality=job.chirality)
    z = p[:, 0] + 1j * qt.im_norm(p)
    inside = C.inside(z)
    d = C.sphere_distance(p)
    t = Table(_q("p") + ["part"] + _q("value") + ["dist_to_boundary"])
    for k in range(len(p)):
        val = pair.plus(p[k:k + 1]) if inside[k] else pair.minus(p[k:k + 1])
        t.add(p[k], "plus" if inside[k] else "minus", val[0], float(d[k]))
    return t


def cmd_jump_check(job: JobSpec) -> Table:
    C = job.build_contour()
    f = job.build_function(C)
    if job.q0 is None:
        raise ValueError("jump-check needs q0 = [u, v] on the contour")
    jumps = tr.boundary_jump_check(f, C, complex(*job.q0), job.distances, tol=job.tolerances.quad_tol)
    t = Table(["distance", "jump"])
    for d, e in zip(job.distances, jumps):
        t.add(float(d), float(e))
    return t


def cmd_holder(job: JobSpec) -> Table:
    C = job.build_contour()
    f = job.build_function(C)
    h = tr.holder_seminorm(f, C, job.alpha, samples=job.samples)
    comps = h.component_seminorms or ("", "")
    t = Table(["alpha", "seminorm", "sup", "seminorm_f0", "seminorm_f1", "norm"])
    t.add(h.alpha, h.seminorm, h.sup, *[float(c) if c != "" else c for c in comps], h.norm)
    return t


def cmd_series_fit(job: JobSpec) -> list:
    f = job.build_function()
    ser = se.laurent_coefficients(f, job.j, job.rho, job.window, center=job.center)
    return [{"n": int(n), "c": [float(x) for x in c]} for n, c in zip(ser.indices, ser.coeffs)]


def _gaussian(job):
    s = np.asarray(job.s[0] if job.s else job.points[0], dtype=float)
    u, v, _ = qt.slice_coords(s)
    phi = go.SliceTestFunction.gaussian((float(u), float(v)), job.width, job.coeff)
    return phi, s


def cmd_verify_fundamental(job: JobSpec) -> Table:
    phi, s = _gaussian(job)
    res = go.fundamental_pairing(phi, s, grid=job.grid, levels=job.levels, h=job.tolerances.fd_step,
                                 convention=job.convention)
    t = Table(["level", "n_r", "n_theta"] + _q("value") + _q("target") + ["rel_error"])
    for k, ((nr, nt), val, err) in enumerate(zip(res.grids, res.values, res.errors)):
        t.add(k, nr, nt, val, res.target, float(err))
    return t


def cmd_solve_global(job: JobSpec) -> Table:
    if job.domain is None:
        raise ValueError("solve-global needs a domain")
    D = job.domain.build()
    V = job.build_function()
    res = go.solve_global(V, D, grid=job.grid, j=job.j, probes=job.probes, seed=job.seed,
                          h=job.tolerances.fd_step, tol=np.inf)
    t = Table(["u", "v", "j_index", "residual_norm"])
    u, v, _ = qt.slice_coords(res.probes)
    for k in range(len(u)):
        t.add(float(u[k]), float(v[k]), k, float(res.residual[k]))
    return t


def convergence_report(job: JobSpec, levels: int) -> Table:
    """Refinement ladder with errors against the finest level and observed orders."""
    if levels < 3:
        raise ValueError("a convergence report needs at least 3 levels")
    if job.ladder == "quadrature":
        # fixed 4-point Gauss-Legendre on 2^k panels, offset circle around the pole of 1/s
        C = ct.circle((0.5, 0.0), 1.0, job.j, 8)
        x, w = np.polynomial.legendre.leggauss(4)
        vals = []
        for k in range(levels):
            n = 2 ** (k + 1)
            edges = np.linspace(0, 2 * np.pi, n + 1)
            t = (0.5 * (edges[1:, None] - edges[:-1, None]) * (x + 1) + edges[:-1, None]).ravel()
            ww = np.tile(w, n) * np.pi / n
            z = C.arcs[0].z(t)
            ds = qt.embed(-1j * C.arcs[0].dz(t), C.j)
            vals.append(np.tensordot(ww, qt.mul(qt.inverse(qt.embed(z, C.j)), ds), axes=(0, 0)))
        vals = np.array(vals)
        exact = 2 * np.pi * qt.ONE
    else:
        phi, s = _gaussian(job)
        res = go.fundamental_pairing(phi, s, grid=job.grid, levels=levels, h=job.tolerances.fd_step,
                                     convention=job.convention)
        vals, exact = res.values, res.target
    vs_finest = qt.norm(vals - vals[-1])
    vs_exact = qt.norm(vals - exact) / max(float(qt.norm(exact)), 1e-300)
    t = Table(["level"] + _q("value") + ["err_vs_finest", "rel_err_vs_reference", "observed_order"])
    for k in range(levels):
        order = ""
        if 0 < k < levels - 1 and vs_finest[k] > 0 and vs_finest[k - 1] > 0:
            order = float(np.log2(vs_finest[k - 1] / vs_finest[k]))
        t.add(k, vals[k], float(vs_finest[k]), float(vs_exact[k]), order)
    return t


HANDLERS = {
    "eval-kernel": cmd_eval_kernel,
    "transform": cmd_transform,
    "split": cmd_split,
    "jump-check": cmd_jump_check,
    "holder": cmd_holder,
    "series-fit": cmd_series_fit,
    "verify-fundamental": cmd_verify_fundamental,
    "solve-global": cmd_solve_global,
}


def run(job: JobSpec, refine: int | None = None) -> str:
    """Execute a validated job and return the rendered artifact."""
    if job.command == "report":
        out = convergence_report(job, refine if refine is not None else job.levels)
    else:
        out = HANDLERS[job.command](job)
    if isinstance(out, Table):
        if not out.finite():
            raise NonConvergence("non-finite values in the output")
        return out.render()
    text = json.dumps(out, indent=1)
    if "NaN" in text or "Infinity" in text:
        raise NonConvergence("non-finite values in the output")
    return text + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slicecauchy", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--spec", required=True, help="JSON job file ('-' for stdin)")
    ap.add_argument("--out", help="output file (default: stdout)")
    ap.add_argument("--tol", type=float, help="quadrature tolerance")
    ap.add_argument("--seed", type=int, help="seed for randomised probe sets")
    ap.add_argument("--refine", type=int, help="levels of a refinement ladder")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = sys.stdin.read() if args.spec == "-" else open(args.spec, encoding="utf-8").read()
        raw = json.loads(text)
        raw["command"] = args.command
        if args.tol is not None:
            raw.setdefault("tolerances", {})["quad_tol"] = args.tol
        if args.seed is not None:
            raw["seed"] = args.seed
        if args.refine is not None and args.command != "report":
            raw["levels"] = args.refine
        job = JobSpec.model_validate(raw)
        result = run(job, args.refine)
    except PoleError as e:
        print(f"pole: {e}", file=sys.stderr)
        return EXIT_POLE
    except (NonConvergence, Undecidable, FloatingPointError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValidationError, ValueError, OSError, ZeroDivisionError) as e:
        print(f"invalid job: {e}", file=sys.stderr)
        return EXIT_INVALID
    target = args.out or job.output
    if target:
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(result)
    else:
        sys.stdout.write(result)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
