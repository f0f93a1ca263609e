"""Piecewise C^1 contours in one slice plane and quadrature against ``ds_j``.

A contour lives in the plane ``C_j``; its arcs are described by complex
valued parametrisations ``t -> x(t) + i y(t)`` that are embedded as
``x + j y``.  The quaternionic line element is ``ds_j = -j ds``, i.e. the
slice embedding of ``-i gamma'(t) dt``.

Quadrature is adaptive composite Gauss-Legendre: every panel is integrated
with 16 and 32 nodes, panels whose two estimates disagree are bisected, and
accepted panels are summed in parameter order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import quaternion as qt
from .errors import NonConvergence, ParamError

LOW_ORDER = 16
HIGH_ORDER = 32
DEFAULT_TOL = 1e-12
DEFAULT_MAX_LEVEL = 20
CORNER_TOL = 1e-9


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on ``[-1, 1]``."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


# -- arcs --------------------------------------------------------------------------


class Arc:
    """A C^1 arc ``t in [a, b] -> z(t)`` in the complex model of a slice."""

    a: float
    b: float

    def z(self, t) -> np.ndarray:
        raise NotImplementedError

    def dz(self, t) -> np.ndarray:
        raise NotImplementedError

    def reversed(self) -> "Arc":
        return ReversedArc(self)

    @property
    def start(self) -> complex:
        return complex(self.z(np.array([self.a]))[0])

    @property
    def end(self) -> complex:
        return complex(self.z(np.array([self.b]))[0])


@dataclass(frozen=True)
class CircleArc(Arc):
    center: complex
    radius: float
    a: float = 0.0
    b: float = 2 * np.pi

    def z(self, t):
        return self.center + self.radius * np.exp(1j * np.asarray(t, dtype=float))

    def dz(self, t):
        return 1j * self.radius * np.exp(1j * np.asarray(t, dtype=float))


@dataclass(frozen=True)
class EllipseArc(Arc):
    center: complex
    semi_x: float
    semi_y: float
    a: float = 0.0
    b: float = 2 * np.pi

    def z(self, t):
        t = np.asarray(t, dtype=float)
        return self.center + self.semi_x * np.cos(t) + 1j * self.semi_y * np.sin(t)

    def dz(self, t):
        t = np.asarray(t, dtype=float)
        return -self.semi_x * np.sin(t) + 1j * self.semi_y * np.cos(t)


@dataclass(frozen=True)
class Segment(Arc):
    z0: complex
    z1: complex
    a: float = 0.0
    b: float = 1.0

    def z(self, t):
        return self.z0 + (self.z1 - self.z0) * np.asarray(t, dtype=float)

    def dz(self, t):
        return np.full(np.shape(t), self.z1 - self.z0, dtype=complex)


@dataclass(frozen=True)
class GenericArc(Arc):
    zfun: Callable
    dzfun: Callable
    a: float = 0.0
    b: float = 1.0

    def z(self, t):
        return np.asarray(self.zfun(np.asarray(t, dtype=float)), dtype=complex)

    def dz(self, t):
        return np.asarray(self.dzfun(np.asarray(t, dtype=float)), dtype=complex)


@dataclass(frozen=True)
class ReversedArc(Arc):
    base: Arc

    @property
    def a(self):
        return self.base.a

    @property
    def b(self):
        return self.base.b

    def z(self, t):
        return self.base.z(self.a + self.b - np.asarray(t, dtype=float))

    def dz(self, t):
        return -self.base.dz(self.a + self.b - np.asarray(t, dtype=float))

    def reversed(self):
        return self.base


# -- contour -------------------------------------------------------------------------


class Contour:
    """Oriented chain of arcs in the slice plane ``C_j``.

    Parameters
    ----------
    arcs : sequence of Arc
        Consecutive arcs; the end of each must meet the start of the next.
    j : array_like
        Slice unit (3 or 4 components).
    closed : bool
        Whether the last arc returns to the start of the first.
    panels : int
        Initial number of quadrature panels per arc.
    validate : bool
        Run the construction checks (nonvanishing tangent, continuity,
        admissible corners, no self-intersections).
    """

    def __init__(self, arcs, j, closed: bool = True, panels: int = 8, validate: bool = True):
        self.arcs = tuple(arcs)
        if not self.arcs:
            raise ParamError("a contour needs at least one arc")
        self.j = qt.unit_imaginary(j)
        self.closed = bool(closed)
        if panels < 1:
            raise ParamError("panels must be positive")
        self.panels = int(panels)
        if validate:
            self._validate()

    def __repr__(self):
        return f"Contour({len(self.arcs)} arcs, closed={self.closed})"

    # geometry ------------------------------------------------------------------

    def sample(self, per_arc: int = 256, endpoint: bool = False):
        """Sample points ``(arc_index, t, z)`` of every arc."""
        idx, ts, zs = [], [], []
        for k, arc in enumerate(self.arcs):
            t = np.linspace(arc.a, arc.b, per_arc, endpoint=endpoint)
            idx.append(np.full(per_arc, k))
            ts.append(t)
            zs.append(arc.z(t))
        return np.concatenate(idx), np.concatenate(ts), np.concatenate(zs)

    def diameter(self) -> float:
        _, _, z = self.sample(128, endpoint=True)
        return float(np.max(np.abs(z[:, None] - z[None, :])))

    def _validate(self):
        scale = max(self.diameter(), 1e-300)
        for arc in self.arcs:
            t = np.linspace(arc.a, arc.b, 257)
            if arc.b <= arc.a:
                raise ParamError("arc parameter interval must be increasing")
            if np.min(np.abs(arc.dz(t))) <= 1e-12 * scale:
                raise ParamError("arc has a vanishing tangent")
        pairs = list(zip(self.arcs[:-1], self.arcs[1:]))
        if self.closed:
            pairs.append((self.arcs[-1], self.arcs[0]))
        for left, right in pairs:
            if abs(left.end - right.start) > 1e-9 * scale:
                raise ParamError("arcs do not join continuously")
            ratio = right.dz(np.array([right.a]))[0] / left.dz(np.array([left.b]))[0]
            if abs(np.angle(ratio)) > np.pi - CORNER_TOL:
                raise ParamError("corner turns back on itself")
        self._check_simple(scale)

    def _check_simple(self, scale, per_arc: int = 192):
        idx, t, z = self.sample(per_arc, endpoint=True)
        # polyline of each arc, then test pairwise crossings of non-adjacent segments
        starts, ends = [], []
        for k in range(len(self.arcs)):
            zk = z[idx == k]
            starts.append(zk[:-1])
            ends.append(zk[1:])
        p0 = np.concatenate(starts)
        p1 = np.concatenate(ends)
        n = len(p0)
        d = p1 - p0
        cross = lambda a, b: a.real * b.imag - a.imag * b.real  # noqa: E731
        i, k = np.triu_indices(n, 2)
        if self.closed:
            keep = ~((i == 0) & (k == n - 1))
            i, k = i[keep], k[keep]
        # tolerant of touching at shared vertices of consecutive arcs
        denom = cross(d[i], d[k])
        r = p0[k] - p0[i]
        with np.errstate(divide="ignore", invalid="ignore"):
            s1 = cross(r, d[k]) / denom
            s2 = cross(r, d[i]) / denom
        eps = 1e-9
        hit = (np.abs(denom) > 1e-14 * scale ** 2) & (s1 > eps) & (s1 < 1 - eps) & (s2 > eps) & (s2 < 1 - eps)
        if np.any(hit):
            raise ParamError("contour intersects itself")

    def reversed(self) -> "Contour":
        return Contour([a.reversed() for a in reversed(self.arcs)], self.j, self.closed,
                       self.panels, validate=False)

    def points(self, z) -> np.ndarray:
        """Embed complex parameters into the slice."""
        return qt.embed(z, self.j)

    def locate(self, z, samples: int = 512, iters: int = 60):
        """Closest contour parameter to each complex point ``z``.

        Returns ``(arc_index, t, distance)`` arrays shaped like ``z``.
        """
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        shape = z.shape
        zf = z.reshape(-1)
        best_d = np.full(zf.shape, np.inf)
        best_t = np.zeros(zf.shape)
        best_k = np.zeros(zf.shape, dtype=int)
        gr = (np.sqrt(5.0) - 1) / 2
        for k, arc in enumerate(self.arcs):
            t = np.linspace(arc.a, arc.b, samples)
            d = np.abs(arc.z(t)[None, :] - zf[:, None])
            m = np.argmin(d, axis=1)
            lo = t[np.maximum(m - 1, 0)]
            hi = t[np.minimum(m + 1, samples - 1)]
            x1 = hi - gr * (hi - lo)
            x2 = lo + gr * (hi - lo)
            f1 = np.abs(arc.z(x1) - zf)
            f2 = np.abs(arc.z(x2) - zf)
            for _ in range(iters):
                left = f1 < f2
                hi = np.where(left, x2, hi)
                lo = np.where(left, lo, x1)
                x2n = np.where(left, x1, lo + gr * (hi - lo))
                x1n = np.where(left, hi - gr * (hi - lo), x2)
                x1, x2 = x1n, x2n
                f1 = np.abs(arc.z(x1) - zf)
                f2 = np.abs(arc.z(x2) - zf)
            tt = 0.5 * (lo + hi)
            dd = np.abs(arc.z(tt) - zf)
            # the sampled minimum is never worse than the refined one
            dm = d[np.arange(len(zf)), m]
            tt = np.where(dm < dd, t[m], tt)
            dd = np.minimum(dm, dd)
            better = dd < best_d
            best_d = np.where(better, dd, best_d)
            best_t = np.where(better, tt, best_t)
            best_k = np.where(better, k, best_k)
        return best_k.reshape(shape), best_t.reshape(shape), best_d.reshape(shape)

    def sphere_distance(self, p) -> np.ndarray:
        """``dist([p], Gamma)`` for quaternions ``p`` (vectorised).

        The sphere ``[p]`` meets the slice in ``p0 +- |Im p| i``; the distance
        to the curve is the smaller of the two point-to-curve distances.
        """
        p = qt.as_quat(p)
        u, v = p[..., 0], qt.im_norm(p)
        z = u + 1j * v
        d1 = self.locate(z)[2]
        d2 = self.locate(np.conj(z))[2]
        return np.minimum(d1, d2)

    def winding(self, z, per_arc: int = 2048) -> np.ndarray:
        """Winding number of a closed contour around complex points ``z``."""
        if not self.closed:
            raise ParamError("winding number needs a closed contour")
        z = np.asarray(z, dtype=complex)
        _, _, w = self.sample(per_arc)
        w = np.append(w, w[0])
        ang = np.angle((w[1:, None] - z.reshape(-1)[None, :]) / (w[:-1, None] - z.reshape(-1)[None, :]))
        return np.rint(ang.sum(axis=0) / (2 * np.pi)).astype(int).reshape(z.shape)

    def inside(self, z) -> np.ndarray:
        return self.winding(z) != 0

    def length(self, tol: float = DEFAULT_TOL) -> float:
        return float(quad_contour(lambda s, ds, dz: np.abs(dz), self, tol=tol))

    def normal(self, arc_index: int, t: float) -> complex:
        """Unit normal ``i gamma' / |gamma'|``; it points inward for positive orientation."""
        d = complex(self.arcs[arc_index].dz(np.array([t]))[0])
        return 1j * d / abs(d)

    def point(self, arc_index: int, t: float) -> complex:
        return complex(self.arcs[arc_index].z(np.array([t]))[0])


def circle(center=(0.0, 0.0), radius: float = 1.0, j=qt.E1, n: int = 8) -> Contour:
    """Positively oriented circle in ``C_j`` with ``n`` initial panels.

    ``center`` is a pair ``(u, v)``, a complex number or a
    :class:`~slicecauchy.quaternion.SlicePoint`.
    """
    if not radius > 0:
        raise ParamError("radius must be positive")
    if n < 8:
        raise ParamError("at least 8 panels are required")
    if isinstance(center, qt.SlicePoint):
        c = center.z
    elif isinstance(center, complex) or np.isscalar(center):
        c = complex(center)
    else:
        u, v = center
        c = complex(u, v)
    return Contour([CircleArc(c, float(radius))], j, closed=True, panels=n, validate=False)


def ellipse(center=0.0, semi_x: float = 2.0, semi_y: float = 1.0, j=qt.E1, n: int = 8) -> Contour:
    if semi_x <= 0 or semi_y <= 0:
        raise ParamError("semi-axes must be positive")
    return Contour([EllipseArc(complex(center), float(semi_x), float(semi_y))], j, panels=n, validate=False)


def polyline(vertices, j=qt.E1, closed: bool = True, n: int = 2) -> Contour:
    """Contour made of straight segments through complex ``vertices``."""
    v = [complex(x) for x in vertices]
    if closed:
        v = v + [v[0]]
    return Contour([Segment(a, b) for a, b in zip(v[:-1], v[1:])], j, closed=closed, panels=n)


# -- quadrature ----------------------------------------------------------------------------


def _panel(fn, arc, j, lo, hi, order):
    x, w = gauss_legendre(order)
    half = 0.5 * (hi - lo)
    t = lo + half * (x + 1.0)
    z = arc.z(t)
    dz = arc.dz(t)
    s = qt.embed(z, j)
    ds = qt.embed(-1j * dz, j)
    vals = np.asarray(fn(s, ds, dz))
    return half * np.tensordot(w, vals, axes=(0, 0)), half * np.tensordot(w, np.abs(vals), axes=(0, 0))


def quad_contour(fn, contour: Contour, tol: float = DEFAULT_TOL,
                 max_level: int = DEFAULT_MAX_LEVEL):
    """Adaptive integral of ``fn(s, ds_j, gamma') dt`` over ``contour``.

    ``fn`` receives the embedded nodes ``s`` (shape ``(N, 4)``), the
    embedded line elements ``ds_j`` and the complex tangents, and returns
    an array with leading axis ``N``.  Error estimates are the differences
    of the 16 and 32 point rules.  The integral is returned once the summed
    error of all panels is at most ``tol`` times the first-level estimate of
    the integral of ``|fn|``; until then, panels whose error exceeds their
    share of that budget (proportional to parameter length) are bisected.
    """
    if not tol > 0:
        raise ParamError("tolerance must be positive")
    j = contour.j
    total = float(sum(arc.b - arc.a for arc in contour.arcs))
    work = []
    for k, arc in enumerate(contour.arcs):
        edges = np.linspace(arc.a, arc.b, contour.panels + 1)
        work.extend((k, lo, hi) for lo, hi in zip(edges[:-1], edges[1:]))
    accepted = []
    accepted_err = 0.0
    scale = None
    for level in range(max_level + 1):
        results = []
        for k, lo, hi in work:
            hi_est, abs_est = _panel(fn, contour.arcs[k], j, lo, hi, HIGH_ORDER)
            lo_est, _ = _panel(fn, contour.arcs[k], j, lo, hi, LOW_ORDER)
            if not np.all(np.isfinite(hi_est)):
                raise NonConvergence("non-finite integrand on the contour")
            results.append((k, lo, hi, hi_est, abs_est, float(np.max(np.abs(hi_est - lo_est)))))
        if scale is None:
            scale = max(float(np.max(sum(r[4] for r in results))), 1e-300)
        budget = tol * scale
        if accepted_err + sum(r[5] for r in results) <= budget:
            accepted.extend((k, lo, est) for k, lo, _, est, _, _ in results)
            work = []
        else:
            nxt = []
            for k, lo, hi, est, _, err in results:
                if err <= budget * (hi - lo) / total:
                    accepted.append((k, lo, est))
                    accepted_err += err
                else:
                    mid = 0.5 * (lo + hi)
                    nxt.extend([(k, lo, mid), (k, mid, hi)])
            work = nxt
        if not work:
            accepted.sort(key=lambda r: (r[0], r[1]))
            out = accepted[0][2].copy()
            for r in accepted[1:]:
                out = out + r[2]
            return out
    raise NonConvergence(f"contour quadrature did not converge in {max_level} levels")


def integrate_ds_j(g, contour: Contour, right=None, tol: float = DEFAULT_TOL,
                   max_level: int = DEFAULT_MAX_LEVEL) -> np.ndarray:
    """``∮ g(s) ds_j right(s)`` with ``ds_j = -j ds``.

    ``g`` and ``right`` map ``(N, 4)`` node arrays to ``(N, ..., 4)``
    values; ``right`` defaults to 1, giving ``∮ g ds_j``.
    """

    def fn(s, ds, dz):
        left = np.asarray(g(s), dtype=float)
        dsb = ds.reshape(ds.shape[:1] + (1,) * (left.ndim - 2) + (4,))
        val = qt.mul(left, dsb)
        if right is not None:
            r = np.asarray(right(s), dtype=float)
            r = r.reshape(r.shape[:1] + (1,) * (val.ndim - r.ndim) + r.shape[1:])
            val = qt.mul(val, r)
        return val

    return quad_contour(fn, contour, tol=tol, max_level=max_level)


def ml_bound_check(g, contour: Contour, samples: int = 4096, tol: float = DEFAULT_TOL):
    """``(|∮ g ds_j|, |Gamma| max |g|)``; the first never exceeds the second."""
    lhs = float(qt.norm(integrate_ds_j(g, contour, tol=tol)))
    _, _, z = contour.sample(max(samples // len(contour.arcs), 2), endpoint=True)
    gmax = float(np.max(qt.norm(g(contour.points(z)))))
    return lhs, contour.length(tol) * gmax
