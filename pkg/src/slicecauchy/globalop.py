"""The global operators ``G_L``, ``G_R``, slice test functions and the area solver.

``G_L f = |q_|^2 d0 f + q_ sum_i x_i d_i f`` and
``G_R f = |q_|^2 d0 f + (sum_i x_i d_i f) q_`` with ``q_ = Im q``.  Both
are applied by central differences in the four real coordinates, so they
work for anything that can be evaluated on quaternion arrays.  On a slice
``C_j`` and for slice functions ``G_L = v^2 (d_u + j d_v)``; its kernel
consists of the slice hyperholomorphic functions.

The Cauchy kernel is a fundamental solution: against slice test functions
``phi`` on the slice ``C_j`` through ``s``::

    ∫ G_L^{*s}(phi) S_L^{-1}(s, w) du dv = -2 pi |s_|^2 phi(s)

and ``f(p) = ½(1 - j_p j) F(p_j) + ½(1 + j_p j) F(conj p_j)`` with
``F(z) = -1/(2 pi) ∫_{D_j} (s - z)^{-1} V(s) du dv`` solves
``G_L f = |q_|^2 V`` on an axially symmetric domain ``D``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import quaternion as qt
from .errors import DomainError, NonConvergence, ParamError
from .slicefunc import LEFT, AxiallySymmetricDomain, SliceFunction

#: Number of quadrature levels in the default refinement ladders.
LADDER_LEVELS = 4
#: Relative error below which a ladder counts as converged for the monotonicity check.
LADDER_FLOOR = 1e-8


def default_step(q) -> np.ndarray:
    return 1e-5 * (1.0 + qt.norm(q))


def _partials(f: Callable, q, h=None):
    """Central differences ``d0 f`` and ``E f = sum_i x_i d_i f`` at ``q``."""
    q = qt.as_quat(q)
    flat = q.reshape(-1, 4)
    hh = default_step(flat) if h is None else np.broadcast_to(np.asarray(h, float), flat.shape[:1])
    if np.any(hh <= 0):
        raise ParamError("finite-difference step must be positive")
    eye = np.eye(4)
    stencil = np.concatenate([flat[:, None, :] + hh[:, None, None] * eye[None],
                              flat[:, None, :] - hh[:, None, None] * eye[None]], axis=1)
    vals = np.asarray(f(stencil.reshape(-1, 4)), dtype=float).reshape(len(flat), 8, 4)
    d = (vals[:, :4] - vals[:, 4:]) / (2 * hh[:, None, None])
    euler = np.einsum("ni,nik->nk", flat[:, 1:], d[:, 1:])
    return flat, d[:, 0], euler, q.shape


def apply_GL(f: Callable, q, h=None) -> np.ndarray:
    """``G_L f(q)`` by central differences with step ``h`` (default ``1e-5 (1 + |q|)``)."""
    flat, d0, euler, shape = _partials(f, q, h)
    out = qt.norm2(qt.im(flat))[:, None] * d0 + qt.mul(qt.im(flat), euler)
    return out.reshape(shape)


def apply_GR(f: Callable, q, h=None) -> np.ndarray:
    """``G_R f(q)`` by central differences."""
    flat, d0, euler, shape = _partials(f, q, h)
    out = qt.norm2(qt.im(flat))[:, None] * d0 + qt.mul(euler, qt.im(flat))
    return out.reshape(shape)


def adjoint_GL_slice(phi: Callable, q, h=None) -> np.ndarray:
    """Slice adjoint ``G_L^{*s} phi = -G_R phi - 2 phi q_``."""
    q = qt.as_quat(q)
    return -apply_GR(phi, q, h) - 2.0 * qt.mul(phi(q), qt.im(q))


def adjoint_GL(phi: Callable, q, h=None) -> np.ndarray:
    """Adjoint with respect to four-dimensional Lebesgue measure, ``-G_R phi - 4 phi q_``."""
    q = qt.as_quat(q)
    return -apply_GR(phi, q, h) - 4.0 * qt.mul(phi(q), qt.im(q))


# -- projections and test functions -----------------------------------------------------------


def p_plus(g: Callable) -> Callable:
    """Even part ``(g(u, v) + g(u, -v)) / 2``."""
    return lambda u, v: 0.5 * (np.asarray(g(u, v)) + np.asarray(g(u, -np.asarray(v))))


def p_minus(g: Callable) -> Callable:
    """Odd part ``(g(u, v) - g(u, -v)) / 2``."""
    return lambda u, v: 0.5 * (np.asarray(g(u, v)) - np.asarray(g(u, -np.asarray(v))))


class SliceTestFunction(SliceFunction):
    """Smooth slice function with compact support in the parameter plane.

    ``support`` is ``(u_min, u_max, v_max)``; outside that box (mirrored in
    ``v``) both components vanish to working precision.
    """

    def __init__(self, f0, f1, support, *, chirality: str = LEFT, name: str = "phi", source=None):
        super().__init__(f0, f1, chirality=chirality, name=name)
        self.support = tuple(float(x) for x in support)
        self.source = source

    @classmethod
    def bump(cls, center, radius: float, coeff=qt.ONE, chirality: str = LEFT) -> "SliceTestFunction":
        """``T`` of the bump ``c exp(1 - 1/(1 - |z - z0|^2 / r^2))`` about ``z0 = (u0, v0)``."""
        if radius <= 0:
            raise ParamError("radius must be positive")
        z0 = complex(*center) if not np.isscalar(center) else complex(center)
        c = qt.as_quat(coeff)

        def g(u, v):
            r2 = (np.abs((u + 1j * np.asarray(v)) - z0) / radius) ** 2
            inside = r2 < 1
            with np.errstate(divide="ignore", over="ignore"):
                val = np.where(inside, np.exp(1.0 - 1.0 / np.where(inside, 1 - r2, 1.0)), 0.0)
            return val[..., None] * c

        box = (z0.real - radius, z0.real + radius, abs(z0.imag) + radius)
        return lift_T(g, box, chirality=chirality, name="bump")

    @classmethod
    def gaussian(cls, center, width: float, coeff=qt.ONE, chirality: str = LEFT) -> "SliceTestFunction":
        """``T`` of ``c exp(-|z - z0|^2 / w^2)``; support taken as radius ``9 w``."""
        if width <= 0:
            raise ParamError("width must be positive")
        z0 = complex(*center) if not np.isscalar(center) else complex(center)
        c = qt.as_quat(coeff)

        def g(u, v):
            r2 = np.abs((u + 1j * np.asarray(v)) - z0) ** 2 / width ** 2
            return np.exp(-r2)[..., None] * c

        box = (z0.real - 9 * width, z0.real + 9 * width, abs(z0.imag) + 9 * width)
        return lift_T(g, box, chirality=chirality, name="gaussian")


def lift_T(g: Callable, support, chirality: str = LEFT, name: str = "T(g)") -> SliceTestFunction:
    """``T g(q) = P_+ g(q0, |q_|) + j_q P_- g(q0, |q_|)`` (right form for right chirality)."""
    return SliceTestFunction(p_plus(g), p_minus(g), support, chirality=chirality, name=name, source=g)


# -- slice quadrature ---------------------------------------------------------------------------


def _polar_rule(n_r: int, n_theta: int):
    x, w = np.polynomial.legendre.leggauss(n_r)
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    return 0.5 * (x + 1.0), 0.5 * w, theta, 2 * np.pi / n_theta


def polar_cauchy_integral(V: Callable, z: complex, j, extent: Callable, n_r: int, n_theta: int,
                          kernel_side: str = "left") -> np.ndarray:
    """``∫ (s - z)^{-1} V(s) du dv`` over a region star-shaped about ``z``.

    In polar coordinates about the singularity the Jacobian ``r`` cancels
    the kernel, leaving ``∫∫ e^{-j theta} V(z + r e^{j theta}) dr dtheta``;
    the angular rule is the periodic trapezoid, the radial one Gauss-Legendre
    on ``[0, R(theta)]``.  ``V`` maps ``(N, 4)`` slice points to ``(N, ...)``
    quaternion values.  With ``kernel_side="right"`` the integrand is
    ``V(s) (s - z)^{-1}``.
    """
    x, w, theta, dth = _polar_rule(n_r, n_theta)
    R = np.asarray(extent(z, theta), dtype=float)
    r = R[:, None] * x[None, :]
    pts = z + r * np.exp(1j * theta)[:, None]
    vals = np.asarray(V(qt.embed(pts.reshape(-1), j)), dtype=float)
    vals = vals.reshape((n_theta, n_r) + vals.shape[1:])
    radial = np.tensordot(w, np.moveaxis(vals, 1, 0), axes=(0, 0)) * R.reshape((-1,) + (1,) * (vals.ndim - 2))
    rot = qt.embed(np.exp(-1j * theta), j).reshape((n_theta,) + (1,) * (vals.ndim - 3) + (4,))
    prod = qt.mul(rot, radial) if kernel_side == "left" else qt.mul(radial, rot)
    return dth * np.sum(prod, axis=0)


def _ladder(levels, base):
    return [(base[0] * 2 ** k, base[1] * 2 ** k) for k in range(levels)]


@dataclass(frozen=True)
class PairingResult:
    """Refinement ladder of the fundamental pairing."""

    values: np.ndarray
    grids: tuple
    target: np.ndarray

    @property
    def value(self) -> np.ndarray:
        return self.values[-1]

    @property
    def errors(self) -> np.ndarray:
        return qt.norm(self.values - self.target) / qt.norm(self.target)

    @property
    def monotone(self) -> bool:
        """Errors never increase, except for jitter once both sit below ``LADDER_FLOOR``."""
        e = self.errors
        return bool(np.all(e[1:] <= np.maximum(e[:-1], LADDER_FLOOR)))


def fundamental_target(phi: SliceFunction, s, convention: str = "derived") -> np.ndarray:
    """Limit of :func:`fundamental_pairing`.

    ``"derived"`` is ``-2 pi |s_|^2 phi(s)``, the value produced by the
    pairing on the slice through ``s``.  ``"stated"`` is
    ``2 pi j_s |s_|^2 phi(s)``, the normalisation quoted with the
    distributional identity ``G_L S_L^{-1}(s, .) = 2 pi j |s_|^2 delta_s``.
    """
    s = qt.as_quat(s)
    _, v, js = qt.slice_coords(s)
    val = phi(s)
    if convention == "derived":
        return -2 * np.pi * v ** 2 * val
    if convention == "stated":
        return 2 * np.pi * v ** 2 * qt.mul(js, val)
    raise ParamError(f"unknown convention {convention!r}")


def fundamental_pairing(phi: SliceTestFunction, s, j=None, grid=(24, 32), levels: int = LADDER_LEVELS,
                        h=None, convention: str = "derived") -> PairingResult:
    """``∫_{C_j} G_L^{*s}(phi)(w) S_L^{-1}(s, w) du dv`` on a refinement ladder.

    The kernel splits over the two points ``z_j = s0 + j|s_|`` and its
    conjugate (right Representation Formula in ``s``) as
    ``½ (z_j - w)^{-1} (1 - j j_s) + ½ (conj z_j - w)^{-1} (1 + j j_s)``;
    each part is integrated in a polar chart about its own singularity that
    covers the support of ``phi``.  ``grid`` is the coarsest ``(n_r,
    n_theta)``; each level doubles both.
    """
    s = qt.as_quat(s)
    u0, v0, js = qt.slice_coords(s)
    if v0 <= 0:
        raise DomainError("the pairing needs a non-real s")
    j = js if j is None else qt.unit_imaginary(j)
    umin, umax, vmax = phi.support
    far = 1.05 * float(np.max(np.abs(np.array([umin - u0, umax - u0]))) + vmax + v0)
    radius = 2.0 * far
    extent = lambda z, theta: np.full(np.shape(theta), radius)  # noqa: E731
    G = lambda pts: adjoint_GL_slice(phi, pts, h)  # noqa: E731
    zj = complex(u0, v0)
    jjs = qt.mul(j, js)
    right_plus = 0.5 * (qt.ONE - jjs)
    right_minus = 0.5 * (qt.ONE + jjs)
    values, grids = [], []
    for n_r, n_t in _ladder(levels, grid):
        # (z - w)^{-1} = -(w - z)^{-1}
        a = -polar_cauchy_integral(G, zj, j, extent, n_r, n_t, "right")
        b = -polar_cauchy_integral(G, np.conj(zj), j, extent, n_r, n_t, "right")
        values.append(qt.mul(a, right_plus) + qt.mul(b, right_minus))
        grids.append((n_r, n_t))
    return PairingResult(np.array(values), tuple(grids), fundamental_target(phi, s, convention))


def slice_pairing(a: Callable, b: Callable, j, box, n: int = 200) -> np.ndarray:
    """``∫_{C_j} a(w) b(w) du dv`` over ``box = (u_min, u_max, v_min, v_max)``.

    Tensor Gauss-Legendre rule for smooth integrands.
    """
    x, w = np.polynomial.legendre.leggauss(n)
    umin, umax, vmin, vmax = box
    uu = 0.5 * (umax - umin) * (x + 1) + umin
    vv = 0.5 * (vmax - vmin) * (x + 1) + vmin
    U, Vv = np.meshgrid(uu, vv, indexing="ij")
    W = np.outer(w, w) * 0.25 * (umax - umin) * (vmax - vmin)
    pts = qt.embed((U + 1j * Vv).reshape(-1), j)
    vals = qt.mul(a(pts), b(pts))
    return np.tensordot(W.reshape(-1), vals, axes=(0, 0))


# -- solver ---------------------------------------------------------------------------------------


@dataclass
class GlobalSolveResult:
    """Solution of ``G_L f = |q_|^2 V`` with its residual on a probe set."""

    solution: Callable
    probes: np.ndarray
    residual: np.ndarray
    relative_residual: float
    diagnostics: dict = field(default_factory=dict)


class AreaSolution:
    """Evaluator ``p -> f(p)`` for the area-integral solution."""

    def __init__(self, V: Callable, domain: AxiallySymmetricDomain, j, n_r: int, n_theta: int):
        self.V = V
        self.domain = domain
        self.j = qt.unit_imaginary(j)
        self.n_r = n_r
        self.n_theta = n_theta

    def F(self, z) -> np.ndarray:
        """``-1/(2 pi) ∫_{D_j} (s - z)^{-1} V(s) du dv`` at complex points."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.empty(z.shape + (4,))
        for idx, zz in np.ndenumerate(z):
            out[idx] = -polar_cauchy_integral(self.V, complex(zz), self.j, self.domain.extent,
                                              self.n_r, self.n_theta) / (2 * np.pi)
        return out

    def __call__(self, p) -> np.ndarray:
        p = qt.as_quat(p)
        flat = p.reshape(-1, 4)
        u, v, jp = qt.slice_coords(flat, default_j=self.j)
        if not np.all(self.domain.contains_uv(u, v)):
            raise DomainError("solution evaluated outside the domain")
        z = u + 1j * v
        Fp, Fm = self.F(z), self.F(np.conj(z))
        jj = qt.mul(jp, self.j)
        out = 0.5 * (qt.mul(qt.ONE - jj, Fp) + qt.mul(qt.ONE + jj, Fm))
        return out.reshape(p.shape)


def probe_points(domain: AxiallySymmetricDomain, n: int, seed: int = 0, margin: float = 0.1) -> np.ndarray:
    """Random probes with ``|Im q|`` and distance to the boundary above ``margin * scale``."""
    rng = np.random.default_rng(seed)
    umin, umax, vmax = domain.bbox
    scale = domain.scale
    gap = margin * scale
    pts = []
    tries = 0
    while len(pts) < n:
        tries += 1
        if tries > 1000:
            raise DomainError("could not place probes inside the domain")
        u = rng.uniform(umin, umax, 4 * n)
        v = rng.uniform(gap, vmax, 4 * n)
        ok = domain.contains_uv(u, v)
        # distance to the boundary: the slice disc of radius gap must be inside
        for ang in np.linspace(0, 2 * np.pi, 16, endpoint=False):
            ok &= domain.contains_uv(u + gap * np.cos(ang), np.abs(v + gap * np.sin(ang)))
        ok &= v - gap > 0
        pts.extend(zip(u[ok], v[ok]))
    u, v = np.array(pts[:n]).T
    js = qt.random_units(rng, n)
    return qt.real(u) + v[:, None] * js


def solve_global(V: Callable, domain: AxiallySymmetricDomain, grid=(32, 128), j=qt.E1, *, probes: int = 40,
                 seed: int = 0, h=None, tol: float = 1e-2) -> GlobalSolveResult:
    """Solve ``G_L f = |q_|^2 V`` on ``domain`` by the slice area integral.

    ``V`` is evaluated on quaternion arrays (a slice function or any
    vectorised callable).  The residual ``G_L f - |q_|^2 V`` is measured at
    seeded probes away from the real axis and the boundary; the diagnostics
    record the change of ``f`` at the probes when both quadrature orders are
    halved.

    Raises
    ------
    NonConvergence
        If the relative residual exceeds ``tol``.
    """
    n_r, n_theta = grid
    if n_r < 2 or n_theta < 4:
        raise ParamError("grid too coarse")
    f = AreaSolution(V, domain, j, n_r, n_theta)
    q = probe_points(domain, probes, seed)
    gl = apply_GL(f, q, h)
    target = qt.norm2(qt.im(q))[:, None] * np.asarray(V(q), dtype=float)
    res = qt.norm(gl - target)
    _, vmax = domain.bbox[1], domain.bbox[2]
    sup = float(np.max(qt.norm(target))) if np.any(target) else 0.0
    rel = float(np.max(res) / sup) if sup > 0 else float(np.max(res))
    coarse = AreaSolution(V, domain, j, max(n_r // 2, 2), max(n_theta // 2, 4))
    fine_vals = f(q)
    diag = {"quadrature_change": float(np.max(qt.norm(fine_vals - coarse(q)))),
            "max_residual": float(np.max(res)), "scale": sup}
    result = GlobalSolveResult(f, q, res, rel, diag)
    if not np.isfinite(rel) or rel > tol:
        raise NonConvergence(f"global solver residual {rel:.3g} above {tol}")
    return result


# -- volume reduction -------------------------------------------------------------------------------


def volume_reduction_check(g: Callable, f: Callable, domain: AxiallySymmetricDomain, *, n_quad: int = 96,
                           n_mc: int = 400_000, seed: int = 0) -> tuple[float, float, float]:
    """Compare ``4 pi ∫_{v>0} (P+g P+f - P-g P-f) v^2 du dv`` with a 4-D Monte Carlo
    integral of ``T(g) T(f)`` over ``domain``.

    ``g`` and ``f`` are real valued on the parameter plane.  Returns
    ``(slice_value, monte_carlo_value, monte_carlo_stderr)``.
    """
    umin, umax, vmax = domain.bbox
    x, w = np.polynomial.legendre.leggauss(n_quad)
    uu = 0.5 * (umax - umin) * (x + 1) + umin
    vv = 0.5 * vmax * (x + 1)
    U, Vv = np.meshgrid(uu, vv, indexing="ij")
    W = np.outer(w, w) * 0.25 * (umax - umin) * vmax
    inside = domain.contains_uv(U, Vv)
    pg, mg, pf, mf = p_plus(g), p_minus(g), p_plus(f), p_minus(f)
    integrand = (pg(U, Vv) * pf(U, Vv) - mg(U, Vv) * mf(U, Vv)) * Vv ** 2 * inside
    slice_val = 4 * np.pi * float(np.sum(W * integrand))

    rng = np.random.default_rng(seed)
    q = np.column_stack([rng.uniform(umin, umax, n_mc), rng.uniform(-vmax, vmax, (n_mc, 3))])
    u, v, jq = qt.slice_coords(q)
    ok = domain.contains_uv(u, v)
    psi = qt.real(pg(u, v)) + jq * mg(u, v)[:, None]
    ff = qt.real(pf(u, v)) + jq * mf(u, v)[:, None]
    vals = qt.mul(psi, ff)[:, 0] * ok
    vol = (umax - umin) * (2 * vmax) ** 3
    mc = vol * float(np.mean(vals))
    err = vol * float(np.std(vals)) / np.sqrt(n_mc)
    return slice_val, mc, err
