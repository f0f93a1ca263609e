"""Slice functions ``f(u + jv) = f0(u, v) + j f1(u, v)`` and their algebra.

A :class:`SliceFunction` stores the two component maps ``f0, f1`` on the
parameter half-plane (both vectorised: arrays ``u, v`` in, ``(..., 4)``
quaternion arrays out) and a chirality flag.  Left functions read
``f0 + j f1``, right functions ``f0 + f1 j``.  Everything else (the
⋆-products, ⋆-inverse, slice derivative and Cauchy-Riemann residual) works
on the component pair.
"""

from __future__ import annotations

from math import comb
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from . import quaternion as qt
from .errors import DomainError, ParamError

LEFT = "left"
RIGHT = "right"


def _qvals(val, shape) -> np.ndarray:
    """Broadcast a component value to a quaternion array of ``shape + (4,)``.

    A bare ``(4,)`` value is read as one quaternion unless ``shape == (4,)``,
    where it is ambiguous and taken as four reals; return full arrays there.
    """
    val = np.asarray(val, dtype=float)
    if val.shape[-1:] == (4,) and val.ndim >= 1 and val.shape[:-1] == tuple(shape):
        return val
    if val.shape == tuple(shape) or val.ndim == 0:
        return qt.real(np.broadcast_to(val, shape))
    if val.shape == (4,):
        return np.broadcast_to(val, tuple(shape) + (4,)).copy()
    raise ValueError(f"component returned shape {val.shape}, expected {tuple(shape)} or {tuple(shape) + (4,)}")


class AxiallySymmetricDomain:
    """Open axially symmetric set described on the parameter half-plane.

    ``contains_uv(u, v)`` decides membership of ``u + jv`` for any ``j``;
    it is only ever called with ``v >= 0``.  ``bbox`` is
    ``(umin, umax, vmax)``.  ``extent`` optionally returns, for a point
    ``z`` of the slice and angles ``theta``, the distance from ``z`` to the
    boundary along each ray (domains star-shaped with respect to ``z``).
    """

    def __init__(self, contains_uv, bbox, *, extent=None, boundary=None, name="domain"):
        self._contains = contains_uv
        self.bbox = tuple(float(b) for b in bbox)
        self._extent = extent
        self._boundary = boundary
        self.name = name

    def contains_uv(self, u, v) -> np.ndarray:
        u, v = np.broadcast_arrays(np.asarray(u, float), np.abs(np.asarray(v, float)))
        return np.asarray(self._contains(u, v), dtype=bool)

    def contains(self, q) -> np.ndarray:
        u, v, _ = qt.slice_coords(q)
        return self.contains_uv(u, v)

    @property
    def scale(self) -> float:
        umin, umax, vmax = self.bbox
        return max(umax - umin, 2 * vmax)

    def boundary_contour(self, j, panels: int = 16):
        if self._boundary is None:
            raise DomainError(f"{self.name} has no boundary generator")
        return self._boundary(j, panels)

    def extent(self, z: complex, theta: np.ndarray) -> np.ndarray:
        """Ray exit distance ``R(theta)`` from the slice point ``z``."""
        if not self.contains_uv(z.real, z.imag):
            raise DomainError(f"{z} is not inside {self.name}")
        if self._extent is not None:
            return self._extent(z, theta)
        return self._bisect_extent(z, np.asarray(theta, dtype=float))

    def _bisect_extent(self, z, theta, iters: int = 60):
        umin, umax, vmax = self.bbox
        far = 2.0 * np.hypot(max(abs(umin - z.real), abs(umax - z.real)), vmax + abs(z.imag))
        d = np.exp(1j * theta)
        # star-shapedness: membership along each ray must switch only once
        probe = np.linspace(0, 1, 65)[1:-1]
        pts = z + np.outer(d, probe * far)
        inside = self.contains_uv(pts.real, pts.imag)
        if np.any(np.diff(inside.astype(int), axis=1) > 0):
            raise DomainError(f"{self.name} is not star-shaped with respect to {z}")
        lo = np.zeros_like(theta)
        hi = np.full_like(theta, far)
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            p = z + d * mid
            ok = self.contains_uv(p.real, p.imag)
            lo = np.where(ok, mid, lo)
            hi = np.where(ok, hi, mid)
        return 0.5 * (lo + hi)


def ball(center: float = 0.0, radius: float = 1.0) -> AxiallySymmetricDomain:
    """The ball ``|q - center| < radius`` about a real center."""
    if radius <= 0:
        raise ParamError("ball radius must be positive")
    c = float(center)

    def contains(u, v):
        return (u - c) ** 2 + v ** 2 < radius ** 2

    def extent(z, theta):
        # |z - c + t e^{i theta}| = radius, positive root
        w = z - c
        d = np.exp(1j * np.asarray(theta, dtype=float))
        b = (np.conj(d) * w).real
        return -b + np.sqrt(b * b + radius ** 2 - abs(w) ** 2)

    def boundary(j, panels):
        from .contour import circle

        return circle((c, 0.0), radius, j, panels)

    return AxiallySymmetricDomain(contains, (c - radius, c + radius, radius),
                                  extent=extent, boundary=boundary, name=f"B({c}, {radius})")


class SliceFunction:
    """A left or right slice function given by its component pair.

    Parameters
    ----------
    f0, f1 : callable
        ``(u, v) -> array``; may return real arrays of the input shape or
        quaternion arrays with a trailing axis of 4.  ``f0`` must be even
        and ``f1`` odd in ``v``.
    chirality : {"left", "right"}
    domain : AxiallySymmetricDomain or callable, optional
        Membership test on ``(u, |v|)``; ``None`` means everywhere.
    smoothness : int or inf
        Declared differentiability class of the components.
    """

    def __init__(self, f0, f1, *, chirality: str = LEFT, domain=None, smoothness=np.inf,
                 name: str = "f"):
        if chirality not in (LEFT, RIGHT):
            raise ParamError(f"chirality must be 'left' or 'right', got {chirality!r}")
        self._f0 = f0
        self._f1 = f1
        self.chirality = chirality
        if domain is not None and not isinstance(domain, AxiallySymmetricDomain):
            domain = AxiallySymmetricDomain(domain, (-np.inf, np.inf, np.inf))
        self.domain = domain
        self.smoothness = smoothness
        self.name = name

    def __repr__(self):
        return f"SliceFunction({self.name!r}, {self.chirality})"

    def check_domain(self, u, v):
        if self.domain is None:
            return
        if not np.all(self.domain.contains_uv(u, v)):
            raise DomainError(f"{self.name}: point outside the domain")

    def components(self, u, v, check: bool = True) -> tuple[np.ndarray, np.ndarray]:
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        u, v = np.broadcast_arrays(u, v)
        if check:
            self.check_domain(u, v)
        return _qvals(self._f0(u, v), u.shape), _qvals(self._f1(u, v), u.shape)

    def __call__(self, q) -> np.ndarray:
        """Evaluate at quaternions ``q`` via ``f0 + j_q f1`` (or ``f0 + f1 j_q``)."""
        u, v, jq = qt.slice_coords(q)
        a, b = self.components(u, v)
        if self.chirality == LEFT:
            return a + qt.mul(jq, b)
        return a + qt.mul(b, jq)

    def on_slice(self, z, j) -> np.ndarray:
        """Evaluate at ``x + j y`` for complex ``z = x + iy``."""
        z = np.asarray(z, dtype=complex)
        a, b = self.components(z.real, z.imag)
        j = np.asarray(j, dtype=float)
        return a + (qt.mul(j, b) if self.chirality == LEFT else qt.mul(b, j))

    # arithmetic on the pair --------------------------------------------------

    def _combine(self, other, op, name):
        if isinstance(other, SliceFunction):
            _same_chirality(self, other)
            dom = _intersect(self.domain, other.domain)
            return SliceFunction(lambda u, v: op(self.components(u, v, False)[0], other.components(u, v, False)[0]),
                                 lambda u, v: op(self.components(u, v, False)[1], other.components(u, v, False)[1]),
                                 chirality=self.chirality, domain=dom,
                                 smoothness=min(self.smoothness, other.smoothness), name=name)
        c = qt.as_quat(other)
        return SliceFunction(lambda u, v: op(self.components(u, v, False)[0], c),
                             lambda u, v: self.components(u, v, False)[1],
                             chirality=self.chirality, domain=self.domain,
                             smoothness=self.smoothness, name=name)

    def __add__(self, other):
        return self._combine(other, np.add, f"({self.name}+...)")

    def __sub__(self, other):
        if isinstance(other, SliceFunction):
            return self._combine(other, np.subtract, f"({self.name}-...)")
        return self._combine(-qt.as_quat(other), np.add, f"({self.name}-c)")

    def scale(self, c, side: str = "right") -> "SliceFunction":
        """Multiply by a constant quaternion on the given side.

        Right multiplication preserves left slice functions and vice versa.
        """
        c = qt.as_quat(c)
        if side == "right":
            g = lambda x: qt.mul(x, c)  # noqa: E731
        else:
            g = lambda x: qt.mul(c, x)  # noqa: E731
        return SliceFunction(lambda u, v: g(self.components(u, v, False)[0]),
                             lambda u, v: g(self.components(u, v, False)[1]),
                             chirality=self.chirality, domain=self.domain,
                             smoothness=self.smoothness, name=f"{self.name}*c")


def _same_chirality(f, g):
    if f.chirality != g.chirality:
        raise ParamError("slice functions of different chirality cannot be combined")


def _intersect(d1, d2):
    if d1 is None:
        return d2
    if d2 is None:
        return d1
    b1, b2 = d1.bbox, d2.bbox
    box = (max(b1[0], b2[0]), min(b1[1], b2[1]), min(b1[2], b2[2]))
    if box[0] >= box[1]:
        raise DomainError("domains do not intersect")
    return AxiallySymmetricDomain(lambda u, v: d1.contains_uv(u, v) & d2.contains_uv(u, v), box,
                                  name=f"{d1.name}&{d2.name}")


def evaluate(f: SliceFunction, q) -> np.ndarray:
    return f(q)


# -- constructors --------------------------------------------------------------


def constant(c, chirality: str = LEFT) -> SliceFunction:
    c = qt.as_quat(c)
    return SliceFunction(lambda u, v: np.broadcast_to(c, np.shape(u) + (4,)),
                         lambda u, v: np.zeros(np.shape(u) + (4,)), chirality=chirality, name="const")


def identity(chirality: str = LEFT) -> SliceFunction:
    return SliceFunction(lambda u, v: u, lambda u, v: v, chirality=chirality, name="q")


class LaurentPolynomial(SliceFunction):
    """``sum_n (q - center)^n a_n`` (left) or ``sum_n a_n (q - center)^n`` (right).

    ``coeffs[k]`` multiplies the power ``n_min + k``; the center is real.
    Negative powers exclude the center from the domain.
    """

    def __init__(self, coeffs, n_min: int = 0, center: float = 0.0, chirality: str = LEFT):
        coeffs = np.atleast_2d(np.asarray(coeffs, dtype=float))
        if coeffs.shape[-1] != 4:
            raise ParamError("coefficients must be quaternions")
        self.coeffs = coeffs
        self.n_min = int(n_min)
        self.center = float(center)
        powers = np.arange(self.n_min, self.n_min + len(coeffs))
        self.powers = powers
        domain = None
        if self.n_min < 0:
            c = self.center
            domain = AxiallySymmetricDomain(lambda u, v: (u - c) ** 2 + v ** 2 > 0,
                                            (-np.inf, np.inf, np.inf), name="punctured")

        def zpow(u, v):
            z = (u - self.center) + 1j * v
            with np.errstate(divide="ignore", invalid="ignore"):
                return z[..., None] ** powers

        super().__init__(lambda u, v: zpow(u, v).real @ coeffs,
                         lambda u, v: zpow(u, v).imag @ coeffs,
                         chirality=chirality, domain=domain, name="laurent-poly")

    @property
    def degree(self) -> int:
        return int(self.powers[-1])


def polynomial(coeffs, n_min: int = 0, center: float = 0.0, chirality: str = LEFT) -> LaurentPolynomial:
    """Right-coefficient (left-coefficient for right chirality) Laurent polynomial."""
    return LaurentPolynomial(coeffs, n_min=n_min, center=center, chirality=chirality)


def from_holomorphic(F: Callable, coeff=qt.ONE, chirality: str = LEFT, domain=None,
                     name: str = "F") -> SliceFunction:
    """Slice extension of an intrinsic holomorphic ``F`` times a constant.

    ``F`` maps complex arrays to complex arrays and must satisfy
    ``F(conj z) = conj F(z)``.  The result is ``F(q) c`` (left) or
    ``c F(q)`` (right).
    """
    c = qt.as_quat(coeff)

    def comp(u, v):
        return np.asarray(F(u + 1j * v), dtype=complex)

    return SliceFunction(lambda u, v: comp(u, v).real[..., None] * c,
                         lambda u, v: comp(u, v).imag[..., None] * c,
                         chirality=chirality, domain=domain, name=name)


def sampled(contour, params, values, chirality: str = LEFT) -> SliceFunction:
    """Boundary data tabulated along a closed single-arc contour.

    Values ``f(gamma(t_k))`` are interpolated by a periodic cubic spline in
    the parameter; the component pair is recovered from each point and its
    mirror image ``u - jv``, so the contour must be symmetric about the real
    axis.  The function is defined only on (the sphere orbit of) the curve.
    """
    if len(contour.arcs) != 1 or not contour.closed:
        raise ParamError("sampled data needs a closed single-arc contour")
    arc = contour.arcs[0]
    t = np.asarray(params, dtype=float)
    vals = np.asarray(values, dtype=float)
    if vals.shape != (len(t), 4):
        raise ParamError("values must be one quaternion per parameter")
    if np.any(np.diff(t) <= 0):
        raise ParamError("parameters must be strictly increasing")
    period = arc.b - arc.a
    if t[-1] - t[0] < period - 1e-12:
        t = np.append(t, t[0] + period)
        vals = np.vstack([vals, vals[:1]])
    spline = CubicSpline(t, vals, axis=0, bc_type="periodic")
    j = contour.j
    tol = 1e-8 * max(1.0, contour.diameter())

    def at(z):
        _, tt, dist = contour.locate(z)
        if np.any(dist > tol):
            raise DomainError("sampled data evaluated off its contour")
        tt = t[0] + np.mod(tt - t[0], period)
        return spline(tt)

    def parts(u, v):
        zp = u + 1j * np.abs(v)
        fp, fm = at(zp), at(np.conj(zp))
        half_diff = 0.5 * (fp - fm)
        odd = qt.mul(-j, half_diff) if chirality == LEFT else qt.mul(half_diff, -j)
        return 0.5 * (fp + fm), odd * np.sign(v)[..., None]

    return SliceFunction(lambda u, v: parts(u, v)[0], lambda u, v: parts(u, v)[1],
                         chirality=chirality, smoothness=0, name="sampled")


# -- star algebra --------------------------------------------------------------


def _pair_product(f, g, name):
    _same_chirality(f, g)
    dom = _intersect(f.domain, g.domain)

    def comps(u, v):
        a0, a1 = f.components(u, v, False)
        b0, b1 = g.components(u, v, False)
        return qt.mul(a0, b0) - qt.mul(a1, b1), qt.mul(a0, b1) + qt.mul(a1, b0)

    return SliceFunction(lambda u, v: comps(u, v)[0], lambda u, v: comps(u, v)[1],
                         chirality=f.chirality, domain=dom,
                         smoothness=min(f.smoothness, g.smoothness), name=name)


def star_left(f: SliceFunction, g: SliceFunction) -> SliceFunction:
    """``(f0 g0 - f1 g1) + j (f0 g1 + f1 g0)`` for left slice functions."""
    if f.chirality != LEFT or g.chirality != LEFT:
        raise ParamError("star_left needs left slice functions")
    return _pair_product(f, g, f"{f.name}*l{g.name}")


def star_right(f: SliceFunction, g: SliceFunction) -> SliceFunction:
    """``(f0 g0 - f1 g1) + (f0 g1 + f1 g0) j`` for right slice functions."""
    if f.chirality != RIGHT or g.chirality != RIGHT:
        raise ParamError("star_right needs right slice functions")
    return _pair_product(f, g, f"{f.name}*r{g.name}")


def star(f: SliceFunction, g: SliceFunction) -> SliceFunction:
    return star_left(f, g) if f.chirality == LEFT else star_right(f, g)


def star_inverse(f: SliceFunction, floor: float = 1e-300) -> SliceFunction:
    """⋆-inverse of a slice function.

    With ``f^c = (conj f0, conj f1)`` the product ``f ⋆ f^c = n0 + i n1``
    has real components, so ``f^{-⋆} = f^c (n0 - i n1) / (n0^2 + n1^2)``.
    """

    def comps(u, v):
        a, b = f.components(u, v, False)
        n0 = qt.norm2(a) - qt.norm2(b)
        n1 = 2.0 * np.einsum("...i,...i->...", a, b)
        d = n0 * n0 + n1 * n1
        if np.any(np.sqrt(d) < floor):
            raise DomainError(f"{f.name} has a zero sphere here; no star inverse")
        ac, bc = qt.conj(a), qt.conj(b)
        c0 = (ac * n0[..., None] + bc * n1[..., None]) / d[..., None]
        c1 = (bc * n0[..., None] - ac * n1[..., None]) / d[..., None]
        return c0, c1

    return SliceFunction(lambda u, v: comps(u, v)[0], lambda u, v: comps(u, v)[1],
                         chirality=f.chirality, domain=f.domain, smoothness=f.smoothness,
                         name=f"{f.name}^-*")


def star_rational(num: SliceFunction, den: SliceFunction) -> SliceFunction:
    """``num ⋆ den^{-⋆}``."""
    return star(num, star_inverse(den))


# -- differential checks ---------------------------------------------------------


def default_step(q, order: int = 1) -> float:
    """``1e-5 max(1, |q|)`` for first derivatives, ``0.2 max(1, |q|)`` beyond."""
    scale = max(1.0, float(qt.norm(q)))
    return (1e-5 if order == 1 else 0.2) * scale


def _central(f, q, h, order):
    offsets = (order / 2.0 - np.arange(order + 1)) * h
    weights = np.array([(-1) ** k * comb(order, k) for k in range(order + 1)], dtype=float)
    vals = f(q + qt.real(offsets))
    return np.tensordot(weights, vals, axes=(0, 0)) / h ** order


def slice_derivative(f: SliceFunction, q, h: float | None = None, order: int = 1,
                     extrapolate: int | None = None) -> np.ndarray:
    """Central-difference slice derivative of order ``order`` at ``q``.

    The stencil moves along the real direction, which keeps it inside the
    slice through ``q``; real offsets commute with everything, so left and
    right slice derivatives share the formula.  The plain stencil is exact
    for polynomials of degree ``order + 1``; each Richardson level (steps
    ``h, h/2, ...``) removes one further even power of ``h``.  By default
    first derivatives use no extrapolation and higher ones two levels.
    """
    q = qt.as_quat(q)
    if order < 1:
        raise ParamError("derivative order must be >= 1")
    if h is None:
        h = default_step(q, order)
    if h <= 0:
        raise ParamError("step must be positive")
    if extrapolate is None:
        extrapolate = 0 if order == 1 else 2
    table = [_central(f, q, h / 2 ** k, order) for k in range(extrapolate + 1)]
    for level in range(1, extrapolate + 1):
        fac = 4.0 ** level
        table = [(fac * table[k + 1] - table[k]) / (fac - 1) for k in range(len(table) - 1)]
    return table[0]


def cr_residual(f: SliceFunction, u: float, v: float, h: float = 1e-5) -> float:
    """``max(|dv f0 + du f1|, |du f0 - dv f1|)`` by central differences."""
    if h <= 0:
        raise ParamError("step must be positive")
    uu = np.array([u + h, u - h, u, u])
    vv = np.array([v, v, v + h, v - h])
    a, b = f.components(uu, vv)
    du0, dv0 = (a[0] - a[1]) / (2 * h), (a[2] - a[3]) / (2 * h)
    du1, dv1 = (b[0] - b[1]) / (2 * h), (b[2] - b[3]) / (2 * h)
    return float(max(qt.norm(dv0 + du1), qt.norm(du0 - dv1)))


def representation_formula(f: SliceFunction, q, j) -> np.ndarray:
    """Rebuild ``f(q)`` from the values of ``f`` on the slice of ``j``.

    Left: ``½(1 - j_q j) f(q_j) + ½(1 + j_q j) f(conj q_j)``;
    right: ``f(q_j)(1 - j j_q)½ + f(conj q_j)(1 + j j_q)½``.
    """
    u, v, jq = qt.slice_coords(q)
    j = np.asarray(j, dtype=float)
    z = u + 1j * v
    fp = f.on_slice(z, j)
    fm = f.on_slice(np.conj(z), j)
    if f.chirality == LEFT:
        jj = qt.mul(jq, j)
        return 0.5 * (qt.mul(qt.ONE - jj, fp) + qt.mul(qt.ONE + jj, fm))
    jj = qt.mul(j, jq)
    return 0.5 * (qt.mul(fp, qt.ONE - jj) + qt.mul(fm, qt.ONE + jj))
