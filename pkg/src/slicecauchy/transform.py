"""Cauchy integral transforms over slice contours and the additive splitting.

For boundary data ``f`` on a closed contour ``Gamma`` in ``C_j``::

    f^(p)  = 1/(2 pi) ∮ S_L^{-1}(s, p) ds_j f(s)         (left)
    f^(p)  = 1/(2 pi) ∮ f(s) ds_j S_R^{-1}(s, p)         (right)
    f^'(p) = 1/(2 pi) ∮ phi_s(p) ds_j f(s)

Inside the domain bounded by ``Gamma`` the transform is the regular part
``f_+``; outside it equals ``-f_-``, so that ``f = f_+ + f_-`` on the curve.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import quaternion as qt
from .contour import DEFAULT_MAX_LEVEL, DEFAULT_TOL, Contour, integrate_ds_j
from .errors import DomainError, ParamError, PoleError
from .kernel import cauchy_kernel_left, cauchy_kernel_right, phi

BOUNDARY_DELTA = 1e-4
LADDER = tuple(2.0 ** -k for k in range(3, 13))


def _flat(p):
    p = qt.as_quat(p)
    return p.reshape(-1, 4), p.shape[:-1]


def _data(f):
    """Boundary data as a vectorised callable on ``(N, 4)`` nodes."""
    if not callable(f):
        raise ParamError("boundary data must be callable")
    return lambda s: np.asarray(f(s), dtype=float)


def _check_distance(contour, pts, eps_pole):
    d = contour.sphere_distance(pts)
    eps = 1e-12 * (1.0 + qt.norm(pts)) if eps_pole is None else eps_pole
    if np.any(d < eps):
        raise PoleError(f"evaluation point within {float(np.min(d)):.3g} of the contour spheres")
    return d


def cauchy_transform(f, contour: Contour, p, *, tol: float = DEFAULT_TOL, eps_pole=None,
                     max_level: int = DEFAULT_MAX_LEVEL) -> np.ndarray:
    """Left Cauchy transform of the boundary data ``f`` at the points ``p``.

    Parameters
    ----------
    f : callable
        Maps node quaternions ``(N, 4)`` on the contour to values ``(N, 4)``;
        a left :class:`~slicecauchy.slicefunc.SliceFunction` qualifies.
    contour : Contour
    p : array_like
        Evaluation points, any leading shape.

    Raises
    ------
    PoleError
        If ``dist([p], Gamma)`` is below ``eps_pole``.
    NonConvergence
        If the adaptive quadrature fails.
    """
    pts, shape = _flat(p)
    _check_distance(contour, pts, eps_pole)
    data = _data(f)
    out = integrate_ds_j(lambda s: cauchy_kernel_left(s[:, None, :], pts[None], eps_pole=0.0).value,
                         contour, right=lambda s: data(s)[:, None, :], tol=tol, max_level=max_level)
    return (out / (2 * np.pi)).reshape(shape + (4,))


def cauchy_transform_right(f, contour: Contour, p, *, tol: float = DEFAULT_TOL, eps_pole=None,
                           max_level: int = DEFAULT_MAX_LEVEL) -> np.ndarray:
    """Right Cauchy transform ``1/(2 pi) ∮ f(s) ds_j S_R^{-1}(s, p)``."""
    pts, shape = _flat(p)
    _check_distance(contour, pts, eps_pole)
    data = _data(f)
    out = integrate_ds_j(lambda s: data(s)[:, None, :], contour,
                         right=lambda s: cauchy_kernel_right(s[:, None, :], pts[None], eps_pole=0.0).value,
                         tol=tol, max_level=max_level)
    return (out / (2 * np.pi)).reshape(shape + (4,))


def transform_derivative(f, contour: Contour, p, *, chirality: str = "left", tol: float = DEFAULT_TOL,
                         eps_pole=None, max_level: int = DEFAULT_MAX_LEVEL) -> np.ndarray:
    """Slice derivative ``d/dx0`` of the Cauchy transform via the ``phi`` kernel."""
    pts, shape = _flat(p)
    _check_distance(contour, pts, eps_pole)
    data = _data(f)
    ker = lambda s: phi(s[:, None, :], pts[None], eps_pole=0.0, chirality=chirality)  # noqa: E731
    if chirality == "left":
        out = integrate_ds_j(ker, contour, right=lambda s: data(s)[:, None, :], tol=tol, max_level=max_level)
    else:
        out = integrate_ds_j(lambda s: data(s)[:, None, :], contour, right=ker, tol=tol, max_level=max_level)
    return (out / (2 * np.pi)).reshape(shape + (4,))


def derivative_bound(f, contour: Contour, p, samples: int = 4096) -> np.ndarray:
    """``(|Gamma| / pi) ||f||_0 / dist([p], Gamma)^2``."""
    pts, shape = _flat(p)
    _, _, z = contour.sample(max(samples // len(contour.arcs), 2))
    sup = float(np.max(qt.norm(f(contour.points(z)))))
    d = contour.sphere_distance(pts)
    return (contour.length() / np.pi * sup / d ** 2).reshape(shape)


# -- splitting ---------------------------------------------------------------------------------


def _slice_z(contour, p):
    u, v, _ = qt.slice_coords(p)
    return u + 1j * v


@dataclass
class SplitPair:
    """The two parts of boundary data across a closed contour.

    ``plus`` is regular inside the contour, ``minus`` outside and vanishes at
    infinity; on the contour ``f = plus + minus``.  Boundary values are limits
    taken at distance ``delta`` along the normal.
    """

    data: object
    contour: Contour
    delta: float = BOUNDARY_DELTA
    tol: float = DEFAULT_TOL
    chirality: str = "left"
    minus_at_infinity: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def _transform(self, p):
        t = cauchy_transform if self.chirality == "left" else cauchy_transform_right
        return t(self.data, self.contour, p, tol=self.tol)

    def plus(self, p) -> np.ndarray:
        if not np.all(self.contour.inside(_slice_z(self.contour, p))):
            raise DomainError("f_plus is evaluated inside the contour only")
        return self._transform(p)

    def minus(self, p) -> np.ndarray:
        if np.any(self.contour.inside(_slice_z(self.contour, p))):
            raise DomainError("f_minus is evaluated outside the contour only")
        return -self._transform(p)

    def boundary_values(self, arc_index: int, t: float) -> tuple[np.ndarray, np.ndarray]:
        """Limits of ``(plus, minus)`` at the contour point with parameter ``t``."""
        z0 = self.contour.point(arc_index, t)
        n = self.contour.normal(arc_index, t)
        zin = self.contour.points(z0 + self.delta * n)
        zout = self.contour.points(z0 - self.delta * n)
        return self._transform(zin), -self._transform(zout)


def split(f, contour: Contour, *, delta: float = BOUNDARY_DELTA, tol: float = DEFAULT_TOL,
          chirality: str = "left") -> SplitPair:
    """Additive splitting of boundary data on a closed contour."""
    if not contour.closed:
        raise ParamError("splitting needs a closed contour")
    if not delta > 0:
        raise ParamError("delta must be positive")
    return SplitPair(f, contour, delta, tol, chirality)


def boundary_jump_check(f, contour: Contour, q0, distances, *, tol: float = DEFAULT_TOL) -> list[float]:
    """``|f^(q0 + d n) - f^(q0 - d n) - f(q0)|`` for each distance ``d``.

    ``q0`` is a point of the contour (complex or embedded quaternion) and
    ``n`` the inward unit normal in the slice.
    """
    if np.iscomplexobj(q0) or np.isscalar(q0):
        z0 = complex(q0)
    else:
        q = qt.as_quat(q0)
        jn = float(np.dot(q[1:], contour.j[1:]))
        z0 = complex(q[0], jn)
    k, t, dist = contour.locate(np.array([z0]))
    k, t = int(k[0]), float(t[0])
    z0 = contour.point(k, t)
    n = contour.normal(k, t)
    fq0 = np.asarray(f(contour.points(np.array([z0]))), dtype=float)[0]
    out = []
    for d in distances:
        if d < 1e-12 * (1 + abs(z0)):
            raise PoleError("jump distance below the pole guard")
        pts = contour.points(np.array([z0 + d * n, z0 - d * n]))
        val = cauchy_transform(f, contour, pts, tol=tol)
        out.append(float(qt.norm(val[0] - val[1] - fq0)))
    return out


# -- Hölder data and growth ------------------------------------------------------------------------


@dataclass(frozen=True)
class HolderData:
    """Hölder seminorm estimate of boundary data.

    ``seminorm`` is the pairwise quotient of the quaternion values;
    ``component_seminorms`` the same quotient for ``f0`` and ``f1`` over the
    parameter points (``None`` when only values were supplied).  ``norm`` is
    ``sup`` plus the component seminorms when available, else plus
    ``seminorm``.
    """

    alpha: float
    seminorm: float
    sup: float
    component_seminorms: tuple | None = None

    @property
    def norm(self) -> float:
        if self.component_seminorms is None:
            return self.sup + self.seminorm
        return self.sup + sum(self.component_seminorms)


def _pairwise_quotient(x, vals, alpha):
    x = np.asarray(x)
    vals = np.asarray(vals, dtype=float)
    dx = np.abs(x[:, None] - x[None, :])
    dv = np.linalg.norm(vals[:, None, :] - vals[None, :, :], axis=-1)
    mask = dx > 0
    if not np.any(mask):
        raise ParamError("need at least two distinct sample points")
    return float(np.max(dv[mask] / dx[mask] ** alpha))


def holder_seminorm(f, contour_or_points, alpha: float, samples: int = 512, values=None) -> HolderData:
    """Sampled Hölder seminorm of ``f`` on a contour.

    Either pass a callable ``f`` and a :class:`Contour` (sampled at
    ``samples`` points), or ``f=None``, complex sample points and
    ``values``.  Slice functions also get the seminorms of their components.
    """
    if not 0 < alpha < 1:
        raise ParamError("alpha must lie in (0, 1)")
    if isinstance(contour_or_points, Contour):
        _, _, z = contour_or_points.sample(max(samples // len(contour_or_points.arcs), 2))
        pts = contour_or_points.points(z)
    else:
        z = np.asarray(contour_or_points, dtype=complex)
        pts = None
    if len(z) < 2:
        raise ParamError("need at least two samples")
    if values is None:
        if f is None:
            raise ParamError("either f or values is required")
        if pts is None:
            raise ParamError("sampling f needs a contour")
        values = f(pts)
    values = np.asarray(values, dtype=float)
    semi = _pairwise_quotient(z, values, alpha)
    sup = float(np.max(qt.norm(values)))
    comps = None
    if hasattr(f, "components"):
        f0, f1 = f.components(z.real, z.imag)
        comps = (_pairwise_quotient(z, f0, alpha), _pairwise_quotient(z, f1, alpha))
    return HolderData(float(alpha), semi, sup, comps)


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares slope of ``log |value|`` against ``log dist``."""

    slope: float
    distances: np.ndarray
    norms: np.ndarray

    def __float__(self):
        return self.slope


def growth_exponent(f, contour: Contour, q0, distances=LADDER, *, order: int = 0,
                    tol: float = 1e-10) -> GrowthFit:
    """Fit the growth of the transform (``order=0``) or its derivative
    (``order=1``) along the inward normal at the contour point ``q0``."""
    z0 = complex(q0) if np.isscalar(q0) else None
    if z0 is None:
        q = qt.as_quat(q0)
        z0 = complex(q[0], float(np.dot(q[1:], contour.j[1:])))
    k, t, _ = contour.locate(np.array([z0]))
    k, t = int(k[0]), float(t[0])
    z0 = contour.point(k, t)
    n = contour.normal(k, t)
    d = np.asarray(distances, dtype=float)
    pts = contour.points(z0 + d * n)
    if order == 0:
        vals = cauchy_transform(f, contour, pts, tol=tol)
    elif order == 1:
        vals = transform_derivative(f, contour, pts, tol=tol)
    else:
        raise ParamError("order must be 0 or 1")
    norms = qt.norm(vals)
    slope = float(np.polyfit(np.log(d), np.log(norms), 1)[0])
    return GrowthFit(slope, d, norms)
