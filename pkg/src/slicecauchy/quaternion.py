"""Quaternion arithmetic on numpy arrays.

Quaternions are float arrays whose last axis has length four,
``[x0, x1, x2, x3]`` for ``x0 + x1 e1 + x2 e2 + x3 e3``.  Every function
broadcasts over leading axes.  :class:`Quaternion` is a small scalar
convenience wrapper with operator overloading; it converts to an array via
``np.asarray``.

The module also holds the geometry of the unit sphere of imaginary units,
the 2-spheres ``[q]`` and their distances to points and curves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ParamError

ONE = np.array([1.0, 0.0, 0.0, 0.0])
E1 = np.array([0.0, 1.0, 0.0, 0.0])
E2 = np.array([0.0, 0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 0.0, 1.0])

#: Norm floor below which :func:`inverse` refuses to divide.
INVERSE_FLOOR = 1e-300


def as_quat(q) -> np.ndarray:
    """Coerce reals, sequences and :class:`Quaternion` to a ``(..., 4)`` array."""
    if isinstance(q, Quaternion):
        return q.array
    arr = np.asarray(q, dtype=float)
    if arr.ndim == 0:
        return arr * ONE
    if arr.shape[-1] != 4:
        raise ParamError(f"quaternion arrays need a trailing axis of length 4, got {arr.shape}")
    return arr


def real(x) -> np.ndarray:
    """Embed real numbers (any shape) as quaternions."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape + (4,))
    out[..., 0] = x
    return out


def mul(a, b) -> np.ndarray:
    """Hamilton product ``a b`` with ``e1 e2 = e3``, ``e2 e3 = e1``, ``e3 e1 = e2``."""
    a = as_quat(a)
    b = as_quat(b)
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def conj(q) -> np.ndarray:
    q = as_quat(q)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def norm2(q) -> np.ndarray:
    q = as_quat(q)
    return np.einsum("...i,...i->...", q, q)


def norm(q) -> np.ndarray:
    return np.sqrt(norm2(q))


def inverse(q, floor: float = INVERSE_FLOOR) -> np.ndarray:
    """``q^{-1} = conj(q) / |q|^2``.

    Raises
    ------
    ZeroDivisionError
        If any ``|q|`` is below ``floor``.
    """
    q = as_quat(q)
    n2 = norm2(q)
    if np.any(np.sqrt(n2) < floor):
        raise ZeroDivisionError("quaternion inverse of (numerically) zero element")
    return conj(q) / n2[..., None]


def re(q) -> np.ndarray:
    return as_quat(q)[..., 0]


def im(q) -> np.ndarray:
    """Imaginary part as a quaternion with zero real component."""
    q = as_quat(q).copy()
    q[..., 0] = 0.0
    return q


def im_norm(q) -> np.ndarray:
    """``|Im q|``."""
    q = as_quat(q)
    return np.sqrt(np.einsum("...i,...i->...", q[..., 1:], q[..., 1:]))


def power(q, n: int) -> np.ndarray:
    """Integer power by repeated squaring; negative ``n`` inverts first."""
    q = as_quat(q)
    if n < 0:
        q, n = inverse(q), -n
    out = np.broadcast_to(ONE, q.shape).copy()
    base = q
    while n:
        if n & 1:
            out = mul(out, base)
        base = mul(base, base)
        n >>= 1
    return out


# -- imaginary units and slices ------------------------------------------------


def unit_imaginary(j, tol: float = 1e-9) -> np.ndarray:
    """Validate and normalise an element of the sphere of imaginary units.

    ``j`` may be given as three imaginary components or as a quaternion with
    vanishing real part.
    """
    j = np.asarray(j, dtype=float)
    if j.shape == (3,):
        j = np.concatenate([[0.0], j])
    if j.shape != (4,):
        raise ParamError(f"imaginary unit must have 3 or 4 components, got shape {j.shape}")
    if abs(j[0]) > tol:
        raise ParamError("imaginary unit must have zero real part")
    n = np.linalg.norm(j[1:])
    if n < tol:
        raise ParamError("imaginary unit must be nonzero")
    if abs(n - 1.0) > 1e-6:
        raise ParamError(f"imaginary unit must have norm 1, got {n}")
    out = j / n
    out[0] = 0.0
    return out


def random_units(rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` uniformly distributed imaginary units, shape ``(size, 4)``."""
    v = rng.normal(size=(size, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return np.concatenate([np.zeros((size, 1)), v], axis=1)


def embed(z, j) -> np.ndarray:
    """Map complex numbers ``x + iy`` to ``x + j y`` in the slice of ``j``."""
    z = np.asarray(z, dtype=complex)
    j = np.asarray(j, dtype=float)
    out = z.imag[..., None] * j
    out[..., 0] += z.real
    return out


def slice_coords(q, default_j=E1) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split ``q = u + j_q v`` with ``v = |Im q| >= 0``.

    On the real axis ``j_q`` is ``default_j``; it carries no information
    there since ``v = 0``.
    """
    q = as_quat(q)
    u = q[..., 0]
    v = im_norm(q)
    safe = np.where(v > 0, v, 1.0)
    jq = q[..., 1:] / safe[..., None]
    jq = np.where((v > 0)[..., None], jq, np.asarray(default_j, dtype=float)[1:])
    jq = np.concatenate([np.zeros(u.shape + (1,)), jq], axis=-1)
    return u, v, jq


@dataclass(frozen=True)
class SlicePoint:
    """The point ``u + j v`` of the slice plane ``C_j``.

    For ``v == 0`` the unit is kept but irrelevant: compare embedded values,
    never the triple.
    """

    u: float
    v: float
    j: tuple = (0.0, 1.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "j", tuple(unit_imaginary(self.j)))

    def embed(self) -> np.ndarray:
        return embed(complex(self.u, self.v), np.array(self.j))

    @property
    def z(self) -> complex:
        return complex(self.u, self.v)


class QSphere(NamedTuple):
    """The 2-sphere ``[q] = {center + j radius : j in S}``."""

    center: float
    radius: float

    def contains(self, s, tol: float = 1e-12) -> np.ndarray:
        return dist_sphere_point(self, s) <= tol


def sphere_of(q) -> QSphere:
    q = as_quat(q)
    return QSphere(float(q[0]), float(im_norm(q)))


def dist_sphere_point(sphere: QSphere, s) -> np.ndarray:
    """Distance from the sphere ``[p]`` to the point ``s``.

    The infimum over ``j`` is attained by aligning ``j`` with ``Im s``, which
    gives ``sqrt((u - s0)^2 + (r - |Im s|)^2)``.
    """
    s = as_quat(s)
    return np.hypot(sphere.center - s[..., 0], sphere.radius - im_norm(s))


def dist_sphere_curve(sphere: QSphere, contour, samples: int = 2048) -> float:
    """Distance from ``[p]`` to a contour lying in one slice plane.

    Dense sampling in every arc parameter followed by a bounded scalar
    minimisation around the best sample.  The result never exceeds the best
    sampled distance.
    """
    best = np.inf
    for arc in contour.arcs:
        t = np.linspace(arc.a, arc.b, samples)
        z = arc.z(t)
        d = np.hypot(sphere.center - z.real, sphere.radius - np.abs(z.imag))
        k = int(np.argmin(d))
        lo = t[max(k - 1, 0)]
        hi = t[min(k + 1, samples - 1)]

        t0 = t[k]

        # offset variable: the bounded search tolerance is relative to |x|
        def dist_at(x, arc=arc, t0=t0):
            zz = arc.z(np.array([t0 + x]))[0]
            return float(np.hypot(sphere.center - zz.real, sphere.radius - abs(zz.imag)))

        local = d[k]
        if hi > lo:
            res = minimize_scalar(dist_at, bounds=(lo - t0, hi - t0), method="bounded",
                                  options={"xatol": 1e-15})
            local = min(local, float(res.fun))
        best = min(best, local)
    return float(best)


@dataclass(frozen=True)
class Quaternion:
    """Scalar quaternion with operator overloading."""

    x0: float = 0.0
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = as_quat(a)
        return cls(*map(float, a))

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2, self.x3])

    def __array__(self, dtype=None, copy=None):
        return self.array if dtype is None else self.array.astype(dtype)

    def __iter__(self):
        return iter((self.x0, self.x1, self.x2, self.x3))

    def _coerce(self, other):
        return as_quat(other)

    def __add__(self, other):
        return Quaternion.from_array(self.array + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Quaternion.from_array(self.array - self._coerce(other))

    def __rsub__(self, other):
        return Quaternion.from_array(self._coerce(other) - self.array)

    def __neg__(self):
        return Quaternion.from_array(-self.array)

    def __mul__(self, other):
        return Quaternion.from_array(mul(self.array, self._coerce(other)))

    def __rmul__(self, other):
        return Quaternion.from_array(mul(self._coerce(other), self.array))

    def __truediv__(self, other):
        if np.isscalar(other):
            return Quaternion.from_array(self.array / other)
        return Quaternion.from_array(mul(self.array, inverse(self._coerce(other))))

    def __abs__(self):
        return float(norm(self.array))

    def conj(self) -> "Quaternion":
        return Quaternion.from_array(conj(self.array))

    def inverse(self) -> "Quaternion":
        return Quaternion.from_array(inverse(self.array))

    @property
    def real(self) -> float:
        return self.x0

    @property
    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.x1, self.x2, self.x3)

    def sphere(self) -> QSphere:
        return sphere_of(self.array)
