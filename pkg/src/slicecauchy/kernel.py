"""Cauchy kernels of slice hyperholomorphic function theory.

All functions broadcast over leading axes of ``s`` and ``p``.  With
``Q_s(p) = p^2 - 2 Re(s) p + |s|^2`` (a slice function of ``p`` with real
coefficients, so it commutes with ``p``)::

    S_L^{-1}(s, p) = -Q_s(p)^{-1} (p - conj s)
    S_R^{-1}(s, q) = -(q - conj s) Q_s(q)^{-1}
    (p - s)^{-*}   =  Q_s(p)^{-1} (p - conj s)
    phi_s(p)       =  Q_s(p)^{-2} (p^2 - 2 p conj(s) + conj(s)^2)

The pole set of every kernel is the sphere ``[s]``; evaluating closer than
``eps_pole`` raises :class:`PoleError`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import quaternion as qt
from .errors import PoleError

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class KernelValue:
    """A kernel value together with ``dist([p], s)``."""

    value: np.ndarray
    pole_distance: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return self.value if dtype is None else self.value.astype(dtype)


def default_eps_pole(s) -> np.ndarray:
    return 1e-12 * (1.0 + qt.norm(s))


def pole_distance(s, p) -> np.ndarray:
    """``dist([p], s) = hypot(p0 - s0, |Im p| - |Im s|)``; symmetric in ``s, p``."""
    s = qt.as_quat(s)
    p = qt.as_quat(p)
    return np.hypot(p[..., 0] - s[..., 0], qt.im_norm(p) - qt.im_norm(s))


def _guard(s, p, eps_pole):
    d = pole_distance(s, p)
    eps = default_eps_pole(s) if eps_pole is None else eps_pole
    if np.any(d < eps):
        raise PoleError(f"kernel evaluated on its pole sphere (distance {float(np.min(d)):.3g})")
    return d


def char_poly(s, p) -> np.ndarray:
    """``Q_s(p) = p^2 - 2 Re(s) p + |s|^2``."""
    s = qt.as_quat(s)
    p = qt.as_quat(p)
    out = qt.mul(p, p) - 2.0 * s[..., 0, None] * p
    out[..., 0] += qt.norm2(s)
    return out


def _q_inv(s, p):
    return qt.inverse(char_poly(s, p), floor=0.0)


def cauchy_kernel_left(s, p, eps_pole=None) -> KernelValue:
    """``S_L^{-1}(s, p)``, left slice hyperholomorphic in ``p``."""
    s, p = qt.as_quat(s), qt.as_quat(p)
    d = _guard(s, p, eps_pole)
    return KernelValue(-qt.mul(_q_inv(s, p), p - qt.conj(s)), d)


def cauchy_kernel_right(s, q, eps_pole=None) -> KernelValue:
    """``S_R^{-1}(s, q)``, right slice hyperholomorphic in ``q``."""
    s, q = qt.as_quat(s), qt.as_quat(q)
    d = _guard(s, q, eps_pole)
    return KernelValue(-qt.mul(q - qt.conj(s), _q_inv(s, q)), d)


def star_inverse(s, p, eps_pole=None) -> np.ndarray:
    """``(p - s)^{-*}``, the ⋆-inverse of ``q -> q - s`` evaluated at ``p``."""
    s, p = qt.as_quat(s), qt.as_quat(p)
    _guard(s, p, eps_pole)
    return qt.mul(_q_inv(s, p), p - qt.conj(s))


def phi(s, p, eps_pole=None, chirality: str = LEFT) -> np.ndarray:
    """``phi_s(p) = (p - s)^{-*} ⋆ (p - s)^{-*}``.

    The numerator is the ⋆-square ``(p - conj s)^{2*} = p^2 - 2 p conj(s)
    + conj(s)^2``.  The right version reads ``(p^2 - 2 conj(s) p +
    conj(s)^2) Q_s(p)^{-2}``.
    """
    s, p = qt.as_quat(s), qt.as_quat(p)
    _guard(s, p, eps_pole)
    sb = qt.conj(s)
    qi = _q_inv(s, p)
    qi2 = qt.mul(qi, qi)
    if chirality == LEFT:
        num = qt.mul(p, p) - 2.0 * qt.mul(p, sb) + qt.mul(sb, sb)
        return qt.mul(qi2, num)
    num = qt.mul(p, p) - 2.0 * qt.mul(sb, p) + qt.mul(sb, sb)
    return qt.mul(num, qi2)
