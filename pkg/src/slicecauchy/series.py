"""Laurent and spherical Laurent series of slice functions.

Laurent coefficients at a real center ``alpha`` come from the slice circle
``|s - alpha| = rho`` in ``C_j``::

    f_n = 1/(2 pi) ∮ (s - alpha)^{-n-1} ds_j f(s) = rho^{-n} mean_theta e^{-j n theta} f(s)

evaluated with the trapezoid rule (spectrally accurate for periodic
analytic integrands).  Spherical series about a non-real ``q0`` use the
characteristic polynomial ``Q(q) = q^2 - 2 Re(q0) q + |q0|^2`` and read
``sum_n Q^n (c_{2n} + (q - q0) c_{2n+1})``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import quaternion as qt
from .errors import DomainError, NonConvergence, ParamError, Undecidable
from .kernel import char_poly

MAX_NODES = 8192
COEFF_TOL = 1e-9


def cassini_distance(q, q0) -> np.ndarray:
    """``d(q, q0) = sqrt(|q^2 - 2 Re(q0) q + |q0|^2|)``."""
    return np.sqrt(qt.norm(char_poly(q0, q)))


# -- convergence radii --------------------------------------------------------------------------


class Radii(NamedTuple):
    """Inner and outer radius of a Cassini shell ``r1 < d(q, q0) < r2``."""

    r1: float
    r2: float

    @property
    def empty(self) -> bool:
        return not self.r1 < self.r2

    @property
    def kind(self) -> str:
        if self.empty:
            return "empty"
        if self.r1 == 0:
            return "ball" if math.isfinite(self.r2) else "everywhere"
        return "shell"


def _root_limsup(idx: np.ndarray, mags: np.ndarray, tail: float = 0.5):
    """Growth rate ``limsup |c_n|^{1/n}`` estimated on the tail of a window.

    The rate is ``exp`` of the least-squares slope of ``log |c_n|`` against
    ``n`` over the upper ``tail`` fraction of the nonzero indices, which
    discards constant prefactors.  Factorial-type growth returns ``inf``.
    """
    keep = (idx > 0) & (mags > 0)
    idx, mags = idx[keep], mags[keep]
    if len(idx) == 0:
        return 0.0
    sel = idx >= idx.max() * (1 - tail)
    if sel.sum() < 2:
        sel = np.ones_like(idx, dtype=bool)
    n, logs = idx[sel].astype(float), np.log(mags[sel])
    if len(n) == 1:
        return float(np.exp(logs[0] / n[0]))
    if len(n) >= 4:
        # log|c_n|/n still climbing like log n
        if np.polyfit(np.log(n), logs / n, 1)[0] > 0.5:
            return math.inf
    return float(np.exp(np.polyfit(n, logs, 1)[0]))


def convergence_radii(coeffs, n_min: int = 0) -> Radii:
    """Limsup estimates ``r1 = limsup |c_{-n}|^{1/n}`` and ``1/r2 = limsup |c_n|^{1/n}``.

    The limsup is estimated from the geometric growth rate over the upper
    half of the available indices.  Super-exponential growth gives
    ``r2 = 0`` (empty domain) or ``r1 = inf``.
    """
    c = np.asarray(coeffs, dtype=float)
    if c.ndim == 1:
        c = c[:, None]
    if len(c) == 0:
        raise ParamError("empty coefficient window")
    n = np.arange(n_min, n_min + len(c))
    mags = np.linalg.norm(c, axis=-1)
    pos = _root_limsup(n, mags)
    neg = _root_limsup(-n, mags)
    r2 = math.inf if pos == 0 else (0.0 if math.isinf(pos) else 1.0 / pos)
    return Radii(float(neg), float(r2))


# -- spherical series -----------------------------------------------------------------------------


@dataclass
class SphericalLaurentSeries:
    """``sum_n Q(q)^n (c_{2n} + (q - q0) c_{2n+1})`` on a coefficient window.

    ``coeffs[k]`` is ``c_{n_min + k}``.
    """

    center: np.ndarray
    coeffs: np.ndarray
    n_min: int = 0
    radii: Radii | None = None

    def __post_init__(self):
        self.center = qt.as_quat(self.center)
        self.coeffs = np.atleast_2d(np.asarray(self.coeffs, dtype=float))
        if self.radii is None:
            self.radii = convergence_radii(self.coeffs, self.n_min)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_min + len(self.coeffs))

    def coeff(self, m: int) -> np.ndarray:
        k = m - self.n_min
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return np.zeros(4)

    def terms(self, q) -> tuple[np.ndarray, np.ndarray]:
        """Grouped terms ``Q^n (c_{2n} + (q - q0) c_{2n+1})`` stacked along axis 0."""
        q = qt.as_quat(q)
        Q = char_poly(self.center, q)
        lin = q - self.center
        ns = np.arange(math.floor(self.n_min / 2), math.floor((self.n_min + len(self.coeffs) - 1) / 2) + 1)
        out = []
        for n in ns:
            inner = self.coeff(2 * n) + qt.mul(lin, self.coeff(2 * n + 1))
            out.append(qt.mul(qt.power(Q, int(n)), inner))
        return ns, np.array(out)

    def __call__(self, q, strict: bool = False) -> np.ndarray:
        if strict:
            d = cassini_distance(q, self.center)
            if np.any(d <= self.radii.r1) or np.any(d >= self.radii.r2):
                raise DomainError("point outside the Cassini shell of convergence")
        return self.terms(q)[1].sum(axis=0)


def eval_series(series: SphericalLaurentSeries, q, strict: bool = False) -> np.ndarray:
    return series(q, strict=strict)


def empirical_radius(series: SphericalLaurentSeries, direction, which: str = "outer",
                     lo: float = 1e-3, hi: float = 1e3, iters: int = 60) -> float:
    """Cassini distance at which the tail terms stop decaying.

    Along the ray ``q0 + t direction`` the geometric growth rate of the
    grouped terms over the upper (``which="outer"``) or lower half of the
    window is estimated; bisection in ``t`` finds where it crosses one and
    the Cassini distance of that point is returned.
    """
    direction = qt.as_quat(direction)

    def rate(t):
        q = series.center + t * direction
        ns, terms = series.terms(q[None])
        mags = qt.norm(terms[:, 0])
        sel = ns > 0 if which == "outer" else ns < 0
        ns, mags = ns[sel], mags[sel]
        ok = mags > 0
        ns, mags = ns[ok], mags[ok]
        if len(ns) < 2:
            raise ParamError("window too short for a growth estimate")
        half = ns >= np.median(ns) if which == "outer" else ns <= np.median(ns)
        slope = np.polyfit(np.abs(ns[half]), np.log(mags[half]), 1)[0]
        return slope

    # outer: rate increases with t; inner: decreases
    sign = 1.0 if which == "outer" else -1.0
    a, b = np.log(lo), np.log(hi)
    if sign * rate(np.exp(a)) > 0 or sign * rate(np.exp(b)) < 0:
        raise NonConvergence("no divergence onset in the scanned range")
    for _ in range(iters):
        m = 0.5 * (a + b)
        if sign * rate(np.exp(m)) > 0:
            b = m
        else:
            a = m
    t = np.exp(0.5 * (a + b))
    return float(cassini_distance(series.center + t * direction, series.center))


# -- Laurent coefficients at real centers -----------------------------------------------------------


@dataclass
class LaurentSeries:
    """``sum_n (q - alpha)^n f_n`` (left) or ``sum_n f_n (q - alpha)^n`` (right)."""

    coeffs: np.ndarray
    n_min: int
    center: float = 0.0
    chirality: str = "left"
    rho: float = 1.0
    nodes: int = 0

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_min + len(self.coeffs))

    def coeff(self, n: int) -> np.ndarray:
        k = n - self.n_min
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return np.zeros(4)

    def __call__(self, q) -> np.ndarray:
        q = qt.as_quat(q)
        z = q - self.center * qt.ONE
        out = np.zeros(q.shape)
        for n, c in zip(self.indices, self.coeffs):
            p = qt.power(z, int(n))
            out = out + (qt.mul(p, c) if self.chirality == "left" else qt.mul(c, p))
        return out

    def spherical(self) -> SphericalLaurentSeries:
        """The same series in spherical form about the real center."""
        return SphericalLaurentSeries(self.center * qt.ONE, self.coeffs, self.n_min)


def _slice_circle_coeffs(f, center, j, rho, ns, nodes, chirality):
    theta = 2 * np.pi * np.arange(nodes) / nodes
    z = center + rho * np.exp(1j * theta)
    vals = np.asarray(f(qt.embed(z, j)), dtype=float)
    out = []
    for n in ns:
        rot = qt.embed(np.exp(-1j * n * theta), j)
        prod = qt.mul(rot, vals) if chirality == "left" else qt.mul(vals, rot)
        out.append(prod.mean(axis=0) * rho ** (-float(n)))
    return np.array(out), vals


def laurent_coefficients(f, j=qt.E1, rho: float = 1.0, n_window=(-8, 8), *, center: float = 0.0,
                         nodes: int = 256, chirality: str | None = None, rtol: float = 1e-13) -> LaurentSeries:
    """Laurent coefficients ``f_n`` for ``n`` in ``n_window`` (inclusive).

    The trapezoid rule with ``nodes`` points is compared with ``2 nodes``
    points; the node count doubles until both agree to ``rtol`` relative to
    the data scale, at most up to 8192 nodes.

    Raises
    ------
    NonConvergence
        If the coefficients do not settle.
    """
    if rho <= 0:
        raise ParamError("rho must be positive")
    if chirality is None:
        chirality = getattr(f, "chirality", "left")
    j = qt.unit_imaginary(j)
    n_lo, n_hi = int(n_window[0]), int(n_window[1])
    if n_hi < n_lo:
        raise ParamError("empty coefficient window")
    ns = np.arange(n_lo, n_hi + 1)
    nodes = max(int(nodes), 2 * (n_hi - n_lo + 1) + 2)
    coarse, vals = _slice_circle_coeffs(f, center, j, rho, ns, nodes, chirality)
    while True:
        fine, vals = _slice_circle_coeffs(f, center, j, rho, ns, 2 * nodes, chirality)
        scale = max(float(np.max(qt.norm(vals))), 1e-300) * rho ** (-ns.astype(float))
        if np.all(qt.norm(fine - coarse) <= rtol * scale):
            return LaurentSeries(fine, n_lo, float(center), chirality, float(rho), 2 * nodes)
        nodes *= 2
        if 2 * nodes > MAX_NODES:
            raise NonConvergence("Laurent coefficients did not settle; is f regular on the circle?")
        coarse = fine


def residue_at_real(f, alpha: float, j=qt.E1, rho: float = 0.5, **kw) -> np.ndarray:
    """The coefficient ``f_{-1}`` of the Laurent expansion about the real point ``alpha``."""
    return laurent_coefficients(f, j, rho, (-1, -1), center=alpha, **kw).coeffs[0]


@dataclass(frozen=True)
class Singularity:
    """Classification of an isolated real singularity.

    ``kind`` is ``"removable"`` (``order`` is the order of the zero),
    ``"pole"`` (``order`` is the pole order) or ``"essential"``
    (undecided from finite data; ``order`` is ``None``).
    """

    kind: str
    order: int | None
    window: int
    decided: bool = True


def classify_singularity(f, alpha: float, j=qt.E1, rho: float = 0.5, window: int = 8,
                         max_doublings: int = 5, tol: float | None = None) -> Singularity:
    """Removable / pole / essential decision from a doubling coefficient window.

    Coefficients are compared in the normalised form ``|f_n| rho^n`` against
    ``tol = 1e-9 max |f|`` on the sampling circle.  A decision is returned
    once two consecutive windows give the same answer with the cutoff
    strictly inside the window.  Negative coefficients that reach the edge
    of every window, or that fade out without a clear gap, are reported as
    ``"essential"`` with ``decided=False``.

    Raises
    ------
    Undecidable
        If consecutive windows keep disagreeing.
    """
    previous = None
    edge_hits = 0
    w = int(window)
    for _ in range(max_doublings + 1):
        series = laurent_coefficients(f, j, rho, (-w, w), center=alpha, nodes=max(256, 4 * w))
        ns = series.indices
        mags = qt.norm(series.coeffs) * rho ** ns.astype(float)
        theta = 2 * np.pi * np.arange(512) / 512
        fmax = float(np.max(qt.norm(f(qt.embed(alpha + rho * np.exp(1j * theta), qt.unit_imaginary(j))))))
        thr = COEFF_TOL * fmax if tol is None else tol
        neg = ns[(ns < 0) & (mags > thr)]
        if len(neg):
            order = int(-neg.min())
            if order >= w:
                edge_hits += 1
                current = ("edge", None)
            else:
                clean = mags[ns == -order][0] > 1e3 * thr
                current = ("pole", order) if clean else ("essential", None)
        else:
            pos = ns[(ns >= 0) & (mags > thr)]
            current = ("removable", int(pos.min()) if len(pos) else w)
        if previous is not None and current == previous and current[0] != "edge":
            kind, order = current
            return Singularity(kind, order, w, decided=kind != "essential")
        previous = current
        w *= 2
    if edge_hits >= 2:
        return Singularity("essential", None, w // 2, decided=False)
    raise Undecidable("coefficient window did not stabilise")


# -- spherical coefficients about non-real centers -------------------------------------------------------


def spherical_coefficients(f, q0, window=(-6, 6), R: float | None = None, nodes: int = 256,
                           rtol: float = 1e-12) -> SphericalLaurentSeries:
    """Spherical Laurent coefficients ``c_m`` of a left slice function about ``q0``.

    On the slice of ``q0`` the equation ``Q(z) = w`` has the two roots
    ``z = x0 + j sqrt(y0^2 - w)`` and ``z' = 2 x0 - z``.  For every ``w`` on
    the circle ``|w| = R`` the values ``f(z), f(z')`` determine
    ``B(w) = (z - z')^{-1} (f(z) - f(z')) = sum w^n c_{2n+1}`` and
    ``A(w) = f(z) - (z - q0) B(w) = sum w^n c_{2n}``; the ``c`` follow from
    the trapezoid rule on the circle.  ``R`` is the squared Cassini radius
    of the sampling curves, default ``y0^2 / 4``.  Both ``A`` and ``B`` are
    symmetric in the two roots, so ``R`` may exceed ``y0^2`` (which makes the
    coefficients far less sensitive to roundoff) as long as it stays away
    from ``y0^2`` itself, where the roots merge.
    """
    q0 = qt.as_quat(q0)
    x0, y0, j0 = qt.slice_coords(q0)
    x0, y0 = float(x0), float(y0)
    if y0 <= 0:
        raise ParamError("spherical coefficients need a non-real center; use laurent_coefficients")
    if getattr(f, "chirality", "left") != "left":
        raise ParamError("spherical coefficients are implemented for left slice functions")
    if R is None:
        R = 0.25 * y0 * y0
    if R <= 0 or abs(R - y0 * y0) < 1e-3 * y0 * y0:
        raise ParamError("R must be positive and away from |Im q0|^2")
    m_lo, m_hi = int(window[0]), int(window[1])
    n_lo, n_hi = math.floor(m_lo / 2), math.floor(m_hi / 2)
    ns = np.arange(n_lo, n_hi + 1)

    def extract(nodes):
        theta = 2 * np.pi * np.arange(nodes) / nodes
        w = R * np.exp(1j * theta)
        root = 1j * np.sqrt(y0 * y0 - w)
        z, zp = x0 + root, x0 - root
        fz = np.asarray(f(qt.embed(z, j0)), dtype=float)
        fzp = np.asarray(f(qt.embed(zp, j0)), dtype=float)
        B = qt.mul(qt.embed(1.0 / (z - zp), j0), fz - fzp)
        A = fz - qt.mul(qt.embed(z, j0) - q0, B)
        even, odd = [], []
        for n in ns:
            rot = qt.embed(np.exp(-1j * n * theta), j0)
            even.append(qt.mul(rot, A).mean(axis=0) * R ** (-float(n)))
            odd.append(qt.mul(rot, B).mean(axis=0) * R ** (-float(n)))
        scale = max(float(np.max(qt.norm(fz))), float(np.max(qt.norm(fzp))), 1e-300)
        return np.array(even), np.array(odd), scale

    nodes = max(int(nodes), 4 * len(ns) + 4)
    e0, o0, _ = extract(nodes)
    while True:
        e1, o1, scale = extract(2 * nodes)
        tol = rtol * scale * R ** (-ns.astype(float))
        if np.all(qt.norm(e1 - e0) <= tol) and np.all(qt.norm(o1 - o0) <= tol):
            break
        nodes *= 2
        if 2 * nodes > MAX_NODES:
            raise NonConvergence("spherical coefficients did not settle")
        e0, o0 = e1, o1
    coeffs = np.zeros((m_hi - m_lo + 1, 4))
    for k, n in enumerate(ns):
        for m, val in ((2 * n, e1[k]), (2 * n + 1, o1[k])):
            if m_lo <= m <= m_hi:
                coeffs[m - m_lo] = val
    return SphericalLaurentSeries(q0, coeffs, m_lo)


def spherical_order(f, q0, R: float | None = None, window: int = 8, max_doublings: int = 4,
                    tol: float | None = None) -> int:
    """Smallest even ``n0`` with ``c_m = 0`` for all ``m < -n0``.

    Coefficients are normalised as ``|c_m| R^{floor(m/2)}`` and compared
    with ``1e-9`` times the largest sampled value of ``f``.  The answer is
    accepted once two consecutive window doublings agree.

    Raises
    ------
    Undecidable
        If the order keeps growing with the window.
    """
    previous = None
    w = int(window)
    for _ in range(max_doublings + 1):
        ser = spherical_coefficients(f, q0, (-w, w), R=R)
        x0, y0, _ = qt.slice_coords(ser.center)
        RR = 0.25 * float(y0) ** 2 if R is None else R
        ms = ser.indices
        mags = qt.norm(ser.coeffs) * RR ** np.floor(ms / 2.0)
        theta = 2 * np.pi * np.arange(256) / 256
        root = 1j * np.sqrt(float(y0) ** 2 - RR * np.exp(1j * theta))
        _, _, j0 = qt.slice_coords(ser.center)
        samples = np.concatenate([qt.embed(float(x0) + root, j0), qt.embed(float(x0) - root, j0)])
        thr = COEFF_TOL * float(np.max(qt.norm(f(samples)))) if tol is None else tol
        neg = ms[(ms < 0) & (mags > thr)]
        order = 0 if len(neg) == 0 else 2 * math.ceil(-int(neg.min()) / 2)
        inside = order < w
        if previous is not None and order == previous and inside:
            return order
        previous = order
        w *= 2
    raise Undecidable("spherical order did not stabilise")
