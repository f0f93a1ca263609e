import math

import numpy as np
import pytest

from slicecauchy import kernel as kn
from slicecauchy import quaternion as qt
from slicecauchy import series as se
from slicecauchy import slicefunc as sf
from slicecauchy.errors import DomainError, ParamError

Q0 = np.array([0.4, 0.0, 0.9, 0.0])


def pole_at(a):
    return sf.from_holomorphic(lambda z: 1 / (z - a), domain=lambda u, v: (u - a) ** 2 + v ** 2 > 0)


def test_monomial_coefficients():
    f = sf.polynomial([[0, 0, 0, 0], [0, 0, 0, 0], [1.0, 0, 0, 0]])
    L = se.laurent_coefficients(f, qt.E2, 1.0, (-5, 5))
    expect = np.zeros((11, 4))
    expect[7, 0] = 1.0
    assert np.max(qt.norm(L.coeffs - expect)) < 1e-13


def test_random_polynomial_round_trip(rng):
    c = rng.normal(size=(5, 4))
    f = sf.polynomial(c)
    L = se.laurent_coefficients(f, qt.E3, 0.7, (-4, 8))
    assert np.max(qt.norm(L.coeffs[4:9] - c)) < 1e-12
    q = rng.normal(size=(5, 4)) * 0.3
    assert np.allclose(L(q), f(q), atol=1e-12)


def test_right_chirality(rng):
    c = rng.normal(size=(3, 4))
    f = sf.polynomial(c, n_min=-1, center=0.2, chirality="right")
    L = se.laurent_coefficients(f, qt.E1, 0.5, (-3, 3), center=0.2)
    assert np.max(qt.norm(L.coeffs[2:5] - c)) < 1e-12
    assert L.chirality == "right"


def test_residue():
    f = sf.polynomial([[0.5, 1, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]], n_min=-1, center=0.3)
    assert np.allclose(se.residue_at_real(f, 0.3), [0.5, 1, 0, 0], atol=1e-13)


def test_classification():
    assert se.classify_singularity(sf.polynomial([[1.0, 0, 0, 0]], n_min=-3, center=0.3), 0.3) == \
        se.Singularity("pole", 3, 16)
    s = se.classify_singularity(sf.from_holomorphic(np.sin), 0.0)
    assert (s.kind, s.order) == ("removable", 1)
    e = se.classify_singularity(sf.from_holomorphic(lambda z: np.exp(1 / z), domain=lambda u, v: u * u + v * v > 0),
                                0.0)
    assert e.kind == "essential" and not e.decided


def test_cassini_distance():
    assert np.isclose(se.cassini_distance(qt.conj(Q0), Q0), 0.0)
    p = np.array([2.0, 1.0, 0, 0])
    assert np.isclose(se.cassini_distance(p, np.array([0.5, 0, 0, 0])), qt.norm(p - 0.5 * qt.ONE))


def test_convergence_radii():
    assert se.convergence_radii(np.ones((30, 4))) == se.Radii(0.0, 1.0)
    fact = [[math.factorial(n)] * 4 for n in range(25)]
    assert se.convergence_radii(fact).r2 == 0.0
    neg = np.array([[2.0 ** -k, 0, 0, 0] for k in range(20, 0, -1)])
    r = se.convergence_radii(neg, n_min=-20)
    assert np.isclose(r.r1, 0.5) and r.r2 == math.inf
    assert r.kind == "shell"


def test_geometric_spherical_series():
    c = np.zeros((40, 4))
    c[0::2, 0] = 2.0 ** -np.arange(20)
    S = se.SphericalLaurentSeries(Q0, c)
    assert np.isclose(S.radii.r2, np.sqrt(2))
    q = np.array([0.1, 0.2, 0.1, 0.3])
    Q = kn.char_poly(Q0, q)
    assert np.allclose(S(q), qt.inverse(qt.ONE - Q / 2), atol=1e-6)
    with pytest.raises(DomainError):
        S(3 * qt.ONE, strict=True)


def test_spherical_coefficients_of_Q_inverse():
    F = sf.from_holomorphic(lambda z: 1 / (z * z - 0.8 * z + 0.97))
    S = se.spherical_coefficients(F, Q0, (-4, 4))
    expect = np.zeros((9, 4))
    expect[2, 0] = 1.0  # c_{-2}
    assert np.max(qt.norm(S.coeffs - expect)) < 1e-10


def test_spherical_series_reproduces(rng):
    f = pole_at(2.0)
    S = se.spherical_coefficients(f, Q0, (0, 40), R=2.0)
    q = Q0 + 0.3 * rng.normal(size=(5, 4))
    assert np.allclose(S(q), f(q), atol=1e-8)


def test_spherical_order():
    F1 = sf.from_holomorphic(lambda z: 1 / (z * z - 0.8 * z + 0.97))
    F2 = sf.from_holomorphic(lambda z: 1 / (z * z - 0.8 * z + 0.97) ** 2)
    assert se.spherical_order(F1, Q0) == 2
    assert se.spherical_order(F2, Q0) == 4
    assert se.spherical_order(sf.polynomial([[1, 0, 0, 0], [0, 1, 0, 0]]), Q0) == 0


def test_spherical_parameter_checks():
    with pytest.raises(ParamError):
        se.spherical_coefficients(pole_at(2.0), np.array([0.3, 0, 0, 0]))
    with pytest.raises(ParamError):
        se.spherical_coefficients(pole_at(2.0), Q0, R=0.81)


def test_radii_of_shell_match_theory():
    a, b = 2.0, 0.2
    f = sf.from_holomorphic(lambda z: 1 / (z - a) + 1 / (z - b),
                            domain=lambda u, v: np.minimum((u - a) ** 2, (u - b) ** 2) + v ** 2 > 0)
    S = se.spherical_coefficients(f, Q0, (-30, 30), R=2.0)
    r1 = float(se.cassini_distance(b * qt.ONE, Q0))
    r2 = float(se.cassini_distance(a * qt.ONE, Q0))
    assert np.isclose(S.radii.r1, r1, rtol=1e-6)
    assert np.isclose(S.radii.r2, r2, rtol=1e-6)
    assert np.isclose(se.empirical_radius(S, qt.E2, "inner", lo=1e-2, hi=10), r1, rtol=0.05)
