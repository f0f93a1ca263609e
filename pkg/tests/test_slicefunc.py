import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slicecauchy import contour as ct
from slicecauchy import quaternion as qt
from slicecauchy import slicefunc as sf
from slicecauchy.errors import DomainError, ParamError


def naive_left_poly(coeffs, q):
    """Oracle: sum q^n a_n by repeated products."""
    out = np.zeros(4)
    p = qt.ONE.copy()
    for a in coeffs:
        out = out + qt.mul(p, a)
        p = qt.mul(p, q)
    return out


def test_polynomial_matches_naive(rng):
    c = rng.normal(size=(5, 4))
    f = sf.polynomial(c)
    for q in rng.normal(size=(20, 4)):
        assert np.allclose(f(q), naive_left_poly(c, q), atol=1e-12 * (1 + qt.norm(q) ** 4))


def test_right_polynomial(rng):
    c = rng.normal(size=(4, 4))
    f = sf.polynomial(c, chirality="right")
    q = rng.normal(size=4)
    expect = sum(qt.mul(c[n], qt.power(q, n)) for n in range(4))
    assert np.allclose(f(q), expect)


def test_laurent_polynomial_with_center(rng):
    c = rng.normal(size=(3, 4))
    f = sf.polynomial(c, n_min=-1, center=0.5)
    q = rng.normal(size=4)
    x = q - 0.5 * qt.ONE
    expect = qt.mul(qt.inverse(x), c[0]) + c[1] + qt.mul(x, c[2])
    assert np.allclose(f(q), expect)
    assert f.degree == 1


def test_real_axis_is_consistent():
    f = sf.polynomial([[0, 1, 0, 0], [0, 0, 1, 0]])
    assert np.allclose(f(qt.real(2.0)), [0, 1, 2, 0])


def test_f1_odd_in_v(rng):
    f = sf.polynomial(rng.normal(size=(4, 4)))
    u, v = rng.normal(size=(2, 10))
    a0, a1 = f.components(u, v)
    b0, b1 = f.components(u, -v)
    assert np.allclose(a0, b0)
    assert np.allclose(a1, -b1)


@pytest.mark.parametrize("chirality", ["left", "right"])
def test_representation_formula(rng, chirality):
    f = sf.polynomial(rng.normal(size=(5, 4)), chirality=chirality)
    q = rng.normal(size=(30, 4))
    for j in qt.random_units(rng, 5):
        assert np.allclose(sf.representation_formula(f, q, j), f(q), atol=1e-11)


def test_cauchy_riemann_residual(rng):
    f = sf.polynomial(rng.normal(size=(4, 4)))
    assert sf.cr_residual(f, 0.3, 0.7) < 1e-8
    g = sf.SliceFunction(lambda u, v: qt.real(u * v), lambda u, v: qt.real(v))
    assert sf.cr_residual(g, 0.3, 0.7) > 0.1


def test_star_product_of_polynomials(rng):
    a, b = rng.normal(size=(2, 3, 4))
    f, g = sf.polynomial(a), sf.polynomial(b)
    conv = np.zeros((5, 4))
    for m in range(3):
        for n in range(3):
            conv[m + n] += qt.mul(a[m], b[n])
    h = sf.polynomial(conv)
    q = rng.normal(size=(10, 4))
    assert np.allclose(sf.star(f, g)(q), h(q), atol=1e-11)


def test_star_product_right(rng):
    a, b = rng.normal(size=(2, 3, 4))
    f, g = sf.polynomial(a, chirality="right"), sf.polynomial(b, chirality="right")
    conv = np.zeros((5, 4))
    for m in range(3):
        for n in range(3):
            conv[m + n] += qt.mul(a[m], b[n])
    q = rng.normal(size=(10, 4))
    assert np.allclose(sf.star(f, g)(q), sf.polynomial(conv, chirality="right")(q), atol=1e-11)


def test_star_inverse(rng):
    f = sf.polynomial(rng.normal(size=(3, 4)))
    q = rng.normal(size=(10, 4))
    one = sf.star(f, sf.star_inverse(f))(q)
    assert np.allclose(one, qt.ONE, atol=1e-10)


def test_star_inverse_of_intrinsic_is_pointwise(rng):
    f = sf.polynomial([[1.0, 0, 0, 0], [0.5, 0, 0, 0], [1.0, 0, 0, 0]])
    q = rng.normal(size=(10, 4))
    assert np.allclose(sf.star_inverse(f)(q), qt.inverse(f(q)))


def test_star_rational():
    num = sf.polynomial([[1.0, 0, 0, 0]])
    den = sf.polynomial([[0, 0, 0, 0], [1.0, 0, 0, 0]])
    q = np.array([0.3, 0.4, -0.2, 0.9])
    assert np.allclose(sf.star_rational(num, den)(q), qt.inverse(q))


def test_mixed_chirality_rejected():
    with pytest.raises(ParamError):
        sf.star(sf.identity("left"), sf.identity("right"))


def test_arithmetic(rng):
    a, b = rng.normal(size=(2, 3, 4))
    f, g = sf.polynomial(a), sf.polynomial(b)
    q = rng.normal(size=(5, 4))
    assert np.allclose((f + g)(q), f(q) + g(q))
    assert np.allclose((f - g)(q), f(q) - g(q))
    c = rng.normal(size=4)
    assert np.allclose(f.scale(c)(q), qt.mul(f(q), c))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**31))
def test_slice_derivative_recovers_coefficients(order, seed):
    c = np.random.default_rng(seed).normal(size=(6, 4))
    f = sf.polynomial(c)
    d = sf.slice_derivative(f, qt.real(0.0), order=order) / math.factorial(order)
    tol = 1e-8 if order == 1 else 1e-10
    assert qt.norm(d - c[order]) < tol


def test_slice_derivative_off_axis(rng):
    c = rng.normal(size=(4, 4))
    f = sf.polynomial(c)
    q = np.array([0.2, 0.3, -0.4, 0.5])
    d1 = sf.polynomial(c[1:] * np.arange(1, 4)[:, None])
    assert qt.norm(sf.slice_derivative(f, q) - d1(q)) < 1e-8


def test_domain_checks():
    D = sf.ball(0.0, 1.0)
    f = sf.SliceFunction(lambda u, v: qt.real(u), lambda u, v: qt.real(0 * u), domain=D)
    with pytest.raises(DomainError):
        f(np.array([2.0, 0, 0, 0]))
    assert D.contains(np.array([0.1, 0.2, 0.3, 0.4]))
    assert not D.contains(np.array([0.9, 0.9, 0, 0]))


def test_ball_extent():
    D = sf.ball(0.5, 2.0)
    r = D.extent(0.5 + 0j, np.array([0.0, 1.0]))
    assert np.allclose(r, 2.0)


def test_from_holomorphic():
    f = sf.from_holomorphic(np.exp)
    q = np.array([0.2, 0.3, 0.4, 0.0])
    r = 0.5
    assert np.allclose(f(q), np.exp(0.2) * np.array([np.cos(r), 0.3 / r * np.sin(r), 0.4 / r * np.sin(r), 0]))


def test_sampled_reproduces_smooth_data():
    C = ct.circle((0, 0), 1.0, qt.E1)
    g = sf.polynomial([[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0]])
    t = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    f = sf.sampled(C, t, g.on_slice(np.exp(1j * t), qt.E1))
    pts = qt.embed(np.exp(1j * np.array([0.1, 2.0, 4.0])), qt.E1)
    assert np.allclose(f(pts), g(pts), atol=1e-7)


def test_sampled_needs_single_closed_arc():
    C = ct.polyline([0, 1, 1j], qt.E1)
    with pytest.raises(ParamError):
        sf.sampled(C, [0, 1, 2, 3], np.zeros((4, 4)))
