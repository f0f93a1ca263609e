"""Worked input/output examples for each public operation."""

import numpy as np
import pytest

from slicecauchy import contour as ct
from slicecauchy import globalop as go
from slicecauchy import kernel as kn
from slicecauchy import quaternion as qt
from slicecauchy import series as se
from slicecauchy import slicefunc as sf
from slicecauchy import transform as tr
from slicecauchy.errors import PoleError

E1, E2, E3, ONE = qt.E1, qt.E2, qt.E3, qt.ONE


def lin(c0):
    """The left polynomial ``q + c0``."""
    return sf.polynomial([c0, ONE])


# -- slice functions ---------------------------------------------------------------------------


def test_square_at_e1():
    f = sf.SliceFunction(lambda u, v: qt.real(u * u - v * v), lambda u, v: qt.real(2 * u * v))
    assert np.allclose(f(E1), -ONE)


def test_identity_components(rng):
    f = sf.SliceFunction(lambda u, v: qt.real(u), lambda u, v: qt.real(v))
    q = rng.normal(size=(10, 4))
    assert np.allclose(f(q), q)
    assert np.allclose(sf.identity()(q), q)


def test_star_examples(rng):
    a, b = rng.normal(size=(2, 4))
    q = rng.normal(size=(5, 4))
    assert np.allclose(sf.star(sf.constant(a), sf.constant(b))(q), qt.mul(a, b))
    f = sf.polynomial(rng.normal(size=(3, 4)))
    assert np.allclose(sf.star(f, sf.constant(ONE))(q), f(q))
    prod = sf.star(lin(-E1), lin(-E2))
    assert np.allclose(prod(q), sf.polynomial([E3, -E1 - E2, ONE])(q))
    fr = sf.polynomial(rng.normal(size=(3, 4)), chirality="right")
    assert np.allclose(sf.star(fr, sf.constant(ONE, "right"))(q), fr(q))
    pr = sf.star(sf.polynomial([-E1, ONE], chirality="right"), sf.polynomial([-E2, ONE], chirality="right"))
    assert np.allclose(pr(q), sf.polynomial([E3, -E1 - E2, ONE], chirality="right")(q))


def test_slice_derivative_examples(rng):
    sq = sf.polynomial([0 * ONE, 0 * ONE, ONE])
    q = ONE + E1
    assert qt.norm(sf.slice_derivative(sq, q, h=1e-5) - (2 * ONE + 2 * E1)) < 1e-8
    assert qt.norm(sf.slice_derivative(sf.constant(rng.normal(size=4)), q)) < 1e-8
    p = rng.normal(size=4)
    assert qt.norm(sf.slice_derivative(sf.identity(), p) - ONE) < 1e-8


def test_cr_examples():
    sq = sf.polynomial([0 * ONE, 0 * ONE, ONE])
    assert sf.cr_residual(sq, 1.0, 0.5) < 1e-8
    conjf = sf.SliceFunction(lambda u, v: qt.real(u), lambda u, v: qt.real(-v))
    assert abs(sf.cr_residual(conjf, 0.3, 0.7) - 2.0) < 1e-8
    assert sf.cr_residual(sf.constant([1, 2, 3, 4]), 0.3, 0.7) < 1e-8


# -- kernels -------------------------------------------------------------------------------------


def test_kernel_real_s():
    assert np.allclose(kn.cauchy_kernel_left(2 * ONE, E1).value, (2 * ONE + E1) / 5)
    assert np.allclose(kn.cauchy_kernel_right(2 * ONE, E1).value, (2 * ONE + E1) / 5)


def test_right_kernel_pole():
    with pytest.raises(PoleError):
        kn.cauchy_kernel_right(E1, E3)


def test_star_inverse_kernel_examples(rng):
    assert np.allclose(kn.star_inverse(2 * ONE, E1), qt.inverse(E1 - 2 * ONE))
    s, p = rng.normal(size=(2, 4))
    inv = sf.star_inverse(lin(-s))
    assert qt.norm(sf.star(lin(-s), inv)(p) - ONE) < 1e-10
    assert qt.norm(inv(p) - kn.star_inverse(s, p)) < 1e-10
    with pytest.raises(PoleError):
        kn.star_inverse(s, s[0] * ONE + qt.im_norm(s) * E2)


def test_phi_examples(rng):
    p = rng.normal(size=4)
    s = 0.7 * ONE
    assert np.allclose(kn.phi(s, p), qt.power(p - s, -2))
    s = rng.normal(size=4)
    inv = sf.star_inverse(lin(-s))
    assert qt.norm(kn.phi(s, p) - sf.star(inv, inv)(p)) < 1e-10 * (1 + qt.norm(kn.phi(s, p)))


# -- contours --------------------------------------------------------------------------------------


def test_contour_examples():
    C = ct.circle((1, 0), 2.0, E2)
    assert np.allclose(C.points(C.arcs[0].z(np.array([0.0]))), 3 * ONE)
    t = np.array([0.4, 1.3])
    assert np.allclose(C.arcs[0].z(-t), np.conj(C.arcs[0].z(t)))
    U = ct.circle()
    assert abs(U.length() - 2 * np.pi) < 1e-10
    assert qt.norm(ct.integrate_ds_j(lambda s: np.broadcast_to(ONE, s.shape), U)) < 1e-10
    assert qt.norm(ct.integrate_ds_j(lambda s: s, U)) < 1e-10
    assert qt.norm(ct.integrate_ds_j(qt.inverse, U) - 2 * np.pi * ONE) < 1e-10
    seg = ct.Contour([ct.Segment(0, 3)], E1, closed=False)
    assert np.isclose(seg.length(), 3.0)


def test_ellipse_length_vs_polyline():
    t = np.linspace(0, 2 * np.pi, 1_000_001)
    z = 2 * np.cos(t) + 1j * np.sin(t)
    oracle = np.sum(np.abs(np.diff(z)))
    assert abs(ct.ellipse(0, 2.0, 1.0).length() - oracle) < 1e-8


def test_ml_examples(rng):
    U = ct.circle()
    lhs, rhs = ct.ml_bound_check(lambda s: np.broadcast_to(ONE, s.shape), U)
    assert lhs < 1e-10 and np.isclose(rhs, 2 * np.pi)
    lhs, rhs = ct.ml_bound_check(qt.inverse, U)
    assert np.isclose(lhs, 2 * np.pi) and np.isclose(rhs, 2 * np.pi)
    c = rng.normal(size=(3, 4))
    lhs, rhs = ct.ml_bound_check(sf.polynomial(c), ct.ellipse(0.3, 1.5, 0.7, E3))
    assert lhs <= rhs


# -- transforms ---------------------------------------------------------------------------------------


def test_transform_examples(rng):
    U = ct.circle()
    one = sf.constant(ONE)
    assert qt.norm(tr.cauchy_transform(one, U, 0.2 * ONE + 0.3 * E2) - ONE) < 1e-8
    assert qt.norm(tr.cauchy_transform(one, U, 3 * ONE)) < 1e-8
    assert qt.norm(tr.cauchy_transform_right(sf.constant(ONE, "right"), U, 0.2 * ONE + 0.3 * E2) - ONE) < 1e-8
    assert qt.norm(tr.cauchy_transform_right(sf.constant(ONE, "right"), U, 3 * ONE)) < 1e-8
    cube = sf.polynomial([0 * ONE] * 3 + [ONE])
    C = ct.circle((0, 0), 1.5, E1)
    p = rng.normal(size=(10, 4))
    p *= (rng.uniform(0, 1.4, 10) / qt.norm(p))[:, None]
    assert np.max(qt.norm(tr.cauchy_transform(cube, C, p) - qt.power(p, 3))) < 1e-8


def test_derivative_examples(rng):
    C = ct.circle((0, 0), 1.5, E1)
    p = np.array([0.2, 0.1, -0.3, 0.4])
    assert qt.norm(tr.transform_derivative(sf.constant(ONE), ct.circle(), p)) < 1e-8
    sq = sf.polynomial([0 * ONE, 0 * ONE, ONE])
    assert qt.norm(tr.transform_derivative(sq, C, p) - 2 * p) < 1e-7


def test_split_examples(rng):
    U = ct.circle((0, 0), 1.0, E2)
    c = rng.normal(size=4)
    pin = np.array([0.1, 0.2, 0.0, -0.3])
    pout = np.array([1.5, 0.2, 0.4, 0.0])
    pair = tr.split(sf.constant(c), U)
    assert qt.norm(pair.plus(pin) - c) < 1e-8 and qt.norm(pair.minus(pout)) < 1e-8
    pair = tr.split(sf.polynomial([ONE], n_min=-2), U)
    assert qt.norm(pair.plus(pin)) < 1e-8
    assert qt.norm(pair.minus(pout) - qt.power(pout, -2)) < 1e-8


def test_jump_examples():
    U = ct.circle()
    jumps = tr.boundary_jump_check(sf.identity(), U, 1j, [0.1, 0.01, 0.001])
    assert jumps[0] > jumps[1] > jumps[2]
    assert max(tr.boundary_jump_check(sf.constant(ONE), U, 1j, [0.1, 0.01, 0.001])) < 1e-8


def test_holder_examples():
    U = ct.circle()
    assert tr.holder_seminorm(sf.constant([1, 2, 3, 4]), U, 0.5).seminorm < 1e-12
    alpha = 0.3
    h = tr.holder_seminorm(sf.identity(), U, alpha, samples=128)
    _, _, z = U.sample(128)
    d = np.abs(z[:, None] - z[None, :])
    assert np.isclose(h.seminorm, np.max(d[d > 0] ** (1 - alpha)))


def test_holder_cusp_under_refinement():
    U = ct.circle()
    f = sf.SliceFunction(lambda u, v: qt.real(np.sqrt(np.abs(u))), lambda u, v: qt.real(0 * u))
    s5 = [tr.holder_seminorm(f, U, 0.5, samples=n).seminorm for n in (128, 512, 2048)]
    s9 = [tr.holder_seminorm(f, U, 0.9, samples=n).seminorm for n in (128, 512, 2048)]
    assert max(s5) < 1.5 * min(s5)
    assert s9[0] < s9[1] < s9[2] and s9[2] > 1.5 * s9[0]


def test_growth_examples():
    U = ct.circle()
    assert abs(tr.growth_exponent(sf.constant(ONE), U, 1j).slope) < 1e-6
    poly = sf.polynomial([[0.3, 0, 1, 0], [1, 0, 0, 0], [0, 0.5, 0, 0]])
    assert tr.growth_exponent(poly, U, 1j).slope >= -0.1


# -- series ----------------------------------------------------------------------------------------------


def test_cassini_examples(rng):
    q0 = 0.4 * ONE
    q = rng.normal(size=(5, 4))
    assert np.allclose(se.cassini_distance(q, q0), qt.norm(q - q0))
    q0 = rng.normal(size=4)
    assert se.cassini_distance(q0, q0) < 1e-7
    assert se.cassini_distance(qt.conj(q0), q0) < 1e-7


def test_spherical_series_examples(rng):
    q0 = np.array([0.4, 0, 0.9, 0])
    a = rng.normal(size=4)
    q = rng.normal(size=(5, 4))
    assert np.allclose(se.SphericalLaurentSeries(q0, [a])(q), a)
    assert np.allclose(se.SphericalLaurentSeries(q0, [q0, ONE])(q), q)
    c = np.zeros((120, 4))
    c[0::2, 0] = 2.0 ** -np.arange(60)
    qq = np.array([0.3, 0.1, 0.6, 0.2])
    Q = kn.char_poly(q0, qq)
    assert qt.norm(se.SphericalLaurentSeries(q0, c)(qq) - qt.inverse(ONE - Q / 2)) < 1e-10


def test_radii_examples():
    assert se.convergence_radii(np.ones((40, 4))) == se.Radii(0.0, 1.0)
    neg = [[2.0 ** -n, 0, 0, 0] for n in range(30, 0, -1)]
    assert np.isclose(se.convergence_radii(neg, n_min=-30).r1, 0.5)
    from math import factorial
    r = se.convergence_radii([[float(factorial(n)), 0, 0, 0] for n in range(30)])
    assert r.r2 == 0.0 and r.empty


def test_laurent_examples(rng):
    L = se.laurent_coefficients(sf.polynomial([ONE], n_min=-1), E2, 1.0, (-3, 3))
    assert np.allclose(L.coeff(-1), ONE, atol=1e-13)
    assert np.max(qt.norm(np.delete(L.coeffs, 2, axis=0))) < 1e-10
    c = rng.normal(size=4)
    L = se.laurent_coefficients(sf.constant(c), E1, 1.0, (-2, 2))
    assert np.allclose(L.coeff(0), c)


def test_residue_examples(rng):
    a = 0.3
    assert np.allclose(se.residue_at_real(sf.polynomial([ONE], n_min=-1, center=a), a), ONE)
    assert qt.norm(se.residue_at_real(sf.polynomial([ONE], n_min=-2, center=a), a)) < 1e-12
    c = rng.normal(size=4)
    f = sf.polynomial([c, 0 * ONE, ONE], n_min=-1, center=a)
    assert np.allclose(se.residue_at_real(f, a), c)


def test_bounded_is_removable():
    f = sf.from_holomorphic(lambda z: np.cos(z) + z ** 3)
    s = se.classify_singularity(f, 0.2)
    assert s.kind == "removable" and s.order == 0


def test_spherical_order_regular():
    q0 = np.array([0.4, 0, 0.9, 0])
    assert se.spherical_order(sf.from_holomorphic(np.exp), q0) == 0


# -- global operators ---------------------------------------------------------------------------------------


def test_GL_examples(rng):
    q = rng.normal(size=(20, 4))
    assert np.max(qt.norm(go.apply_GL(sf.identity(), q))) < 1e-6
    assert np.max(qt.norm(go.apply_GL(sf.polynomial([0 * ONE, 0 * ONE, ONE]), q))) < 1e-6
    assert np.allclose(go.apply_GL(qt.conj, q), 2 * qt.real(qt.norm2(qt.im(q))), atol=1e-6)
    assert np.max(qt.norm(go.apply_GR(sf.identity("right"), q))) < 1e-6
    assert np.max(qt.norm(go.apply_GR(sf.polynomial([0 * ONE, 0 * ONE, ONE], chirality="right"), q))) < 1e-6
    assert np.allclose(go.apply_GR(qt.conj, q), 2 * qt.real(qt.norm2(qt.im(q))), atol=1e-6)


def test_projection_examples(rng):
    u, v = rng.normal(size=(2, 50))
    assert np.allclose(go.p_plus(lambda u, v: v ** 2)(u, v), v ** 2)
    assert np.allclose(go.p_minus(lambda u, v: v ** 2)(u, v), 0)
    assert np.allclose(go.p_minus(lambda u, v: v)(u, v), v)
    assert np.allclose(go.p_plus(lambda u, v: v)(u, v), 0)


def test_lift_examples(rng):
    c = rng.normal(size=4)
    even = go.lift_T(lambda u, v: np.exp(-u * u - v * v)[..., None] * c, (-5, 5, 5))
    u, v = rng.normal(size=(2, 30))
    f0, f1 = even.components(u, v)
    assert np.allclose(f1, 0)
    g = lambda u, v: np.exp(-(u - 0.3) ** 2 - (v - 0.5) ** 2)[..., None] * c  # noqa: E731
    T = go.lift_T(g, (-5, 5, 5))
    f0, f1 = T.components(u, v)
    assert np.allclose(f0, go.p_plus(g)(u, v)) and np.allclose(f1, go.p_minus(g)(u, v))
    b = go.SliceTestFunction.bump((0.2, 0.4), 0.5, c)
    b0, b1 = b.components(u, v)
    m0, m1 = b.components(u, -v)
    assert np.allclose(b0, m0) and np.allclose(b1, -m1)


def test_adjoint_examples(rng):
    c = rng.normal(size=4)
    const = lambda q: np.broadcast_to(c, np.shape(q))  # noqa: E731
    q = rng.normal(size=(10, 4))
    assert np.allclose(go.adjoint_GL_slice(const, q), -2 * qt.mul(c, qt.im(q)), atol=1e-8)
    phi = go.SliceTestFunction.gaussian((0.1, 0.5), 0.4, c)
    diff = go.adjoint_GL(phi, q) - go.adjoint_GL_slice(phi, q)
    assert np.allclose(diff, -2 * qt.mul(phi(q), qt.im(q)), atol=1e-14)


def test_pairing_away_from_pole_and_linearity(rng):
    s = np.array([0.3, 0.0, 0.8, 0.0])
    c = rng.normal(size=4)
    far = go.SliceTestFunction.gaussian((2.5, 0.8), 0.2, c)
    assert qt.norm(go.fundamental_pairing(far, s, levels=4).value) < 1e-8 * qt.norm(c)
    phi = go.SliceTestFunction.gaussian((0.3, 0.8), 0.25, rng.normal(size=4))


    class LeftScaled(go.SliceTestFunction):
        # pointwise c phi(q); the pairing only needs values and support
        def __call__(self, q):
            return qt.mul(c, phi(q))

    cphi = LeftScaled(phi._f0, phi._f1, phi.support)
    a = go.fundamental_pairing(phi, s, levels=2).value
    b = go.fundamental_pairing(cphi, s, levels=2).value
    assert qt.norm(b - qt.mul(c, a)) < 1e-10 * qt.norm(b)


def test_solver_zero_source():
    res = go.solve_global(sf.constant(0 * ONE), sf.ball(), grid=(8, 32), probes=5)
    assert np.max(qt.norm(res.solution(res.probes))) == 0.0
    assert np.max(res.residual) < 1e-12
