import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate as si

from wormszego import Component, GridSpec, SampledField, validate_params
from wormszego import analysis, szego
from wormszego.domain import HALF_PI
from wormszego.errors import NotInterior, ParamOutOfRange, PWConditionViolated
from wormszego.szego import BoundaryData, ModeCoefficients, Operator, OperatorTag

G = GridSpec(20.0, 512, 8)


def rand_data(seed, components=(0, 1, 2, 3)):
    return analysis.random_band_limited(G, seed, 0, components=components)


def gauss_modes(seed, jmax=4):
    rng = np.random.default_rng(seed)
    g = {}
    for j in range(-jmax, jmax + 1):
        c, mu, w = complex(rng.normal(), rng.normal()), rng.uniform(-1, 1), rng.uniform(0.8, 2)
        g[j] = lambda xi, c=c, mu=mu, w=w: c * np.exp(-w * (xi - mu) ** 2)
    return ModeCoefficients(g)


def rel(a, b):
    return np.max(np.abs(a - b)) / np.max(np.abs(b))


@given(beta=st.floats(1.6, 10.0), xi=st.lists(st.floats(-30, 30), min_size=1, max_size=20),
       j=st.integers(-64, 64))
def test_symbol_matrix_projection(beta, xi, j):
    p = validate_params(beta)
    M = szego.boundary_symbol_matrix(p, np.array(xi), j)
    assert np.max(np.abs(M @ M - M)) <= 1e-13
    assert np.max(np.abs(M - np.swapaxes(M, -1, -2).conj())) <= 1e-13


def test_unit_vector_matches_weight(params):
    xi = np.linspace(-6, 6, 121)[:, None]
    j = np.arange(-5, 6)[None, :]
    n = szego.boundary_unit_vector(params, xi, j)
    V, S = szego.component_offsets(params)
    lw = szego.log_four_w(params, xi, j)
    for k in range(4):
        assert np.allclose(n[k], np.exp(0.5 * j * S[k] - V[k] * xi - 0.5 * lw), rtol=1e-12, atol=0)


def test_boundary_projector(params):
    phi, psi = rand_data(1), rand_data(2)
    sphi = szego.boundary_szego(params, phi)
    assert rel(szego.boundary_szego(params, sphi).stacked(), sphi.stacked()) <= 1e-10
    lhs = analysis.h2_inner(sphi, psi)
    rhs = analysis.h2_inner(phi, szego.boundary_szego(params, psi))
    assert abs(lhs - rhs) <= 1e-10 * analysis.lp_boundary_norm(phi, 2) * analysis.lp_boundary_norm(psi, 2)
    assert analysis.lp_boundary_norm(sphi, 2) <= analysis.lp_boundary_norm(phi, 2)
    zero = BoundaryData.zeros(G)
    assert np.all(szego.boundary_szego(params, zero).stacked() == 0)


def test_boundary_data_algebra():
    a, b = rand_data(3), rand_data(4)
    assert np.array_equal((a + b).stacked(), a.stacked() + b.stacked())
    assert np.array_equal((a - b).stacked(), a.stacked() - b.stacked())
    assert np.array_equal((2 * a).stacked(), 2 * a.stacked())
    single = BoundaryData.single(a.phi1, Component.E3)
    assert np.array_equal(single.phi3.values, a.phi1.values) and np.all(single.phi1.values == 0)


def test_project_interior_zero_and_points(params):
    a = params.half_strip
    y, s = 0.3 * a + 0.2, 0.3 * a
    assert np.all(szego.project_interior(params, BoundaryData.zeros(G), y, s).values == 0)
    phi = rand_data(5)
    field = szego.project_interior(params, phi, y, s).values
    m, n = [100, 256, 300], [0, 4, 11]
    pts = szego.project_at_points(params, phi, G.x[m] + 1j * y, s, G.gamma[n])
    assert np.max(np.abs(pts - field[m, n])) <= 1e-12 * np.max(np.abs(field))
    with pytest.raises(NotInterior):
        szego.project_interior(params, phi, 3 * params.beta, 0.0)


def test_mode_truncation(params):
    phi = rand_data(6)
    a = params.half_strip
    prof = analysis.mode_truncation_profile(params, phi, 0.2, 0.1 * a, 2.0, [0, 1, 2, 3, 5])
    d = [v for _, v in prof]
    assert all(y <= x + 1e-10 for x, y in zip(d, d[1:]))
    assert d[-2] <= 1e-8 and d[-1] <= 1e-8


def test_pw_fixed_point_and_mode_sum(params):
    mc = gauss_modes(7)
    phi = szego.pw_worm_synthesize(params, mc, G)
    assert rel(szego.boundary_szego(params, phi).stacked(), phi.stacked()) <= 1e-9
    a = params.half_strip
    for y, s in ((0.0, 0.0), (0.5 * a + 0.7, 0.5 * a), (-0.8 * a - 0.3, -0.8 * a)):
        f = szego.project_interior(params, phi, y, s).values
        ref = szego.pw_interior_field(params, mc, G, y, s).values
        assert rel(f, ref) <= 1e-9


def test_pw_mode_sum_against_quadrature(pi_params):
    mc = gauss_modes(8, jmax=2)
    phi = szego.pw_worm_synthesize(pi_params, mc, G)
    for x, y, s, gam in ((0.3, 0.4, 0.2, 0.1), (-1.2, -0.9, -0.6, 0.77)):
        ref = 0j
        for j in mc.j_support:
            f = lambda xi, part: (mc.profile(j, np.array([xi]))[0] * np.exp(1j * (x + 1j * y) * xi))  # noqa: E731
            re = si.quad(lambda t: f(t, 0).real, -15, 15, epsabs=1e-14)[0]
            im = si.quad(lambda t: f(t, 0).imag, -15, 15, epsabs=1e-14)[0]
            ref += math.exp(0.5 * j * s) * np.exp(2j * np.pi * j * gam) * complex(re, im) / (2 * math.pi)
        got = szego.project_at_points(pi_params, phi, complex(x, y), s, gam)[0]
        assert abs(got - ref) <= 1e-10 * abs(ref)


def test_pw_single_mode_gamma_independent(params):
    mc = ModeCoefficients({0: lambda xi: np.exp(-xi**2) / np.cosh(xi)})
    phi = szego.pw_worm_synthesize(params, mc, G)
    for f in phi.components:
        assert np.max(np.abs(f.values - f.values[:, :1])) <= 1e-14 * np.max(np.abs(f.values))


def test_pw_isometry_and_orthogonality(params):
    mc = gauss_modes(9, jmax=3)
    phi = szego.pw_worm_synthesize(params, mc, G)
    n2 = analysis.lp_boundary_norm(phi, 2) ** 2
    assert n2 == pytest.approx(szego.pw_weighted_norm_sq(params, mc, G), rel=1e-10)
    f0 = szego.pw_worm_synthesize(params, ModeCoefficients({0: mc.g[0]}), G)
    f1 = szego.pw_worm_synthesize(params, ModeCoefficients({1: mc.g[1]}), G)
    scale = analysis.lp_boundary_norm(f0, 2) * analysis.lp_boundary_norm(f1, 2)
    assert abs(analysis.h2_inner(f0, f1)) <= 1e-12 * scale


def test_pw_condition(params):
    with pytest.raises(PWConditionViolated):
        szego.pw_worm_synthesize(params, ModeCoefficients({0: lambda xi: 1 / np.cosh(xi)}), G)


def _tags(t, s):
    return [
        (OperatorTag(Operator.LAMBDA_I_S, s=s), OperatorTag(Operator.XI_I_T, t=t), OperatorTag(Operator.T_I_TS, t=t, s=s)),
        (OperatorTag(Operator.LAMBDA_II_S, s=s), OperatorTag(Operator.XI_II_T, t=t), OperatorTag(Operator.T_II_TS, t=t, s=s)),
    ]


@given(beta=st.sampled_from([1.7, math.pi, 4.0]), u=st.floats(0, 0.999), v=st.floats(0, 0.999))
def test_factorizations(beta, u, v):
    p = validate_params(beta)
    t, s = u * HALF_PI, v * p.half_strip
    phi = rand_data(10, components=(0,))
    for outer, inner, whole in _tags(t, s):
        comp = szego.factor_apply(p, outer, szego.factor_apply(p, inner, phi)).values
        direct = szego.factor_apply(p, whole, phi).values
        assert rel(comp, direct) <= 1e-13
    lp = OperatorTag(Operator.LAMBDA_PRIME_YS, y=s + t, s=s)
    comp = szego.factor_apply(p, lp, szego.factor_apply(p, OperatorTag(Operator.LAMBDA_S, s=s), phi)).values
    assert rel(comp, szego.project_interior(p, phi, s + t, s).values) <= 1e-13
    tsum = sum(szego.factor_apply(p, w, phi).values for _, _, w in _tags(t, s))
    diff = szego.boundary_szego(p, phi).phi1.values - szego.project_interior(p, phi, s + t, s).values
    assert np.max(np.abs(tsum - diff)) <= 1e-11 * np.max(np.abs(szego.boundary_szego(p, phi).phi1.values))


def test_lambda_two_vanishes_at_endpoint(params):
    xi = np.linspace(-10, 10, 201)
    sym = szego.operator_symbol(params, OperatorTag(Operator.LAMBDA_II_S, s=params.half_strip), xi, 3)
    assert np.all(sym == 0)


def test_xi_one_vanishing_limit(params):
    g = rand_data(11, components=(0,)).phi1
    base = analysis.field_lp_norm(g, 2)
    norms = [analysis.field_lp_norm(szego.factor_apply(params, OperatorTag(Operator.XI_I_T, t=HALF_PI - d), g), 2)
             for d in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)]
    assert all(y < x for x, y in zip(norms, norms[1:]))
    assert norms[-1] <= 1e-4 * base


def test_operator_ranges(params):
    with pytest.raises(ParamOutOfRange):
        szego.operator_symbol(params, OperatorTag(Operator.XI_I_T, t=HALF_PI), 0.0, 0)
    with pytest.raises(ParamOutOfRange):
        szego.operator_symbol(params, OperatorTag(Operator.LAMBDA_S, s=-0.1), 0.0, 0)
    with pytest.raises(ParamOutOfRange):
        szego.operator_symbol(params, OperatorTag(Operator.LAMBDA_PRIME_YS, s=0.0, y=2.0), 0.0, 0)


def test_mode_extract():
    gx = np.exp(-G.x**2) * (1 + 0.5j * G.x)
    f = SampledField.from_function(G, lambda x, gam: np.exp(-x**2) * (1 + 0.5j * x) * np.exp(10j * np.pi * gam))
    assert np.max(np.abs(szego.mode_extract(f, 5) - gx)) <= 1e-14
    assert np.max(np.abs(szego.mode_extract(f, 2))) <= 1e-14


def test_mollifier_bounds(params):
    x = np.linspace(-20, 20, 401)
    for comp in Component:
        z1 = x + 1j * comp.im_z1(params)
        for eps in (1e-2, 1e-4):
            G_ = szego.mollifier_values(params, eps, x, comp)
            assert np.all(np.abs(G_) <= 1.0 / (1 + eps * (2 * params.beta - abs(z1.imag))) + 1e-15)
            bound = eps * (2 * params.beta + np.abs(z1)) / (1 - eps * 2 * params.beta)
            assert np.all(np.abs(G_ - 1) <= bound + 1e-15)


def test_mollify_converges(params):
    phi = rand_data(12)
    d = [analysis.lp_boundary_norm(szego.mollify(params, phi, 2.0**-k) - phi, 2) for k in range(1, 21)]
    assert all(y < x for x, y in zip(d, d[1:]))
    with pytest.raises(ParamOutOfRange):
        szego.mollify(params, phi, 0.0)
