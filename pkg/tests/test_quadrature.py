import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate as si

from wormszego.errors import QuadratureNoConvergence
from wormszego.quadrature import integrate


def test_sech_integral():
    val, err = integrate(lambda x: 1 / np.cosh(x), -40, 40, abs_tol=1e-13)
    assert val == pytest.approx(math.pi, abs=1e-13)
    assert err < 1e-12


def test_complex_integrand_against_scipy():
    f = lambda x: np.exp(1j * 1.3 * x - x**2)  # noqa: E731
    val, _ = integrate(f, -10, 10, abs_tol=1e-13)
    re = si.quad(lambda x: math.cos(1.3 * x) * math.exp(-x * x), -10, 10, epsabs=1e-14)[0]
    im = si.quad(lambda x: math.sin(1.3 * x) * math.exp(-x * x), -10, 10, epsabs=1e-14)[0]
    assert abs(val - complex(re, im)) < 1e-13


def test_kink_with_breakpoint():
    val, _ = integrate(lambda x: np.exp(-np.abs(x - 0.37)), -30, 30, abs_tol=1e-13, breakpoints=[0.37])
    assert val == pytest.approx(2 - 2 * math.exp(-30) * math.cosh(0.37), abs=1e-12)


@given(st.floats(0.2, 5.0), st.floats(-3, 3))
def test_gaussian_family(w, mu):
    val, _ = integrate(lambda x: np.exp(-w * (x - mu) ** 2), -40, 40, abs_tol=1e-13, breakpoints=[mu])
    assert val == pytest.approx(math.sqrt(math.pi / w), abs=1e-12)


def test_no_convergence_raises():
    with pytest.raises(QuadratureNoConvergence):
        integrate(lambda x: np.sin(1 / np.maximum(np.abs(x), 1e-300)), -1, 1, abs_tol=1e-15, max_depth=8)
