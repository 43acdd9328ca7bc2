import math

import numpy as np
import pytest
import scipy.integrate
import scipy.special
from hypothesis import given
from hypothesis import strategies as st

from noclone.errors import DomainError, PreconditionError
from noclone.specfun import (gauss_2f1_terminating, generalized_laguerre,
                             hermite, hermite_expansion_coeffs,
                             hermite_scaled, hermite_triple_integral,
                             laguerre, laguerre_arr, laguerre_sq_exp_moment)


@given(st.integers(0, 30), st.floats(-10, 10))
def test_laguerre_matches_scipy(n, x):
    assert laguerre(n, x) == pytest.approx(
        scipy.special.eval_laguerre(n, x), rel=1e-10, abs=1e-10)


@given(st.integers(0, 20))
def test_laguerre_arr_matches_scalar(n):
    x = np.linspace(-5, 15, 31)
    got = laguerre_arr(n, x)
    want = np.array([laguerre(n, v) for v in x])
    np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12)


@given(st.integers(0, 20), st.integers(0, 6), st.floats(-5, 10))
def test_generalized_laguerre_matches_scipy(n, k, x):
    assert generalized_laguerre(n, k, x) == pytest.approx(
        scipy.special.eval_genlaguerre(n, k, x), rel=1e-9, abs=1e-9)


@given(st.integers(0, 25), st.floats(-5, 5))
def test_hermite_matches_scipy(n, x):
    assert hermite(n, x) == pytest.approx(
        scipy.special.eval_hermite(n, x), rel=1e-9, abs=1e-9)


@given(st.integers(0, 60), st.floats(-4, 4))
def test_hermite_scaled_consistent(n, x):
    mant, expo = hermite_scaled(n, x)
    direct = hermite(n, x)
    assert mant * 2.0 ** expo == pytest.approx(direct, rel=1e-9, abs=1e-200)


def test_hermite_scaled_no_overflow():
    mant, expo = hermite_scaled(600, 1.3)
    assert math.isfinite(mant)


@given(st.floats(-3, 3), st.integers(0, 12), st.floats(0.3, 4), st.floats(-1, 1))
def test_gauss_2f1_matches_scipy(a, n, c, z):
    # scipy's hyp2f1 handles the terminating case b = -n exactly
    assert gauss_2f1_terminating(a, n, c, z) == pytest.approx(
        float(scipy.special.hyp2f1(a, -n, c, z)), rel=1e-8, abs=1e-8)


def test_gauss_2f1_pochhammer_zero():
    with pytest.raises(DomainError):
        gauss_2f1_terminating(1.0, 5, -2.0, 0.5)


ALPHA = 1.0 / math.sqrt(3.0)
BETA = math.sqrt(2.0 / 3.0)


@pytest.mark.parametrize("a,i,l", [(0, 0, 0), (2, 0, 0), (1, 1, 0),
                                   (2, 1, 1), (4, 2, 2), (3, 2, 3),
                                   (6, 4, 2), (5, 5, 4)])
def test_hermite_triple_integral_vs_quadrature(a, i, l):
    t, w = np.polynomial.hermite.hermgauss(80)
    ha = scipy.special.eval_hermite(a, ALPHA * t)
    hi = scipy.special.eval_hermite(i, BETA * t)
    hl = scipy.special.eval_hermite(l, BETA * t)
    want = float(np.sum(w * ha * hi * hl))
    got = hermite_triple_integral(a, i, l, ALPHA, BETA)
    assert got == pytest.approx(want, rel=1e-10, abs=1e-9)


def test_hermite_triple_integral_parity():
    assert hermite_triple_integral(1, 1, 1, ALPHA, BETA) == 0.0
    assert hermite_triple_integral(3, 0, 0, ALPHA, BETA) == 0.0


def test_hermite_triple_integral_precondition():
    with pytest.raises(PreconditionError):
        hermite_triple_integral(0, 0, 0, 0.5, 0.5)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_hermite_expansion_reproduces_kernel(n):
    table = hermite_expansion_coeffs(n, 4 * n)
    u = np.linspace(-2.5, 2.5, 7)
    U, V = np.meshgrid(u, u, indexing="ij")
    want = laguerre_arr(n, U ** 2 + V ** 2) ** 2
    got = np.zeros_like(want)
    for a in range(table.a_max + 1):
        for b in range(table.a_max + 1):
            if table.coeffs[a, b] != 0.0:
                got += (table.coeffs[a, b]
                        * scipy.special.eval_hermite(a, U)
                        * scipy.special.eval_hermite(b, V))
    np.testing.assert_allclose(got, want, rtol=1e-9, atol=1e-9)


def test_hermite_expansion_truncation_warns():
    with pytest.warns(UserWarning):
        hermite_expansion_coeffs(2, 4)


@pytest.mark.parametrize("n", [0, 1, 2, 3, 5])
@pytest.mark.parametrize("s", [0.5, 1.0, 1.7, 2.0, 3.5])
def test_laguerre_sq_exp_moment_vs_quad(n, s):
    want, _ = scipy.integrate.quad(
        lambda z: laguerre(n, z) ** 2 * math.exp(-s * z), 0, np.inf)
    assert laguerre_sq_exp_moment(n, s) == pytest.approx(want, rel=1e-10)


def test_laguerre_sq_exp_moment_domain():
    with pytest.raises(DomainError):
        laguerre_sq_exp_moment(1, 0.0)
    with pytest.raises(DomainError):
        laguerre_sq_exp_moment(-1, 1.0)
