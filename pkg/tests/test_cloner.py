import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noclone.cloner import (FockSolverParams, GridSolverParams,
                            apply_clone_operator, build_clone_kernel,
                            classical_bound, fock_clone_kernel,
                            fock_ncb_matrix_element, gaussian_cloner_fidelity,
                            gaussian_ncb, kernel_for_state, ncb_ultimate,
                            truncation_sweep)
from noclone.errors import DomainError, GridExtentError
from noclone.grids import Grid, GridWavefunction, inner
from noclone.states import (char_fn, make_coherent_mixture, make_fock,
                            make_superposition, purity, sample_random_density)

GRID = Grid(size=128, extent=8.0)


# ---------------------------------------------------------------------------
# kernel construction

def test_fock_kernel_values():
    from noclone.specfun import laguerre_arr
    k = fock_clone_kernel(1, GRID)
    W1, W2 = GRID.meshgrid()
    z = 0.5 * (W1 ** 2 + W2 ** 2)
    np.testing.assert_allclose(k.values, laguerre_arr(1, z) ** 2 * np.exp(-z),
                               atol=1e-15)
    G = GRID.size
    assert k.values[G // 2, G // 2] == pytest.approx(1.0)


def test_kernel_requires_adequate_extent():
    with pytest.raises(GridExtentError):
        fock_clone_kernel(0, Grid(size=64, extent=4.0))


def test_pure_kernel_routes_agree():
    # |chi|^2 sampling vs the closed-form moment-transform table
    state = make_superposition(1.0, 0.5j, -0.3)
    k1 = kernel_for_state(state, GRID)
    k2 = build_clone_kernel(char_fn(state), GRID)
    np.testing.assert_allclose(k1.values, k2.values, atol=1e-12)
    np.testing.assert_allclose(k1.dual_values, k2.dual_values, atol=1e-12)


@pytest.mark.parametrize("dim,seed", [(2, 7), (3, 7), (4, 7)])
def test_mixed_kernel_routes_agree(dim, seed):
    # eigenpair route (kernel_for_state) vs moment-transform route
    rho = sample_random_density(dim, seed)
    k1 = kernel_for_state(rho, GRID)
    k2 = build_clone_kernel(char_fn(rho), GRID)
    np.testing.assert_allclose(k1.values, k2.values, atol=1e-12)


@pytest.mark.parametrize("alpha", [0.6, 1.5, 2.0])
def test_mixed_kernel_coherent_mixture_closed_form(alpha):
    # f = (1/4) sum_{b,c in {a,-a}} |<b| D(eta) |c>|^2 in closed form;
    # exercises degrees far beyond the moment-transform table's limit
    k = kernel_for_state(make_coherent_mixture(alpha), GRID)
    W1, W2 = GRID.meshgrid()
    eta = (W2 + 1j * W1) / math.sqrt(2.0)
    want = np.zeros(eta.shape)
    for b in (alpha, -alpha):
        for c in (alpha, -alpha):
            want += 0.25 * np.abs(np.exp(
                -np.abs(eta) ** 2 / 2 + b * eta - np.conj(eta) * c
                - b * b / 2 - c * c / 2 + b * c)) ** 2
    np.testing.assert_allclose(k.values, want, atol=1e-9)


def test_kernel_origin_is_purity():
    rho = make_coherent_mixture(0.9)
    k = kernel_for_state(rho, GRID)
    G = GRID.size
    assert k.values[G // 2, G // 2] == pytest.approx(purity(rho), abs=1e-10)


def test_moment_table_degree_guard():
    with pytest.raises(DomainError):
        build_clone_kernel(char_fn(make_coherent_mixture(2.0)), GRID)


# ---------------------------------------------------------------------------
# clone operator on the grid

def test_apply_clone_operator_symmetric():
    g = Grid(size=96, extent=9.0)
    kernel = fock_clone_kernel(1, g)
    rng = np.random.default_rng(3)
    X, P = g.meshgrid()
    env = np.exp(-0.4 * (X ** 2 + P ** 2))
    a = GridWavefunction(env * (rng.standard_normal(env.shape)
                                + 1j * rng.standard_normal(env.shape)), g)
    b = GridWavefunction(env * (rng.standard_normal(env.shape)
                                + 1j * rng.standard_normal(env.shape)), g)
    lhs = inner(a, apply_clone_operator(b, kernel))
    rhs = inner(apply_clone_operator(a, kernel), b)
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_apply_clone_operator_swap_covariance():
    # f2 is f1 conjugated by the mode swap; a swap-symmetric state gives
    # identical contributions, so <psi|F|psi> = <psi|f1|psi>
    g = Grid(size=128, extent=9.0)
    kernel = fock_clone_kernel(0, g)
    X, P = g.meshgrid()
    psi = GridWavefunction(
        np.exp(-0.5 * (X ** 2 + P ** 2)).astype(complex), g).normalized()
    full = inner(psi, apply_clone_operator(psi, kernel))
    f1_only = inner(psi, GridWavefunction(kernel.values * psi.values, g))
    assert complex(full) == pytest.approx(complex(f1_only), abs=1e-10)


# ---------------------------------------------------------------------------
# Fock-basis matrix elements

def test_fock_matrix_element_parity_and_symmetry():
    assert fock_ncb_matrix_element(1, 0, 0, 1, 0) == 0.0
    assert fock_ncb_matrix_element(1, 2, 1, 2, 0) == 0.0
    for (i, j, l, m) in [(0, 0, 2, 2), (2, 0, 0, 2), (1, 3, 3, 1)]:
        a = fock_ncb_matrix_element(1, i, j, l, m)
        b = fock_ncb_matrix_element(1, l, m, i, j)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-15)


def test_fock_matrix_element_vs_quadrature():
    # For the vacuum input f1 = e^{-z}, z = (w1^2 + w2^2)/2 is separable:
    # <i,j| f1 |l,m> = phase * g(i,l) * g(j,m) with
    # g(i,l) = ∫ h_i(w) h_l(w) e^{-w^2/2} dw over normalized oscillator
    # eigenfunctions, and phase = (-1)^{(j-m)/2} from the momentum-basis
    # representation of the second mode.
    import scipy.special
    t, w = np.polynomial.hermite.hermgauss(120)

    def g(i, l):
        hi = scipy.special.eval_hermite(i, t) / math.sqrt(
            2.0 ** i * math.factorial(i) * math.sqrt(math.pi))
        hl = scipy.special.eval_hermite(l, t) / math.sqrt(
            2.0 ** l * math.factorial(l) * math.sqrt(math.pi))
        return float(np.sum(w * hi * hl * np.exp(-0.5 * t * t)))

    for (i, j, l, m) in [(0, 0, 0, 0), (2, 0, 0, 0), (1, 1, 1, 1),
                         (2, 2, 0, 0), (3, 1, 1, 3), (4, 2, 2, 0)]:
        phase = (-1.0) ** (((j - m) // 2) % 2)
        want = phase * g(i, l) * g(j, m)
        got = fock_ncb_matrix_element(0, i, j, l, m)
        assert got == pytest.approx(want, rel=1e-9, abs=1e-12)


# ---------------------------------------------------------------------------
# bound solvers

def test_ncb_solvers_cross_validate_vacuum():
    fock = ncb_ultimate(make_fock(0), solver="fock",
                        params=FockSolverParams(n_trunc=60))
    grid = ncb_ultimate(make_fock(0), solver="grid",
                        params=GridSolverParams(size=256, extent=8.0))
    assert fock.bound == pytest.approx(grid.bound, abs=1e-4)
    assert fock.residual < 1e-8 and grid.residual < 1e-8


def test_ncb_fock_solver_requires_fock_input():
    with pytest.raises(DomainError):
        ncb_ultimate(make_superposition(1, 1, 0), solver="fock")
    with pytest.raises(DomainError):
        ncb_ultimate(make_fock(0), solver="nope")


def test_truncation_sweep_monotone():
    sweep = truncation_sweep(make_fock(1), [10, 20, 40])
    bounds = [b for _, b in sweep]
    assert bounds == sorted(bounds)
    with pytest.raises(DomainError):
        truncation_sweep(make_fock(1), [40, 10])


# ---------------------------------------------------------------------------
# Gaussian cloner and classical bound

def test_gaussian_cloner_noise_floor():
    chi = char_fn(make_fock(0))
    with pytest.raises(DomainError):
        gaussian_cloner_fidelity(chi, 0.5, copies=2)
    f1 = gaussian_cloner_fidelity(chi, 1.0, copies=2)
    f2 = gaussian_cloner_fidelity(chi, 1.5, copies=2)
    assert f1 > f2  # fidelity decreases with added noise


def test_gaussian_ncb_three_copies():
    # 1 -> 3 symmetric cloner boundary a = 4/3: vacuum fidelity 3/5
    assert gaussian_ncb(make_fock(0), copies=3) == pytest.approx(
        1.0 / (1.0 + 2.0 / 3.0), abs=1e-12)


def test_classical_bound_optimal_state_consistency():
    res = classical_bound(make_fock(1))
    assert res.bound == pytest.approx(0.25, abs=1e-12)
    # the reported optimizer achieves the bound: <rho_T, A rho_T> = bound
    assert purity(res.optimal_rho_T) == pytest.approx(1.0, abs=1e-10)


@given(st.integers(0, 200))
@settings(max_examples=10)
def test_classical_below_gaussian_below_one(seed):
    psi = make_superposition(*np.random.default_rng(seed).standard_normal(3))
    cb = classical_bound(psi).bound
    gb = gaussian_ncb(psi)
    assert cb < gb < 1.0
