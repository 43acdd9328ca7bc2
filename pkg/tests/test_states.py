import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from noclone.errors import (DimensionMismatchError, DomainError,
                            PreconditionError, TruncationError)
from noclone.states import (FockDensity, FockVector, abs_squared_coeffs,
                            apply_displacement, apply_squeeze, as_density,
                            char_fn, char_fn_operator, make_cat,
                            make_coherent, make_coherent_mixture, make_fock,
                            make_superposition, normalized_overlap,
                            overlap_trace, purity, reference_gaussian,
                            sample_random_density, sample_random_pure,
                            state_from_json, state_to_json, trim_state,
                            wigner)

amplitudes3 = st.lists(
    st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
    min_size=3, max_size=3).filter(lambda v: sum(abs(c) for c in v) > 1e-3)


# ---------------------------------------------------------------------------
# constructors

def test_make_fock_one_hot():
    psi = make_fock(3)
    assert psi.dim == 4
    np.testing.assert_allclose(psi.amplitudes, [0, 0, 0, 1])
    with pytest.raises(DomainError):
        make_fock(-1)
    with pytest.raises(TruncationError):
        make_fock(5, dim=3)


def test_make_coherent_moments():
    alpha = 0.8 + 0.3j
    psi = make_coherent(alpha)
    k = np.arange(psi.dim)
    n_av = float(np.sum(k * np.abs(psi.amplitudes) ** 2))
    assert n_av == pytest.approx(abs(alpha) ** 2, abs=1e-10)


@given(amplitudes3)
def test_superposition_normalized(cs):
    psi = make_superposition(*cs)
    assert np.sum(np.abs(psi.amplitudes) ** 2) == pytest.approx(1.0, abs=1e-10)


def test_cat_parity():
    even = make_cat(1.2, 1)
    odd = make_cat(1.2, -1)
    assert np.max(np.abs(even.amplitudes[1::2])) < 1e-14
    assert np.max(np.abs(odd.amplitudes[0::2])) < 1e-14
    with pytest.raises(DomainError):
        make_cat(1.0, 2)
    with pytest.raises(DomainError):
        make_cat(0.0, -1)


def test_cat_gamma_zero_is_mixture():
    rho = make_cat(0.9, 0)
    assert isinstance(rho, FockDensity)
    assert purity(rho) == pytest.approx(
        0.5 * (1 + math.exp(-4 * 0.9 ** 2)), abs=1e-12)


def test_density_validation():
    with pytest.raises(PreconditionError):
        FockDensity(np.array([[0.5, 0.1], [0.2, 0.5]]))  # not Hermitian
    with pytest.raises(PreconditionError):
        FockDensity(np.diag([0.7, 0.7]))  # trace != 1
    with pytest.raises(PreconditionError):
        FockDensity(np.diag([1.5, -0.5]))  # negative eigenvalue


# ---------------------------------------------------------------------------
# characteristic function

def _chi_direct(state, xi, dim=40):
    """Oracle: chi(xi) = Tr[rho D(xi)] with a dense displacement matrix."""
    rho = as_density(state).matrix
    d = max(dim, rho.shape[0] + 20)
    big = np.zeros((d, d), dtype=complex)
    big[: rho.shape[0], : rho.shape[0]] = rho
    a = np.diag(np.sqrt(np.arange(1, d)), 1)
    D = expm(xi * a.T - np.conj(xi) * a)
    return complex(np.trace(big @ D))


@pytest.mark.parametrize("state", [
    make_fock(0), make_fock(2),
    make_superposition(1, 1j, 0.5),
    make_coherent(0.7 - 0.2j),
    make_cat(1.1, 1),
    make_coherent_mixture(0.8),
    sample_random_density(4, 11),
])
def test_char_fn_matches_displacement_trace(state):
    chi = char_fn(state)
    # char_fn trims Fock tails below 1e-16 population (~1e-8 amplitude)
    for xi in (0.0, 0.5, -0.3 + 0.8j, 1.2j, 1.5 - 1.5j):
        want = _chi_direct(state, xi)
        got = complex(chi.evaluate(np.array(xi, dtype=complex)))
        assert got == pytest.approx(want, abs=1e-8)


def test_char_fn_origin_is_trace():
    rho = sample_random_density(3, 5)
    chi = char_fn(rho)
    assert complex(chi.evaluate(np.array(0j))) == pytest.approx(1.0, abs=1e-12)


def test_char_fn_operator_linear():
    rho = sample_random_density(3, 1).matrix
    tau = sample_random_density(3, 2).matrix
    xi = np.array(0.4 - 0.9j)
    lhs = char_fn_operator(0.3 * rho + 0.7 * tau).evaluate(xi)
    rhs = (0.3 * char_fn_operator(rho).evaluate(xi)
           + 0.7 * char_fn_operator(tau).evaluate(xi))
    assert complex(lhs) == pytest.approx(complex(rhs), abs=1e-13)


def test_abs_squared_coeffs_consistent():
    state = make_superposition(1, -0.5, 2j)
    chi = char_fn(state)
    q = abs_squared_coeffs(chi)
    for xi in (0.3 + 0.1j, -1.0 + 0.7j):
        want = abs(complex(chi.evaluate(np.array(xi)))) ** 2
        acc = 0j
        for A in range(q.shape[0]):
            for B in range(q.shape[1]):
                acc += q[A, B] * xi ** A * np.conj(xi) ** B
        got = acc * math.exp(-abs(xi) ** 2)
        assert complex(got) == pytest.approx(want, abs=1e-12)


# ---------------------------------------------------------------------------
# Wigner function

@pytest.mark.parametrize("n", [0, 1, 2, 4])
def test_wigner_fock_closed_form(n):
    from noclone.specfun import laguerre_arr
    x = np.linspace(-3, 3, 41)
    p = np.linspace(-2, 2, 11)
    X, P = np.meshgrid(x, p, indexing="ij")
    got = wigner(make_fock(n), X, P)
    r2 = X ** 2 + P ** 2
    want = ((-1.0) ** n / math.pi) * laguerre_arr(n, 2 * r2) * np.exp(-r2)
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_wigner_normalization_random_state():
    rho = sample_random_density(4, 3)
    L, G = 7.0, 201
    x = np.linspace(-L, L, G)
    X, P = np.meshgrid(x, x, indexing="ij")
    W = wigner(rho, X, P)
    dx = x[1] - x[0]
    assert float(np.sum(W)) * dx * dx == pytest.approx(1.0, abs=1e-6)


def test_wigner_hermiticity_real():
    rho = sample_random_density(5, 9)
    W = wigner(rho, np.array([0.3, -1.2]), np.array([0.5, 0.1]))
    assert np.isrealobj(W)


# ---------------------------------------------------------------------------
# overlaps and reference Gaussian

def test_overlap_and_purity():
    rho = FockDensity(np.diag([0.75, 0.25]))
    tau = FockDensity(np.diag([0.9, 0.1]))
    assert overlap_trace(rho, tau) == pytest.approx(0.7, abs=1e-15)
    assert purity(rho) == pytest.approx(0.625, abs=1e-15)
    with pytest.raises(DimensionMismatchError):
        overlap_trace(rho, FockDensity(np.diag([1.0, 0.0, 0.0])))


@given(st.integers(0, 10_000))
def test_normalized_overlap_cauchy_schwarz(seed):
    rho = sample_random_density(3, [seed, 0])
    tau = sample_random_density(3, [seed, 1])
    m = normalized_overlap(rho, tau)
    assert m < 1.0 + 1e-12
    assert normalized_overlap(rho, rho) == pytest.approx(1.0, abs=1e-12)


def test_reference_gaussian_vacuum_and_coherent():
    ref = reference_gaussian(make_fock(0))
    np.testing.assert_allclose(ref.mean, (0.0, 0.0), atol=1e-12)
    np.testing.assert_allclose(ref.cov, 0.5 * np.eye(2), atol=1e-12)
    alpha = 0.6 + 0.4j
    ref = reference_gaussian(make_coherent(alpha))
    np.testing.assert_allclose(
        ref.mean, (math.sqrt(2) * alpha.real, math.sqrt(2) * alpha.imag),
        atol=1e-9)
    np.testing.assert_allclose(ref.cov, 0.5 * np.eye(2), atol=1e-9)


def test_reference_gaussian_squeezed_vacuum():
    r = 0.4
    psi = apply_squeeze(make_fock(0, dim=30), r)
    ref = reference_gaussian(psi)
    assert ref.cov[0, 0] == pytest.approx(0.5 * math.exp(-2 * r), abs=1e-8)
    assert ref.cov[1, 1] == pytest.approx(0.5 * math.exp(2 * r), abs=1e-8)
    assert ref.cov[0, 1] == pytest.approx(0.0, abs=1e-10)


# ---------------------------------------------------------------------------
# Gaussian unitaries / trimming / serialization

def test_apply_displacement_matches_coherent():
    alpha = 0.5 + 0.2j
    psi = apply_displacement(make_fock(0, dim=25), alpha)
    want = make_coherent(alpha, dim=25)
    fid = abs(np.vdot(want.amplitudes, psi.amplitudes)) ** 2
    assert fid == pytest.approx(1.0, abs=1e-10)


def test_apply_squeeze_tail_guard():
    with pytest.raises(TruncationError):
        apply_squeeze(make_fock(0, dim=6), 1.5)


def test_trim_state_drops_padding():
    psi = make_fock(1, dim=30)
    rho = trim_state(psi)
    assert rho.dim == 2
    np.testing.assert_allclose(rho.matrix, np.diag([0.0, 1.0]), atol=1e-15)


@given(amplitudes3)
def test_state_json_roundtrip_pure(cs):
    psi = make_superposition(*cs)
    back = state_from_json(state_to_json(psi))
    assert isinstance(back, FockVector)
    np.testing.assert_allclose(back.amplitudes, psi.amplitudes, atol=1e-15)


@given(st.integers(0, 10_000))
def test_state_json_roundtrip_density(seed):
    rho = sample_random_density(4, seed)
    back = state_from_json(state_to_json(rho))
    np.testing.assert_allclose(back.matrix, rho.matrix, atol=1e-15)


def test_state_from_json_rejects_malformed():
    with pytest.raises(DomainError):
        state_from_json({"dim": 2, "type": "pure", "re": [1.0], "im": [0.0]})
    with pytest.raises(DomainError):
        state_from_json({"dim": 2, "type": "spin", "re": [1, 0], "im": [0, 0]})
    with pytest.raises(DomainError):
        state_from_json({"type": "pure"})


def test_sampling_deterministic():
    a = sample_random_density(3, 42).matrix
    b = sample_random_density(3, 42).matrix
    np.testing.assert_array_equal(a, b)
    u = sample_random_pure(3, [7, 1]).amplitudes
    v = sample_random_pure(3, [7, 2]).amplitudes
    assert np.max(np.abs(u - v)) > 1e-3
