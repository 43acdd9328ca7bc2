"""Single-mode CV states in a truncated Fock basis and their phase-space
representations (characteristic functions, Wigner functions, Gaussian
reference moments, overlaps)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.linalg import expm

from .errors import (DimensionMismatchError, DomainError, PreconditionError,
                     TruncationError)
from .specfun import laguerre_arr

NORM_TOL = 1e-10
HERM_TOL = 1e-12
EIG_TOL = 1e-10


@dataclass(frozen=True)
class FockVector:
    """Pure state as complex amplitudes over |0>..|N>."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).ravel()
        object.__setattr__(self, "amplitudes", amp)
        nrm = np.sum(np.abs(amp) ** 2)
        if abs(nrm - 1.0) > NORM_TOL:
            raise PreconditionError(f"FockVector norm^2 = {nrm!r}, expected 1")

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> "FockDensity":
        a = self.amplitudes
        return FockDensity(np.outer(a, a.conj()))


@dataclass(frozen=True)
class FockDensity:
    """Mixed state as a Hermitian, trace-one, PSD matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise PreconditionError(f"density matrix must be square, got {m.shape}")
        object.__setattr__(self, "matrix", m)
        if np.max(np.abs(m - m.conj().T)) > HERM_TOL:
            raise PreconditionError("density matrix is not Hermitian")
        tr = np.real(np.trace(m))
        if abs(tr - 1.0) > NORM_TOL:
            raise PreconditionError(f"density trace = {tr!r}, expected 1")
        if np.min(np.linalg.eigvalsh(m)) < -EIG_TOL:
            raise PreconditionError("density matrix has negative eigenvalues")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


State = Union[FockVector, FockDensity]


def as_density(state: State) -> FockDensity:
    if isinstance(state, FockVector):
        return state.density()
    if isinstance(state, FockDensity):
        return state
    raise DomainError(f"not a state object: {type(state)!r}")


@dataclass(frozen=True)
class CharFnPolyGauss:
    """Characteristic function chi(xi) = [sum_{a,b} p_{a,b} xi^a conj(xi)^b]
    * exp(-|xi|^2/2), stored through the coefficient table p."""

    coeffs: np.ndarray  # complex (N+1, N+1)

    def __post_init__(self):
        object.__setattr__(self, "coeffs",
                           np.asarray(self.coeffs, dtype=complex))

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def evaluate(self, xi: np.ndarray) -> np.ndarray:
        """Evaluate chi on an array of complex arguments."""
        xi = np.asarray(xi, dtype=complex)
        xc = xi.conj()
        p = self.coeffs
        # Horner in xi with inner Horner in conj(xi)
        acc = np.zeros_like(xi)
        for a in range(p.shape[0] - 1, -1, -1):
            inner = np.zeros_like(xi)
            for b in range(p.shape[1] - 1, -1, -1):
                inner = inner * xc + p[a, b]
            acc = acc * xi + inner
        return acc * np.exp(-0.5 * np.abs(xi) ** 2)


@dataclass(frozen=True)
class GaussianRef:
    """First and second moments of the reference Gaussian (vacuum cov = I/2)."""

    mean: tuple[float, float]
    cov: np.ndarray


# ---------------------------------------------------------------------------
# constructors

def make_fock(n: int, dim: int | None = None) -> FockVector:
    if n < 0:
        raise DomainError(f"Fock index must be >= 0, got {n}")
    d = dim if dim is not None else n + 1
    if d < n + 1:
        raise TruncationError(f"dim {d} cannot hold |{n}>", required=n + 1)
    amp = np.zeros(d, dtype=complex)
    amp[n] = 1.0
    return FockVector(amp)


def _coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    k = np.arange(dim)
    logf = np.array([math.lgamma(j + 1) for j in k])
    if alpha == 0:
        amp = np.zeros(dim, dtype=complex)
        amp[0] = 1.0
        return amp
    amp = np.exp(-0.5 * abs(alpha) ** 2 + k * np.log(complex(alpha)) - 0.5 * logf)
    return amp


def _auto_dim(alpha: complex, tail: float = 1e-12) -> int:
    d = max(8, int(4 * abs(alpha) ** 2 + 10 * abs(alpha) + 8))
    while True:
        amp = _coherent_amplitudes(alpha, d)
        if 1.0 - np.sum(np.abs(amp) ** 2) < tail:
            return d
        d *= 2


def make_coherent(alpha: complex, dim: int | None = None) -> FockVector:
    if dim is None:
        dim = _auto_dim(alpha)
    amp = _coherent_amplitudes(alpha, dim)
    tail = 1.0 - float(np.sum(np.abs(amp) ** 2))
    if tail > 1e-12:
        raise TruncationError(
            f"coherent state tail mass {tail:.2e} above 1e-12 at dim {dim}",
            required=_auto_dim(alpha))
    return FockVector(amp / np.sqrt(np.sum(np.abs(amp) ** 2)))


def make_superposition(c0: complex, c1: complex, c2: complex) -> FockVector:
    v = np.array([c0, c1, c2], dtype=complex)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise DomainError("superposition coefficients are all zero")
    return FockVector(v / nrm)


def make_cat(alpha: float, gamma: int, dim: int | None = None) -> State:
    """Cat-type state proportional to |alpha> + gamma |-alpha>.

    gamma = +1 / -1 give the even / odd cat; gamma = 0 returns the
    incoherent mixture (|a><a| + |-a><-a|)/2 instead.
    """
    if gamma not in (-1, 0, 1):
        raise DomainError(f"gamma must be -1, 0 or +1, got {gamma!r}")
    if gamma == 0:
        return make_coherent_mixture(alpha, dim)
    if dim is None:
        dim = _auto_dim(alpha)
    a = _coherent_amplitudes(alpha, dim)
    b = _coherent_amplitudes(-alpha, dim)
    v = a + gamma * b
    nrm = np.linalg.norm(v)
    if nrm < 1e-14:
        raise DomainError("cat state vanishes (odd cat with alpha = 0)")
    return FockVector(v / nrm)


def make_coherent_mixture(alpha: float, dim: int | None = None) -> FockDensity:
    if dim is None:
        dim = _auto_dim(alpha)
    a = _coherent_amplitudes(alpha, dim)
    b = _coherent_amplitudes(-alpha, dim)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    return FockDensity(0.5 * (np.outer(a, a.conj()) + np.outer(b, b.conj())))


# ---------------------------------------------------------------------------
# characteristic function

def trim_state(state: State, tail: float = 1e-16) -> FockDensity:
    """Drop top Fock levels carrying less than `tail` total population."""
    m = as_density(state).matrix
    pop = np.real(np.diag(m))
    keep = m.shape[0]
    while keep > 1 and np.sum(pop[keep - 1:]) < tail:
        keep -= 1
    return FockDensity(m[:keep, :keep]) if keep < m.shape[0] else as_density(state)


def char_fn(state: State) -> CharFnPolyGauss:
    """Polynomial-times-Gaussian form of chi(xi) = Tr[rho D(xi)].

    Assembled exactly from the Fock-basis displacement matrix elements
    <n|D(xi)|m> (polynomial coefficients of the associated Laguerre
    factors, one Gaussian envelope overall). Negligible Fock tails are
    trimmed first to keep the polynomial degree, and with it the
    factorial growth in downstream moment sums, as small as possible.
    """
    return char_fn_operator(trim_state(state).matrix)


def char_fn_operator(op: np.ndarray) -> CharFnPolyGauss:
    """chi_O(xi) = Tr[O D(xi)] for an arbitrary Fock-basis operator O
    (the construction is linear in the matrix entries)."""
    rho = np.asarray(op, dtype=complex)
    N = rho.shape[0] - 1
    p = np.zeros((N + 1, N + 1), dtype=complex)
    logf = [math.lgamma(k + 1) for k in range(N + 1)]
    for m in range(N + 1):
        for n in range(N + 1):
            r = rho[m, n]
            if r == 0:
                continue
            # chi += rho_{mn} <n|D(xi)|m>
            if n >= m:
                # <n|D|m> = sqrt(m!/n!) xi^{n-m} L_m^{(n-m)}(|xi|^2) e^{-|xi|^2/2}
                pref = math.exp(0.5 * (logf[m] - logf[n]))
                k = n - m
                for j in range(m + 1):
                    c = ((-1) ** j) * math.comb(n, m - j) / math.factorial(j)
                    p[k + j, j] += r * pref * c
            else:
                # <n|D|m> = sqrt(n!/m!) (-conj(xi))^{m-n} L_n^{(m-n)} e^{-..}
                pref = math.exp(0.5 * (logf[n] - logf[m]))
                k = m - n
                sgn = (-1) ** k
                for j in range(n + 1):
                    c = ((-1) ** j) * math.comb(m, n - j) / math.factorial(j)
                    p[j, k + j] += r * pref * sgn * c
    return CharFnPolyGauss(p)


def abs_squared_coeffs(chi: CharFnPolyGauss) -> np.ndarray:
    """Coefficients q_{A,B} of |chi(xi)|^2 = [sum q_{A,B} xi^A conj(xi)^B]
    * exp(-|xi|^2), from chi's p table."""
    p = chi.coeffs
    N = p.shape[0] - 1
    q = np.zeros((2 * N + 1, 2 * N + 1), dtype=complex)
    pc_t = p.conj().T  # pc_t[b2, a2] = conj(p[a2, b2])
    for a1 in range(N + 1):
        for b1 in range(N + 1):
            v = p[a1, b1]
            if v == 0:
                continue
            q[a1:a1 + N + 1, b1:b1 + N + 1] += v * pc_t
    return q


# ---------------------------------------------------------------------------
# Wigner function

def wigner(state: State, x, p):
    """Wigner function W(x, p), normalized so that ∫ W dx dp = 1.

    Uses the Fock-basis kernel with generalized Laguerre polynomials;
    vacuum gives W(0,0) = 1/pi.
    """
    rho = as_density(state).matrix
    N = rho.shape[0] - 1
    x = np.asarray(x, dtype=float)
    p_ = np.asarray(p, dtype=float)
    z = np.sqrt(2.0) * (x + 1j * p_)
    t = 2.0 * (x * x + p_ * p_)
    env = np.exp(-(x * x + p_ * p_)) / math.pi
    out = np.zeros(np.broadcast(x, p_).shape, dtype=float)
    logf = [math.lgamma(k + 1) for k in range(N + 1)]
    # one associated-Laguerre recurrence per diagonal k = m - n; the
    # kernel for |m><n| with m = n + k is
    #   (-1)^n sqrt(n!/m!) z^k L_n^{(k)}(t) e^{-t/2} / pi
    zk = np.ones_like(z)
    for k in range(N + 1):
        cs = [rho[n + k, n] * ((-1) ** n)
              * math.exp(0.5 * (logf[n] - logf[n + k]))
              for n in range(N - k + 1)]
        if any(c != 0 for c in cs):
            lm = np.ones_like(t)
            acc = cs[0] * lm if cs[0] != 0 else np.zeros_like(z)
            if N - k >= 1:
                lc = 1.0 + k - t
                for n in range(1, N - k + 1):
                    if cs[n] != 0:
                        acc = acc + cs[n] * lc
                    lm, lc = lc, ((2 * n + 1 + k - t) * lc
                                  - (n + k) * lm) / (n + 1)
            if k == 0:
                out = out + np.real(acc)
            else:
                out = out + 2.0 * np.real(zk * acc)
        if k < N:
            zk = zk * z
    return env * out


def _genlag_arr(n: int, k: int, t: np.ndarray) -> np.ndarray:
    if n == 0:
        return np.ones_like(t)
    lm, lc = np.ones_like(t), 1.0 + k - t
    for j in range(1, n):
        lm, lc = lc, ((2 * j + 1 + k - t) * lc - (j + k) * lm) / (j + 1)
    return lc


# ---------------------------------------------------------------------------
# overlaps and moments

def overlap_trace(rho: State, tau: State) -> float:
    a = as_density(rho).matrix
    b = as_density(tau).matrix
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"overlap_trace dims differ: {a.shape[0]} vs {b.shape[0]}")
    return float(np.real(np.trace(a @ b)))


def purity(rho: State) -> float:
    m = as_density(rho).matrix
    return float(np.real(np.trace(m @ m)))


def normalized_overlap(rho: State, tau: State) -> float:
    pr, pt = purity(rho), purity(tau)
    if pr <= 0 or pt <= 0:
        raise DomainError("normalized_overlap needs nonzero purities")
    return overlap_trace(rho, tau) / math.sqrt(pr * pt)


def _ladder(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), 1)


def reference_gaussian(state: State) -> GaussianRef:
    """Mean and covariance of the Gaussian with the same first/second
    moments (x = (a + a^dag)/sqrt2, vacuum covariance = I/2)."""
    rho = as_density(state).matrix
    # pad two levels so the quadratic moments see the full ladder action
    d = rho.shape[0] + 2
    padded = np.zeros((d, d), dtype=complex)
    padded[: rho.shape[0], : rho.shape[0]] = rho
    rho = padded
    a = _ladder(d)
    xop = (a + a.T) / math.sqrt(2.0)
    pop = (a - a.T) / (1j * math.sqrt(2.0))
    mx = float(np.real(np.trace(rho @ xop)))
    mp = float(np.real(np.trace(rho @ pop)))
    vxx = float(np.real(np.trace(rho @ xop @ xop))) - mx * mx
    vpp = float(np.real(np.trace(rho @ pop @ pop))) - mp * mp
    sym = 0.5 * (xop @ pop + pop @ xop)
    vxp = float(np.real(np.trace(rho @ sym))) - mx * mp
    cov = np.array([[vxx, vxp], [vxp, vpp]])
    return GaussianRef(mean=(mx, mp), cov=cov)


# ---------------------------------------------------------------------------
# Gaussian unitaries in the truncated basis

TAIL_FRACTION = 0.1
TAIL_TOL = 1e-8


def _check_tail(amp: np.ndarray, what: str) -> None:
    d = amp.size
    # at least two levels, so a parity-protected empty top level cannot
    # mask a clipped tail
    top = max(2, int(math.ceil(TAIL_FRACTION * d)))
    tail = float(np.sum(np.abs(amp[d - top:]) ** 2))
    if tail > TAIL_TOL:
        raise TruncationError(
            f"{what}: tail mass {tail:.2e} in top {top} basis states "
            f"exceeds {TAIL_TOL:g}; enlarge the truncation")


def apply_displacement(psi: FockVector, alpha: complex) -> FockVector:
    a = _ladder(psi.dim)
    gen = alpha * a.T - np.conj(alpha) * a
    out = expm(gen) @ psi.amplitudes
    _check_tail(out, "apply_displacement")
    return FockVector(out / np.linalg.norm(out))


def apply_squeeze(psi: FockVector, r: float) -> FockVector:
    a = _ladder(psi.dim)
    gen = 0.5 * r * (a @ a - a.T @ a.T)
    out = expm(gen) @ psi.amplitudes
    _check_tail(out, "apply_squeeze")
    return FockVector(out / np.linalg.norm(out))


# ---------------------------------------------------------------------------
# sampling and serialization

def sample_random_density(dim: int, seed) -> FockDensity:
    """Ginibre-induced random density: G G^dag / tr, G complex normal."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    m = m / np.real(np.trace(m))
    m = 0.5 * (m + m.conj().T)
    return FockDensity(m)


def sample_random_pure(dim: int, seed) -> FockVector:
    """Haar-uniform pure state on the dim-dimensional sphere."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return FockVector(v / np.linalg.norm(v))


def state_to_json(state: State) -> dict:
    if isinstance(state, FockVector):
        a = state.amplitudes
        return {"dim": state.dim, "type": "pure",
                "re": a.real.tolist(), "im": a.imag.tolist()}
    m = as_density(state).matrix.ravel()  # row-major
    return {"dim": state.dim, "type": "density",
            "re": m.real.tolist(), "im": m.imag.tolist()}


def state_from_json(doc: dict) -> State:
    try:
        dim = int(doc["dim"])
        kind = doc["type"]
        data = np.asarray(doc["re"], dtype=float) \
            + 1j * np.asarray(doc["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise DomainError(f"malformed state document: {e}") from e
    if kind == "pure":
        if data.size != dim:
            raise DomainError(f"pure state needs {dim} amplitudes, got {data.size}")
        return FockVector(data)
    if kind == "density":
        if data.size != dim * dim:
            raise DomainError(
                f"density needs {dim * dim} entries, got {data.size}")
        return FockDensity(data.reshape(dim, dim))
    raise DomainError(f"unknown state type {kind!r}")
