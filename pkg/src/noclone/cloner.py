"""Covariant-cloner fidelity operators and the three no-cloning bounds
(classical, Gaussian-restricted, ultimate).

The ultimate bound is the largest eigenvalue of (f1 + f2)/2 where fi is a
function of one quadrature of each mode. Two independent solver routes
are provided: a matrix-free FFT route acting on wavefunctions psi(x1,p2),
and a Fock-basis route built from triple-Hermite integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .eigensolve import lanczos_largest
from .errors import DomainError, GridExtentError, PreconditionError
from .grids import Grid, GridWavefunction
from .specfun import hermite_expansion_coeffs, laguerre_arr
from .states import (CharFnPolyGauss, FockDensity, FockVector, State,
                     abs_squared_coeffs, as_density, char_fn)

# substitution u = x*sqrt(3/2) maps the Fock matrix-element integrals onto
# triple-Hermite integrals with these argument scalings
ALPHA = 1.0 / math.sqrt(3.0)
BETA = math.sqrt(2.0 / 3.0)

ENVELOPE_TOL = 1e-12


@dataclass(frozen=True)
class CloneKernel:
    """Sampled fidelity kernel f(w1, w2) >= 0 with f(0,0) = Tr rho^2."""

    grid: Grid
    values: np.ndarray        # f on the primary grid, f[i,j] = f(x_i, x_j)
    dual_values: np.ndarray   # f on the dual grid,    [i,j] = f(u_i, u_j)

    def __post_init__(self):
        for v in (self.values, self.dual_values):
            if v.shape != (self.grid.size, self.grid.size):
                raise PreconditionError("kernel samples do not match the grid")


def _check_envelope(grid: Grid) -> None:
    if math.exp(-grid.extent ** 2 / 2.0) > ENVELOPE_TOL:
        raise GridExtentError(
            f"grid extent L={grid.extent} too small: Gaussian envelope at the "
            f"boundary is {math.exp(-grid.extent ** 2 / 2.0):.2e} > {ENVELOPE_TOL:g}")


def _finalize_kernel(grid: Grid, sample: Callable[[np.ndarray, np.ndarray], np.ndarray],
                     expected_origin: float) -> CloneKernel:
    vals = []
    for pts in (grid.points, grid.dual_points):
        W1, W2 = np.meshgrid(pts, pts, indexing="ij")
        f = sample(W1, W2)
        if np.max(np.abs(np.imag(f))) > 1e-9:
            raise PreconditionError("clone kernel has a non-negligible imaginary part")
        f = np.real(f)
        if np.min(f) < -1e-9 or np.max(f) > 1.0 + 1e-9:
            raise PreconditionError(
                f"clone kernel out of range [0, 1]: min {np.min(f):.2e}, "
                f"max {np.max(f):.2e}")
        vals.append(np.clip(f, 0.0, None))
    G = grid.size
    origin = vals[0][G // 2, G // 2]
    if abs(origin - expected_origin) > 1e-9:
        raise PreconditionError(
            f"kernel origin value {origin!r} != purity {expected_origin!r}")
    return CloneKernel(grid=grid, values=vals[0], dual_values=vals[1])


def fock_clone_kernel(n: int, grid: Grid) -> CloneKernel:
    """Exact radial kernel [L_n(z)]^2 e^{-z}, z = (w1^2 + w2^2)/2."""
    _check_envelope(grid)

    def sample(W1, W2):
        z = 0.5 * (W1 ** 2 + W2 ** 2)
        return laguerre_arr(n, z) ** 2 * np.exp(-z)

    return _finalize_kernel(grid, sample, 1.0)


def _kernel_poly_table(q: np.ndarray) -> np.ndarray:
    """Polynomial table t of the kernel: f(eta) = e^{-|eta|^2} sum_{c,d}
    t[c,d] eta^c conj(eta)^d, from the |chi|^2 coefficients q."""
    M = q.shape[0] - 1
    if M > 48:
        # the alternating factorial sum loses all significant digits well
        # before degree 60; kernel_for_state avoids this table for large
        # mixed states by summing |<psi_j|D|psi_k>|^2 over eigenpairs
        raise DomainError(
            f"analytic kernel assembly limited to |chi|^2 degree 48, got {M}")
    logf = [math.lgamma(k + 1) for k in range(M + 1)]
    t = np.zeros((M + 1, M + 1), dtype=complex)
    for c in range(M + 1):
        for d in range(M + 1):
            acc = 0.0 + 0.0j
            for k in range(min(M - c, M - d) + 1):
                v = q[c + k, d + k]
                if v == 0:
                    continue
                acc += v * math.exp(logf[c + k] + logf[d + k]
                                    - logf[k] - logf[c] - logf[d])
            t[c, d] = acc * ((-1) ** d)
    return t


def _eval_poly(t: np.ndarray, eta: np.ndarray) -> np.ndarray:
    ec = eta.conj()
    acc = np.zeros_like(eta)
    for c in range(t.shape[0] - 1, -1, -1):
        inner = np.zeros_like(eta)
        for d in range(t.shape[1] - 1, -1, -1):
            inner = inner * ec + t[c, d]
        acc = acc * eta + inner
    return acc


def build_clone_kernel(chi: CharFnPolyGauss, grid: Grid) -> CloneKernel:
    """Kernel from the characteristic function via the closed-form
    Gaussian-moment transform of |chi|^2 (exact, works for mixed states)."""
    _check_envelope(grid)
    q = abs_squared_coeffs(chi)
    purity = float(np.real(np.sum(
        q.diagonal() * np.array([math.factorial(k) for k in range(q.shape[0])]))))
    t = _kernel_poly_table(q)

    def sample(W1, W2):
        eta = (W2 + 1j * W1) / math.sqrt(2.0)
        return _eval_poly(t, eta) * np.exp(-np.abs(eta) ** 2)

    return _finalize_kernel(grid, sample, purity)


def kernel_for_state(state: State, grid: Grid) -> CloneKernel:
    """Dispatch to the cheapest exact kernel construction for `state`."""
    if isinstance(state, FockVector):
        amp = state.amplitudes
        hot = np.flatnonzero(np.abs(amp) > 1e-14)
        if hot.size == 1 and abs(abs(amp[hot[0]]) - 1.0) < 1e-12:
            return fock_clone_kernel(int(hot[0]), grid)
        # pure state: f(eta) = |chi(eta)|^2
        _check_envelope(grid)
        chi = char_fn(state)

        def sample(W1, W2):
            eta = (W2 + 1j * W1) / math.sqrt(2.0)
            return np.abs(chi.evaluate(eta)) ** 2

        return _finalize_kernel(grid, sample, 1.0)

    # mixed state: eigendecompose and sum |<psi_j|D|psi_k>|^2 over pairs.
    # This shares the pure path's numerical stability at any degree,
    # unlike the closed-form moment transform of |chi|^2 used in
    # build_clone_kernel, whose coefficient table grows factorially.
    _check_envelope(grid)
    from .states import char_fn_operator, trim_state
    rho = trim_state(state)
    w, v = np.linalg.eigh(rho.matrix)
    keep = w > 1e-12
    lams, vecs = w[keep], v[:, keep]
    terms = [(lams[j] * lams[k],
              char_fn_operator(np.outer(vecs[:, k], vecs[:, j].conj())))
             for j in range(lams.size) for k in range(lams.size)]
    pur = float(np.sum(np.real(
        np.abs(vecs.conj().T @ vecs) ** 2 * np.outer(lams, lams))))

    def sample(W1, W2):
        eta = (W2 + 1j * W1) / math.sqrt(2.0)
        out = np.zeros(eta.shape)
        for lam, chi_jk in terms:
            out += lam * np.abs(chi_jk.evaluate(eta)) ** 2
        return out

    return _finalize_kernel(grid, sample, pur)


def apply_clone_operator(psi: GridWavefunction, kernel: CloneKernel) -> GridWavefunction:
    """(f1 + f2)/2 applied to psi(x1, p2), matrix-free.

    f1 multiplies pointwise. f2 is applied by moving to the (p1, x2)
    representation (forward transform on axis 0, inverse on axis 1),
    multiplying by the kernel sampled on the dual grid, and transforming
    back.
    """
    if psi.grid != kernel.grid:
        raise PreconditionError("wavefunction and kernel grids differ")
    g = psi.grid
    v = psi.values
    t1 = kernel.values * v
    mid = g.icft(g.cft(v, 0), 1) * kernel.dual_values.T
    t2 = g.cft(g.icft(mid, 0), 1)
    return GridWavefunction(0.5 * (t1 + t2), g)


# ---------------------------------------------------------------------------
# Fock-basis route

def _jhat_table(a_max: int, N: int) -> np.ndarray:
    """Jh[a,i,l] = triple-Hermite integral with arguments (ALPHA, BETA),
    prescaled by 1/sqrt(2^i i! 2^l l!) to keep the recurrence in range."""
    Jh = np.zeros((a_max + 1, N + 1, N + 1))
    for a in range(0, a_max + 1, 2):
        Jh[a, 0, 0] = (math.sqrt(math.pi) * math.factorial(a)
                       / math.factorial(a // 2) * (-BETA * BETA) ** (a // 2))
    # i = 0 row, recurrence in l
    for a in range(a_max + 1):
        for l in range(N):
            prev = Jh[a, 0, l - 1] if l >= 1 else 0.0
            am = Jh[a - 1, 0, l] if a >= 1 else 0.0
            Jh[a, 0, l + 1] = (2 * a * ALPHA * BETA * am
                               - ALPHA * ALPHA * math.sqrt(2 * l) * prev) \
                / math.sqrt(2 * (l + 1))
    # recurrence in i, vectorized over l
    lvec = np.arange(N + 1)
    root2l = np.sqrt(2.0 * lvec)
    for a in range(a_max + 1):
        for i in range(N):
            am = Jh[a - 1, i, :] if a >= 1 else 0.0
            prev = Jh[a, i - 1, :] if i >= 1 else 0.0
            lm = np.zeros(N + 1)
            lm[1:] = Jh[a, i, :-1]
            Jh[a, i + 1, :] = (2 * a * ALPHA * BETA * am
                               - ALPHA * ALPHA * math.sqrt(2 * i) * prev
                               + BETA * BETA * root2l * lm) / math.sqrt(2 * (i + 1))
    return Jh


def _parity_phase(N: int) -> np.ndarray:
    """(-1)^{(j-m)/2} on even index differences, 0 on odd."""
    idx = np.arange(N + 1)
    diff = idx[:, None] - idx[None, :]
    return np.where(diff % 2 == 0, (-1.0) ** ((diff // 2) % 2), 0.0)


def _fock_apply_factory(n: int, N: int) -> Callable[[np.ndarray], np.ndarray]:
    a_max = 4 * n
    C = hermite_expansion_coeffs(n, a_max).coeffs
    Jh = _jhat_table(a_max, N)
    Xt = Jh * _parity_phase(N)[None, :, :]
    pref = 2.0 / (3.0 * math.pi)
    terms = [(C[a, b], Jh[a], Xt[b])
             for a in range(a_max + 1) for b in range(a_max + 1)
             if abs(C[a, b]) > 1e-15]

    def f1(V: np.ndarray) -> np.ndarray:
        out = np.zeros_like(V)
        for c, Xa, Xb in terms:
            out += c * (Xa @ V @ Xb.T)
        return pref * out

    def apply(v: np.ndarray) -> np.ndarray:
        V = v.reshape(N + 1, N + 1)
        return (0.5 * (f1(V) + f1(V.T).T)).ravel()

    return apply


def fock_ncb_matrix_element(n: int, i: int, j: int, l: int, m: int) -> float:
    """<i,j| f1 |l,m> for the Fock-input fidelity operator; vanishes
    unless both i-l and j-m are even."""
    for idx in (i, j, l, m):
        if idx < 0:
            raise DomainError("Fock indices must be >= 0")
    if (i - l) % 2 or (j - m) % 2:
        return 0.0
    a_max = 4 * n
    C = hermite_expansion_coeffs(n, a_max).coeffs
    Jh = _jhat_table(a_max, max(i, j, l, m))
    phase = (-1.0) ** (((j - m) // 2) % 2)
    acc = 0.0
    for a in range(a_max + 1):
        for b in range(a_max + 1):
            if abs(C[a, b]) > 1e-15:
                acc += C[a, b] * Jh[a, i, l] * Jh[b, j, m]
    return 2.0 / (3.0 * math.pi) * phase * acc


# ---------------------------------------------------------------------------
# bound solvers

@dataclass(frozen=True)
class GridSolverParams:
    size: int = 256
    extent: float = 8.0
    tol: float = 1e-8
    krylov: int = 60
    max_restarts: int = 40


@dataclass(frozen=True)
class FockSolverParams:
    n_trunc: int = 120
    tol: float = 1e-8
    krylov: int = 60
    max_restarts: int = 40


@dataclass(frozen=True)
class BoundResult:
    bound: float
    eigvec: object          # GridWavefunction or Fock-basis ndarray
    params: dict
    iterations: int
    residual: float


def _fock_index_of(state: State) -> int | None:
    """If `state` is a Fock basis state (pure or as a density), return n."""
    if isinstance(state, FockVector):
        amp = state.amplitudes
        hot = np.flatnonzero(np.abs(amp) > 1e-14)
        if hot.size == 1 and abs(abs(amp[hot[0]]) - 1.0) < 1e-12:
            return int(hot[0])
        return None
    m = as_density(state).matrix
    off = m - np.diag(np.diag(m))
    if np.max(np.abs(off)) > 1e-14:
        return None
    d = np.real(np.diag(m))
    hot = np.flatnonzero(d > 1e-14)
    if hot.size == 1 and abs(d[hot[0]] - 1.0) < 1e-12:
        return int(hot[0])
    return None


def ncb_ultimate(state: State, solver: str = "fock",
                 params: GridSolverParams | FockSolverParams | None = None
                 ) -> BoundResult:
    """Ultimate no-cloning bound: largest eigenvalue of (f1 + f2)/2."""
    if solver == "grid":
        p = params if params is not None else GridSolverParams()
        if not isinstance(p, GridSolverParams):
            raise DomainError("grid solver needs GridSolverParams")
        grid = Grid(size=p.size, extent=p.extent)
        kernel = kernel_for_state(state, grid)
        X1, P2 = grid.meshgrid()
        seed = np.exp(-0.5 * (X1 ** 2 + P2 ** 2)).astype(complex).ravel()

        def apply(v):
            w = GridWavefunction(v.reshape(grid.size, grid.size), grid)
            return apply_clone_operator(w, kernel).values.ravel()

        res = lanczos_largest(apply, seed, tol=p.tol, krylov=p.krylov,
                              max_restarts=p.max_restarts)
        vec = GridWavefunction(res.vector.reshape(grid.size, grid.size), grid)
        vec = vec.normalized()
        return BoundResult(bound=res.value, eigvec=vec,
                           params={"solver": "grid", "size": p.size,
                                   "extent": p.extent, "tol": p.tol},
                           iterations=res.iterations, residual=res.residual)

    if solver == "fock":
        p = params if params is not None else FockSolverParams()
        if not isinstance(p, FockSolverParams):
            raise DomainError("fock solver needs FockSolverParams")
        n = _fock_index_of(state)
        if n is None:
            raise DomainError(
                "the Fock-basis solver supports Fock-state inputs |n>; "
                "use solver='grid' for general states")
        N = p.n_trunc
        apply = _fock_apply_factory(n, N)
        ii = np.arange(N + 1)
        seed = (np.exp(-0.25 * (ii[:, None] + ii[None, :]))
                * ((ii[:, None] % 2 == 0) & (ii[None, :] % 2 == 0))).astype(
                    complex).ravel()
        res = lanczos_largest(apply, seed, tol=p.tol, krylov=p.krylov,
                              max_restarts=p.max_restarts)
        return BoundResult(bound=res.value, eigvec=res.vector.reshape(N + 1, N + 1),
                           params={"solver": "fock", "n_trunc": N, "tol": p.tol},
                           iterations=res.iterations, residual=res.residual)

    raise DomainError(f"unknown solver {solver!r}; expected 'grid' or 'fock'")


def truncation_sweep(state: State, truncations: Sequence[int]
                     ) -> list[tuple[int, float]]:
    """NCB of the Fock-basis solver at each truncation (variational, so
    the sequence is monotone non-decreasing)."""
    if list(truncations) != sorted(truncations):
        raise DomainError("truncations must be increasing")
    out = []
    for N in truncations:
        res = ncb_ultimate(state, solver="fock",
                           params=FockSolverParams(n_trunc=int(N)))
        out.append((int(N), res.bound))
    return out


# ---------------------------------------------------------------------------
# Gaussian cloner and classical bound

def gaussian_cloner_fidelity(chi: CharFnPolyGauss, a: float,
                             copies: int = 2) -> float:
    """Single-copy fidelity of the symmetric Gaussian 1->M cloner with
    added-noise parameter a: (1/pi) ∫ |chi|^2 e^{-a|xi|^2/2} d^2xi."""
    a_min = 2.0 * (copies - 1) / copies
    if a < a_min - 1e-12:
        raise DomainError(
            f"noise parameter a={a} violates cloner positivity (needs >= {a_min})")
    q = abs_squared_coeffs(chi)
    s = 1.0 + a / 2.0
    acc = 0.0
    fact = 1.0
    for A in range(q.shape[0]):
        if A > 0:
            fact *= A
        acc += float(np.real(q[A, A])) * fact / s ** (A + 1)
    return acc


def gaussian_ncb(state: State, copies: int = 2) -> float:
    """Optimal symmetric Gaussian cloner fidelity. The fidelity is
    strictly decreasing in the added noise a, so the optimum sits at the
    positivity boundary a = 2(M-1)/M."""
    chi = char_fn(state)
    return gaussian_cloner_fidelity(chi, 2.0 * (copies - 1) / copies, copies)


@dataclass(frozen=True)
class ClassicalBound:
    bound: float
    optimal_rho_T: FockDensity


def classical_bound(state: State) -> ClassicalBound:
    """Measure-and-prepare (classical) fidelity bound: largest eigenvalue
    of the operator A with characteristic function
    (1/2) chi_in(-xi/sqrt2) chi_in(xi/sqrt2)."""
    p = char_fn(state).coeffs
    N = p.shape[0] - 1
    M = 2 * N  # degree of the product polynomial
    r = np.zeros((M + 1, M + 1), dtype=complex)
    for a1 in range(N + 1):
        for b1 in range(N + 1):
            v1 = p[a1, b1]
            if v1 == 0:
                continue
            sgn = (-1.0) ** (a1 + b1)
            for a2 in range(N + 1):
                for b2 in range(N + 1):
                    v2 = p[a2, b2]
                    if v2 == 0:
                        continue
                    A, B = a1 + a2, b1 + b2
                    r[A, B] += 0.5 * sgn * v1 * v2 * 2.0 ** (-(A + B) / 2.0)
    # operator reconstruction: A_mn = (1/pi) ∫ chi_A(xi) <m|D(-xi)|n> d^2xi
    dim = M + 1
    logf = [math.lgamma(k + 1) for k in range(dim)]
    fact = [math.factorial(k) for k in range(2 * M + 1)]
    Aop = np.zeros((dim, dim), dtype=complex)
    for m in range(dim):
        for n in range(dim):
            acc = 0.0 + 0.0j
            if m >= n:
                # <m|D(-xi)|n> ~ (-1)^{m-n} sum_j (-1)^j C(m, n-j)/j! xi^{m-n+j} cxi^j
                pref = math.exp(0.5 * (logf[n] - logf[m])) * (-1.0) ** (m - n)
                for j in range(n + 1):
                    a = m - n + j
                    b = j
                    c = pref * ((-1) ** j) * math.comb(m, n - j) / math.factorial(j)
                    # moment couples (A+a) == (B+b)
                    for A in range(M + 1):
                        B = A + a - b
                        if 0 <= B <= M and r[A, B] != 0:
                            acc += r[A, B] * c * fact[A + a]
            else:
                # <m|D(-xi)|n> ~ sum_j (-1)^j C(n, m-j)/j! xi^j cxi^{n-m+j}
                pref = math.exp(0.5 * (logf[m] - logf[n]))
                for j in range(m + 1):
                    a = j
                    b = n - m + j
                    c = pref * ((-1) ** j) * math.comb(n, m - j) / math.factorial(j)
                    for A in range(M + 1):
                        B = A + a - b
                        if 0 <= B <= M and r[A, B] != 0:
                            acc += r[A, B] * c * fact[A + a]
            Aop[m, n] = acc
    Aop = 0.5 * (Aop + Aop.conj().T)
    w, v = np.linalg.eigh(Aop)
    top = v[:, -1]
    rho = np.outer(top, top.conj())
    return ClassicalBound(bound=float(w[-1]),
                          optimal_rho_T=FockDensity(rho / np.real(np.trace(rho))))


def bound_result_to_json(res: BoundResult, input_descriptor: str) -> dict:
    return {"input": input_descriptor,
            "solver": res.params.get("solver"),
            "bound": res.bound,
            "residual": res.residual,
            "params": {k: v for k, v in res.params.items() if k != "solver"}}
