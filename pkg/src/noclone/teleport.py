"""Continuous-variable teleportation fidelity of Fock and general inputs:
TMSV closed forms, the photon-number block structure of the fidelity
operator, critical squeezing thresholds, and energy-constrained optimal
photon-number-entangled resource states (PNES).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import (DomainError, PreconditionError, TruncationError,
                     UnreachableBoundError)
from .specfun import laguerre_sq_exp_moment
from .states import State, abs_squared_coeffs, char_fn, purity

# ---------------------------------------------------------------------------
# fidelity over a two-mode squeezed vacuum

def _fock_index(state: State) -> int | None:
    from .cloner import _fock_index_of
    return _fock_index_of(state)


def tmsv_fidelity(state: State, r: float) -> float:
    """Teleportation fidelity of `state` over a TMSV resource with
    squeezing r. Fock inputs hit the closed form; general inputs use the
    exact Gaussian-moment sum over |chi_in|^2 with s = 1 + e^{-2r}."""
    if r < 0:
        raise DomainError(f"squeezing must be >= 0, got {r}")
    s = 1.0 + math.exp(-2.0 * r)
    n = _fock_index(state)
    if n is not None:
        return laguerre_sq_exp_moment(n, s)
    q = abs_squared_coeffs(char_fn(state))
    acc, fact = 0.0, 1.0
    for A in range(q.shape[0]):
        if A > 0:
            fact *= A
        acc += float(np.real(q[A, A])) * fact / s ** (A + 1)
    return acc


def critical_squeezing(state: State, bound: float) -> float:
    """Smallest TMSV squeezing whose teleportation fidelity reaches
    `bound`. The fidelity increases to Tr[rho^2] as r -> inf, so bounds at
    or above the purity are unreachable."""
    sup = purity(state)
    f0 = tmsv_fidelity(state, 0.0)
    if bound <= f0:
        return 0.0
    if bound >= sup - 1e-12:
        raise UnreachableBoundError(
            f"fidelity supremum over TMSV resources is the input purity "
            f"{sup!r}; bound {bound!r} is unreachable", supremum=sup)
    # certify monotonicity on the bracket before bisecting
    r_hi = 1.0
    while tmsv_fidelity(state, r_hi) < bound:
        r_hi *= 2.0
        if r_hi > 64.0:
            raise UnreachableBoundError(
                f"bound {bound!r} not reached by r = 64", supremum=sup)
    scan = np.array([tmsv_fidelity(state, r)
                     for r in np.arange(0.0, r_hi + 1e-3, 1e-3)])
    if np.any(np.diff(scan) < -1e-14):
        raise PreconditionError(
            "TMSV fidelity is not monotone on the bracket; cannot bisect")
    return float(brentq(lambda r: tmsv_fidelity(state, r) - bound,
                        0.0, r_hi, xtol=1e-10))


# ---------------------------------------------------------------------------
# photon-number block structure of the fidelity operator

@dataclass(frozen=True)
class TeleportOperatorBlock:
    """Block of the teleportation fidelity operator F_n on the span of
    |i, i+d> (photon-number difference d >= 0)."""

    n: int
    d: int
    matrix: np.ndarray

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise PreconditionError("block matrix must be square")
        if np.max(np.abs(m - m.T)) > 1e-12:
            raise PreconditionError("block matrix must be symmetric")


def _epr_tridiag(d: int, size: int) -> np.ndarray:
    """EPR operator restricted to the d block: tridiagonal with diagonal
    2i + d + 1 and off-diagonal -sqrt(i (i + d))."""
    i = np.arange(size)
    T = np.diag(2.0 * i + d + 1.0)
    off = -np.sqrt(i[1:] * (i[1:] + d))
    T += np.diag(off, 1) + np.diag(off, -1)
    return T


def _f0_block(d: int, size: int) -> np.ndarray:
    """(F_0)_{i,l} = (i+l+d)! / (2^{i+l+d+1} sqrt(i!(i+d)!l!(l+d)!))."""
    i = np.arange(size)
    lg = np.vectorize(math.lgamma)
    half = 0.5 * (lg(i + 1) + lg(i + d + 1))
    ipl = i[:, None] + i[None, :] + d
    logf = lg(ipl + 1) - (ipl + 1) * math.log(2.0) - half[:, None] - half[None, :]
    return np.exp(logf)


def _laguerre_mat(n: int, T: np.ndarray) -> np.ndarray:
    I = np.eye(T.shape[0])
    if n == 0:
        return I
    lm, lk = I, I - T
    for k in range(1, n):
        lm, lk = lk, ((2 * k + 1) * lk - T @ lk - k * lm) / (k + 1)
    return lk


def teleport_operator_block(n: int, d: int, i_max: int) -> TeleportOperatorBlock:
    """Fidelity-operator block F_n^{(d)} for Fock input |n>, truncated to
    i <= i_max. Built as L_n(T) F_0 L_n(T) with the tridiagonal EPR block
    T; the product is formed at truncation i_max + 2n and cropped so the
    returned entries are exact (L_n(T) is banded with bandwidth n)."""
    if n not in (0, 1, 2):
        raise NotImplementedError(
            f"teleport operator blocks implemented for n in {{0,1,2}}, got {n}")
    if i_max < 1:
        raise DomainError(f"i_max must be >= 1, got {i_max}")
    d = abs(d)  # the -d block is identical by swapping the two modes
    size = i_max + 1 + 2 * n
    T = _epr_tridiag(d, size)
    F0 = _f0_block(d, size)
    Ln = _laguerre_mat(n, T)
    Fn = Ln @ F0 @ Ln
    Fn = Fn[: i_max + 1, : i_max + 1]
    return TeleportOperatorBlock(n=n, d=d, matrix=0.5 * (Fn + Fn.T))


# ---------------------------------------------------------------------------
# resource states

@dataclass(frozen=True)
class PNESResource:
    """Photon-number entangled resource sum_i c_i |i, i> (d = 0 block)."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if abs(np.sum(c * c) - 1.0) > 1e-10:
            raise PreconditionError("PNES coefficients must be normalized")
        object.__setattr__(self, "coeffs", c)

    @property
    def n_av(self) -> float:
        c = self.coeffs
        return float(np.sum(np.arange(c.size) * c * c))


@dataclass(frozen=True)
class TMSVResource:
    r: float

    def coeffs_to(self, i_max: int) -> np.ndarray:
        t = math.tanh(self.r)
        i = np.arange(i_max + 1)
        return t ** i / math.cosh(self.r)

    @property
    def n_av(self) -> float:
        return math.sinh(self.r) ** 2


def resource_fidelity(resource: PNESResource | TMSVResource, n: int,
                      i_max: int | None = None) -> float:
    """Teleportation fidelity <F_n> over a d = 0 resource, via the block
    quadratic form c^T F_n^{(0)} c."""
    if isinstance(resource, TMSVResource):
        m = i_max if i_max is not None else 150
        c = resource.coeffs_to(m)
        if c[-1] ** 2 > 1e-14:
            raise TruncationError(
                "TMSV coefficients not converged at this truncation",
                required=m + 1)
    else:
        c = resource.coeffs
        m = c.size - 1
        if i_max is not None:
            if i_max < m:
                raise PreconditionError(
                    f"operator truncation {i_max} smaller than resource "
                    f"support {m}")
            c = np.pad(c, (0, i_max - m))
            m = i_max
    F = teleport_operator_block(n, 0, m).matrix
    return float(c @ F @ c)


# ---------------------------------------------------------------------------
# energy-constrained optimization over PNES

@dataclass(frozen=True)
class PnesOptimum:
    state: PNESResource
    fidelity: float
    n_av: float
    lam: float


def _block_optimize(n: int, d: int, lam: float, i_max: int,
                    tail_check: bool = True) -> PnesOptimum:
    F = teleport_operator_block(n, d, i_max).matrix
    i = np.arange(i_max + 1)
    G = F - lam * np.diag(i + d / 2.0)
    w, v = np.linalg.eigh(G)
    c = v[:, -1]
    if c[np.argmax(np.abs(c))] < 0:
        c = -c
    if tail_check and np.max(np.abs(c[-max(1, (i_max + 1) // 10):])) > 1e-8:
        raise TruncationError(
            f"optimal eigenvector tail exceeds 1e-8 at i_max={i_max}; "
            "increase the truncation", required=2 * i_max)
    fid = float(c @ F @ c)
    nav = float(np.sum((i + d / 2.0) * c * c))
    return PnesOptimum(state=PNESResource(c) if d == 0 else None,
                       fidelity=fid, n_av=nav, lam=lam)


def pnes_optimize(n: int, lam: float, i_max: int = 150) -> PnesOptimum:
    """Best PNES at energy penalty lam: top eigenpair of
    F_n - lam * n_av restricted to the d = 0 block."""
    if lam <= 0:
        raise DomainError(f"Lagrange multiplier must be > 0, got {lam}")
    return _block_optimize(n, 0, lam, i_max)


def default_lambda_grid() -> np.ndarray:
    return np.logspace(-3.0, 2.0, 200)


def pnes_frontier(n: int, lam_grid: np.ndarray | None = None,
                  i_max: int = 300, d: int = 0
                  ) -> tuple[np.ndarray, np.ndarray]:
    """Parametric optimal (n_av, fidelity) frontier over the lam grid,
    sorted by increasing n_av. Grid points whose optimum is not resolved
    at the truncation are dropped."""
    lams = default_lambda_grid() if lam_grid is None else np.asarray(lam_grid)
    nav, fid = [], []
    for lam in lams:
        try:
            res = _block_optimize(n, d, float(lam), i_max)
        except TruncationError:
            continue
        nav.append(res.n_av)
        fid.append(res.fidelity)
    order = np.argsort(nav)
    return np.asarray(nav)[order], np.asarray(fid)[order]


def required_photon_number(n: int, bound: float, i_max: int = 300) -> float:
    """Mean photon number of the cheapest PNES whose teleportation
    fidelity reaches `bound`, from monotone interpolation of the frontier."""
    nav, fid = pnes_frontier(n, i_max=i_max)
    if bound > fid[-1]:
        raise UnreachableBoundError(
            f"bound {bound!r} above the frontier maximum {fid[-1]!r}",
            supremum=float(fid[-1]))
    return float(np.interp(bound, fid, nav))


def block_comparison(n: int, d_list: Sequence[int], n_av_grid: np.ndarray,
                     i_max: int = 300) -> dict[int, np.ndarray]:
    """Optimal fidelity vs mean photon number for each photon-number
    difference d. A d block needs n_av >= |d|/2; grid points below that
    are NaN."""
    if any(abs(d) > 2 for d in d_list):
        raise DomainError("block comparison supports |d| <= 2")
    n_av_grid = np.asarray(n_av_grid, dtype=float)
    out = {}
    for d in d_list:
        nav, fid = pnes_frontier(n, i_max=i_max, d=abs(d))
        vals = np.interp(n_av_grid, nav, fid, left=np.nan, right=np.nan)
        vals[n_av_grid < abs(d) / 2.0] = np.nan
        out[d] = vals
    return out
