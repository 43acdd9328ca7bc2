"""Matrix-free Lanczos for the largest eigenvalue of a symmetric operator.

Used by both the grid-based and the Fock-basis no-cloning-bound solvers.
Full reorthogonalization inside each Krylov block keeps the basis clean;
restarting from the current Ritz vector recovers from orthogonality loss
and lets small Krylov dimensions reach tight residuals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError


@dataclass(frozen=True)
class EigenResult:
    value: float
    vector: np.ndarray
    iterations: int
    residual: float


def lanczos_largest(apply_op: Callable[[np.ndarray], np.ndarray],
                    v0: np.ndarray,
                    tol: float = 1e-8,
                    krylov: int = 60,
                    max_restarts: int = 40) -> EigenResult:
    """Largest eigenpair of a symmetric operator given by `apply_op`.

    `v0` is the (nonzero) seed vector; `iterations` counts operator
    applications across all restarts.
    """
    v = np.asarray(v0, dtype=complex).ravel()
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ConvergenceError("Lanczos seed vector is zero")
    v = v / nrm
    n_apply = 0
    theta, ritz = None, v

    for _ in range(max_restarts):
        V = np.empty((krylov, v.size), dtype=complex)
        alpha = np.zeros(krylov)
        beta = np.zeros(krylov)
        V[0] = ritz
        w = None
        m = krylov
        for j in range(krylov):
            w = apply_op(V[j])
            n_apply += 1
            alpha[j] = float(np.real(np.vdot(V[j], w)))
            w = w - alpha[j] * V[j]
            if j > 0:
                w = w - beta[j - 1] * V[j - 1]
            # full reorthogonalization against the block built so far
            w = w - V[:j + 1].T @ (V[:j + 1].conj() @ w)
            b = np.linalg.norm(w)
            if j + 1 < krylov:
                if b < 1e-14:
                    m = j + 1
                    break
                beta[j] = b
                V[j + 1] = w / b
        T = np.diag(alpha[:m]) + np.diag(beta[:m - 1], 1) + np.diag(beta[:m - 1], -1)
        evals, evecs = np.linalg.eigh(T)
        theta = float(evals[-1])
        ritz = evecs[:, -1] @ V[:m]
        ritz = ritz / np.linalg.norm(ritz)
        resid = float(np.linalg.norm(apply_op(ritz) - theta * ritz))
        n_apply += 1
        if resid < tol:
            return EigenResult(value=theta, vector=ritz,
                               iterations=n_apply, residual=resid)
    raise ConvergenceError(
        f"Lanczos did not reach residual {tol:g} after {max_restarts} restarts",
        residual=resid)
