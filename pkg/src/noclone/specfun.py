"""Special functions and analytic integrals used throughout the library.

Everything here is a pure function. The slightly unusual pieces are the
triple-Hermite integral (a closed form with a terminating hypergeometric
factor) and the Hermite-series expansion of [L_n((x^2+p^2)/2)]^2, which
feeds the Fock-basis fidelity operator.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError

SQRT_PI = math.sqrt(math.pi)


def laguerre(n: int, x: float) -> float:
    """Laguerre polynomial L_n(x) by the stable three-term recurrence."""
    if n < 0:
        raise DomainError(f"laguerre order must be >= 0, got {n}")
    if n == 0:
        return 1.0
    lm, lk = 1.0, 1.0 - x
    for k in range(1, n):
        lm, lk = lk, ((2 * k + 1 - x) * lk - k * lm) / (k + 1)
    return lk


def laguerre_arr(n: int, x: np.ndarray) -> np.ndarray:
    """Vectorized L_n over an array argument."""
    if n < 0:
        raise DomainError(f"laguerre order must be >= 0, got {n}")
    x = np.asarray(x, dtype=float)
    if n == 0:
        return np.ones_like(x)
    lm, lk = np.ones_like(x), 1.0 - x
    for k in range(1, n):
        lm, lk = lk, ((2 * k + 1 - x) * lk - k * lm) / (k + 1)
    return lk


def generalized_laguerre(n: int, k: int, x: float) -> float:
    """Associated Laguerre polynomial L_n^{(k)}(x)."""
    if n < 0 or k < 0:
        raise DomainError(f"generalized_laguerre needs n,k >= 0, got ({n},{k})")
    if n == 0:
        return 1.0
    lm, lc = 1.0, 1.0 + k - x
    for j in range(1, n):
        lm, lc = lc, ((2 * j + 1 + k - x) * lc - (j + k) * lm) / (j + 1)
    return lc


def hermite(n: int, x: float) -> float:
    """Physicists' Hermite polynomial H_n(x).

    Overflows to inf for very large n and |x|; use :func:`hermite_scaled`
    past n ~ 150.
    """
    if n < 0:
        raise DomainError(f"hermite order must be >= 0, got {n}")
    if n == 0:
        return 1.0
    hm, hk = 1.0, 2.0 * x
    for k in range(1, n):
        hm, hk = hk, 2.0 * x * hk - 2.0 * k * hm
    return hk


def hermite_scaled(n: int, x: float) -> tuple[float, int]:
    """H_n(x) as (mantissa, exponent) with value = mantissa * 2**exponent.

    The recurrence is renormalized every step, so arbitrary orders are
    reachable without overflow.
    """
    if n < 0:
        raise DomainError(f"hermite order must be >= 0, got {n}")
    if n == 0:
        return 1.0, 0
    # carry both H_{k-1} and H_k at a shared exponent
    hm, hk, e = 1.0, 2.0 * x, 0
    for k in range(1, n):
        hm, hk = hk, 2.0 * x * hk - 2.0 * k * hm
        m = max(abs(hm), abs(hk))
        if m > 0.0 and (m > 1e100 or m < 1e-100):
            _, sh = math.frexp(m)
            hm, hk = math.ldexp(hm, -sh), math.ldexp(hk, -sh)
            e += sh
    return hk, e


def gauss_2f1_terminating(a: float, n: int, c: float, z: float) -> float:
    """Terminating Gaussian hypergeometric sum 2F1(a, -n; c; z).

    Evaluated as the exact finite series of n+1 terms. Raises if a
    denominator Pochhammer factor hits zero before the series terminates.
    """
    if n < 0:
        raise DomainError(f"series length must be >= 0, got {n}")
    s, t = 1.0, 1.0
    for k in range(n):
        if c + k == 0.0:
            raise DomainError(
                f"2F1 denominator (c)_k vanishes at k={k + 1} (c={c})")
        t *= (a + k) * (-n + k) / ((c + k) * (k + 1)) * z
        s += t
    return s


def hermite_triple_integral(a: int, i: int, l: int,
                            alpha: float, beta: float) -> float:
    """Closed form of ∫ e^{-x^2} H_a(αx) H_i(βx) H_l(βx) dx for α²+β²=1.

    Vanishes by parity when s = a+i+l is odd. For even s the value is

        (-1)^{s/2 + a} · 2^{s/2} · (s-1)!! · √π · α^{i+l} · β^a
            · 2F1(-i, -l; (1-s)/2; 1/(2α²)).

    The double factorial is evaluated through log-gamma so large s does
    not overflow prematurely.
    """
    if a < 0 or i < 0 or l < 0:
        raise DomainError("hermite_triple_integral indices must be >= 0")
    if abs(alpha * alpha + beta * beta - 1.0) > 1e-12:
        raise PreconditionError(
            f"alpha^2 + beta^2 must equal 1, got {alpha * alpha + beta * beta!r}")
    s = a + i + l
    if s % 2 == 1:
        return 0.0
    hyp = gauss_2f1_terminating(-float(i), l, (1.0 - s) / 2.0,
                                1.0 / (2.0 * alpha * alpha)) if l > 0 else 1.0
    # log|(s-1)!!| = lgamma(s+1) - (s/2) ln 2 - lgamma(s/2 + 1) for even s
    if s == 0:
        dfac_log = 0.0
    else:
        dfac_log = (math.lgamma(s + 1) - (s / 2) * math.log(2.0)
                    - math.lgamma(s / 2 + 1))
    sign = -1.0 if (s // 2 + a) % 2 else 1.0
    mag = math.exp((s / 2) * math.log(2.0) + dfac_log
                   + (i + l) * math.log(abs(alpha))
                   + (a * math.log(abs(beta)) if a else 0.0))
    asign = math.copysign(1.0, alpha) ** (i + l)
    bsign = math.copysign(1.0, beta) ** a
    return sign * asign * bsign * mag * SQRT_PI * hyp


@dataclass(frozen=True)
class HermiteCoeffTable:
    """Coefficients C^{(n)}_{a,b} of the Hermite-series expansion

        [L_n(u^2 + v^2)]^2 = Σ_{a,b} C_{a,b} H_a(u) H_b(v),

    equivalently [L_n((x^2+p^2)/2)]^2 = Σ C_{a,b} H_a(x/√2) H_b(p/√2)."""

    n: int
    coeffs: np.ndarray  # (a_max+1, a_max+1), real

    @property
    def a_max(self) -> int:
        return self.coeffs.shape[0] - 1


def hermite_expansion_coeffs(n: int, a_max: int) -> HermiteCoeffTable:
    """Project [L_n(u²+v²)]² onto products H_a(u) H_b(v).

    The projection uses 2D Gauss–Hermite quadrature with enough nodes to
    be exact (the integrand is polynomial × Gaussian). With a_max >= 4n
    the expansion is exact since [L_n]² has total degree 4n.
    """
    if n < 0:
        raise DomainError(f"order must be >= 0, got {n}")
    if a_max < 0:
        raise DomainError(f"a_max must be >= 0, got {a_max}")
    if a_max < 4 * n:
        warnings.warn(
            f"a_max={a_max} < 4n={4 * n}: Hermite expansion of [L_{n}]^2 "
            "is truncated and will not reproduce the kernel exactly",
            stacklevel=2)
    order = 2 * a_max + 4 * n + 8
    t, w = np.polynomial.hermite.hermgauss(order)
    lag2 = laguerre_arr(n, t[:, None] ** 2 + t[None, :] ** 2) ** 2
    # rows of H_a(t) for a = 0..a_max
    H = np.zeros((a_max + 1, order))
    H[0] = 1.0
    if a_max >= 1:
        H[1] = 2.0 * t
    for k in range(1, a_max):
        H[k + 1] = 2.0 * t * H[k] - 2.0 * k * H[k - 1]
    M = np.einsum("i,j,ai,bj,ij->ab", w, w, H, H, lag2)
    a = np.arange(a_max + 1)
    fact = np.array([math.factorial(k) for k in a], dtype=float)
    norm = np.pi * 2.0 ** (a[:, None] + a[None, :] + 1) \
        * fact[:, None] * fact[None, :]
    C = 2.0 * M / norm
    # exact parity: odd-index coefficients vanish
    C[1::2, :] = 0.0
    C[:, 1::2] = 0.0
    return HermiteCoeffTable(n=n, coeffs=C)


def laguerre_sq_exp_moment(n: int, s: float) -> float:
    """Closed form of the radial moment ∫_0^∞ [L_n(z)]² e^{-s z} dz.

    Equals Γ(n+½) / (√π n! s) · 2F1(½, -n; ½-n; (1-2/s)²); this single
    function underlies the teleportation fidelity of Fock states over a
    two-mode squeezed vacuum (s = 1 + e^{-2r}), the symmetric Gaussian
    cloner fidelities, and the squeezed-superposition ansatz fidelity.
    """
    if n < 0:
        raise DomainError(f"order must be >= 0, got {n}")
    if s <= 0:
        raise DomainError(f"moment diverges for s <= 0, got {s}")
    hyp = gauss_2f1_terminating(0.5, n, 0.5 - n, (1.0 - 2.0 / s) ** 2)
    return math.exp(math.lgamma(n + 0.5) - math.lgamma(n + 1)) / (SQRT_PI * s) * hyp
