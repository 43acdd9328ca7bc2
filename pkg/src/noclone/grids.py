"""Uniform quadrature grids for two-mode wavefunctions psi(x1, p2) and the
unitary continuous-Fourier transforms between the (x1, p2) and (p1, x2)
representations, implemented with FFTs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GridExtentError, PreconditionError

SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class Grid:
    """Centered uniform grid with G points on [-L, L) per axis.

    The conjugate (dual) grid induced by the FFT has spacing pi/L and
    extent pi/dx, so enlarging L refines the dual sampling.
    """

    size: int
    extent: float

    def __post_init__(self):
        if self.size < 8 or self.size % 2 != 0:
            raise GridExtentError(f"grid size must be even and >= 8, got {self.size}")
        if self.extent <= 0:
            raise GridExtentError(f"grid extent must be positive, got {self.extent}")

    @property
    def dx(self) -> float:
        return 2.0 * self.extent / self.size

    @property
    def points(self) -> np.ndarray:
        return (np.arange(self.size) - self.size // 2) * self.dx

    @property
    def dual_spacing(self) -> float:
        return 2.0 * math.pi / (self.size * self.dx)

    @property
    def dual_points(self) -> np.ndarray:
        return (np.arange(self.size) - self.size // 2) * self.dual_spacing

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        x = self.points
        return np.meshgrid(x, x, indexing="ij")

    # --- unitary continuous Fourier transforms along one axis ---------

    def cft(self, psi: np.ndarray, axis: int) -> np.ndarray:
        """phi(k) = (2pi)^{-1/2} ∫ psi(x) e^{-ikx} dx along `axis`."""
        return np.fft.fftshift(
            np.fft.fft(np.fft.ifftshift(psi, axes=axis), axis=axis),
            axes=axis) * (self.dx / SQRT_2PI)

    def icft(self, phi: np.ndarray, axis: int) -> np.ndarray:
        """Inverse of :meth:`cft`."""
        return np.fft.fftshift(
            np.fft.ifft(np.fft.ifftshift(phi, axes=axis), axis=axis),
            axes=axis) * (self.size * self.dual_spacing / SQRT_2PI)


# boundary weight above this fraction of the peak means the state is
# clipped by the box and the result cannot be trusted
BOUNDARY_TOL = 1e-3


@dataclass(frozen=True)
class GridWavefunction:
    """Two-mode wavefunction sampled over (x1, p2) on a shared grid."""

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        G = self.grid.size
        if v.shape != (G, G):
            raise PreconditionError(
                f"wavefunction shape {v.shape} does not match grid {G}x{G}")
        object.__setattr__(self, "values", v)

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2))) * self.grid.dx

    def normalized(self) -> "GridWavefunction":
        n = self.norm
        if n == 0:
            raise PreconditionError("cannot normalize the zero wavefunction")
        return GridWavefunction(self.values / n, self.grid)

    def check(self, boundary_tol: float = BOUNDARY_TOL) -> None:
        """Enforce the representation invariants: unit norm and no
        significant weight on the box boundary."""
        if abs(self.norm - 1.0) > 1e-10:
            raise PreconditionError(f"wavefunction norm {self.norm!r} != 1")
        v = np.abs(self.values)
        peak = float(v.max())
        edge = max(v[0, :].max(), v[-1, :].max(), v[:, 0].max(), v[:, -1].max())
        if edge > boundary_tol * peak:
            raise GridExtentError(
                f"boundary magnitude {edge / peak:.2e} of peak exceeds "
                f"{boundary_tol:g}; enlarge the grid extent")


def inner(a: GridWavefunction, b: GridWavefunction) -> complex:
    """L2 inner product <a|b> on the grid."""
    if a.grid != b.grid:
        raise PreconditionError("inner product requires a shared grid")
    return complex(np.vdot(a.values, b.values)) * a.grid.dx ** 2
