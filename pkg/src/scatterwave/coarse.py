"""Pure-state density matrices and their subtraces on the tile lattice.

Entries are stored with shape (2, 2, n, n): internal indices first, then the
two lattice indices (position or momentum, FFT order for momentum).  Coarse
graining in position traces out the intra-tile offset; coarse graining in
momentum traces out the tile-reciprocal offset.  Both give the same diagonal
in the coarse momentum basis, which is the module's headline identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dynamics import WaveField
from .model import ModelSpec
from .spectral import to_momentum

POSITION_CAP = 1024


class Basis(Enum):
    POSITION = "position"
    MOMENTUM = "momentum"


@dataclass(frozen=True)
class DensityMatrix:
    """Pure-state density matrix rho[alpha, beta, i, j] on the fine lattice."""

    entries: np.ndarray
    basis: Basis

    @property
    def n(self) -> int:
        return self.entries.shape[-1]

    def trace(self) -> float:
        return float(np.einsum("aaii->", self.entries).real)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().transpose(1, 0, 3, 2))))

    def purity_defect(self) -> float:
        """Max-norm of rho^2 - rho (zero for a pure state)."""
        flat = self._flat()
        return float(np.max(np.abs(flat @ flat - flat)))

    def _flat(self) -> np.ndarray:
        n = self.n
        return self.entries.transpose(0, 2, 1, 3).reshape(2 * n, 2 * n)


@dataclass(frozen=True)
class CoarseDensity:
    """Subtraced density matrix on the coarse lattice (generally not pure)."""

    entries: np.ndarray
    basis: Basis

    @property
    def n(self) -> int:
        return self.entries.shape[-1]

    def trace(self) -> float:
        return float(np.einsum("aaii->", self.entries).real)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().transpose(1, 0, 3, 2))))

    def purity_defect(self) -> float:
        flat = self.entries.transpose(0, 2, 1, 3).reshape(2 * self.n, 2 * self.n)
        return float(np.max(np.abs(flat @ flat - flat)))


def density_from_field(f: WaveField, basis: Basis = Basis.POSITION) -> DensityMatrix:
    """Outer product rho = psi psi^dagger in the requested basis."""
    if f.n_sites > POSITION_CAP:
        raise ValueError(
            f"dense density matrix capped at {POSITION_CAP} sites; "
            "compute coarse quantities directly from the field instead"
        )
    amps = f.amps if basis is Basis.POSITION else to_momentum(f).amps
    entries = np.einsum("ai,bj->abij", amps, amps.conj())
    return DensityMatrix(entries=entries, basis=basis)


def coarse_position(rho: DensityMatrix, spec: ModelSpec) -> CoarseDensity:
    """Trace out the position offset within each tile.

    rho_bar(xbar, xbar') = sum_xi rho(xbar + xi, xbar' + xi); the diagonal is
    the mean occupation per tile and the trace is preserved.
    """
    if rho.basis is not Basis.POSITION:
        raise ValueError("coarse_position needs a position-basis density matrix")
    nbar, mx = spec.n_xbar, spec.m_x
    if rho.n != spec.n_sites:
        raise ValueError("density matrix size does not match the model")
    r = rho.entries.reshape(2, 2, nbar, mx, nbar, mx)
    entries = np.einsum("abiuju->abij", r)
    return CoarseDensity(entries=entries, basis=Basis.POSITION)


def coarse_momentum_fourier(rho_bar: CoarseDensity) -> CoarseDensity:
    """Unitary Fourier transform of a coarse density matrix to momentum space."""
    if rho_bar.basis is not Basis.POSITION:
        raise ValueError("input must be a position-basis coarse density")
    entries = np.fft.fft(np.fft.ifft(rho_bar.entries, axis=3), axis=2)
    return CoarseDensity(entries=entries, basis=Basis.MOMENTUM)


def coarse_position_fourier(rho_hat: CoarseDensity) -> CoarseDensity:
    """Inverse of :func:`coarse_momentum_fourier`."""
    if rho_hat.basis is not Basis.MOMENTUM:
        raise ValueError("input must be a momentum-basis coarse density")
    entries = np.fft.ifft(np.fft.fft(rho_hat.entries, axis=3), axis=2)
    return CoarseDensity(entries=entries, basis=Basis.POSITION)


def coarse_in_momentum(rho: DensityMatrix, spec: ModelSpec) -> CoarseDensity:
    """Trace out the tile-reciprocal momentum offset.

    rho_hat(qbar, qbar') = sum_Q rho(qbar + Q, qbar' + Q) with Q running over
    multiples of 2*pi/m_x.  Its diagonal equals the diagonal of the Fourier
    transform of the position-coarse matrix; off-diagonals differ in general.
    """
    if rho.basis is not Basis.MOMENTUM:
        raise ValueError("coarse_in_momentum needs a momentum-basis density matrix")
    nbar, mx = spec.n_xbar, spec.m_x
    if rho.n != spec.n_sites:
        raise ValueError("density matrix size does not match the model")
    r = rho.entries.reshape(2, 2, mx, nbar, mx, nbar)
    entries = np.einsum("abuiuj->abij", r)
    return CoarseDensity(entries=entries, basis=Basis.MOMENTUM)


def coarse_occupations(cd: CoarseDensity) -> np.ndarray:
    """Mean mover occupations per tile, shape (2, n_xbar); sums to the trace."""
    if cd.basis is not Basis.POSITION:
        raise ValueError("occupations are read from a position-coarse density")
    return np.einsum("aaii->ai", cd.entries).real
