"""Fourier analysis, momentum distributions, and energy statistics.

Momentum amplitudes are stored in FFT index order; ``wavenumbers(n)`` maps
array slots to signed integers k in (-n/2, n/2], with momentum 2*pi*k/n in
lattice units.  The transforms here are unitary (1/sqrt(n) both ways), so
Parseval holds exactly and the round trip is the identity to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import WaveField
from .model import ModelSpec


def wavenumbers(n: int) -> np.ndarray:
    """Signed integer wavenumbers in FFT order, k in (-n/2, n/2]."""
    k = np.arange(n)
    return np.where(k <= n // 2, k, k - n)


@dataclass(frozen=True)
class MomentumField:
    """Fourier amplitudes psi_alpha(q), FFT index order along the last axis."""

    amps: np.ndarray  # complex128, shape (2, n_sites)
    time_step: int = 0

    @property
    def n_sites(self) -> int:
        return self.amps.shape[1]

    @property
    def ks(self) -> np.ndarray:
        return wavenumbers(self.n_sites)


def to_momentum(f: WaveField) -> MomentumField:
    """Unitary transform psi(q) = sum_x exp(-i q x) psi(x) / sqrt(n)."""
    n = f.n_sites
    return MomentumField(amps=np.fft.fft(f.amps, axis=1) / np.sqrt(n),
                         time_step=f.time_step)


def to_position(g: MomentumField) -> WaveField:
    """Inverse of :func:`to_momentum`."""
    n = g.n_sites
    return WaveField(amps=np.fft.ifft(g.amps, axis=1) * np.sqrt(n),
                     time_step=g.time_step)


def momentum_distribution(f: WaveField) -> np.ndarray:
    """w(q) summed over the internal index, FFT order; sums to the field norm."""
    g = to_momentum(f)
    return np.sum(np.abs(g.amps) ** 2, axis=0)


def coarse_momentum_distribution(f: WaveField, spec: ModelSpec) -> np.ndarray:
    """Fold w(q) onto the conserved momentum modulo 2*pi/m_x.

    Entry j is the total weight of all k with k = j (mod n_xbar), indexed by
    kbar in FFT order on the coarse grid of n_xbar values.  For a
    single-tile model this degenerates to one bin holding everything.
    """
    w = momentum_distribution(f)
    return w.reshape(spec.m_x, spec.n_xbar).sum(axis=0)


def transition_element(history, ref_index: int = 0) -> np.ndarray:
    """Overlaps of each snapshot with the reference one.

    ``history`` holds fields at consecutive tile steps; entry n of the result
    is sum_x psi_ref(x)^dagger psi_n(x), so the value at the reference is 1
    for normalized fields.
    """
    history = list(history)
    if not history:
        raise ValueError("history must not be empty")
    n = history[0].n_sites
    if any(f.n_sites != n for f in history):
        raise ValueError("all snapshots must share one lattice size")
    if not 0 <= ref_index < len(history):
        raise ValueError("ref_index outside history")
    ref = history[ref_index].amps
    return np.array([np.vdot(ref, f.amps) for f in history])


def frequency_grid(n_snapshots: int, delta_t: float) -> tuple[np.ndarray, np.ndarray]:
    """Frequency indices and values for a transition-element transform."""
    k = wavenumbers(n_snapshots)
    return k, 2 * np.pi * k / (n_snapshots * delta_t)


def frequency_spectrum(
    b_values: np.ndarray, delta_t: float, ref_index: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Transform overlaps to frequency space.

    Snapshot n sits at time (n - ref_index) * delta_t, so placing the
    reference mid-window makes the smearing kernel real.  Returns (omega,
    B(omega)) with omega = 2*pi*k_w / (n_snapshots * delta_t) on the signed
    FFT-ordered grid.
    """
    b_values = np.asarray(b_values)
    n = len(b_values)
    _, omega = frequency_grid(n, delta_t)
    times = (np.arange(n) - ref_index) * delta_t
    kernel = np.exp(1j * np.outer(omega, times))
    return omega, kernel @ b_values / n


def smearing_kernel(
    omega, energy: float, n_snapshots: int, delta_t: float, ref_index: int = 0
) -> np.ndarray:
    """Finite-window line shape: the transform of a pure phase at ``energy``.

    Equals 1 exactly at omega = energy and is bounded by 1 in modulus; real
    when the reference sits mid-window.
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    times = (np.arange(n_snapshots) - ref_index) * delta_t
    return np.exp(1j * np.outer(omega - energy, times)).sum(axis=1) / n_snapshots


@dataclass(frozen=True)
class EnergyStats:
    """Mean and variance of the sine-bounded energy operator.

    ``h_tilde_mean`` approximates the mean energy with a known cubic
    distortion at large energies; ``variance`` vanishes exactly on energy
    eigenstates.
    """

    h_tilde_mean: float
    h_tilde_sq: float
    variance: float


def energy_stats(snapshots) -> EnergyStats:
    """Energy statistics from five tile-aligned snapshots.

    Expects fields at t - 2dt, t - dt, t, t + dt, t + 2dt for a uniform tile
    spacing dt (checked via the fields' step counters).  The mean uses the
    symmetric first difference, the square the symmetric second difference.
    """
    snapshots = list(snapshots)
    if len(snapshots) != 5:
        raise ValueError("need exactly 5 snapshots at t-2dt .. t+2dt")
    steps = [f.time_step for f in snapshots]
    diffs = np.diff(steps)
    if len(set(diffs)) != 1 or diffs[0] <= 0:
        raise ValueError(f"snapshot spacing must be uniform, got steps {steps}")
    delta_t = float(diffs[0])
    f_m2, f_m1, f0, f_p1, f_p2 = (f.amps for f in snapshots)
    mean = (1j / (2 * delta_t)) * np.vdot(f0, f_p1 - f_m1)
    sq = -np.vdot(f0, f_p2 - 2.0 * f0 + f_m2) / (4 * delta_t**2)
    mean_r, sq_r = float(mean.real), float(sq.real)
    return EnergyStats(
        h_tilde_mean=mean_r, h_tilde_sq=sq_r, variance=sq_r - mean_r**2
    )


def energy_stats_at(spec: ModelSpec, f: WaveField, base_tiles: int = 2) -> EnergyStats:
    """Evolve a field and evaluate :func:`energy_stats` at t = base_tiles tiles."""
    if base_tiles < 2:
        raise ValueError("base time must allow two tiles of history")
    from .dynamics import evolve

    snaps = []
    cur = f
    for tile in range(base_tiles + 3):
        if tile >= base_tiles - 2:
            snaps.append(cur)
        if tile < base_tiles + 2:
            cur = evolve(spec, cur, spec.m_t)
    return energy_stats(snaps[:5])
