"""Wave-field evolution under the automaton step and the discrete Dirac step.

Fields are two-component complex amplitudes over the ring, stored as a
(2, n_sites) array with row 0 the right-mover and row 1 the left-mover.
All operations are pure: they return new fields and never mutate inputs.

The automaton step is a permutation with unit phases, so it conserves the
norm exactly; fields are normalized on construction and never renormalized
during evolution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .model import Eta, ModelSpec

R, L = 0, 1


@dataclass(frozen=True)
class WaveField:
    """Normalized complex amplitudes psi_alpha(x) plus a micro-step counter."""

    amps: np.ndarray  # complex128, shape (2, n_sites)
    time_step: int = 0

    @property
    def n_sites(self) -> int:
        return self.amps.shape[1]

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))


def normalized(amps: np.ndarray, time_step: int = 0) -> WaveField:
    """Wrap raw amplitudes into a unit-norm field."""
    amps = np.asarray(amps, dtype=np.complex128)
    norm = np.sqrt(np.sum(np.abs(amps) ** 2))
    if norm == 0.0:
        raise ValidationError("cannot normalize a zero field")
    return WaveField(amps=amps / norm, time_step=time_step)


def delta_field(n_sites: int, x: int, alpha: int, phase: complex = 1.0) -> WaveField:
    """Sharp field: all weight on one configuration."""
    amps = np.zeros((2, n_sites), dtype=np.complex128)
    amps[alpha, x % n_sites] = phase
    return WaveField(amps=amps, time_step=0)


def apply_free(f: WaveField) -> WaveField:
    """Free transport: right-movers shift +1 site, left-movers -1, periodic."""
    amps = np.empty_like(f.amps)
    amps[R] = np.roll(f.amps[R], 1)
    amps[L] = np.roll(f.amps[L], -1)
    return WaveField(amps=amps, time_step=f.time_step)


def apply_scatter(spec: ModelSpec, t_step: int, f: WaveField) -> WaveField:
    """Swap movers with the variant's unit phase at this step's scattering sites."""
    mask = spec.scatter_masks[t_step % spec.m_t]
    amps = f.amps.copy()
    if mask.any():
        r, l = f.amps[R][mask], f.amps[L][mask]
        if spec.eta is Eta.PLUS_ONE:
            amps[R][mask] = -1j * l
            amps[L][mask] = 1j * r
        else:
            amps[R][mask] = -l
            amps[L][mask] = r
    return WaveField(amps=amps, time_step=f.time_step)


def micro_step(spec: ModelSpec, f: WaveField) -> WaveField:
    """One automaton step: transport, then scatter at the current time slot."""
    g = apply_scatter(spec, f.time_step, apply_free(f))
    return WaveField(amps=g.amps, time_step=f.time_step + 1)


def evolve(spec: ModelSpec, f: WaveField, n_steps: int) -> WaveField:
    """Compose n_steps micro steps."""
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    for _ in range(n_steps):
        f = micro_step(spec, f)
    return f


def evolve_snapshots(
    spec: ModelSpec, f: WaveField, n_steps: int, every: int | None = None
) -> list[WaveField]:
    """Evolve while collecting the field every ``every`` steps (default: one tile).

    The returned list starts with the initial field and always includes the
    final one.
    """
    if every is None:
        every = spec.m_t
    if every < 1:
        raise ValueError("snapshot cadence must be >= 1")
    out = [f]
    for i in range(n_steps):
        f = micro_step(spec, f)
        if (i + 1) % every == 0 or i + 1 == n_steps:
            out.append(f)
    return out


def probabilities(f: WaveField) -> np.ndarray:
    """Per-type occupation probabilities, shape (4, n_sites).

    Rows are (Re psi_R)^2, (Im psi_R)^2, (Re psi_L)^2, (Im psi_L)^2; the
    total sums to 1 for a normalized field.
    """
    return np.stack(
        [
            f.amps[R].real ** 2,
            f.amps[R].imag ** 2,
            f.amps[L].real ** 2,
            f.amps[L].imag ** 2,
        ]
    )


def _spinor_weight(p: float, m: float) -> float:
    """Upper-component weight f(p) of the plane-wave spinor.

    At p = m = 0 the defining ratio is 0/0; the symmetric limit 1/sqrt(2)
    is used instead.
    """
    if p == 0.0 and m == 0.0:
        return 1.0 / np.sqrt(2.0)
    return np.sqrt(0.5 * (1.0 + p / np.hypot(p, m)))


def plane_wave(spec_or_n, p: float, m: float) -> WaveField:
    """Plane wave with momentum p = 2*pi*k/n_sites and spinor mass parameter m.

    psi(x) = exp(i p x) (f(p), i f(-p)) / sqrt(n_sites); p must sit on the
    momentum grid.
    """
    n = spec_or_n.n_sites if isinstance(spec_or_n, ModelSpec) else int(spec_or_n)
    k = p * n / (2 * np.pi)
    if abs(k - round(k)) > 1e-9:
        raise ValueError(f"momentum p={p} is not 2*pi*k/{n} for integer k")
    x = np.arange(n)
    wave = np.exp(1j * p * x)
    amps = np.stack([_spinor_weight(p, m) * wave, 1j * _spinor_weight(-p, m) * wave])
    return normalized(amps)


@dataclass(frozen=True)
class DiracParams:
    """Mass and phase convention for the discrete Dirac reference step."""

    mass: float
    phase_shifted: bool = True

    def __post_init__(self):
        if self.mass < 0:
            raise ValidationError("mass must be >= 0")
        if self.mass >= np.pi / 2:
            raise ValidationError("mass*eps must stay below pi/2")


def dirac_step(params: DiracParams, f: WaveField) -> WaveField:
    """Transport then rotate the movers into each other by the mass angle.

    With phase_shifted the step carries an extra global phase exp(i m) which
    subtracts the rest energy, so the homogeneous (1, i) field is stationary.
    """
    g = apply_free(f)
    c, s = np.cos(params.mass), np.sin(params.mass)
    amps = np.empty_like(g.amps)
    amps[R] = c * g.amps[R] - s * g.amps[L]
    amps[L] = s * g.amps[R] + c * g.amps[L]
    if params.phase_shifted:
        amps = amps * np.exp(1j * params.mass)
    return WaveField(amps=amps, time_step=f.time_step + 1)


def dirac_evolve(params: DiracParams, f: WaveField, n_steps: int) -> WaveField:
    for _ in range(n_steps):
        f = dirac_step(params, f)
    return f


def dirac_dispersion(p: float, m: float) -> float:
    """Continuum energy of the rest-energy-subtracted Dirac particle."""
    return float(np.hypot(p, m) - m)


def smooth_modes(values: np.ndarray, keep: int = 8) -> np.ndarray:
    """Low-pass a real profile by keeping Fourier modes with |k| <= keep."""
    n = len(values)
    spec = np.fft.rfft(values)
    spec[keep + 1 :] = 0.0
    return np.fft.irfft(spec, n)
