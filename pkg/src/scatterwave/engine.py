"""Sharp-configuration dynamics: the signed-permutation step map and orbits.

A single-particle configuration is a pair (x, alpha) with alpha a mover type
(R or L).  One micro step transports the particle one site and, if it lands
on a scattering point, swaps the mover type with a unit phase.  The step map
is a bijection on the 2*n_sites configurations; composing m_t micro steps
gives the tile-level map whose cycles are the orbits analyzed here.

Phases are tracked exactly as integer powers of i, so orbit phase bookkeeping
has no floating-point drift.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import ValidationError
from .model import Eta, ModelSpec

_I_POWERS = (1 + 0j, 1j, -1 + 0j, -1j)


class Mover(IntEnum):
    R = 0
    L = 1


@dataclass(frozen=True)
class SiteConfig:
    x: int
    alpha: Mover


@dataclass(frozen=True)
class PhasedConfig:
    config: SiteConfig
    phase_power: int = 0  # phase is i**phase_power

    @property
    def phase(self) -> complex:
        return _I_POWERS[self.phase_power % 4]


def _scatter_powers(eta: Eta) -> tuple[int, int]:
    """Phase powers added on (R->L, L->R) scattering."""
    if eta is Eta.PLUS_ONE:
        return 1, 3  # +i and -i
    return 0, 2  # +1 and -1


def micro_step_config(spec: ModelSpec, t_step: int, c: PhasedConfig) -> PhasedConfig:
    """Advance a sharp configuration by one micro step.

    Transport first (R: x+1, L: x-1, periodic), then scatter if the arrival
    site is a scattering point at this time step.
    """
    x, alpha = c.config.x, c.config.alpha
    power = c.phase_power
    x = (x + 1) % spec.n_sites if alpha == Mover.R else (x - 1) % spec.n_sites
    if spec.is_scattering(t_step, x):
        rl, lr = _scatter_powers(spec.eta)
        power = (power + (rl if alpha == Mover.R else lr)) % 4
        alpha = Mover.L if alpha == Mover.R else Mover.R
    return PhasedConfig(SiteConfig(x, alpha), power)


def meso_step_config(spec: ModelSpec, c: PhasedConfig) -> PhasedConfig:
    """Compose micro steps over one full time tile (t_step = 0 .. m_t-1)."""
    for t in range(spec.m_t):
        c = micro_step_config(spec, t, c)
    return c


def trajectory(spec: ModelSpec, c: SiteConfig, n_steps: int) -> list[SiteConfig]:
    """Positions and types after each micro step, starting from t_step = 0."""
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    out = []
    pc = PhasedConfig(c)
    for t in range(n_steps):
        pc = micro_step_config(spec, t, pc)
        out.append(pc.config)
    return out


def _meso_map(spec: ModelSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized tile-level map over all configurations.

    Configurations are indexed c = alpha * n_sites + x.  Returns
    (destination index, phase power mod 4, net displacement) per start index.
    """
    n = spec.n_sites
    x = np.tile(np.arange(n), 2)
    alpha = np.repeat(np.array([0, 1]), n)
    power = np.zeros(2 * n, dtype=np.int64)
    disp = np.zeros(2 * n, dtype=np.int64)
    rl, lr = _scatter_powers(spec.eta)
    masks = spec.scatter_masks
    for t in range(spec.m_t):
        step = np.where(alpha == Mover.R, 1, -1)
        x = (x + step) % n
        disp += step
        hit = masks[t][x]
        power[hit] += np.where(alpha[hit] == Mover.R, rl, lr)
        alpha[hit] ^= 1
    return alpha * n + x, power % 4, disp


@dataclass(frozen=True)
class Orbit:
    """One closed cycle of the tile-level configuration map.

    ``members[j]`` is the configuration after j tile steps from the start;
    ``cum_phase_powers[j]`` the phase power (of i) accumulated to reach it.
    The reduced orbit first returns to the start type at a position shifted
    by ``stride`` tiles after ``reduced_length`` tile steps; the mean
    velocity is stride*m_x / (reduced_length*m_t).
    """

    members: tuple[SiteConfig, ...]
    cum_phase_powers: tuple[int, ...]
    stride: int
    reduced_length: int
    velocity: Fraction
    net_phase_power: int

    @property
    def length(self) -> int:
        return len(self.members)

    @property
    def net_phase(self) -> complex:
        return _I_POWERS[self.net_phase_power % 4]


@dataclass(frozen=True)
class OrbitSet:
    """Partition of all 2*n_sites configurations into orbits."""

    orbits: tuple[Orbit, ...]
    n_sites: int
    m_x: int
    m_t: int

    def orbit_index_of(self, c: SiteConfig) -> int:
        return self._index_map[int(c.alpha) * self.n_sites + c.x]

    @property
    def _index_map(self) -> np.ndarray:
        idx = getattr(self, "_cached_index", None)
        if idx is None:
            idx = np.full(2 * self.n_sites, -1, dtype=np.int64)
            for m, orb in enumerate(self.orbits):
                for cfg in orb.members:
                    idx[int(cfg.alpha) * self.n_sites + cfg.x] = m
            object.__setattr__(self, "_cached_index", idx)
        return idx


def decompose_orbits(spec: ModelSpec) -> OrbitSet:
    """Partition configuration space into closed orbits of the tile map.

    Enumeration starts from the lexicographically smallest unvisited (x,
    alpha), so the output is deterministic.  For every orbit the reduced
    orbit (first return to the same mover type with a displacement that is a
    whole number of spatial tiles) is located and the full length is
    reconstructed by repeating it until the ring closes.
    """
    n = spec.n_sites
    nbar = spec.n_xbar
    perm, power, disp = _meso_map(spec)
    visited = np.zeros(2 * n, dtype=bool)
    orbits = []
    for x0 in range(n):
        for alpha0 in (Mover.R, Mover.L):
            c0 = int(alpha0) * n + x0
            if visited[c0]:
                continue
            # walk until the reduced orbit closes
            members = [c0]
            powers = [0]
            total_disp = 0
            c = c0
            n_s = None
            while True:
                total_disp += disp[c]
                powers.append((powers[-1] + power[c]) % 4)
                c = int(perm[c])
                members.append(c)
                steps = len(members) - 1
                if (c // n) == (c0 // n) and total_disp % spec.m_x == 0:
                    n_s = steps
                    stride = total_disp // spec.m_x
                    break
            nu = nbar // gcd(stride % nbar, nbar) if stride % nbar else 1
            length = n_s * nu
            # extend the walk through the remaining shifted copies
            while len(members) - 1 < length:
                powers.append((powers[-1] + power[c]) % 4)
                c = int(perm[c])
                members.append(c)
            if members[-1] != c0:
                raise AssertionError("orbit did not close at the predicted length")
            member_cfgs = tuple(
                SiteConfig(m % n, Mover(m // n)) for m in members[:length]
            )
            visited[np.array(members[:length])] = True
            orbits.append(
                Orbit(
                    members=member_cfgs,
                    cum_phase_powers=tuple(powers[:length]),
                    stride=int(stride),
                    reduced_length=n_s,
                    velocity=Fraction(int(stride) * spec.m_x, n_s * spec.m_t),
                    net_phase_power=powers[length] % 4,
                )
            )
    return OrbitSet(orbits=tuple(orbits), n_sites=n, m_x=spec.m_x, m_t=spec.m_t)


def _orbit_amplitudes(n_sites: int, orbit: Orbit, coeffs: np.ndarray) -> np.ndarray:
    """Scatter per-member complex coefficients into a (2, n_sites) field."""
    amps = np.zeros((2, n_sites), dtype=np.complex128)
    for cfg, a in zip(orbit.members, coeffs):
        amps[int(cfg.alpha), cfg.x] = a
    return amps


def static_state(orbits: OrbitSet, weights):
    """Build a field invariant under tile-level evolution.

    Each orbit contributes its unique invariant state scaled by the given
    real weight: the amplitude on member j is the cumulative phase to reach
    it, which makes the permutation-with-phase act as the identity.
    Normalization requires sum_m N_m * w_m**2 = 1.
    """
    from .dynamics import WaveField

    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(orbits.orbits),):
        raise ValidationError("need exactly one weight per orbit")
    total = sum(o.length * w * w for o, w in zip(orbits.orbits, weights))
    if abs(total - 1.0) > 1e-9:
        raise ValidationError(f"weights not normalized: sum N_m w_m^2 = {total}")
    amps = np.zeros((2, orbits.n_sites), dtype=np.complex128)
    for orb, w in zip(orbits.orbits, weights):
        if w == 0.0:
            continue
        if orb.net_phase_power % 4 != 0:
            raise ValidationError(
                "orbit with non-unit net phase admits no invariant state"
            )
        coeffs = w * np.array([_I_POWERS[p] for p in orb.cum_phase_powers])
        amps += _orbit_amplitudes(orbits.n_sites, orb, coeffs)
    return WaveField(amps=amps, time_step=0)


def single_orbit_eigenstate(orbits: OrbitSet, m: int, k: int):
    """Energy eigenstate supported on orbit m with equidistant energy index k.

    The amplitude on member j is the cumulative orbit phase times
    exp(2*pi*i*k*j / N_m), normalized to 1/sqrt(N_m) per member; one tile
    step multiplies the field by exp(-i E dt) with E = 2*pi*k / (N_m * dt).
    Requires the orbit's net phase to be +1 (always true for the
    phase-mixing scattering variant).
    """
    from .dynamics import WaveField

    orb = orbits.orbits[m]
    n_m = orb.length
    if not (-n_m / 2 < k <= n_m / 2):
        raise ValueError(f"k={k} outside (-{n_m}/2, {n_m}/2]")
    if orb.net_phase_power % 4 != 0:
        raise ValueError("orbit has non-unit net phase; no pure eigenstate exists")
    j = np.arange(n_m)
    coeffs = (
        np.array([_I_POWERS[p] for p in orb.cum_phase_powers])
        * np.exp(2j * np.pi * k * j / n_m)
        / np.sqrt(n_m)
    )
    amps = _orbit_amplitudes(orbits.n_sites, orb, coeffs)
    delta_t = orbits.m_t
    energy = 2 * np.pi * k / (n_m * delta_t)
    return WaveField(amps=amps, time_step=0), energy
