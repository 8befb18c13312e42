"""Simulator and spectral analyzer for two-color mover automata on a ring."""

from .blocks import (
    DispersionCurve,
    MomentumBlock,
    PerturbationReport,
    build_block,
    diagonalize_block,
    dispersion_scan,
    eigenstate_field,
    naive_mass,
    perturbation_check,
)
from .coarse import (
    Basis,
    CoarseDensity,
    DensityMatrix,
    coarse_in_momentum,
    coarse_momentum_fourier,
    coarse_occupations,
    coarse_position,
    density_from_field,
)
from .dynamics import (
    DiracParams,
    WaveField,
    apply_free,
    apply_scatter,
    delta_field,
    dirac_dispersion,
    dirac_evolve,
    dirac_step,
    evolve,
    evolve_snapshots,
    micro_step,
    normalized,
    plane_wave,
    probabilities,
    smooth_modes,
)
from .engine import (
    Mover,
    Orbit,
    OrbitSet,
    PhasedConfig,
    SiteConfig,
    decompose_orbits,
    meso_step_config,
    micro_step_config,
    single_orbit_eigenstate,
    static_state,
    trajectory,
)
from .errors import NumericalQualityError, ValidationError
from .model import (
    Eta,
    ModelSpec,
    ScatterPattern,
    generate_pattern,
    load_model,
    save_model,
)
from .spectral import (
    EnergyStats,
    MomentumField,
    coarse_momentum_distribution,
    energy_stats,
    energy_stats_at,
    frequency_spectrum,
    momentum_distribution,
    smearing_kernel,
    to_momentum,
    to_position,
    transition_element,
    wavenumbers,
)

__version__ = "0.1.0"
