"""Shared model fixtures for the test suite."""

import numpy as np
import pytest

from scatterwave import Eta, ModelSpec, ScatterPattern, generate_pattern

MODEL_B_SEED = 121
MODEL_A_SEED = 1


def free_spec(n_sites=64, m_x=None, m_t=1, eta=Eta.PLUS_ONE) -> ModelSpec:
    return ModelSpec(
        n_sites=n_sites,
        m_x=m_x if m_x is not None else n_sites,
        m_t=m_t,
        eta=eta,
        pattern=ScatterPattern(points=()),
        label="free",
    )


@pytest.fixture(scope="session")
def model_a():
    """Brownian chain: 512 sites, tile 512x16, 160 scattering points."""
    return ModelSpec(
        n_sites=512,
        m_x=512,
        m_t=16,
        eta=Eta.PLUS_ONE,
        pattern=generate_pattern(512, 16, 160, MODEL_A_SEED),
        label="model-a",
    )


@pytest.fixture(scope="session")
def model_b():
    """Tile-periodic chain: 32 tiles of 16 sites, 17-step tile, 16 points.

    The seed is pinned so the pattern contains a reduced orbit with
    (reduced_length, stride) = (18, 2).
    """
    return ModelSpec(
        n_sites=512,
        m_x=16,
        m_t=17,
        eta=Eta.PLUS_ONE,
        pattern=generate_pattern(16, 17, 16, MODEL_B_SEED),
        label="model-b",
    )


@pytest.fixture(scope="session")
def small_periodic():
    """64-site model with 8 tiles, used for exhaustive spectrum checks."""
    return ModelSpec(
        n_sites=64,
        m_x=8,
        m_t=5,
        eta=Eta.PLUS_ONE,
        pattern=generate_pattern(8, 5, 6, 3),
        label="small",
    )


def random_field(n_sites: int, rng: np.random.Generator):
    from scatterwave import normalized

    amps = rng.normal(size=(2, n_sites)) + 1j * rng.normal(size=(2, n_sites))
    return normalized(amps)
