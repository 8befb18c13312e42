"""Sharp-configuration stepping, orbit decomposition, and orbit-built states."""

from fractions import Fraction

import numpy as np
import pytest

from scatterwave import (
    Eta,
    ModelSpec,
    Mover,
    PhasedConfig,
    ScatterPattern,
    SiteConfig,
    ValidationError,
    decompose_orbits,
    evolve,
    generate_pattern,
    meso_step_config,
    micro_step_config,
    single_orbit_eigenstate,
    static_state,
    trajectory,
)
from conftest import free_spec


def replay_config(spec, x, alpha, n_steps, t_start=0):
    """Test-local replay of the update rule, directly off the pattern set.

    Independent of the engine's vectorized path: membership is checked
    against the raw point list and the position is tracked without modular
    tricks.
    """
    points = set(spec.pattern.points)
    path = []
    disp = 0
    for i in range(n_steps):
        t = (t_start + i) % spec.m_t
        d = 1 if alpha == Mover.R else -1
        disp += d
        x = (x + d) % spec.n_sites
        if (t, x % spec.m_x) in points:
            alpha = Mover.L if alpha == Mover.R else Mover.R
        path.append((x, alpha))
    return path, disp


def test_pure_transport():
    spec = free_spec(16)
    c = micro_step_config(spec, 0, PhasedConfig(SiteConfig(0, Mover.R)))
    assert c.config == SiteConfig(1, Mover.R)
    assert c.phase == 1


def test_scatter_phases_plus_one():
    pat = ScatterPattern(points=((0, 3),))
    spec = ModelSpec(n_sites=8, m_x=8, m_t=1, eta=Eta.PLUS_ONE, pattern=pat)
    c = micro_step_config(spec, 0, PhasedConfig(SiteConfig(2, Mover.R)))
    assert c.config == SiteConfig(3, Mover.L)
    assert c.phase == 1j
    c = micro_step_config(spec, 0, PhasedConfig(SiteConfig(4, Mover.L)))
    assert c.config == SiteConfig(3, Mover.R)
    assert c.phase == -1j


def test_scatter_phases_minus_i():
    pat = ScatterPattern(points=((0, 3),))
    spec = ModelSpec(n_sites=8, m_x=8, m_t=1, eta=Eta.MINUS_I, pattern=pat)
    assert micro_step_config(spec, 0, PhasedConfig(SiteConfig(2, Mover.R))).phase == 1
    assert micro_step_config(spec, 0, PhasedConfig(SiteConfig(4, Mover.L))).phase == -1


def test_periodic_wrap():
    spec = free_spec(16)
    c = micro_step_config(spec, 0, PhasedConfig(SiteConfig(15, Mover.R)))
    assert c.config == SiteConfig(0, Mover.R)
    c = micro_step_config(spec, 0, PhasedConfig(SiteConfig(0, Mover.L)))
    assert c.config == SiteConfig(15, Mover.L)


@pytest.mark.parametrize("eta", [Eta.PLUS_ONE, Eta.MINUS_I])
def test_micro_step_bijection(eta):
    spec = ModelSpec(
        n_sites=24, m_x=8, m_t=3, eta=eta, pattern=generate_pattern(8, 3, 10, 4)
    )
    for t in range(spec.m_t):
        seen = set()
        for x in range(24):
            for alpha in (Mover.R, Mover.L):
                c = micro_step_config(spec, t, PhasedConfig(SiteConfig(x, alpha)))
                seen.add((c.config.x, c.config.alpha))
        assert len(seen) == 48


def test_meso_free_transport():
    spec = free_spec(16, m_t=5)
    c = meso_step_config(spec, PhasedConfig(SiteConfig(3, Mover.R)))
    assert c.config == SiteConfig(8, Mover.R)
    assert c.phase == 1


def test_meso_matches_independent_replay(model_b):
    for x0, alpha0 in [(0, Mover.R), (5, Mover.L), (200, Mover.R)]:
        got = meso_step_config(model_b, PhasedConfig(SiteConfig(x0, alpha0)))
        path, _ = replay_config(model_b, x0, alpha0, model_b.m_t)
        assert (got.config.x, got.config.alpha) == path[-1]


def test_all_cells_scattering_even_tile():
    pts = tuple((t, x) for t in range(2) for x in range(2))
    spec = ModelSpec(n_sites=8, m_x=2, m_t=2, eta=Eta.PLUS_ONE,
                     pattern=ScatterPattern(points=pts))
    start = PhasedConfig(SiteConfig(3, Mover.R))
    c = meso_step_config(spec, start)
    assert c.config == start.config
    assert abs(c.phase) == 1


def test_trajectory_free():
    spec = free_spec(16)
    path = trajectory(spec, SiteConfig(0, Mover.R), 5)
    assert [c.x for c in path] == [1, 2, 3, 4, 5]
    assert all(c.alpha == Mover.R for c in path)


def test_trajectory_turns_exactly_at_scattering_points(model_b):
    start = SiteConfig(7, Mover.R)
    path = trajectory(model_b, start, 120)
    points = set(model_b.pattern.points)
    prev = start
    for i, cur in enumerate(path):
        scattered = (i % model_b.m_t, cur.x % model_b.m_x) in points
        assert (cur.alpha != prev.alpha) == scattered
        prev = cur


def test_trajectory_reversible(model_b):
    """Inverting each step map recovers the path backwards."""
    n = model_b.n_sites
    start = SiteConfig(11, Mover.R)
    n_steps = 3 * model_b.m_t
    path = [start] + trajectory(model_b, start, n_steps)
    # brute-force inverses, one per time slot
    inverse = []
    for t in range(model_b.m_t):
        fwd = {}
        for x in range(n):
            for alpha in (Mover.R, Mover.L):
                c = micro_step_config(model_b, t, PhasedConfig(SiteConfig(x, alpha)))
                fwd[(c.config.x, c.config.alpha)] = (x, alpha)
        inverse.append(fwd)
    cur = (path[-1].x, path[-1].alpha)
    for i in reversed(range(n_steps)):
        cur = inverse[i % model_b.m_t][cur]
        assert cur == (path[i].x, path[i].alpha)


def test_free_model_orbits():
    spec = free_spec(16, m_x=4, m_t=1)
    orbits = decompose_orbits(spec)
    assert all(o.length == 16 for o in orbits.orbits)
    assert sorted(set(o.velocity for o in orbits.orbits)) == [
        Fraction(-1), Fraction(1)
    ]
    assert sum(o.length for o in orbits.orbits) == 32


def test_model_b_reduced_orbit(model_b):
    orbits = decompose_orbits(model_b)
    pairs = {(o.reduced_length, o.stride) for o in orbits.orbits}
    assert (18, 2) in pairs
    target = next(o for o in orbits.orbits if (o.reduced_length, o.stride) == (18, 2))
    assert target.velocity == Fraction(16, 153)
    assert target.length == 288  # 16 shifted copies of the reduced orbit


def test_model_b_velocity_replay_oracle(model_b):
    """Count displacement over one reduced orbit by raw replay."""
    orbits = decompose_orbits(model_b)
    orb = next(o for o in orbits.orbits if (o.reduced_length, o.stride) == (18, 2))
    first = orb.members[0]
    path, disp = replay_config(
        model_b, first.x, first.alpha, orb.reduced_length * model_b.m_t
    )
    assert path[-1][1] == first.alpha
    assert disp == orb.stride * model_b.m_x
    assert Fraction(disp, orb.reduced_length * model_b.m_t) == orb.velocity


def test_orbit_partition(model_b, small_periodic):
    for spec in (model_b, small_periodic):
        orbits = decompose_orbits(spec)
        seen = set()
        for orb in orbits.orbits:
            for cfg in orb.members:
                key = (cfg.x, cfg.alpha)
                assert key not in seen
                seen.add(key)
        assert len(seen) == 2 * spec.n_sites
        assert sum(o.length for o in orbits.orbits) == 2 * spec.n_sites


def test_closed_orbit_phase_is_one(model_b, small_periodic):
    for spec in (model_b, small_periodic):
        for orb in decompose_orbits(spec).orbits:
            assert orb.net_phase_power == 0


def test_orbit_periodicity_property(small_periodic):
    orbits = decompose_orbits(small_periodic)
    for orb in orbits.orbits[:3]:
        c = PhasedConfig(orb.members[0])
        for _ in range(orb.length):
            c = meso_step_config(small_periodic, c)
        assert c.config == orb.members[0]


def test_static_single_orbit(small_periodic):
    orbits = decompose_orbits(small_periodic)
    w = np.zeros(len(orbits.orbits))
    w[0] = 1.0 / np.sqrt(orbits.orbits[0].length)
    f = static_state(orbits, w)
    g = evolve(small_periodic, f, small_periodic.m_t)
    assert np.max(np.abs(g.amps - f.amps)) < 1e-12


def test_static_homogeneous_field(small_periodic):
    orbits = decompose_orbits(small_periodic)
    n = small_periodic.n_sites
    w = np.full(len(orbits.orbits), 1.0 / np.sqrt(2 * n))
    f = static_state(orbits, w)
    g = evolve(small_periodic, f, 3 * small_periodic.m_t)
    assert np.max(np.abs(g.amps - f.amps)) < 1e-12
    # equal weights reproduce the homogeneous (1, i) field
    expect = np.stack([np.ones(n), 1j * np.ones(n)]) / np.sqrt(2 * n)
    assert np.max(np.abs(f.amps - expect)) < 1e-12


def test_static_two_orbit_mixture(small_periodic):
    orbits = decompose_orbits(small_periodic)
    w = np.zeros(len(orbits.orbits))
    n0, n1 = orbits.orbits[0].length, orbits.orbits[1].length
    w[0] = 0.7 / np.sqrt(n0)
    w[1] = np.sqrt(1 - 0.49) / np.sqrt(n1)
    f = static_state(orbits, w)
    g = evolve(small_periodic, f, small_periodic.m_t)
    assert np.max(np.abs(g.amps - f.amps)) < 1e-12


def test_static_rejects_unnormalized(small_periodic):
    orbits = decompose_orbits(small_periodic)
    with pytest.raises(ValidationError):
        static_state(orbits, np.ones(len(orbits.orbits)))


def test_eigenstate_k0_is_static(small_periodic):
    orbits = decompose_orbits(small_periodic)
    f, energy = single_orbit_eigenstate(orbits, 0, 0)
    assert energy == 0.0
    g = evolve(small_periodic, f, small_periodic.m_t)
    assert np.max(np.abs(g.amps - f.amps)) < 1e-12


def test_free_orbit_eigenstate_is_plane_wave():
    spec = free_spec(16, m_x=16, m_t=1)
    orbits = decompose_orbits(spec)
    m = next(
        i for i, o in enumerate(orbits.orbits) if o.members[0].alpha == Mover.R
    )
    k = 3
    f, energy = single_orbit_eigenstate(orbits, m, k)
    assert energy == pytest.approx(2 * np.pi * k / 16, abs=1e-14)
    # massless right-movers: energy equals momentum
    from scatterwave import momentum_distribution, wavenumbers

    w = momentum_distribution(f)
    kk = wavenumbers(16)
    assert w[np.argmax(w)] == pytest.approx(1.0, abs=1e-12)
    p = 2 * np.pi * kk[np.argmax(w)] / 16
    assert energy == pytest.approx(p, abs=1e-12)


def test_model_b_orbit_eigenstate_phase(model_b):
    orbits = decompose_orbits(model_b)
    m = max(range(len(orbits.orbits)), key=lambda i: orbits.orbits[i].length)
    n_m = orbits.orbits[m].length
    f, energy = single_orbit_eigenstate(orbits, m, 1)
    g = evolve(model_b, f, model_b.m_t)
    expect = np.exp(-2j * np.pi / n_m) * f.amps
    assert np.max(np.abs(g.amps - expect)) < 1e-12
    assert energy == pytest.approx(2 * np.pi / (n_m * model_b.m_t), abs=1e-15)


def test_eigenstate_k_range(small_periodic):
    orbits = decompose_orbits(small_periodic)
    n_m = orbits.orbits[0].length
    with pytest.raises(ValueError):
        single_orbit_eigenstate(orbits, 0, n_m)
    with pytest.raises(ValueError):
        single_orbit_eigenstate(orbits, 0, -(n_m // 2))
    single_orbit_eigenstate(orbits, 0, n_m // 2)  # boundary included


def test_sharp_probability_equals_wave_square(model_b):
    from scatterwave import delta_field, probabilities

    start = SiteConfig(9, Mover.L)
    f = delta_field(model_b.n_sites, start.x, int(start.alpha))
    f = evolve(model_b, f, 50)
    path = trajectory(model_b, start, 50)
    end = path[-1]
    w = probabilities(f)
    dist = w[0] + w[1], w[2] + w[3]
    expect_r = np.zeros(model_b.n_sites)
    expect_l = np.zeros(model_b.n_sites)
    (expect_r if end.alpha == Mover.R else expect_l)[end.x] = 1.0
    assert np.array_equal(dist[0], expect_r)
    assert np.array_equal(dist[1], expect_l)
