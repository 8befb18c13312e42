"""Coarse-momentum sectors: assembly, diagonalization, dispersion, expansion."""

import numpy as np
import pytest

from scatterwave import (
    Eta,
    ModelSpec,
    MomentumBlock,
    Mover,
    NumericalQualityError,
    ScatterPattern,
    SiteConfig,
    build_block,
    decompose_orbits,
    diagonalize_block,
    dirac_dispersion,
    dispersion_scan,
    eigenstate_field,
    evolve,
    momentum_distribution,
    naive_mass,
    perturbation_check,
    plane_wave,
    probabilities,
    single_orbit_eigenstate,
    to_momentum,
    wavenumbers,
)
from conftest import free_spec


def all_block_energies(spec):
    out = []
    blocks = []
    for kbar in range(spec.n_xbar):
        blk = diagonalize_block(build_block(spec, kbar))
        blocks.append(blk)
        out.extend(float(e) for e in blk.energies)
    return np.array(out), blocks


def all_orbit_energies(spec, orbits):
    delta_t = spec.m_t
    out = []
    for orb in orbits.orbits:
        n_m = orb.length
        lo = -(n_m // 2) + (1 if n_m % 2 == 0 else 0)
        for k in range(lo, n_m // 2 + 1):
            out.append(2 * np.pi * k / (n_m * delta_t))
    return np.array(out)


def circular_match(a, b, delta_t, tol):
    """Greedy multiset match of energies on the phase circle."""
    assert len(a) == len(b)
    pa = np.sort(np.mod(a * delta_t, 2 * np.pi))
    pb = np.sort(np.mod(b * delta_t, 2 * np.pi))
    d = np.abs(pa - pb)
    return float(np.max(np.minimum(d, 2 * np.pi - d))) <= tol * delta_t


def test_free_block_is_diagonal_transport():
    spec = free_spec(64, m_x=8, m_t=5)
    blk = build_block(spec, 2)
    n, mx = 64, 8
    qs = 2 * np.pi * ((2 + np.arange(mx) * 8) % n) / n
    want = np.zeros((16, 16), dtype=complex)
    want[:8, :8] = np.diag(np.exp(-1j * qs * 5))
    want[8:, 8:] = np.diag(np.exp(1j * qs * 5))
    assert np.max(np.abs(blk.matrix - want)) < 1e-12


def test_model_b_block_dominant_entries(model_b):
    """Right-mover diagonal: strongest real parts at offsets 0 and -8, opposite sign."""
    blk = build_block(model_b, 1)
    mx = model_b.m_x
    diag_rr = np.diag(blk.matrix[:mx, :mx]).real
    ls = wavenumbers(mx)
    assert ls[np.argmax(diag_rr)] == 0
    assert ls[np.argmin(diag_rr)] == 8  # the half-sector offset (= -8 mod 16)
    assert diag_rr.max() > 0.4 and diag_rr.min() < -0.4
    assert diag_rr.max() == pytest.approx(-diag_rr.min(), rel=1e-6)


def test_block_off_sector_leakage(model_b):
    """Oracle: full-lattice evolution leaves nothing outside the sector momenta."""
    kbar = 3
    sector = set(int(k) for k in (kbar + np.arange(16) * 32) % 512)
    from scatterwave import normalized

    for beta, l in [(0, 0), (1, 5)]:
        k0 = (kbar + l * 32) % 512
        amps = np.zeros((2, 512), dtype=complex)
        amps[beta] = np.exp(2j * np.pi * k0 * np.arange(512) / 512)
        f = normalized(amps)
        g = to_momentum(evolve(model_b, f, model_b.m_t))
        w = np.sum(np.abs(g.amps) ** 2, axis=0)
        outside = sum(w[k] for k in range(512) if k not in sector)
        assert outside <= 1e-12


def test_block_unitarity_and_eigen_residuals(model_b):
    blk = diagonalize_block(build_block(model_b, 4))
    assert blk.unitarity_defect() <= 1e-10
    lam = np.exp(-1j * np.asarray(blk.energies) * model_b.m_t)
    resid = blk.matrix @ blk.eigvecs - blk.eigvecs * lam
    assert np.max(np.abs(resid)) <= 1e-9
    assert len(blk.energies) == 2 * model_b.m_x
    assert np.all(np.asarray(blk.energies) > -np.pi / model_b.m_t)
    assert np.all(np.asarray(blk.energies) <= np.pi / model_b.m_t + 1e-15)
    gram = blk.eigvecs.conj().T @ blk.eigvecs
    assert np.max(np.abs(gram - np.eye(2 * model_b.m_x))) < 1e-9


def test_free_block_massless_dispersion():
    spec = free_spec(64, m_x=8, m_t=1)
    for kbar in range(8):
        blk = diagonalize_block(build_block(spec, kbar))
        qs = 2 * np.pi * wavenumbers(64)[(kbar + np.arange(8) * 8) % 64] / 64
        want = np.concatenate([qs, -qs])
        got = np.asarray(blk.energies)
        assert circular_match(got, want, 1.0, 1e-12)


def test_every_cell_scattering_zero_hamiltonian():
    pts = tuple((t, x) for t in range(2) for x in range(2))
    spec = ModelSpec(n_sites=16, m_x=2, m_t=2, eta=Eta.PLUS_ONE,
                     pattern=ScatterPattern(points=pts))
    for kbar in range(spec.n_xbar):
        blk = diagonalize_block(build_block(spec, kbar))
        assert np.max(np.abs(np.asarray(blk.energies))) < 1e-12


def test_block_spectrum_matches_orbit_energies(small_periodic):
    orbits = decompose_orbits(small_periodic)
    block_e, _ = all_block_energies(small_periodic)
    orbit_e = all_orbit_energies(small_periodic, orbits)
    assert len(block_e) == len(orbit_e) == 4 * small_periodic.n_sites // 2
    assert circular_match(block_e, orbit_e, small_periodic.m_t, 1e-9)


def test_eigenstate_field_free_plane_wave():
    spec = free_spec(64, m_x=8, m_t=1)
    blk = diagonalize_block(build_block(spec, 2))
    idx = int(np.argmin(np.abs(np.asarray(blk.energies))))
    f = eigenstate_field(blk, idx)
    w = momentum_distribution(f)
    assert w.max() > 1 - 1e-12  # a single plane wave
    assert abs(f.norm_sq() - 1) < 1e-12


def test_eigenstate_field_evolves_with_phase(model_b):
    blk = diagonalize_block(build_block(model_b, 5))
    for lam in (0, 9, 17, 31):
        f = eigenstate_field(blk, lam)
        e = blk.energies[lam]
        g = f
        for _ in range(8):
            g = evolve(model_b, g, model_b.m_t)
        want = np.exp(-8j * e * model_b.m_t) * f.amps
        assert np.max(np.abs(g.amps - want)) <= 1e-9


def test_model_b_eigenstate_mixes_two_equal_orbits(model_b):
    """Some eigenstate lives on exactly two orbits of the same length."""
    orbits = decompose_orbits(model_b)
    found = False
    for kbar in range(3):
        blk = diagonalize_block(build_block(model_b, kbar))
        for lam in range(2 * model_b.m_x):
            f = eigenstate_field(blk, lam)
            occ = np.abs(f.amps) ** 2
            sup = np.argwhere(occ > 1e-16)
            ids = {
                orbits.orbit_index_of(SiteConfig(int(x), Mover(int(a))))
                for a, x in sup
            }
            if len(ids) == 2:
                l1, l2 = (orbits.orbits[i].length for i in ids)
                if l1 == l2:
                    found = True
                    break
        if found:
            break
    assert found


def test_eigenstate_occupation_recurrence(model_b):
    """The occupation profile returns after a whole number of phase turns."""
    blk = diagonalize_block(build_block(model_b, 1))
    energies = np.asarray(blk.energies)
    # pick an eigenstate whose period is a whole number of tiles
    periods = 2 * np.pi / (np.abs(energies) * model_b.m_t + 1e-300)
    ok = np.isclose(periods, np.round(periods), atol=1e-9) & (np.abs(energies) > 1e-9)
    lam = int(np.nonzero(ok)[0][0])
    tiles = int(round(periods[lam]))
    f = eigenstate_field(blk, lam)
    g = evolve(model_b, f, tiles * model_b.m_t)
    w0, w1 = probabilities(f), probabilities(g)
    assert np.max(np.abs(w1 - w0)) <= 1e-10


def test_energy_distribution_conserved(model_b):
    """Projections on block eigenvectors keep their weights under evolution."""
    kbar = 2
    blk = diagonalize_block(build_block(model_b, kbar))
    rng = np.random.default_rng(12)
    c = rng.normal(size=32) + 1j * rng.normal(size=32)
    c /= np.linalg.norm(c)
    vec = blk.eigvecs @ c
    n, mx = 512, 16
    amps_q = np.zeros((2, n), dtype=complex)
    ks = blk.sector_ks
    amps_q[0][ks] = vec[:mx]
    amps_q[1][ks] = vec[mx:]
    from scatterwave import MomentumField, to_position

    f = to_position(MomentumField(amps=amps_q))
    weights0 = np.abs(c) ** 2
    g = evolve(model_b, f, 5 * model_b.m_t)
    gq = to_momentum(g)
    vec_t = np.concatenate([gq.amps[0][ks], gq.amps[1][ks]])
    weights1 = np.abs(blk.eigvecs.conj().T @ vec_t) ** 2
    assert np.max(np.abs(weights1 - weights0)) <= 1e-10


def test_dispersion_block_lowest_free():
    spec = free_spec(64, m_x=8, m_t=1)
    curve = dispersion_scan(spec, "block_lowest", range(0, 4))
    got = {k: e for k, e, src in curve.points if src == "block_eig"}
    for k in range(4):
        assert got[k] == pytest.approx(2 * np.pi * k / 64, abs=1e-12)


def test_dispersion_zero_momentum_static(model_b):
    curve = dispersion_scan(model_b, "mean_energy", [0])
    e0 = next(e for k, e, src in curve.points if src == "mean_energy")
    assert abs(e0) <= 1e-12


def test_dispersion_includes_dirac_reference(model_b):
    curve = dispersion_scan(model_b, "mean_energy", [1, 2])
    m = naive_mass(model_b)
    ref = {k: e for k, e, src in curve.points if src == "dirac_reference"}
    for k in (1, 2):
        assert ref[k] == pytest.approx(dirac_dispersion(2 * np.pi * k / 512, m))


def test_naive_mass_values(model_b):
    free = free_spec(32)
    assert naive_mass(free) == 0.0
    assert naive_mass(model_b) == pytest.approx(np.pi / 34, abs=1e-15)
    # 160 points on a 512x16 tile realize the Brownian-chain mass
    from scatterwave import generate_pattern

    spec_a = ModelSpec(
        n_sites=512, m_x=512, m_t=16, eta=Eta.PLUS_ONE,
        pattern=generate_pattern(512, 16, 160, 1),
    )
    assert naive_mass(spec_a) == pytest.approx(2.5 * 2 * np.pi / 512, abs=1e-15)


PERT_POINTS = tuple((0, x) for x in (100, 700, 1500, 2600, 3300)) + tuple(
    (3, x) for x in (50, 1200)
)


def _pert_spec(eta):
    return ModelSpec(
        n_sites=4096, m_x=4096, m_t=8, eta=eta,
        pattern=ScatterPattern(points=PERT_POINTS),
    )


def test_perturbation_free_row_is_pure_transport_error():
    pts = tuple((3, x) for x in (50, 1200))  # nothing scatters at t = 0
    spec = ModelSpec(n_sites=4096, m_x=4096, m_t=8, eta=Eta.PLUS_ONE,
                     pattern=ScatterPattern(points=pts))
    m = 0.5
    res = []
    for k in (64, 32, 16):
        r = perturbation_check(spec, 2 * np.pi * k / 4096, m)
        res.append(r.l2_residual)
    assert res[0] / res[1] == pytest.approx(4.0, rel=0.1)
    assert res[1] / res[2] == pytest.approx(4.0, rel=0.1)


def test_perturbation_quadratic_for_phase_mixing_variant():
    spec = _pert_spec(Eta.PLUS_ONE)
    m = 0.5
    ks = np.array([64, 32, 16, 8, 4])
    ps = 2 * np.pi * ks / 4096
    res = np.array([perturbation_check(spec, p, m).l2_residual for p in ps])
    slope = np.polyfit(np.log(ps), np.log(res), 1)[0]
    assert abs(slope - 2.0) <= 0.3


def test_perturbation_fails_for_real_variant():
    spec = _pert_spec(Eta.MINUS_I)
    m = 0.5
    r_big = perturbation_check(spec, 2 * np.pi * 64 / 4096, m).l2_residual
    r_small = perturbation_check(spec, 2 * np.pi * 4 / 4096, m).l2_residual
    assert r_small > 0.5 * r_big  # does not shrink with p
    assert r_small > 1e-2


def test_perturbation_input_validation(model_b):
    with pytest.raises(ValueError):
        perturbation_check(model_b, 0.01, 0.0)
    with pytest.raises(ValueError):
        perturbation_check(model_b, 0.5, 0.5)  # |p/m| too large


def test_unitarity_violation_raises():
    bad = MomentumBlock(
        k_bar=0, n_sites=8, m_x=2, m_t=1,
        matrix=np.diag([1.0, 1.0, 1.0, 0.5]).astype(complex),
    )
    with pytest.raises(NumericalQualityError):
        diagonalize_block(bad)


def test_eigenstate_requires_diagonalization(model_b):
    blk = build_block(model_b, 0)
    with pytest.raises(ValueError):
        eigenstate_field(blk, 0)
    blk = diagonalize_block(blk)
    with pytest.raises(ValueError):
        eigenstate_field(blk, 99)


def test_block_sectors_cover_orbit_states(small_periodic):
    """Every single-orbit eigenstate energy appears in some sector's spectrum."""
    orbits = decompose_orbits(small_periodic)
    block_e, _ = all_block_energies(small_periodic)
    phases_block = np.mod(block_e * small_periodic.m_t, 2 * np.pi)
    f, e = single_orbit_eigenstate(orbits, 1, 2)
    ph = np.mod(e * small_periodic.m_t, 2 * np.pi)
    d = np.abs(phases_block - ph)
    assert np.min(np.minimum(d, 2 * np.pi - d)) < 1e-9
