"""Command-line entry point: reproducible experiments emitting CSV reports.

Subcommands wrap the library modules one-to-one: ``gen-model`` writes model
files, ``evolve`` produces field and occupation snapshots, ``orbits``,
``spectrum``, ``blocks``, ``dispersion`` and ``coarse`` emit the analysis
reports.  Exit codes: 0 success, 2 usage error, 3 validation error, 4
numerical-quality error.

The environment variable SCATTERWAVE_THREADS, when set, seeds the usual
BLAS/OpenMP thread-count variables before numpy is loaded; output content
does not depend on it.
"""

from __future__ import annotations

import argparse
import os
import sys


def _apply_thread_env() -> None:
    n = os.environ.get("SCATTERWAVE_THREADS")
    if not n:
        return
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, n)


_apply_thread_env()

import numpy as np

from . import __version__
from .blocks import (
    build_block,
    diagonalize_block,
    dispersion_scan,
    eigenstate_field,
    naive_mass,
)
from .coarse import (
    Basis,
    coarse_momentum_fourier,
    coarse_occupations,
    coarse_position,
    density_from_field,
)
from .dynamics import (
    DiracParams,
    WaveField,
    dirac_step,
    evolve,
    micro_step,
    plane_wave,
    smooth_modes,
)
from .engine import Mover, SiteConfig, decompose_orbits, trajectory
from .errors import NumericalQualityError, ValidationError
from .model import Eta, ModelSpec, ScatterPattern, generate_pattern, load_model, save_model
from .reports import (
    ManifestWriter,
    base_meta,
    read_field_snapshot,
    write_csv,
    write_field_snapshot,
    write_occupations,
)
from .spectral import (
    coarse_momentum_distribution,
    energy_stats,
    frequency_grid,
    frequency_spectrum,
    momentum_distribution,
    smearing_kernel,
    transition_element,
    wavenumbers,
)

PRESETS = {
    # Brownian chain: one spatial tile, mass from the scattering density
    "model-a": dict(n_sites=512, m_x=512, m_t=16, n_tot=160),
    # tile-periodic chain with 32 tiles of 16 sites
    "model-b": dict(n_sites=512, m_x=16, m_t=17, n_tot=16),
}
MODEL_B_SEED = 121
MODEL_A_SEED = 1


class _UsageError(Exception):
    pass


def _lattice_momentum(k: float, n: int) -> float:
    return 2 * np.pi * k / n


def _energy_out(e_lattice: float, n: int, units: str) -> float:
    return e_lattice * n / (2 * np.pi) if units == "2pi-over-L" else e_lattice


def _load_spec(path) -> ModelSpec:
    return load_model(path)


def _parse_init(spec: ModelSpec, init: str) -> WaveField:
    parts = init.split(":")
    kind = parts[0]
    if kind == "plane" and len(parts) == 3:
        k, m = float(parts[1]), float(parts[2])
        return plane_wave(
            spec,
            _lattice_momentum(k, spec.n_sites),
            _lattice_momentum(m, spec.n_sites),
        )
    if kind == "eigen" and len(parts) == 3:
        kbar, lam = int(parts[1]), int(parts[2])
        blk = diagonalize_block(build_block(spec, kbar))
        return eigenstate_field(blk, lam)
    if kind == "file" and len(parts) >= 2:
        return read_field_snapshot(":".join(parts[1:]))
    raise _UsageError(
        f"bad --init '{init}': expected plane:K:M, eigen:KBAR:LAMBDA or file:PATH"
    )


def _add_common(p: argparse.ArgumentParser, model=True):
    if model:
        p.add_argument("--model", required=True, help="model JSON file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument(
        "--units",
        choices=("lattice", "2pi-over-L"),
        default="2pi-over-L",
        help="units for reported momenta/energies (default: 2pi-over-L)",
    )


def _outdir(args) -> str:
    os.makedirs(args.out, exist_ok=True)
    return args.out


# --- gen-model -------------------------------------------------------------


def cmd_gen_model(args) -> int:
    if args.preset and (args.nx or args.mx or args.mt or args.ntot is not None):
        raise _UsageError("--preset conflicts with explicit --nx/--mx/--mt/--ntot")
    if args.preset:
        if args.preset not in PRESETS:
            raise _UsageError(f"unknown preset '{args.preset}'")
        dims = PRESETS[args.preset]
        seed = args.seed if args.seed is not None else (
            MODEL_B_SEED if args.preset == "model-b" else MODEL_A_SEED
        )
        label = args.label or args.preset
        nx, mx, mt, ntot = dims["n_sites"], dims["m_x"], dims["m_t"], dims["n_tot"]
    else:
        if None in (args.nx, args.mx, args.mt) or args.ntot is None:
            raise _UsageError("need --preset or all of --nx --mx --mt --ntot")
        nx, mx, mt, ntot = args.nx, args.mx, args.mt, args.ntot
        seed = args.seed if args.seed is not None else 1
        label = args.label or "custom"
    pattern = generate_pattern(mx, mt, ntot, seed)
    spec = ModelSpec(
        n_sites=nx, m_x=mx, m_t=mt, eta=Eta(args.eta), pattern=pattern, label=label
    )
    parent = os.path.dirname(args.out)
    if parent:
        os.makedirs(parent, exist_ok=True)
    save_model(spec, args.out)
    manifest = ManifestWriter("gen-model", args.out, seed=seed)
    manifest.add(args.out)
    manifest.write(args.out + ".manifest.json")
    return 0


# --- evolve ----------------------------------------------------------------


def cmd_evolve(args) -> int:
    spec = _load_spec(args.model)
    f = _parse_init(spec, args.init)
    out = _outdir(args)
    manifest = ManifestWriter("evolve", args.model)
    meta = base_meta("evolve", spec.label, args.units, init=args.init)
    every = args.snap_every or spec.m_t
    snap_steps = sorted(
        {s for s in range(0, args.steps + 1) if s % every == 0 or s == args.steps}
    )

    dirac = None
    if args.dirac_mass is not None:
        dirac = (
            DiracParams(mass=_lattice_momentum(args.dirac_mass, spec.n_sites)),
            f,
        )
    free = f if args.with_free else None
    free_spec = ModelSpec(
        n_sites=spec.n_sites, m_x=spec.n_sites, m_t=1, eta=spec.eta,
        pattern=ScatterPattern(points=()), label="free",
    )

    def emit(tag: str, field: WaveField, step: int):
        path = os.path.join(out, f"field_t{step:07d}{tag}.csv")
        write_field_snapshot(manifest.add(path), field, meta)
        if not tag:
            occ = os.path.join(out, f"occ_t{step:07d}.csv")
            write_occupations(manifest.add(occ), field, meta)
            sm = WaveField(
                amps=np.stack(
                    [
                        smooth_modes(field.amps[0].real, args.smooth_k)
                        + 1j * smooth_modes(field.amps[0].imag, args.smooth_k),
                        smooth_modes(field.amps[1].real, args.smooth_k)
                        + 1j * smooth_modes(field.amps[1].imag, args.smooth_k),
                    ]
                ),
                time_step=field.time_step,
            )
            smp = os.path.join(out, f"field_t{step:07d}_smooth.csv")
            write_field_snapshot(manifest.add(smp), sm, meta)

    step = 0
    emit("", f, 0)
    if dirac:
        emit("_dirac", dirac[1], 0)
    if free is not None:
        emit("_free", free, 0)
    for target in snap_steps[1:]:
        while step < target:
            f = micro_step(spec, f)
            if dirac:
                dirac = (dirac[0], dirac_step(dirac[0], dirac[1]))
            if free is not None:
                free = micro_step(free_spec, free)
            step += 1
        emit("", f, step)
        if dirac:
            emit("_dirac", dirac[1], step)
        if free is not None:
            emit("_free", free, step)
    manifest.write(os.path.join(out, "manifest.json"))
    return 0


# --- orbits ----------------------------------------------------------------


def cmd_orbits(args) -> int:
    spec = _load_spec(args.model)
    out = _outdir(args)
    manifest = ManifestWriter("orbits", args.model)
    orbits = decompose_orbits(spec)
    rows = []
    for i, orb in enumerate(orbits.orbits):
        first = orb.members[0]
        rows.append(
            (
                i,
                orb.length,
                orb.stride,
                orb.reduced_length,
                orb.velocity.numerator,
                orb.velocity.denominator,
                first.x,
                "R" if first.alpha == Mover.R else "L",
            )
        )
    path = os.path.join(out, "orbits.csv")
    write_csv(
        manifest.add(path),
        base_meta("orbits", spec.label, "lattice"),
        ("orbit_id", "N_m", "s", "n_s", "v_num", "v_den",
         "first_member_x", "first_member_alpha"),
        rows,
    )
    if args.trajectory:
        try:
            xs, alpha_s, steps_s = args.trajectory.split(":")
            start = SiteConfig(int(xs), Mover.R if alpha_s == "R" else Mover.L)
            n_steps = int(steps_s)
        except (ValueError, KeyError):
            raise _UsageError("--trajectory expects X:ALPHA:STEPS") from None
        traj = trajectory(spec, start, n_steps)
        trows = [(0, start.x, "R" if start.alpha == Mover.R else "L")]
        trows += [
            (i + 1, c.x, "R" if c.alpha == Mover.R else "L")
            for i, c in enumerate(traj)
        ]
        tpath = os.path.join(out, "trajectory.csv")
        write_csv(
            manifest.add(tpath),
            base_meta("orbits", spec.label, "lattice", start=args.trajectory),
            ("step", "x", "alpha"),
            trows,
        )
    manifest.write(os.path.join(out, "manifest.json"))
    return 0


# --- spectrum --------------------------------------------------------------


def cmd_spectrum(args) -> int:
    spec = _load_spec(args.model)
    f0 = _parse_init(spec, args.init)
    out = _outdir(args)
    manifest = ManifestWriter("spectrum", args.model)
    n = spec.n_sites
    history = [f0]
    f = f0
    for _ in range(args.tiles):
        f = evolve(spec, f, spec.m_t)
        history.append(f)
    ref = args.tiles // 2 if args.ref == "middle" else 0
    if args.momentum_at:
        try:
            tiles_wanted = sorted({int(v) for v in args.momentum_at.split(",")})
        except ValueError:
            raise _UsageError("--momentum-at expects comma-separated tile indices")
        ks = wavenumbers(n)
        order = np.argsort(ks)
        for tile in tiles_wanted:
            if not 0 <= tile < len(history):
                raise _UsageError(f"--momentum-at {tile} outside evolved range")
            w = momentum_distribution(history[tile])
            rows = [(int(ks[i]), w[i]) for i in order]
            path = os.path.join(out, f"momentum_t{tile:05d}.csv")
            write_csv(
                manifest.add(path),
                base_meta("spectrum", spec.label, args.units,
                          init=args.init, tile=tile),
                ("k", "w"),
                rows,
            )
    b = transition_element(history, ref_index=ref)
    bt_rows = [
        ((i - ref) * spec.m_t, b[i].real, b[i].imag) for i in range(len(b))
    ]
    meta = base_meta("spectrum", spec.label, args.units, init=args.init, ref=args.ref)
    path = os.path.join(out, "bt.csv")
    write_csv(manifest.add(path), meta, ("t", "value_re", "value_im"), bt_rows)

    omega, bomega = frequency_spectrum(b, spec.m_t, ref_index=ref)
    ks, _ = frequency_grid(len(b), spec.m_t)
    if args.kernel_energy is not None:
        e_ref = _lattice_momentum(args.kernel_energy, n)
    else:
        e_ref = None
    kernel = (
        smearing_kernel(omega, e_ref, len(b), spec.m_t, ref_index=ref)
        if e_ref is not None
        else None
    )
    order = np.argsort(ks)
    rows = []
    for i in order:
        row = [
            int(ks[i]),
            _energy_out(omega[i], n, args.units),
            bomega[i].real,
            bomega[i].imag,
        ]
        if kernel is not None:
            row += [kernel[i].real]
        rows.append(tuple(row))
    header = ["k_omega", "omega", "value_re", "value_im"]
    if kernel is not None:
        header.append("kernel_re")
    path = os.path.join(out, "bomega.csv")
    write_csv(manifest.add(path), meta, header, rows)

    stats_source = [h for h in history[: 5]]
    if len(history) >= 5:
        stats = energy_stats(history[:5])
        unit_sq = (n / (2 * np.pi)) ** 2 if args.units == "2pi-over-L" else 1.0
        srows = [
            (
                _energy_out(stats.h_tilde_mean, n, args.units),
                stats.h_tilde_sq * unit_sq,
                stats.variance * unit_sq,
            )
        ]
        path = os.path.join(out, "energy_stats.csv")
        write_csv(
            manifest.add(path), meta,
            ("h_tilde_mean", "h_tilde_sq", "variance"), srows,
        )
    manifest.write(os.path.join(out, "manifest.json"))
    return 0


# --- blocks ----------------------------------------------------------------


def cmd_blocks(args) -> int:
    spec = _load_spec(args.model)
    if spec.m_x > args.dense_cap:
        raise ValidationError(
            f"dense sector diagonalization capped at m_x <= {args.dense_cap} "
            f"(model has m_x = {spec.m_x}); use 'dispersion --mode mean_energy'"
        )
    out = _outdir(args)
    manifest = ManifestWriter("blocks", args.model)
    meta = base_meta("blocks", spec.label, args.units)
    n = spec.n_sites
    kmin, kmax = args.kbar_min, args.kbar_max
    rows = []
    dumps = []
    for kbar in range(kmin, kmax + 1):
        blk = diagonalize_block(build_block(spec, kbar))
        for lam, e in enumerate(blk.energies):
            rows.append((kbar, lam, float(e), _energy_out(float(e), n, "2pi-over-L")))
        if args.dump_matrix is not None and kbar == args.dump_matrix:
            dumps.append(("block", kbar, None, blk))
        if args.dump_eigvec:
            dk, dl = (int(v) for v in args.dump_eigvec.split(":"))
            if kbar == dk:
                dumps.append(("eigvec", dk, dl, blk))
    path = os.path.join(out, "spectrum.csv")
    write_csv(
        manifest.add(path), meta,
        ("k_bar", "lambda", "energy_lattice", "energy_2pi_over_L"), rows,
    )
    for kind, kbar, lam, blk in dumps:
        if kind == "block":
            mrows = []
            mx = blk.m_x
            ls = wavenumbers(mx)
            for r in range(2 * mx):
                for c in range(2 * mx):
                    mrows.append(
                        (
                            "RL"[r // mx], int(ls[r % mx]),
                            "RL"[c // mx], int(ls[c % mx]),
                            blk.matrix[r, c].real, blk.matrix[r, c].imag,
                        )
                    )
            path = os.path.join(out, f"block_k{kbar}.csv")
            write_csv(
                manifest.add(path), dict(meta, k_bar=kbar),
                ("alpha_row", "l_row", "alpha_col", "l_col", "re", "im"), mrows,
            )
        else:
            field = eigenstate_field(blk, lam)
            path = os.path.join(out, f"eigvec_k{kbar}_l{lam}.csv")
            write_field_snapshot(
                manifest.add(path), field, dict(meta, k_bar=kbar, lam=lam)
            )
    manifest.write(os.path.join(out, "manifest.json"))
    return 0


# --- dispersion ------------------------------------------------------------


def cmd_dispersion(args) -> int:
    spec = _load_spec(args.model)
    out = _outdir(args)
    manifest = ManifestWriter("dispersion", args.model)
    mass = (
        _lattice_momentum(args.mass, spec.n_sites) if args.mass is not None else None
    )
    curve = dispersion_scan(
        spec, args.mode, range(args.kmin, args.kmax + 1), mass=mass
    )
    n = spec.n_sites
    rows = [
        (int(k), _energy_out(e, n, args.units), src) for k, e, src in curve.points
    ]
    path = os.path.join(out, "dispersion.csv")
    write_csv(
        manifest.add(path),
        base_meta("dispersion", spec.label, args.units, mode=args.mode),
        ("k", "energy", "source"),
        rows,
    )
    manifest.write(os.path.join(out, "manifest.json"))
    return 0


# --- coarse ----------------------------------------------------------------


def cmd_coarse(args) -> int:
    spec = _load_spec(args.model)
    f = _parse_init(spec, args.init)
    out = _outdir(args)
    manifest = ManifestWriter("coarse", args.model)
    meta = base_meta("coarse", spec.label, args.units, init=args.init)
    kbars = wavenumbers(spec.n_xbar)
    series = []
    occ_rows = []
    cur = f
    for tile in range(args.tiles + 1):
        wbar = coarse_momentum_distribution(cur, spec)
        for i in np.argsort(kbars):
            series.append((tile, int(kbars[i]), wbar[i]))
        if tile < args.tiles:
            cur = evolve(spec, cur, spec.m_t)
    path = os.path.join(out, "coarse_momentum.csv")
    write_csv(manifest.add(path), meta, ("tile", "k_bar", "w"), series)

    rho = density_from_field(cur, Basis.POSITION)
    cd = coarse_position(rho, spec)
    occ = coarse_occupations(cd)
    for alpha in (0, 1):
        for xb in range(spec.n_xbar):
            occ_rows.append((xb, "RL"[alpha], occ[alpha, xb]))
    path = os.path.join(out, "coarse_occupations.csv")
    write_csv(manifest.add(path), meta, ("x_bar", "alpha", "value"), occ_rows)

    cq = coarse_momentum_fourier(cd)
    mrows = []
    for a in (0, 1):
        for b_ in (0, 1):
            for i in range(spec.n_xbar):
                for j in range(spec.n_xbar):
                    v = cq.entries[a, b_, i, j]
                    mrows.append(("RL"[a], "RL"[b_], i, j, v.real, v.imag))
    path = os.path.join(out, "coarse_momentum_matrix.csv")
    write_csv(
        manifest.add(path), meta,
        ("alpha_row", "alpha_col", "row", "col", "re", "im"), mrows,
    )
    manifest.write(os.path.join(out, "manifest.json"))
    return 0


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="scatterwave",
        description="simulate and analyze two-color mover automata on a ring",
    )
    p.add_argument("--version", action="version", version=f"scatterwave {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-model", help="write a model file")
    g.add_argument("--preset", choices=sorted(PRESETS))
    g.add_argument("--nx", type=int)
    g.add_argument("--mx", type=int)
    g.add_argument("--mt", type=int)
    g.add_argument("--ntot", type=int)
    g.add_argument("--eta", choices=[e.value for e in Eta], default="plus_one")
    g.add_argument("--seed", type=int)
    g.add_argument("--label")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen_model)

    e = sub.add_parser("evolve", help="evolve an initial field and dump snapshots")
    _add_common(e)
    e.add_argument("--init", required=True, help="plane:K:M | eigen:KBAR:LAMBDA | file:PATH")
    e.add_argument("--steps", type=int, required=True)
    e.add_argument("--snap-every", type=int, default=None)
    e.add_argument("--smooth-k", type=int, default=8,
                   help="Fourier modes kept in the smoothed companion (default 8)")
    e.add_argument("--dirac-mass", type=float, default=None,
                   help="also evolve the same init with the Dirac step, mass in 2pi/L units")
    e.add_argument("--with-free", action="store_true",
                   help="also evolve the same init with no scattering")
    e.set_defaults(func=cmd_evolve)

    o = sub.add_parser("orbits", help="orbit decomposition report")
    _add_common(o)
    o.add_argument("--trajectory", help="X:ALPHA:STEPS to also dump one trajectory")
    o.set_defaults(func=cmd_orbits)

    s = sub.add_parser("spectrum", help="transition element, frequency spectrum, energy stats")
    _add_common(s)
    s.add_argument("--init", required=True)
    s.add_argument("--tiles", type=int, required=True, help="number of tile steps")
    s.add_argument("--ref", choices=("start", "middle"), default="start")
    s.add_argument("--kernel-energy", type=float, default=None,
                   help="overlay the smearing kernel at this energy (2pi/L units)")
    s.add_argument("--momentum-at", default=None,
                   help="comma-separated tile indices at which to dump w(q)")
    s.set_defaults(func=cmd_spectrum)

    b = sub.add_parser("blocks", help="build and diagonalize coarse-momentum sectors")
    _add_common(b)
    b.add_argument("--kbar-min", type=int, required=True)
    b.add_argument("--kbar-max", type=int, required=True)
    b.add_argument("--dump-matrix", type=int, default=None,
                   help="also dump the sector matrix for this k_bar")
    b.add_argument("--dump-eigvec", default=None, help="KBAR:LAMBDA field dump")
    b.add_argument("--dense-cap", type=int, default=1024,
                   help="refuse dense diagonalization above this m_x")
    b.set_defaults(func=cmd_blocks)

    d = sub.add_parser("dispersion", help="energy versus momentum scan")
    _add_common(d)
    d.add_argument("--mode", choices=("block_lowest", "mean_energy"), required=True)
    d.add_argument("--kmin", type=int, required=True)
    d.add_argument("--kmax", type=int, required=True)
    d.add_argument("--mass", type=float, default=None,
                   help="Dirac reference mass in 2pi/L units (default: from scattering density)")
    d.set_defaults(func=cmd_dispersion)

    c = sub.add_parser("coarse", help="coarse density subtraces and momentum series")
    _add_common(c)
    c.add_argument("--init", required=True)
    c.add_argument("--tiles", type=int, required=True)
    c.set_defaults(func=cmd_coarse)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 3
    except NumericalQualityError as exc:
        print(f"numerical-quality error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
