"""CSV and manifest output shared by the command-line tools.

Every data file starts with a single ``#``-prefixed JSON metadata line
followed by a plain CSV header and rows.  Floats are written with shortest
round-trip formatting, so identical inputs give byte-identical files.
Files are written through a temporary path and renamed, so a crash never
leaves a partial canonical output behind.
"""

from __future__ import annotations

import json
import os
import time

import numpy as np

from . import __version__ as _version
from .dynamics import WaveField, probabilities

ALPHA_NAMES = ("R", "L")


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path, meta: dict, header, rows) -> None:
    """Write one metadata line, a header row, and data rows atomically."""
    tmp = f"{path}.tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write("# " + json.dumps(meta, sort_keys=True, separators=(",", ":")) + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    os.replace(tmp, path)


def read_csv(path):
    """Read back a metadata-headed CSV as (meta, header, list of string rows)."""
    with open(path) as fh:
        first = fh.readline()
        meta = json.loads(first[1:]) if first.startswith("#") else {}
        header = (first if not first.startswith("#") else fh.readline()).strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    return meta, header, rows


def base_meta(command: str, label: str, units: str, **extra) -> dict:
    meta = {"tool": f"scatterwave {_version}", "command": command,
            "model": label, "units": units}
    meta.update(extra)
    return meta


def field_snapshot_rows(f: WaveField):
    for x in range(f.n_sites):
        yield (x, f.amps[0, x].real, f.amps[0, x].imag,
               f.amps[1, x].real, f.amps[1, x].imag)


FIELD_HEADER = ("x", "re_R", "im_R", "re_L", "im_L")


def write_field_snapshot(path, f: WaveField, meta: dict) -> None:
    meta = dict(meta, time_step=f.time_step, n_sites=f.n_sites)
    write_csv(path, meta, FIELD_HEADER, field_snapshot_rows(f))


def read_field_snapshot(path) -> WaveField:
    meta, header, rows = read_csv(path)
    if tuple(header) != FIELD_HEADER:
        raise ValueError(f"unexpected field snapshot header {header}")
    amps = np.zeros((2, len(rows)), dtype=np.complex128)
    for row in rows:
        x = int(row[0])
        amps[0, x] = float(row[1]) + 1j * float(row[2])
        amps[1, x] = float(row[3]) + 1j * float(row[4])
    return WaveField(amps=amps, time_step=int(meta.get("time_step", 0)))


OCC_HEADER = ("x", "w1", "w2", "w3", "w4")


def write_occupations(path, f: WaveField, meta: dict) -> None:
    w = probabilities(f)
    meta = dict(meta, time_step=f.time_step, n_sites=f.n_sites)
    rows = ((x, w[0, x], w[1, x], w[2, x], w[3, x]) for x in range(f.n_sites))
    write_csv(path, meta, OCC_HEADER, rows)


class ManifestWriter:
    """Collects output paths for one command run and writes the manifest."""

    def __init__(self, command: str, model_path, seed: int | None = None):
        self.command = command
        self.model_path = str(model_path) if model_path else None
        self.seed = seed
        self.outputs: list[str] = []
        self._t0 = time.monotonic()

    def add(self, path) -> str:
        self.outputs.append(str(path))
        return str(path)

    def write(self, path) -> None:
        doc = {
            "command": self.command,
            "model": self.model_path,
            "seed": self.seed,
            "outputs": sorted(self.outputs),
            "tool_version": _version,
            "wall_time_s": round(time.monotonic() - self._t0, 6),
        }
        tmp = f"{path}.tmp"
        with open(tmp, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        os.replace(tmp, path)
