"""Automaton definitions: lattice geometry and the fixed scattering pattern.

A model is a chain of ``n_sites`` sites (lattice spacing fixed to 1) with a
scattering pattern that tiles periodically with spatial period ``m_x`` and
temporal period ``m_t``.  A site ``(t, x)`` is a scattering point iff
``(t % m_t, x % m_x)`` is in the pattern.  Instances are immutable and safe
to share across threads.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import ValidationError


class Eta(Enum):
    """Scattering variant: the unit prefactor of the swap matrix.

    PLUS_ONE mixes real and imaginary parts of the wave field and admits an
    exact homogeneous zero-energy state; MINUS_I keeps the evolution real so
    real and imaginary parts decouple.
    """

    PLUS_ONE = "plus_one"
    MINUS_I = "minus_i"

    @property
    def factor(self) -> complex:
        return 1.0 if self is Eta.PLUS_ONE else -1.0j


@dataclass(frozen=True)
class ScatterPattern:
    """A fixed set of scattering cells inside one (m_t, m_x) tile.

    ``points`` is a lexicographically sorted tuple of ``(t_sub, x_sub)``
    pairs; ``seed`` records the RNG seed used to generate it (0 for
    hand-specified patterns).
    """

    points: tuple[tuple[int, int], ...]
    seed: int = 0

    def __post_init__(self):
        pts = tuple(sorted((int(t), int(x)) for t, x in self.points))
        if len(set(pts)) != len(pts):
            raise ValidationError("scattering points must be pairwise distinct")
        object.__setattr__(self, "points", pts)

    @property
    def n_tot(self) -> int:
        return len(self.points)

    def density(self, m_x: int, m_t: int) -> float:
        """Mean number of scattering points per cell of the tile."""
        return self.n_tot / (m_x * m_t)


def generate_pattern(m_x: int, m_t: int, n_tot: int, seed: int) -> ScatterPattern:
    """Sample ``n_tot`` distinct cells uniformly from the m_x x m_t tile.

    Sampling is without replacement so each cell carries at most one
    scattering point.  Identical (m_x, m_t, n_tot, seed) always yield the
    identical pattern; the stream comes from the stdlib Mersenne generator,
    which is stable across platforms.
    """
    if m_x < 1 or m_t < 1:
        raise ValidationError("tile dimensions must be positive")
    if not 0 <= n_tot <= m_x * m_t:
        raise ValidationError(
            f"n_tot={n_tot} outside [0, {m_x * m_t}] for a {m_t}x{m_x} tile"
        )
    rng = random.Random(seed)
    cells = rng.sample(range(m_x * m_t), n_tot)
    points = tuple(sorted((c // m_x, c % m_x) for c in cells))
    return ScatterPattern(points=points, seed=seed)


@dataclass(frozen=True)
class ModelSpec:
    """One automaton: geometry, scattering variant, and pattern.

    Invariants: ``n_sites`` divisible by ``m_x`` (an integer number of
    spatial tiles fits on the ring), ``m_t >= 1``, and all pattern
    coordinates lie in ``[0, m_t) x [0, m_x)``.
    """

    n_sites: int
    m_x: int
    m_t: int
    eta: Eta
    pattern: ScatterPattern
    label: str = ""

    def __post_init__(self):
        if self.n_sites < 1 or self.m_x < 1 or self.m_t < 1:
            raise ValidationError("n_sites, m_x and m_t must be positive")
        if self.n_sites % self.m_x != 0:
            raise ValidationError(
                f"n_sites={self.n_sites} not divisible by m_x={self.m_x}"
            )
        for t, x in self.pattern.points:
            if not (0 <= t < self.m_t and 0 <= x < self.m_x):
                raise ValidationError(
                    f"pattern point ({t}, {x}) outside [0, {self.m_t}) x [0, {self.m_x})"
                )

    @property
    def n_xbar(self) -> int:
        """Number of spatial tiles on the ring."""
        return self.n_sites // self.m_x

    @property
    def n_tot(self) -> int:
        return self.pattern.n_tot

    @property
    def density(self) -> float:
        """Mean scattering points per site per step."""
        return self.pattern.density(self.m_x, self.m_t)

    @cached_property
    def _point_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.pattern.points)

    @cached_property
    def scatter_masks(self) -> np.ndarray:
        """Boolean array (m_t, n_sites): mask[t, x] marks scattering sites."""
        masks = np.zeros((self.m_t, self.n_sites), dtype=bool)
        for t, x in self.pattern.points:
            masks[t, x :: self.m_x] = True
        return masks

    def is_scattering(self, t_step: int, x: int) -> bool:
        return (t_step % self.m_t, x % self.m_x) in self._point_set


def save_model(spec: ModelSpec, path) -> None:
    """Write a model file (canonical JSON, points listed explicitly)."""
    doc = {
        "label": spec.label,
        "n_sites": spec.n_sites,
        "m_x": spec.m_x,
        "m_t": spec.m_t,
        "eta": spec.eta.value,
        "seed": spec.pattern.seed,
        "points": [list(p) for p in spec.pattern.points],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_model(path) -> ModelSpec:
    """Read a model file, validating every field.

    Raises ValidationError naming the offending field on malformed input.
    """
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("model file must hold a JSON object")

    def _int_field(name):
        if name not in doc:
            raise ValidationError(f"missing field '{name}'")
        val = doc[name]
        if not isinstance(val, int) or isinstance(val, bool):
            raise ValidationError(f"field '{name}' must be an integer")
        return val

    n_sites = _int_field("n_sites")
    m_x = _int_field("m_x")
    m_t = _int_field("m_t")
    seed = _int_field("seed")
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise ValidationError("field 'label' must be a string")
    try:
        eta = Eta(doc.get("eta"))
    except ValueError:
        raise ValidationError(
            f"field 'eta' must be one of {[e.value for e in Eta]}"
        ) from None
    raw_points = doc.get("points")
    if not isinstance(raw_points, list):
        raise ValidationError("field 'points' must be a list")
    points = []
    for i, item in enumerate(raw_points):
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in item)
        ):
            raise ValidationError(f"field 'points[{i}]' must be a pair of integers")
        points.append((item[0], item[1]))
    pattern = ScatterPattern(points=tuple(points), seed=seed)
    return ModelSpec(
        n_sites=n_sites, m_x=m_x, m_t=m_t, eta=eta, pattern=pattern, label=label
    )
