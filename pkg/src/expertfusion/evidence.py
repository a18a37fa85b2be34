"""Entropy-weighted Dempster-Shafer fusion of sensor rankings.

Mass functions here only carry singleton candidates plus the whole frame,
which lets Dempster's rule be evaluated in closed form.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .fusion import RankedList
from .sensors import SENSOR_KINDS, EventScoreTable, min_max_normalize

MASS_TOL = 1e-9
CONFLICT_TOL = 1e-12
TABLEAU_MAX_FRAME = 12


class TotalConflictError(ValueError):
    """Dempster's rule is undefined because the two sources fully disagree."""


@dataclass(frozen=True)
class MassFunction:
    singleton_mass: Mapping[str, float]
    theta_mass: float
    frame: tuple[str, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "frame", tuple(sorted(self.frame)))
        object.__setattr__(
            self, "singleton_mass", {a: float(m) for a, m in sorted(self.singleton_mass.items())}
        )
        extra = set(self.singleton_mass) - set(self.frame)
        if extra:
            raise ValueError(f"singleton masses outside the frame: {sorted(extra)}")
        masses = [*self.singleton_mass.values(), self.theta_mass]
        if any(m < -MASS_TOL for m in masses):
            raise ValueError("masses must be non-negative")
        total = math.fsum(masses)
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"masses sum to {total!r}, not 1")

    def __getitem__(self, author: str) -> float:
        return self.singleton_mass.get(author, 0.0)

    @classmethod
    def vacuous(cls, frame: Iterable[str]) -> "MassFunction":
        return cls({}, 1.0, tuple(frame))

    def focal_elements(self) -> dict[frozenset, float]:
        """Mass as a map from subsets of the frame to weights."""
        out = {frozenset([a]): m for a, m in self.singleton_mass.items() if m}
        if self.theta_mass:
            whole = frozenset(self.frame)
            out[whole] = out.get(whole, 0.0) + self.theta_mass
        return out


@dataclass(frozen=True)
class SensorReport:
    sensor_kind: str
    fused: RankedList
    entropy: float
    max_entropy: float
    mass: MassFunction | None = None

    @property
    def weight(self) -> float:
        return self.entropy / self.max_entropy


def sensor_entropy(table: EventScoreTable) -> tuple[float, float]:
    """Shannon entropy of the relevant-event distribution and its maximum.

    A cell is relevant when its raw score is above zero. Each candidate's
    probability is its relevant-event count over N*T cells.
    """
    n, t = table.raw.shape
    cells = n * t
    if cells <= 1:
        raise ValueError("entropy needs more than one candidate-event cell")
    counts = (table.raw > 0).sum(axis=1)
    p = counts[counts > 0] / cells
    h = float(-(p * np.log2(p)).sum()) if p.size else 0.0
    return h, math.log2(cells)


def mass_scores(fused: RankedList) -> dict[str, float]:
    """Scores fed into the singleton masses; Condorcet win counts are min-max scaled."""
    scores = fused.scores()
    if fused.method == "condorcet" and scores:
        names = list(scores)
        scaled = min_max_normalize([scores[a] for a in names])
        scores = dict(zip(names, scaled.tolist()))
    return scores


def build_mass_functions(
    reports: Sequence[tuple[RankedList, float, float]],
    frame: Iterable[str],
    names: Sequence[str] | None = None,
) -> list[MassFunction]:
    """One mass function per sensor from fused scores and entropy ratios.

    Each sensor's H/MaxH is divided by the sum over sensors to give its
    frame mass; fused scores are scaled to fill the rest. A lone sensor
    keeps its raw ratio as frame mass.
    """
    frame = tuple(sorted(set(frame)))
    if not reports:
        raise ValueError("need at least one sensor")
    weights = [h / max_h for _, h, max_h in reports]
    total_w = math.fsum(weights)
    out = []
    for i, ((fused, _, _), w) in enumerate(zip(reports, weights)):
        name = names[i] if names else ""
        scores = mass_scores(fused)
        missing = set(scores) - set(frame)
        if missing:
            raise ValueError(f"fused list has candidates outside the frame: {sorted(missing)}")
        if any(s < 0 for s in scores.values()):
            raise ValueError("fused scores must be non-negative")
        score_total = math.fsum(scores.values())
        if score_total <= 0:
            if total_w == 0:
                raise ValueError(f"sensor {name or i} carries no evidence at all")
            out.append(MassFunction({}, 1.0, frame, name))
            continue
        theta = w if len(reports) == 1 else (w / total_w if total_w else 0.0)
        singles = {a: s / score_total * (1.0 - theta) for a, s in scores.items()}
        # absorb rounding so the invariant holds to machine precision
        theta = 1.0 - math.fsum(singles.values())
        out.append(MassFunction(singles, max(theta, 0.0), frame, name))
    return out


def conflict(m1: MassFunction, m2: MassFunction) -> float:
    """Mass falling on empty intersections when combining m1 and m2."""
    frame = m1.frame
    a = np.array([m1[x] for x in frame])
    b = np.array([m2[x] for x in frame])
    return float(a.sum() * b.sum() - a @ b)


def ds_combine(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Dempster's rule for singleton-plus-frame mass functions."""
    if m1.frame != m2.frame:
        raise ValueError("mass functions are defined over different frames")
    k = conflict(m1, m2)
    if k >= 1.0 - CONFLICT_TOL:
        raise TotalConflictError(
            f"total conflict (K={k:.12g}) combining {m1.name or 'm1'} and {m2.name or 'm2'}"
        )
    norm = 1.0 - k
    t1, t2 = m1.theta_mass, m2.theta_mass
    singles = {
        x: (m1[x] * m2[x] + m1[x] * t2 + t1 * m2[x]) / norm
        for x in m1.frame
        if m1[x] or m2[x]
    }
    name = f"{m1.name}+{m2.name}" if m1.name and m2.name else ""
    return _renormalized(singles, t1 * t2 / norm, m1.frame, name)


def _renormalized(singles, theta, frame, name="") -> MassFunction:
    total = math.fsum([*singles.values(), theta])
    return MassFunction({a: m / total for a, m in singles.items()}, theta / total, frame, name)


def combine_focal(
    f1: Mapping[frozenset, float], f2: Mapping[frozenset, float]
) -> tuple[dict[frozenset, float], float]:
    """Dempster's rule over arbitrary focal elements, by full intersection tableau.

    Returns the combined focal map and the conflict K.
    """
    cells: dict[frozenset, float] = {}
    k = 0.0
    for (b, mb), (c, mc) in itertools.product(f1.items(), f2.items()):
        inter = b & c
        if inter:
            cells[inter] = cells.get(inter, 0.0) + mb * mc
        else:
            k += mb * mc
    if k >= 1.0 - CONFLICT_TOL:
        raise TotalConflictError(f"total conflict (K={k:.12g})")
    return {s: m / (1.0 - k) for s, m in cells.items()}, k


def ds_combine_tableau(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Reference combination through the explicit tableau; small frames only."""
    if m1.frame != m2.frame:
        raise ValueError("mass functions are defined over different frames")
    if len(m1.frame) > TABLEAU_MAX_FRAME:
        raise ValueError(f"tableau limited to frames of {TABLEAU_MAX_FRAME} candidates")
    cells, _ = combine_focal(m1.focal_elements(), m2.focal_elements())
    whole = frozenset(m1.frame)
    singles, theta = {}, 0.0
    for s, m in cells.items():
        if s == whole:
            theta += m
        elif len(s) == 1:
            (a,) = s
            singles[a] = singles.get(a, 0.0) + m
        else:
            raise AssertionError("unexpected focal element")
    return MassFunction(singles, theta, m1.frame)


def belief(m: MassFunction, subset: Iterable[str]) -> float:
    s = set(subset)
    extra = s - set(m.frame)
    if extra:
        raise ValueError(f"not in frame: {sorted(extra)}")
    total = math.fsum(m[a] for a in s)
    if s == set(m.frame):
        total += m.theta_mass
    return total


def plausibility(m: MassFunction, subset: Iterable[str]) -> float:
    s = set(subset)
    if not s:
        return 0.0
    extra = s - set(m.frame)
    if extra:
        raise ValueError(f"not in frame: {sorted(extra)}")
    return math.fsum(m[a] for a in s) + m.theta_mass


@dataclass
class Combination:
    """Result of folding Dempster's rule over sensors, with diagnostics."""

    mass: MassFunction
    conflicts: list[float]
    ranking: RankedList


def combine_sensors(masses: Sequence[MassFunction], method: str = "combsum") -> Combination:
    if not masses:
        raise ValueError("need at least one mass function")
    acc = masses[0]
    ks = []
    for m in masses[1:]:
        ks.append(conflict(acc, m))
        acc = ds_combine(acc, m)
    ranking = RankedList.from_scores({a: acc[a] for a in acc.frame}, method)
    return Combination(acc, ks, ranking)


def _sensor_order(kind: str) -> int:
    return SENSOR_KINDS.index(kind) if kind in SENSOR_KINDS else len(SENSOR_KINDS)


def multisensor_rank(reports: Sequence[SensorReport]) -> RankedList:
    """Final ranking by combined singleton mass, folding text, profile, citation."""
    if not reports:
        raise ValueError("need at least one sensor report")
    ordered = sorted(reports, key=lambda r: _sensor_order(r.sensor_kind))
    if any(r.mass is None for r in ordered):
        frame = {a for r in ordered for a in r.fused.authors}
        masses = build_mass_functions(
            [(r.fused, r.entropy, r.max_entropy) for r in ordered],
            frame,
            [r.sensor_kind for r in ordered],
        )
    else:
        masses = [r.mass for r in ordered]
    return combine_sensors(masses, ordered[0].fused.method).ranking
