"""Query-time orchestration of sensors, fusion and evidence combination."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .corpus import Index, Query, candidates_for_query
from .evidence import (
    MassFunction,
    SensorReport,
    build_mass_functions,
    combine_sensors,
    sensor_entropy,
)
from .fusion import METHODS, RankedList, fuse
from .sensors import SENSOR_KINDS, EventScoreTable, extract

logger = logging.getLogger(__name__)

EVIDENCE_MODES = ("ds", "plain")
DEFAULT_SENSORS = ("text", "citation")


@dataclass(frozen=True)
class RunConfig:
    sensors: tuple[str, ...] = DEFAULT_SENSORS
    fusion: str = "combsum"
    evidence: str = "ds"
    depth: int = 100
    verbose: bool = False
    seed: int = 0

    def __post_init__(self):
        if not self.sensors:
            raise ValueError("at least one sensor is required")
        unknown = set(self.sensors) - set(SENSOR_KINDS)
        if unknown:
            raise ValueError(f"unknown sensor(s): {', '.join(sorted(unknown))}")
        if self.fusion not in METHODS:
            raise ValueError(f"unknown fusion method {self.fusion!r}")
        if self.evidence not in EVIDENCE_MODES:
            raise ValueError(f"unknown evidence mode {self.evidence!r}")
        if self.depth < 1:
            raise ValueError("depth must be at least 1")
        # canonical fold order, duplicates dropped
        object.__setattr__(
            self, "sensors", tuple(s for s in SENSOR_KINDS if s in set(self.sensors))
        )


@dataclass
class SearchResult:
    query: Query
    ranking: RankedList
    tables: dict[str, EventScoreTable] = field(default_factory=dict)
    reports: list[SensorReport] = field(default_factory=list)
    conflicts: list[float] = field(default_factory=list)
    final_mass: MassFunction | None = None


def plain_aggregate(fused: list[RankedList], method: str) -> RankedList:
    """Fuse per-sensor fused scores once more with the same method."""
    cands = sorted({a for r in fused for a in r.authors})
    cols = [r.scores() for r in fused]
    raw = [[col.get(a, 0.0) for col in cols] for a in cands]
    table = EventScoreTable.from_raw("fused", cands, [f"sensor{i}" for i in range(len(fused))], raw)
    return fuse(table, method)


def search(index: Index, query: Query | str, config: RunConfig = RunConfig()) -> SearchResult:
    q = Query.parse(query) if isinstance(query, str) else query
    cands = candidates_for_query(index, q)
    if not cands:
        logger.warning("no candidates for query %r", q.raw)
        return SearchResult(q, RankedList((), config.fusion))

    tables = {s: extract(s, index, q, cands) for s in config.sensors}
    fused = {s: fuse(t, config.fusion) for s, t in tables.items()}

    if config.evidence == "plain":
        if len(fused) == 1:
            ranking = next(iter(fused.values()))
        else:
            ranking = plain_aggregate(list(fused.values()), config.fusion)
        return SearchResult(q, ranking, tables)

    entropies = {s: sensor_entropy(t) for s, t in tables.items()}
    masses = build_mass_functions(
        [(fused[s], *entropies[s]) for s in config.sensors], cands, list(config.sensors)
    )
    reports = [
        SensorReport(s, fused[s], *entropies[s], mass=m) for s, m in zip(config.sensors, masses)
    ]
    combo = combine_sensors(masses, config.fusion)
    ranking = combo.ranking
    if len(reports) == 1:
        # one mass function is a monotone rescaling of its fused list, so keep
        # that list's own tie-breaks (Condorcet orders equal wins by losses)
        only = reports[0].fused
        ranking = RankedList(tuple((a, combo.mass[a]) for a in only.authors), only.method)
    return SearchResult(q, ranking, tables, reports, combo.conflicts, combo.mass)
