"""Precision at k, average precision, MAP and the paired randomization test."""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

CUTOFFS = (5, 10, 15, 20)
DEFAULT_DEPTH = 100


def _ids(ranked) -> list[str]:
    """Accept a RankedList or a plain sequence of author ids."""
    entries = getattr(ranked, "entries", ranked)
    return [e[0] if isinstance(e, tuple) else e for e in entries]


def precision_at_k(ranked, relevant: Iterable[str], k: int) -> float:
    if k < 1:
        raise ValueError("k must be at least 1")
    rel = set(relevant)
    return sum(1 for a in _ids(ranked)[:k] if a in rel) / k


def average_precision(ranked, relevant: Iterable[str]) -> float:
    """Sum of precision at each relevant hit, over the total number of relevant."""
    rel = set(relevant)
    if not rel:
        raise ValueError("relevant set must be nonempty")
    hits = 0
    total = 0.0
    for rank, a in enumerate(_ids(ranked), start=1):
        if a in rel:
            hits += 1
            total += hits / rank
    return total / len(rel)


def mean_average_precision(per_query: Sequence[float]) -> float:
    if len(per_query) == 0:
        raise ValueError("cannot average an empty list")
    return math.fsum(per_query) / len(per_query)


def randomization_test(
    scores_a: Sequence[float],
    scores_b: Sequence[float],
    iterations: int = 100_000,
    seed: int = 0,
    exact: bool | None = None,
) -> float:
    """Two-sided paired randomization test on the difference of means.

    Each permutation swaps the two systems' scores on a query with
    probability 1/2. With ``exact`` (default for n <= 12) all 2^n swap
    patterns are enumerated; otherwise the Monte Carlo estimate is
    (hits + 1) / (iterations + 1).
    """
    a = np.asarray(scores_a, dtype=float)
    b = np.asarray(scores_b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    n = a.size
    if n < 2:
        raise ValueError("need at least two paired observations")
    if iterations < 1:
        raise ValueError("iterations must be positive")
    diff = a - b
    observed = abs(diff.mean())
    eps = 1e-12 * max(1.0, observed)
    if exact is None:
        exact = n <= 12
    if exact:
        signs = np.array(list(itertools.product((1.0, -1.0), repeat=n)))
        stats = np.abs(signs @ diff) / n
        return float(np.count_nonzero(stats >= observed - eps) / len(signs))

    rng = np.random.default_rng(seed)
    hits = 0
    remaining = iterations
    while remaining:
        batch = min(remaining, 10_000)
        signs = rng.choice((1.0, -1.0), size=(batch, n))
        stats = np.abs(signs @ diff) / n
        hits += int(np.count_nonzero(stats >= observed - eps))
        remaining -= batch
    return (hits + 1) / (iterations + 1)


# -- judgments and reports ---------------------------------------------------


def load_qrels(path: str | Path) -> dict[str, set[str]]:
    """``query<TAB>author_id`` lines; queries keep first-seen order."""
    qrels: dict[str, set[str]] = {}
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                raise ValueError(f"{path}:{lineno}: expected 'query<TAB>author_id'")
            qrels.setdefault(parts[0].strip(), set()).add(parts[1].strip())
    return qrels


def write_qrels(qrels: dict[str, Iterable[str]], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for query, authors in qrels.items():
            for a in sorted(authors):
                fh.write(f"{query}\t{a}\n")


@dataclass
class QueryResult:
    query: str
    ap: float
    precision: dict[int, float]


@dataclass
class EvalReport:
    rows: list[QueryResult] = field(default_factory=list)

    @property
    def map(self) -> float:
        return mean_average_precision([r.ap for r in self.rows])

    def mean_precision(self, k: int) -> float:
        return math.fsum(r.precision[k] for r in self.rows) / len(self.rows)

    def ap_by_query(self) -> dict[str, float]:
        return {r.query: r.ap for r in self.rows}

    def to_tsv(self) -> str:
        header = ["query", "AP", *(f"P@{k}" for k in CUTOFFS)]
        lines = ["\t".join(header)]
        for r in self.rows:
            lines.append("\t".join([r.query, f"{r.ap:.4f}", *(f"{r.precision[k]:.4f}" for k in CUTOFFS)]))
        if self.rows:
            lines.append(
                "\t".join(["MAP", f"{self.map:.4f}", *(f"{self.mean_precision(k):.4f}" for k in CUTOFFS)])
            )
        return "\n".join(lines) + "\n"


def evaluate_run(
    rankings: dict[str, object], qrels: dict[str, set[str]], depth: int = DEFAULT_DEPTH
) -> EvalReport:
    """Score one ranking per query; queries are reported in qrels order."""
    report = EvalReport()
    for query, relevant in qrels.items():
        ids = _ids(rankings.get(query, ()))[:depth]
        report.rows.append(
            QueryResult(
                query,
                average_precision(ids, relevant),
                {k: precision_at_k(ids, relevant, k) for k in CUTOFFS},
            )
        )
    return report


def read_report(path: str | Path) -> dict[str, float]:
    """Per-query AP from a report written by :meth:`EvalReport.to_tsv`."""
    out: dict[str, float] = {}
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        header = next(reader, None)
        if not header or header[:2] != ["query", "AP"]:
            raise ValueError(f"{path}: not an evaluation report")
        for row in reader:
            if not row or row[0] == "MAP":
                continue
            out[row[0]] = float(row[1])
    return out
