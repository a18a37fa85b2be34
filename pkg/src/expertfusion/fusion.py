"""Within-sensor rank aggregation: CombSUM, Borda Fuse and Condorcet Fusion."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .sensors import EventScoreTable

METHODS = ("combsum", "borda", "condorcet")


@dataclass(frozen=True)
class RankedList:
    """Candidates ordered by score descending, ties by ascending author id."""

    entries: tuple[tuple[str, float], ...]
    method: str

    @classmethod
    def from_scores(cls, scores: Mapping[str, float], method: str) -> "RankedList":
        ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
        return cls(tuple((a, float(s)) for a, s in ordered), method)

    @property
    def authors(self) -> list[str]:
        return [a for a, _ in self.entries]

    def scores(self) -> dict[str, float]:
        return dict(self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def top(self, k: int) -> "RankedList":
        return RankedList(self.entries[:k], self.method)


def combsum(table: EventScoreTable) -> RankedList:
    totals = table.normalized.sum(axis=1)
    return RankedList.from_scores(dict(zip(table.candidates, totals)), "combsum")


def borda_points(column) -> np.ndarray:
    """Points per candidate for one column: N for first place down to 1 for last.

    Tied candidates share the mean of the points of the positions they span.
    """
    col = np.asarray(column, dtype=float)
    n = len(col)
    order = np.argsort(-col, kind="stable")
    points = np.empty(n)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and col[order[j + 1]] == col[order[i]]:
            j += 1
        # positions i..j (0-based) earn n-i .. n-j points
        points[order[i : j + 1]] = n - (i + j) / 2.0
        i = j + 1
    return points


def borda_fuse(table: EventScoreTable) -> RankedList:
    n = len(table.candidates)
    totals = np.zeros(n)
    for j in range(table.normalized.shape[1]):
        totals += borda_points(table.normalized[:, j])
    return RankedList.from_scores(dict(zip(table.candidates, totals)), "borda")


def pairwise_record(matrix) -> tuple[np.ndarray, np.ndarray]:
    """Condorcet wins and losses per row of a candidates x events matrix."""
    m = np.asarray(matrix, dtype=float)
    # above[a, b] = number of columns where a scores strictly higher than b
    above = (m[:, None, :] > m[None, :, :]).sum(axis=2)
    beats = above > above.T
    return beats.sum(axis=1), beats.sum(axis=0)


def condorcet_order(candidates: Iterable[str], wins, losses) -> list[str]:
    rec = {c: (int(w), int(l)) for c, w, l in zip(candidates, wins, losses)}
    return sorted(rec, key=lambda c: (-rec[c][0], rec[c][1], c))


def condorcet_fuse(table: EventScoreTable) -> RankedList:
    """Rank by pairwise-majority wins, then fewer losses, then author id.

    The reported score is the win count. Ties between candidates with equal
    wins but different losses keep the loss-based order even though their
    scores are equal.
    """
    wins, losses = pairwise_record(table.normalized)
    order = condorcet_order(table.candidates, wins, losses)
    w = dict(zip(table.candidates, wins))
    return RankedList(tuple((c, float(w[c])) for c in order), "condorcet")


FUSERS = {"combsum": combsum, "borda": borda_fuse, "condorcet": condorcet_fuse}


def fuse(table: EventScoreTable, method: str) -> RankedList:
    try:
        return FUSERS[method](table)
    except KeyError:
        raise ValueError(f"unknown fusion method {method!r}; expected one of {METHODS}") from None
