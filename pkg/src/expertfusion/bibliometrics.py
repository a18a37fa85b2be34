"""Hirsch-family and related author impact indices.

All functions take plain per-paper sequences so they can be checked
against brute-force scans independently of the index.
"""

from __future__ import annotations

import math
from typing import Sequence

# Contemporary and trend h-index age-decay parameters.
GAMMA = 4.0
DELTA = 1.0


def _largest_h(scores: Sequence[float]) -> int:
    ordered = sorted(scores, reverse=True)
    h = 0
    for i, s in enumerate(ordered, start=1):
        if s >= i:
            h = i
        else:
            break
    return h


def h_index(citations: Sequence[int]) -> int:
    """Largest h such that h papers have at least h citations each."""
    if any(c < 0 for c in citations):
        raise ValueError("citation counts must be non-negative")
    return _largest_h(citations)


def h_core(citations: Sequence[int]) -> list[int]:
    """Citation counts of the h most-cited papers."""
    return sorted(citations, reverse=True)[: h_index(citations)]


def g_index(citations: Sequence[int]) -> int:
    """Largest g (at most the paper count) whose top-g citations sum to >= g^2."""
    total = 0
    g = 0
    for i, c in enumerate(sorted(citations, reverse=True), start=1):
        total += c
        if total >= i * i:
            g = i
    return g


def a_index(citations: Sequence[int]) -> float:
    core = h_core(citations)
    return sum(core) / len(core) if core else 0.0


def e_index(citations: Sequence[int]) -> float:
    core = h_core(citations)
    h = len(core)
    return math.sqrt(max(sum(core) - h * h, 0))


def contemporary_h_index(
    citations: Sequence[int],
    years: Sequence[int],
    now_year: int,
    gamma: float = GAMMA,
    delta: float = DELTA,
) -> int:
    """h-index over age-discounted scores gamma * (age + 1)^-delta * cites."""
    if len(citations) != len(years):
        raise ValueError("citations and years must align")
    scores = [
        gamma * (max(now_year - y, 0) + 1) ** (-delta) * c
        for c, y in zip(citations, years)
    ]
    return _largest_h(scores)


def trend_h_index(
    citing_years: Sequence[Sequence[int]],
    now_year: int,
    gamma: float = GAMMA,
    delta: float = DELTA,
) -> int:
    """h-index where each citation is discounted by the age of the citing paper.

    ``citing_years[i]`` holds the publication years of the papers citing
    paper i.
    """
    scores = [
        gamma * sum((max(now_year - y, 0) + 1) ** (-delta) for y in ys)
        for ys in citing_years
    ]
    return _largest_h(scores)


def individual_h_index(citations: Sequence[int], author_counts: Sequence[int]) -> float:
    """h^2 divided by the total number of author slots on the h-core papers."""
    if len(citations) != len(author_counts):
        raise ValueError("citations and author_counts must align")
    h = h_index(citations)
    if h == 0:
        return 0.0
    # ties at the h-core boundary keep input order (stable sort)
    order = sorted(range(len(citations)), key=lambda i: -citations[i])[:h]
    slots = sum(author_counts[i] for i in order)
    return h * h / slots
