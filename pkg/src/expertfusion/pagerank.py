"""Power-iteration PageRank over the citation graph."""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np


def pagerank(
    graph: Mapping[str, Sequence[str]],
    damping: float = 0.85,
    tol: float = 1e-8,
    max_iter: int = 100,
) -> dict[str, float]:
    """PageRank of every node in ``graph`` (node -> nodes it cites).

    Nodes that only appear as edge targets are included. Mass sitting on
    dangling nodes is spread uniformly each step.
    """
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must lie in (0, 1)")
    nodes = sorted(set(graph).union(*graph.values()) if graph else ())
    n = len(nodes)
    if n == 0:
        return {}
    pos = {node: i for i, node in enumerate(nodes)}

    src, dst = [], []
    for node, targets in graph.items():
        for t in dict.fromkeys(targets):
            if t != node:
                src.append(pos[node])
                dst.append(pos[t])
    src = np.asarray(src, dtype=np.intp)
    dst = np.asarray(dst, dtype=np.intp)
    out_deg = np.bincount(src, minlength=n).astype(float)
    dangling = out_deg == 0
    weight = np.zeros(len(src))
    if len(src):
        weight = 1.0 / out_deg[src]

    rank = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        new = np.zeros(n)
        np.add.at(new, dst, rank[src] * weight)
        new = damping * (new + rank[dangling].sum() / n) + (1.0 - damping) / n
        delta = np.abs(new - rank).sum()
        rank = new
        if delta < tol:
            break
    rank /= rank.sum()
    return {node: float(rank[i]) for i, node in enumerate(nodes)}
