"""Structural constants classifying a finite semimetric space.

The relaxation constant is the worst ratio d(x,z) / (d(x,y) + d(y,z)) over
ordered triples of distinct points; the relaxed-polygonal constant is the
worst ratio of a distance to its shortest-chain replacement.  Both are 1
exactly when the space is a metric space.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .shortest_path import floyd_warshall, reconstruct_chain
from .spaces import SemimetricSpace

METRIC_TOL = 1e-12


@dataclass(frozen=True)
class ConstantsReport:
    relaxation_K: float
    polygonal_c: float
    is_metric: bool
    witness_triple: tuple[str, ...] | None
    witness_chain: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "relaxation_K": self.relaxation_K,
            "polygonal_c": self.polygonal_c,
            "is_metric": self.is_metric,
            "witness_triple": list(self.witness_triple) if self.witness_triple else None,
            "witness_chain": list(self.witness_chain),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def max_triple_ratio(dist: np.ndarray) -> tuple[float, tuple[int, int, int] | None]:
    """Largest d[i,k] / (d[i,j] + d[j,k]) over ordered triples of distinct
    indices, with the lexicographically smallest attaining triple."""
    n = dist.shape[0]
    if n <= 2:
        return 0.0, None
    num = np.broadcast_to(dist[:, None, :], (n, n, n))
    denom = dist[:, :, None] + dist[None, :, :]
    idx = np.arange(n)
    distinct = (
        (idx[:, None, None] != idx[None, :, None])
        & (idx[None, :, None] != idx[None, None, :])
        & (idx[:, None, None] != idx[None, None, :])
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(distinct, num / denom, -np.inf)
    flat = int(np.argmax(ratio))  # first occurrence in C order = lexicographic
    i, j, k = np.unravel_index(flat, ratio.shape)
    return float(ratio[i, j, k]), (int(i), int(j), int(k))


def relaxation_constant(space: SemimetricSpace) -> tuple[float, tuple[int, int, int] | None]:
    """Smallest K >= 1 such that d(x,z) <= K (d(x,y) + d(y,z)) for all
    triples, with the witness triple when K > 1 (None when clamped to 1)."""
    ratio, wit = max_triple_ratio(space.dist)
    if ratio <= 1.0:
        return 1.0, None
    return ratio, wit


def polygonal_constant(space: SemimetricSpace) -> tuple[float, list[int]]:
    """Smallest c such that every distance is at most c times the cheapest
    chain between its endpoints; returns c and the minimizing chain of the
    maximizing pair."""
    d = space.dist
    n = space.n
    if n < 2:
        return 1.0, [0]
    D, pred = floyd_warshall(d)
    mask = ~np.eye(n, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(mask, d / D, -np.inf)
    flat = int(np.argmax(ratio))
    i, j = np.unravel_index(flat, ratio.shape)
    c = max(1.0, float(ratio[i, j]))
    return c, reconstruct_chain(pred, int(i), int(j))


def constants_report(space: SemimetricSpace) -> ConstantsReport:
    K, triple = relaxation_constant(space)
    c, chain = polygonal_constant(space)
    return ConstantsReport(
        relaxation_K=K,
        polygonal_c=c,
        is_metric=K <= 1.0 + METRIC_TOL,
        witness_triple=tuple(space.labels[i] for i in triple) if triple else None,
        witness_chain=tuple(space.labels[i] for i in chain),
    )
