"""All-pairs shortest-path closure of a distance matrix with path recovery."""

from __future__ import annotations

import numpy as np


def floyd_warshall(dist: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (D, pred) where D is the min-over-chains closure of dist.

    pred[i, j] is the vertex preceding j on a shortest i->j chain.  Updates
    use strict improvement with ascending pivot order, so ties resolve to
    the chain found first and the output is deterministic.
    """
    D = np.asarray(dist, dtype=float).copy()
    n = D.shape[0]
    pred = np.broadcast_to(np.arange(n)[:, None], (n, n)).copy()
    for k in range(n):
        via = D[:, k][:, None] + D[k, :][None, :]
        better = via < D
        if better.any():
            D = np.where(better, via, D)
            pred = np.where(better, pred[k, :][None, :], pred)
    return D, pred


def shortest_path_closure(dist: np.ndarray) -> np.ndarray:
    return floyd_warshall(dist)[0]


def reconstruct_chain(pred: np.ndarray, i: int, j: int) -> list[int]:
    """Vertex sequence of the shortest i->j chain recorded in pred."""
    if i == j:
        return [i]
    chain = [j]
    guard = pred.shape[0] + 1
    while j != i:
        j = int(pred[i, j])
        chain.append(j)
        guard -= 1
        if guard < 0:
            raise RuntimeError("predecessor matrix contains a cycle")
    chain.reverse()
    return chain
