"""Minimum set cover on bitmask-encoded instances.

Exact solving via branch-and-bound with a greedy incumbent; intended for
the small covers that appear in doubling-constant computations (target
sets of a couple dozen elements).
"""

from __future__ import annotations


def greedy_cover(universe: int, masks: list[int]) -> list[int]:
    """Indices of a cover chosen by repeatedly taking the set covering the
    most uncovered elements (ties to the lowest index)."""
    uncovered = universe
    chosen: list[int] = []
    while uncovered:
        best_i, best_gain = -1, 0
        for i, m in enumerate(masks):
            gain = (m & uncovered).bit_count()
            if gain > best_gain:
                best_i, best_gain = i, gain
        if best_i < 0:
            raise ValueError("universe not coverable by the given sets")
        chosen.append(best_i)
        uncovered &= ~masks[best_i]
    return chosen


def _prune_dominated(masks: list[int]) -> list[tuple[int, int]]:
    """Keep one representative per mask and drop masks contained in another.

    Returns (original_index, mask) pairs, lowest original index per kept mask.
    """
    seen: dict[int, int] = {}
    for i, m in enumerate(masks):
        if m and m not in seen:
            seen[m] = i
    items = sorted(seen.items(), key=lambda kv: (-kv[0].bit_count(), kv[1]))
    kept: list[tuple[int, int]] = []
    for m, i in items:
        if any(m | km == km for km, _ in kept):
            continue
        kept.append((m, i))
    return [(i, m) for m, i in kept]


def exact_min_cover(universe: int, masks: list[int]) -> list[int]:
    """Indices of a minimum-cardinality cover of universe; deterministic."""
    if universe == 0:
        return []
    cand = _prune_dominated([m & universe for m in masks])
    if not cand:
        raise ValueError("universe not coverable by the given sets")
    cmasks = [m for _, m in cand]
    corig = [i for i, _ in cand]

    # element -> candidate indices covering it
    elem_sets: dict[int, list[int]] = {}
    u = universe
    while u:
        bit = u & -u
        elem_sets[bit] = [ci for ci, m in enumerate(cmasks) if m & bit]
        if not elem_sets[bit]:
            raise ValueError("universe not coverable by the given sets")
        u &= ~bit

    incumbent = greedy_cover(universe, cmasks)
    best: list[int] = list(incumbent)
    max_size = max(m.bit_count() for m in cmasks)

    def descend(uncovered: int, chosen: list[int]) -> None:
        nonlocal best
        if uncovered == 0:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        # admissible lower bound: remaining elements / largest set size
        need = -(-uncovered.bit_count() // max_size)
        if len(chosen) + need >= len(best):
            return
        # branch on the uncovered element with fewest covering sets
        u, pick, pick_opts = uncovered, 0, None
        while u:
            bit = u & -u
            opts = [ci for ci in elem_sets[bit] if cmasks[ci] & uncovered]
            if pick_opts is None or len(opts) < len(pick_opts):
                pick, pick_opts = bit, opts
                if len(opts) <= 1:
                    break
            u &= ~bit
        if not pick_opts:
            return
        pick_opts.sort(key=lambda ci: (-(cmasks[ci] & uncovered).bit_count(), ci))
        for ci in pick_opts:
            chosen.append(ci)
            descend(uncovered & ~cmasks[ci], chosen)
            chosen.pop()

    descend(universe, [])
    return sorted(corig[ci] for ci in best)
