"""Doubling and weak-doubling constants of finite semimetric spaces.

The doubling constant is the worst minimum number of half-radius open
balls needed to cover an open ball; the weak analog covers arbitrary
bounded sets by sets of at most half their diameter.  Both are computed
exactly at small scale (branch-and-bound set cover) and as brackets
otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .setcover import exact_min_cover, greedy_cover
from .spaces import SemimetricSpace, snowflake

DOUBLING_EXACT_LIMIT = 15
WEAK_EXACT_LIMIT = 12
SANDWICH_RTOL = 1e-9


class SandwichError(ValueError):
    """Pointwise D <= d <= alpha*D precondition failed."""

    def __init__(self, pair: tuple[int, int], message: str):
        self.pair = pair
        super().__init__(message)


@dataclass(frozen=True)
class DoublingReport:
    lower: int
    upper: int
    exact: bool
    witness_center: str
    witness_radius: float
    critical_radii_examined: int
    convention: str = "open"

    @property
    def value(self) -> int:
        if not self.exact:
            raise ValueError("constant is a bracket; use .lower/.upper")
        return self.upper

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "witness_center": self.witness_center,
            "witness_radius": self.witness_radius,
            "critical_radii_examined": self.critical_radii_examined,
            "convention": self.convention,
        }


@dataclass(frozen=True)
class WeakDoublingReport:
    lower: int
    upper: int
    exact: bool
    witness_set: tuple[str, ...]

    @property
    def value(self) -> int:
        if not self.exact:
            raise ValueError("constant is a bracket; use .lower/.upper")
        return self.upper

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "witness_set": list(self.witness_set),
        }


@dataclass(frozen=True)
class CoverResult:
    """Minimum number of half-radius balls covering one target ball."""

    lower: int
    upper: int
    exact: bool
    target_size: int
    chosen_centers: tuple[int, ...] = ()


@dataclass(frozen=True)
class BoundCheck:
    base_lower: int
    base_upper: int
    transformed_lower: int
    transformed_upper: int
    exponent: int
    bound: float
    holds: bool
    exact: bool

    def to_dict(self) -> dict:
        return {
            "base": [self.base_lower, self.base_upper],
            "transformed": [self.transformed_lower, self.transformed_upper],
            "exponent": self.exponent,
            "bound": self.bound,
            "holds": self.holds,
            "exact": self.exact,
        }


def ball(space: SemimetricSpace, center: int, radius: float, closed: bool = False) -> list[int]:
    """Indices of the open (default) or closed ball around center."""
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    row = space.dist[center]
    if closed:
        return [int(i) for i in np.flatnonzero(row <= radius)]
    return [int(i) for i in np.flatnonzero(row < radius)]


def _mask(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


def cover_requirement(
    space: SemimetricSpace, center: int, radius: float, exact_limit: int = DOUBLING_EXACT_LIMIT
) -> CoverResult:
    """Minimum number of open balls of radius/2 (centers anywhere) covering
    the open ball B(center, radius); exact when the target is small enough."""
    target = ball(space, center, radius)
    universe = _mask(target)
    if universe == 0:
        return CoverResult(0, 0, True, 0)
    half = radius / 2.0
    cands = [_mask(ball(space, z, half)) & universe for z in range(space.n)]
    size = len(target)
    if size <= exact_limit:
        chosen = exact_min_cover(universe, cands)
        return CoverResult(len(chosen), len(chosen), True, size, tuple(chosen))
    upper = len(greedy_cover(universe, cands))
    biggest = max((m.bit_count() for m in cands), default=0)
    lower = max(1, -(-size // biggest)) if biggest else size
    return CoverResult(lower, upper, False, size)


def _critical_radii(space: SemimetricSpace, center: int) -> list[float]:
    """Radii at which either the target ball or some half-radius ball can
    change contents: midpoints between consecutive breakpoints plus one
    value past the largest."""
    breaks = {0.0}
    breaks.update(float(v) for v in space.dist[center])
    breaks.update(float(2.0 * v) for v in np.unique(space.dist))
    vals = sorted(breaks)
    radii = [(a + b) / 2.0 for a, b in zip(vals, vals[1:]) if b > a]
    radii.append(vals[-1] + 1.0)
    return radii


def doubling_constant(
    space: SemimetricSpace, exact_limit: int = DOUBLING_EXACT_LIMIT
) -> DoublingReport:
    """Worst-case minimum half-radius ball cover over all centers and all
    critical radii; exact when every worst cell was solved exactly."""
    best_lower, best_upper = 1, 1
    wit_center, wit_radius = 0, 0.0
    cells = 0
    memo: dict[tuple, CoverResult] = {}
    for x in range(space.n):
        for r in _critical_radii(space, x):
            cells += 1
            target = ball(space, x, r)
            if not target:
                continue
            key = (_mask(target), r)
            res = memo.get(key)
            if res is None:
                res = cover_requirement(space, x, r, exact_limit)
                memo[key] = res
            if res.upper > best_upper:
                best_upper = res.upper
                wit_center, wit_radius = x, r
            if res.lower > best_lower:
                best_lower = res.lower
    return DoublingReport(
        lower=best_lower,
        upper=best_upper,
        exact=best_lower == best_upper,
        witness_center=space.labels[wit_center],
        witness_radius=wit_radius,
        critical_radii_examined=cells,
    )


def _maximal_cliques(adj: list[int], subset: int) -> list[int]:
    """Maximal cliques (as bitmasks) of the graph restricted to subset.

    Bron-Kerbosch with pivoting on bitmask adjacency.
    """
    out: list[int] = []
    radj = [adj[i] & subset for i in range(len(adj))]

    def bk(r: int, p: int, x: int) -> None:
        if p == 0 and x == 0:
            out.append(r)
            return
        px = p | x
        pivot = (px & -px).bit_length() - 1
        best_deg = -1
        scan = px
        while scan:
            bit = scan & -scan
            v = bit.bit_length() - 1
            deg = (p & radj[v]).bit_count()
            if deg > best_deg:
                best_deg, pivot = deg, v
            scan &= ~bit
        cand = p & ~radj[pivot]
        while cand:
            bit = cand & -cand
            v = bit.bit_length() - 1
            bk(r | bit, p & radj[v], x & radj[v])
            p &= ~bit
            x |= bit
            cand &= ~bit

    bk(0, subset, 0)
    return out


def _diam_cover_size(space: SemimetricSpace, amask: int, adj: list[int]) -> int:
    """Minimum number of diameter-limited subsets covering the set amask.

    Covering sets may be any subsets of X, but intersecting with the target
    never raises a diameter, so cliques of the threshold graph inside the
    target suffice.
    """
    cliques = _maximal_cliques(adj, amask)
    return len(exact_min_cover(amask, cliques))


def _threshold_adjacency(space: SemimetricSpace, threshold: float) -> list[int]:
    d = space.dist
    n = space.n
    adj = []
    for i in range(n):
        m = 0
        for j in range(n):
            if i != j and d[i, j] <= threshold:
                m |= 1 << j
        adj.append(m)
    return adj


def weak_doubling_constant(
    space: SemimetricSpace,
    exact_limit: int = WEAK_EXACT_LIMIT,
    samples: int = 200,
    seed: int = 0,
) -> WeakDoublingReport:
    """Worst-case minimum cover of a bounded set by sets of at most half
    its diameter.  Exhaustive over all subsets when n <= exact_limit,
    sampled bracket otherwise."""
    n = space.n
    d = space.dist
    if n == 1:
        return WeakDoublingReport(1, 1, True, (space.labels[0],))
    adj_cache: dict[float, list[int]] = {}

    def adj_for(diam: float) -> list[int]:
        t = diam / 2.0
        a = adj_cache.get(t)
        if a is None:
            a = _threshold_adjacency(space, t)
            adj_cache[t] = a
        return a

    def subset_diam(bits: list[int]) -> float:
        sub = d[np.ix_(bits, bits)]
        return float(sub.max())

    if n <= exact_limit:
        best, wit = 1, 1 << 0
        for amask in range(3, 1 << n):
            size = amask.bit_count()
            if size < 2 or size <= best:
                continue
            bits = [i for i in range(n) if amask >> i & 1]
            cover = _diam_cover_size(space, amask, adj_for(subset_diam(bits)))
            if cover > best:
                best, wit = cover, amask
        labels = tuple(space.labels[i] for i in range(n) if wit >> i & 1)
        return WeakDoublingReport(best, best, True, labels)

    # sampling bracket: exact covers of small random subsets give a valid
    # lower bound; a greedy cover of larger samples gives a heuristic upper
    rng = np.random.default_rng(seed)
    lower, upper, wit_bits = 1, 1, [0]
    pool = [list(range(n))] + [
        sorted(rng.choice(n, size=int(rng.integers(2, exact_limit + 1)), replace=False))
        for _ in range(samples)
    ]
    for bits in pool:
        if len(bits) < 2:
            continue
        amask = _mask(bits)
        adj = adj_for(subset_diam(bits))
        if len(bits) <= exact_limit:
            size = _diam_cover_size(space, amask, adj)
            if size > lower:
                lower, wit_bits = size, bits
            upper = max(upper, size)
        else:
            uncovered = amask
            used = 0
            while uncovered:
                bit = uncovered & -uncovered
                v = bit.bit_length() - 1
                grown = bit
                for j in bits:
                    jb = 1 << j
                    if jb & uncovered and not (grown & ~(adj[j] | jb)):
                        grown |= jb
                uncovered &= ~grown
                used += 1
            upper = max(upper, used)
    upper = max(upper, lower)
    labels = tuple(space.labels[i] for i in wit_bits)
    return WeakDoublingReport(lower, upper, False, labels)


def snowflake_doubling_check(
    space: SemimetricSpace, p: float, exact_limit: int = DOUBLING_EXACT_LIMIT
) -> BoundCheck:
    """Check that powering distances by p in (0, 1] raises the doubling
    constant to at most its ceil(1/p)-th power."""
    if not 0 < p <= 1:
        raise ValueError(f"power must lie in (0, 1], got {p}")
    base = doubling_constant(space, exact_limit)
    snow = doubling_constant(snowflake(space, p), exact_limit)
    exponent = math.ceil(1.0 / p)
    bound = float(base.lower) ** exponent
    holds = snow.upper <= bound
    return BoundCheck(
        base_lower=base.lower,
        base_upper=base.upper,
        transformed_lower=snow.lower,
        transformed_upper=snow.upper,
        exponent=exponent,
        bound=bound,
        holds=holds,
        exact=base.exact and snow.exact,
    )


def sandwich_doubling_check(
    space_d: SemimetricSpace,
    space_D: SemimetricSpace,
    alpha: float,
    exact_limit: int = DOUBLING_EXACT_LIMIT,
) -> BoundCheck:
    """Check that a distance sandwiched as D <= d <= alpha*D keeps the
    doubling property, with constant at most C0^N for the smallest N with
    alpha < 2^(N-1)."""
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if space_d.n != space_D.n:
        raise ValueError("spaces must share the same point set")
    d, D = space_d.dist, space_D.dist
    for i in range(space_d.n):
        for j in range(space_d.n):
            if i == j:
                continue
            if D[i, j] > d[i, j] * (1.0 + SANDWICH_RTOL):
                raise SandwichError((i, j), f"D > d at pair ({i}, {j})")
            if d[i, j] > alpha * D[i, j] * (1.0 + SANDWICH_RTOL):
                raise SandwichError((i, j), f"d > alpha*D at pair ({i}, {j})")
    N = 1
    while 2.0 ** (N - 1) <= alpha:
        N += 1
    base = doubling_constant(space_d, exact_limit)
    transformed = doubling_constant(space_D, exact_limit)
    bound = float(base.lower) ** N
    return BoundCheck(
        base_lower=base.lower,
        base_upper=base.upper,
        transformed_lower=transformed.lower,
        transformed_upper=transformed.upper,
        exponent=N,
        bound=bound,
        holds=transformed.upper <= bound,
        exact=base.exact and transformed.exact,
    )
