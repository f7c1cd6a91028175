"""Remetrization of b-metric spaces via the chain (shortest-path) metric.

Three entry points: the plain chain metric (which sandwiches the original
distance within its polygonal constant), a verifier for the squared-constant
bound available when the relaxation constant is at most 2, and a search for
a snowflake exponent p whose chain metric sandwiches d^p within 1 + epsilon.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .constants import relaxation_constant
from .shortest_path import floyd_warshall
from .spaces import SemimetricSpace

P_RESOLUTION = 1e-3
TRIANGLE_RTOL = 1e-9


class FrinkPreconditionError(ValueError):
    """Raised when the squared-constant bound is requested for K > 2."""

    def __init__(self, K: float):
        self.relaxation_K = K
        super().__init__(f"relaxation constant <= 2 required, found {K}")


@dataclass(frozen=True)
class Remetrization:
    """A certified metric D with D <= d^p <= sandwich_hi * D pointwise."""

    p: float
    epsilon_target: float | None
    D: np.ndarray
    sandwich_lo: float
    sandwich_hi: float
    method: str
    search_trace: tuple[tuple[float, float], ...] = ()

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "epsilon": self.epsilon_target,
            "sandwich_lo": self.sandwich_lo,
            "sandwich_hi": self.sandwich_hi,
            "D": [list(map(float, row)) for row in self.D],
            "method": self.method,
            "search_trace": [{"p": p, "c": c} for p, c in self.search_trace],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class FrinkCertificate:
    relaxation_K: float
    worst_ratio: float
    bound: float
    holds: bool

    def to_dict(self) -> dict:
        return {
            "relaxation_K": self.relaxation_K,
            "worst_ratio": self.worst_ratio,
            "bound": self.bound,
            "holds": self.holds,
        }


def _sandwich(powered: np.ndarray, D: np.ndarray) -> tuple[float, float]:
    """(max D/d^p, max d^p/D) over off-diagonal pairs."""
    n = powered.shape[0]
    if n < 2:
        return 1.0, 1.0
    mask = ~np.eye(n, dtype=bool)
    lo = float((D[mask] / powered[mask]).max())
    hi = float((powered[mask] / D[mask]).max())
    return lo, hi


def chain_metric(space: SemimetricSpace) -> Remetrization:
    """Shortest-path closure of d: always a metric, always below d, and
    above d / c where c is the polygonal constant."""
    D, _ = floyd_warshall(space.dist)
    lo, hi = _sandwich(space.dist, D)
    return Remetrization(
        p=1.0,
        epsilon_target=None,
        D=D,
        sandwich_lo=lo,
        sandwich_hi=hi,
        method="chain",
        search_trace=((1.0, hi),),
    )


def frink_verify(space: SemimetricSpace) -> FrinkCertificate:
    """Certify d <= K^2 * D pointwise for the chain metric D (needs K <= 2).

    A violation would falsify the squared-constant bound for the chain
    construction and is reported rather than hidden.
    """
    K, _ = relaxation_constant(space)
    if K > 2.0 + 1e-12:
        raise FrinkPreconditionError(K)
    rem = chain_metric(space)
    bound = K * K
    holds = rem.sandwich_hi <= bound * (1.0 + 1e-12)
    return FrinkCertificate(relaxation_K=K, worst_ratio=rem.sandwich_hi, bound=bound, holds=holds)


def epsilon_remetrize(space: SemimetricSpace, epsilon: float) -> Remetrization:
    """Find p in (0, 1] whose chain metric sandwiches d^p within 1 + epsilon.

    Strategy: accept p = 1 outright if it certifies; otherwise halve p until
    the certificate holds, then bisect toward the largest certified p, stopping
    once it is within P_RESOLUTION of the smallest rejected p.  Termination is
    guaranteed on finite spaces: as p -> 0 all powered distances tend to 1
    while every proper chain sums to at least twice the minimum, so the direct
    edge eventually wins every comparison.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    target = 1.0 + epsilon
    trace: list[tuple[float, float]] = []

    def evaluate(p: float) -> tuple[float, np.ndarray]:
        powered = space.dist ** p
        D, _ = floyd_warshall(powered)
        _, hi = _sandwich(powered, D)
        trace.append((p, hi))
        return hi, D

    hi, D = evaluate(1.0)
    if hi <= target:
        lo, hi2 = _sandwich(space.dist, D)
        return Remetrization(1.0, epsilon, D, lo, hi2, "chain", tuple(trace))

    p_bad = 1.0
    p_good = 0.5
    while True:
        hi, D = evaluate(p_good)
        if hi <= target:
            break
        p_bad = p_good
        p_good /= 2.0
        if p_good < 1e-12:
            raise RuntimeError("snowflake exponent search failed to certify")
    best_p, best_D = p_good, D
    while p_bad - best_p > P_RESOLUTION:
        mid = (best_p + p_bad) / 2.0
        hi, D = evaluate(mid)
        if hi <= target:
            best_p, best_D = mid, D
        else:
            p_bad = mid
    powered = space.dist ** best_p
    lo, hi = _sandwich(powered, best_D)
    return Remetrization(best_p, epsilon, best_D, lo, hi, "chain_after_snowflake", tuple(trace))
