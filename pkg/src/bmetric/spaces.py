"""Finite semimetric spaces: data model, axiom validation, generators and I/O.

A semimetric space is a finite point set with a symmetric, zero-diagonal,
positive off-diagonal distance matrix.  No triangle-type inequality is
assumed anywhere in this module.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .shortest_path import shortest_path_closure


class StructuralError(ValueError):
    """Malformed input (shape/label problems), distinct from an axiom failure."""


@dataclass(frozen=True)
class SemimetricSpace:
    """Finite point set with a distance matrix.

    The constructor checks structure only (square matrix, unique labels,
    matching sizes).  The distance axioms are checked by :func:`validate`.
    """

    labels: tuple[str, ...]
    dist: np.ndarray

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        dist = np.array(self.dist, dtype=float)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise StructuralError(f"distance matrix must be square, got shape {dist.shape}")
        if len(labels) != dist.shape[0]:
            raise StructuralError(
                f"{len(labels)} labels but matrix of order {dist.shape[0]}"
            )
        if len(labels) == 0:
            raise StructuralError("space must contain at least one point")
        if len(set(labels)) != len(labels):
            raise StructuralError("labels must be unique")
        dist.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dist", dist)

    @property
    def n(self) -> int:
        return len(self.labels)

    def offdiag(self) -> np.ndarray:
        """All off-diagonal entries as a flat array (empty for n = 1)."""
        mask = ~np.eye(self.n, dtype=bool)
        return self.dist[mask]

    def diameter(self) -> float:
        return float(self.dist.max())

    def min_distance(self) -> float:
        if self.n < 2:
            return 0.0
        return float(self.offdiag().min())

    def index_of(self, label: str) -> int:
        return self.labels.index(label)

    def subspace(self, indices: Sequence[int]) -> "SemimetricSpace":
        idx = list(indices)
        return SemimetricSpace(
            tuple(self.labels[i] for i in idx), self.dist[np.ix_(idx, idx)]
        )

    def rescale(self, factor: float) -> "SemimetricSpace":
        return SemimetricSpace(self.labels, self.dist * factor)

    def with_dist(self, dist: np.ndarray) -> "SemimetricSpace":
        return SemimetricSpace(self.labels, dist)

    # ---- file formats ----------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {"labels": list(self.labels), "matrix": [list(map(float, row)) for row in self.dist]}
        )

    @classmethod
    def from_json(cls, text: str) -> "SemimetricSpace":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise StructuralError(f"invalid JSON: {exc}") from exc
        if not isinstance(obj, dict) or "labels" not in obj or "matrix" not in obj:
            raise StructuralError('expected object with "labels" and "matrix"')
        return cls(tuple(obj["labels"]), np.array(obj["matrix"], dtype=float))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.labels)
        for row in self.dist:
            w.writerow([f"{x:.17g}" for x in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SemimetricSpace":
        rows = list(csv.reader(io.StringIO(text)))
        rows = [r for r in rows if r]
        if not rows:
            raise StructuralError("empty CSV input")
        labels = tuple(rows[0])
        try:
            matrix = np.array([[float(x) for x in r] for r in rows[1:]], dtype=float)
        except ValueError as exc:
            raise StructuralError(f"non-numeric matrix entry: {exc}") from exc
        if matrix.ndim != 2:
            raise StructuralError("ragged CSV matrix")
        return cls(labels, matrix)


@dataclass(frozen=True)
class ValidationReport:
    """Per-axiom pass/fail with a witness index pair for each failure."""

    s1_ok: bool
    s2_ok: bool
    s1_witness: tuple[int, int] | None = None
    s2_witness: tuple[int, int] | None = None

    @property
    def ok(self) -> bool:
        return self.s1_ok and self.s2_ok


def validate(space: SemimetricSpace, tolerance: float = 0.0) -> ValidationReport:
    """Check the two semimetric axioms: zero-diagonal/positive off-diagonal
    and symmetry.

    tolerance loosens both checks for user-supplied files; generated data is
    validated exactly (tolerance 0).
    """
    d = space.dist
    n = space.n
    s1_ok, s1_wit = True, None
    s2_ok, s2_wit = True, None
    for i in range(n):
        if abs(d[i, i]) > tolerance:
            s1_ok, s1_wit = False, (i, i)
            break
    if s1_ok:
        for i in range(n):
            for j in range(n):
                if i != j and d[i, j] <= tolerance:
                    s1_ok, s1_wit = False, (i, j)
                    break
            if not s1_ok:
                break
    for i in range(n):
        for j in range(i + 1, n):
            if abs(d[i, j] - d[j, i]) > tolerance:
                s2_ok, s2_wit = False, (i, j)
                break
        if not s2_ok:
            break
    return ValidationReport(s1_ok, s2_ok, s1_wit, s2_wit)


def snowflake(space: SemimetricSpace, p: float) -> SemimetricSpace:
    """Raise every distance to the power p (p > 0); axioms are preserved."""
    if p <= 0:
        raise ValueError(f"snowflake exponent must be positive, got {p}")
    return space.with_dist(space.dist ** p)


def enclosing_ball(space: SemimetricSpace, subset: Iterable[int]) -> tuple[int, float]:
    """Center and radius of an open ball containing the whole subset.

    The radius is diam(subset) + 1, which always works for any choice of
    center inside the subset; the smallest index is chosen for determinism.
    """
    idx = sorted(set(int(i) for i in subset))
    if not idx:
        raise ValueError("subset must be nonempty")
    sub = space.dist[np.ix_(idx, idx)]
    return idx[0], float(sub.max()) + 1.0


# ---- generators ---------------------------------------------------------

FAMILIES = (
    "example31",
    "doubling-not-weak",
    "random-bmetric",
    "snowflaked-grid",
    "euclidean-points",
)


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameterized description of a generated space; seed-deterministic."""

    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; known: {', '.join(FAMILIES)}")


def example31(n: int) -> SemimetricSpace:
    """Finite truncation {-n, ..., n} of the hub semimetric on the integers.

    The point 0 sits at distance 1 from every other integer while the
    nonzero integers keep their usual line distances.  The family's
    doubling constant grows without bound in n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    points = list(range(-n, n + 1))
    m = len(points)
    d = np.zeros((m, m))
    for a in range(m):
        for b in range(m):
            x, y = points[a], points[b]
            if x == y:
                d[a, b] = 0.0
            elif x == 0 or y == 0:
                d[a, b] = 1.0
            else:
                d[a, b] = float(abs(x - y))
    return SemimetricSpace(tuple(str(p) for p in points), d)


def doubling_not_weak(n: int, m: int) -> SemimetricSpace:
    """Star metric on m points joined with the naturals {1, ..., n}.

    The star (one hub at distance 1 from m-1 leaves, leaves pairwise at
    distance 2) has doubling constant growing with m.  Naturals i != j are
    at distance max(1/i, 1/j) from each other and each natural i is at
    distance 1/i from every star point.
    """
    if n < 1 or m < 2:
        raise ValueError("need n >= 1 naturals and a star on m >= 2 points")
    star_labels = [f"s{i}" for i in range(m)]
    nat_labels = [str(i) for i in range(1, n + 1)]
    total = m + n
    d = np.zeros((total, total))
    for a in range(m):
        for b in range(m):
            if a == b:
                continue
            d[a, b] = 1.0 if (a == 0 or b == 0) else 2.0
    for i in range(1, n + 1):
        ai = m + i - 1
        for j in range(1, n + 1):
            if i != j:
                d[ai, m + j - 1] = max(1.0 / i, 1.0 / j)
        for b in range(m):
            d[ai, b] = d[b, ai] = 1.0 / i
    return SemimetricSpace(tuple(star_labels + nat_labels), d)


def random_bmetric(n: int, K: float, seed: int) -> SemimetricSpace:
    """Random space whose relaxation constant is guaranteed to be <= K.

    A random metric (shortest-path closure of random positive weights) is
    raised to a power q >= 1.  For a metric, powering by q inflates the
    relaxation constant to at most 2^(q-1), so q = 1 + log2(K) is an
    analytic ceiling; the generator searches down from it in the (never
    yet observed) event the measured constant overshoots.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if K < 1:
        raise ValueError("relaxation target K must be >= 1")
    from .constants import max_triple_ratio  # late import: constants depends on spaces

    rng = np.random.default_rng(seed)
    w = rng.uniform(0.5, 2.0, size=(n, n))
    w = (w + w.T) / 2.0
    np.fill_diagonal(w, 0.0)
    base = shortest_path_closure(w)
    q = 1.0 + math.log2(K)
    for _ in range(64):
        d = base ** q
        ratio, _wit = max_triple_ratio(d)
        if ratio <= K:
            return SemimetricSpace(tuple(f"p{i}" for i in range(n)), d)
        q = 1.0 + (q - 1.0) * 0.9
    raise RuntimeError("could not reach the requested relaxation target")


def snowflaked_grid(k: int, p: float) -> SemimetricSpace:
    """k x k integer grid with Euclidean distances raised to the power p."""
    if k < 1:
        raise ValueError("grid side must be >= 1")
    if p <= 0:
        raise ValueError("power must be positive")
    pts = np.array([(i, j) for i in range(k) for j in range(k)], dtype=float)
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1) ** p
    np.fill_diagonal(d, 0.0)
    labels = tuple(f"{i},{j}" for i in range(k) for j in range(k))
    return SemimetricSpace(labels, d)


def euclidean_points(n: int, dim: int, seed: int) -> SemimetricSpace:
    """n random Gaussian points in R^dim with Euclidean distances."""
    if n < 1 or dim < 1:
        raise ValueError("need n >= 1 points in dimension >= 1")
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((n, dim))
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
    np.fill_diagonal(d, 0.0)
    return SemimetricSpace(tuple(f"p{i}" for i in range(n)), d)


def generate(spec: GeneratorSpec) -> SemimetricSpace:
    """Build the space described by spec; output is fully seed-determined."""
    p = spec.params
    try:
        if spec.family == "example31":
            return example31(int(p["n"]))
        if spec.family == "doubling-not-weak":
            return doubling_not_weak(int(p["n"]), int(p["m"]))
        if spec.family == "random-bmetric":
            return random_bmetric(int(p["n"]), float(p["K"]), int(p.get("seed", 0)))
        if spec.family == "snowflaked-grid":
            return snowflaked_grid(int(p["k"]), float(p.get("p", 1.0)))
        if spec.family == "euclidean-points":
            return euclidean_points(int(p["n"]), int(p.get("dim", 2)), int(p.get("seed", 0)))
    except KeyError as exc:
        raise ValueError(f"family {spec.family!r} is missing parameter {exc}") from exc
    raise ValueError(f"unknown family {spec.family!r}")
