"""Property-based checks of the library's structural invariants."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from bmetric import (
    SemimetricSpace,
    chain_metric,
    polygonal_constant,
    relaxation_constant,
    snowflake,
    validate,
    weak_doubling_constant,
)
from oracles import triple_loop_relaxation


@st.composite
def semimetric_spaces(draw, max_n=7):
    n = draw(st.integers(min_value=2, max_value=max_n))
    entries = draw(
        st.lists(
            st.floats(min_value=0.05, max_value=50.0, allow_nan=False),
            min_size=n * (n - 1) // 2,
            max_size=n * (n - 1) // 2,
        )
    )
    d = np.zeros((n, n))
    it = iter(entries)
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = next(it)
    return SemimetricSpace(tuple(f"p{i}" for i in range(n)), d)


@given(semimetric_spaces())
@settings(max_examples=60, deadline=None)
def test_generated_spaces_validate(space):
    assert validate(space).ok


@given(semimetric_spaces(), st.floats(min_value=0.1, max_value=1.0))
@settings(max_examples=60, deadline=None)
def test_snowflake_preserves_axioms_and_order(space, p):
    out = snowflake(space, p)
    assert validate(out).ok
    flat, powered = space.offdiag(), out.offdiag()
    # x ** p is monotone but can collapse adjacent floats, so the
    # preserved order is non-strict
    for a in range(len(flat)):
        for b in range(len(flat)):
            if flat[a] < flat[b]:
                assert powered[a] <= powered[b]
            if powered[a] < powered[b]:
                assert flat[a] < flat[b]


@given(semimetric_spaces())
@settings(max_examples=40, deadline=None)
def test_relaxation_never_exceeds_polygonal(space):
    # the cheapest chain through the worst triple's midpoint already costs
    # at most the triple's denominator, so c >= K always; chains of three
    # or more edges can push c strictly above K
    K, _ = relaxation_constant(space)
    c, _ = polygonal_constant(space)
    assert K <= c + 1e-9


@given(semimetric_spaces())
@settings(max_examples=40, deadline=None)
def test_relaxation_matches_oracle(space):
    assert relaxation_constant(space)[0] == triple_loop_relaxation(space.dist)[0]


@given(semimetric_spaces(), st.floats(min_value=0.2, max_value=1.0))
@settings(max_examples=30, deadline=None)
def test_snowflake_contracts_relaxation_constant(space, p):
    K, _ = relaxation_constant(space)
    K_p, _ = relaxation_constant(snowflake(space, p))
    assert K_p <= K ** p * (1 + 1e-9)


@given(semimetric_spaces(), st.floats(min_value=0.01, max_value=100.0))
@settings(max_examples=30, deadline=None)
def test_constants_are_scale_free(space, lam):
    scaled = space.rescale(lam)
    assert np.isclose(relaxation_constant(scaled)[0], relaxation_constant(space)[0], rtol=1e-9)
    assert np.isclose(polygonal_constant(scaled)[0], polygonal_constant(space)[0], rtol=1e-9)


@given(semimetric_spaces())
@settings(max_examples=30, deadline=None)
def test_chain_metric_is_sandwiched(space):
    rem = chain_metric(space)
    mask = ~np.eye(space.n, dtype=bool)
    assert (rem.D[mask] <= space.dist[mask]).all()
    assert (space.dist[mask] <= rem.sandwich_hi * rem.D[mask] * (1 + 1e-12)).all()


@given(semimetric_spaces(max_n=6), st.integers(min_value=0, max_value=5))
@settings(max_examples=25, deadline=None)
def test_weak_doubling_subspace_heredity(space, drop_seed):
    if space.n < 3:
        return
    full = weak_doubling_constant(space).value
    drop = drop_seed % space.n
    keep = [i for i in range(space.n) if i != drop]
    assert weak_doubling_constant(space.subspace(keep)).value <= full
