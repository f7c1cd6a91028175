import numpy as np
import pytest

from bmetric import (
    SemimetricSpace,
    ball,
    chain_metric,
    cover_requirement,
    doubling_constant,
    doubling_not_weak,
    euclidean_points,
    example31,
    random_bmetric,
    sandwich_doubling_check,
    snowflake_doubling_check,
    snowflaked_grid,
    weak_doubling_constant,
)
from bmetric.doubling import SandwichError
from conftest import path_graph_metric
from oracles import brute_min_cover, brute_weak_constant


class TestBall:
    def test_hub_ball_covers_everything(self):
        s = example31(5)
        hub = s.index_of("0")
        assert len(ball(s, hub, 1.5)) == s.n

    def test_small_ball_is_singleton(self):
        s = example31(5)
        assert ball(s, s.index_of("3"), 0.75) == [s.index_of("3")]

    def test_zero_radius_open_ball_is_empty(self, triple_114):
        assert ball(triple_114, 0, 0.0) == []

    def test_closed_ball_includes_boundary(self, triple_114):
        assert ball(triple_114, 0, 1.0, closed=True) == [0, 1]
        assert ball(triple_114, 0, 1.0, closed=False) == [0]

    def test_negative_radius_rejected(self, triple_114):
        with pytest.raises(ValueError):
            ball(triple_114, 0, -1.0)


class TestDoublingConstant:
    def test_two_point_space(self):
        s = SemimetricSpace(("a", "b"), np.array([[0, 1], [1, 0]], dtype=float))
        rep = doubling_constant(s)
        assert rep.exact and rep.value == 2

    def test_example31_growth(self):
        values = []
        for n in (3, 5):
            rep = doubling_constant(example31(n), exact_limit=2 * n + 1)
            assert rep.exact
            values.append(rep.value)
            assert rep.value >= 2 * n + 1
        assert values[1] > values[0]

    def test_example31_witness_radius_between_one_and_two(self):
        rep = doubling_constant(example31(3), exact_limit=7)
        assert 1 < rep.witness_radius < 2
        assert rep.witness_center == "0"

    def test_uniform_space_needs_n_singletons(self, uniform6):
        # the critical radius lies in (1, 2): the ball is everything while
        # half-radius balls are singletons
        rep = doubling_constant(uniform6)
        assert rep.exact and rep.value == 6

    def test_exact_cover_matches_brute_force(self):
        s = euclidean_points(8, 2, seed=6)
        for center in range(s.n):
            for radius in (0.8, 1.5, 2.5):
                res = cover_requirement(s, center, radius, exact_limit=8)
                target = ball(s, center, radius)
                if not target:
                    continue
                sets = [ball(s, z, radius / 2) for z in range(s.n)]
                assert res.exact
                assert res.upper == brute_min_cover(target, sets)

    def test_critical_radius_completeness(self):
        rng = np.random.default_rng(0)
        for seed in range(5):
            s = random_bmetric(7, 2.0, seed=seed)
            rep = doubling_constant(s, exact_limit=7)
            top = rep.value
            for _ in range(100):
                r = float(rng.uniform(0.0, 2.2 * s.diameter()))
                if r <= 0:
                    continue
                res = cover_requirement(s, int(rng.integers(s.n)), r, exact_limit=7)
                assert res.upper <= top

    def test_bracket_mode_on_large_targets(self):
        s = snowflaked_grid(5, 1.0)
        rep = doubling_constant(s, exact_limit=4)
        assert rep.lower <= rep.upper
        exact = doubling_constant(s, exact_limit=25)
        assert exact.exact
        assert rep.lower <= exact.value <= rep.upper


class TestWeakDoubling:
    def test_two_point_space(self):
        s = SemimetricSpace(("a", "b"), np.array([[0, 5], [5, 0]], dtype=float))
        rep = weak_doubling_constant(s)
        assert rep.exact and rep.value == 2

    def test_example31_bound_three(self):
        rep = weak_doubling_constant(example31(4))
        assert rep.exact
        assert rep.value <= 3

    def test_uniform_space(self, uniform6):
        rep = weak_doubling_constant(uniform6)
        assert rep.exact and rep.value == 6

    def test_matches_brute_force_enumeration(self):
        for seed in (0, 1):
            s = random_bmetric(5, 2.5, seed=seed)
            rep = weak_doubling_constant(s)
            assert rep.exact
            assert rep.value == brute_weak_constant(s.dist)

    def test_witness_reproduces_value(self):
        s = random_bmetric(6, 2.0, seed=9)
        rep = weak_doubling_constant(s)
        idx = [s.labels.index(lab) for lab in rep.witness_set]
        sub = s.subspace(idx)
        again = weak_doubling_constant(sub)
        assert again.value == rep.value

    def test_subspace_heredity(self):
        s = random_bmetric(7, 2.4, seed=14)
        full = weak_doubling_constant(s).value
        for drop in range(s.n):
            keep = [i for i in range(s.n) if i != drop]
            assert weak_doubling_constant(s.subspace(keep)).value <= full

    def test_metric_consistency_with_doubling(self):
        # for metric inputs both notions stay within a square of each other
        for s in (path_graph_metric(6), euclidean_points(7, 2, seed=3)):
            weak = weak_doubling_constant(s).value
            doub = doubling_constant(s).value
            assert weak <= doub ** 2

    def test_sampling_mode_brackets_exact_value(self):
        s = euclidean_points(9, 2, seed=10)
        exact = weak_doubling_constant(s, exact_limit=9).value
        bracket = weak_doubling_constant(s, exact_limit=6, samples=120, seed=1)
        assert not bracket.exact
        assert bracket.lower <= exact

    def test_doubling_not_weak_family_grows(self):
        small = weak_doubling_constant(doubling_not_weak(2, 3)).value
        large = weak_doubling_constant(doubling_not_weak(2, 7)).value
        assert large > small


class TestSnowflakeDoublingCheck:
    def test_identity_power(self, uniform6):
        check = snowflake_doubling_check(uniform6, 1.0)
        assert check.holds and check.exponent == 1
        assert check.base_upper == check.transformed_upper

    def test_grid_square_root(self):
        check = snowflake_doubling_check(snowflaked_grid(4, 1.0), 0.5, exact_limit=16)
        assert check.exact and check.holds
        assert check.exponent == 2
        assert check.bound == check.base_lower ** 2

    @pytest.mark.parametrize("p", [0.7, 0.5, 0.34])
    def test_random_spaces(self, p):
        for seed in range(4):
            s = euclidean_points(7, 2, seed=seed)
            assert snowflake_doubling_check(s, p).holds

    def test_rejects_bad_power(self, uniform6):
        with pytest.raises(ValueError):
            snowflake_doubling_check(uniform6, 1.5)


class TestSandwichDoublingCheck:
    def test_same_space(self):
        s = euclidean_points(6, 2, seed=1)
        check = sandwich_doubling_check(s, s, alpha=1.0)
        assert check.holds and check.exponent == 2

    def test_uniform_rescale(self):
        base = snowflaked_grid(3, 1.0)
        stretched = base.rescale(1.5)
        check = sandwich_doubling_check(stretched, base, alpha=1.5, exact_limit=9)
        assert check.exact and check.holds
        assert check.exponent == 2

    def test_chain_metric_pair(self):
        s = random_bmetric(10, 2.0, seed=42)
        rem = chain_metric(s)
        alpha = max(1.0, rem.sandwich_hi)
        check = sandwich_doubling_check(s, s.with_dist(rem.D), alpha)
        assert check.holds

    def test_violated_sandwich_raises_with_witness(self):
        s = euclidean_points(5, 2, seed=2)
        inflated = s.rescale(3.0)
        with pytest.raises(SandwichError) as err:
            sandwich_doubling_check(s, inflated, alpha=2.0)
        assert len(err.value.pair) == 2
