from math import ceil, comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergecycle.constructions import (ConstructionError, ConstructionSpec, gen_h1, gen_h2, gen_h3, gen_h4, gen_h5,
                                      gen_random_min_degree, gen_tight_cycle)
from bergecycle.hypergraph import degree_profile, validate
from bergecycle.thresholds import t_of


def delta(h):
    return degree_profile(h).min_degree


small_r_grid = [(n, r) for n in range(7, 13) for r in (3, 4) if r <= t_of(n)]
large_r_grid = [(n, r) for n in range(5, 11) for r in range(max(3, ceil(n / 2)), n)]


class TestH1:
    def test_odd_example(self):
        h = gen_h1(9, 3)
        assert h.num_edges == 20 and delta(h) == 6

    def test_even_bridge(self):
        h = gen_h1(10, 3)
        assert delta(h) == 6
        assert (0, 5, 6) in h.edges
        assert h.num_edges == 2 * comb(5, 3) + 1

    @pytest.mark.parametrize("n,r", small_r_grid)
    def test_degree_exact(self, n, r):
        assert delta(gen_h1(n, r)) == comb(t_of(n), r - 1)

    def test_r_too_big(self):
        with pytest.raises(ConstructionError):
            gen_h1(9, 5)


class TestH2:
    def test_example(self):
        h = gen_h2(7, 3)
        assert h.num_edges == 13 and delta(h) == 3

    @pytest.mark.parametrize("n,r", small_r_grid)
    def test_degree_exact_and_y_independent(self, n, r):
        h = gen_h2(n, r)
        t = t_of(n)
        assert delta(h) == comb(t, r - 1)
        assert all(sum(v >= t for v in e) <= 1 for e in h.edges)


class TestH3:
    def test_example(self):
        h = gen_h3(7, 4)
        assert h.num_edges == 6 and delta(h) == 3

    @pytest.mark.parametrize("n,r", large_r_grid)
    def test_invariants(self, n, r):
        h = gen_h3(n, r)
        assert h.num_edges == n - 1 and delta(h) == r - 1

    def test_small_r_refused(self):
        with pytest.raises(ConstructionError):
            gen_h3(9, 3)


class TestH4:
    def test_example(self):
        h = gen_h4(13, 3, 6)
        assert delta(h) == 6 and h.num_edges == 3 * comb(5, 3)

    def test_nine_three_six(self):
        # k = 6 = t + 2 here, outside the extremal range, so only the
        # relaxed generator accepts it
        with pytest.raises(ConstructionError):
            gen_h4(9, 3, 6)
        h = gen_h4(9, 3, 6, strict=False)
        assert h.num_edges == 20

    @pytest.mark.parametrize("n,r,k", [(13, 3, 5), (13, 3, 6), (13, 4, 6), (10, 3, 5), (17, 3, 6), (17, 4, 6)])
    def test_degree_exact(self, n, r, k):
        assert delta(gen_h4(n, r, k)) == comb(k - 2, r - 1)

    def test_divisibility(self):
        with pytest.raises(ConstructionError, match="divisible"):
            gen_h4(12, 3, 6)


class TestH5:
    def test_example(self):
        assert delta(gen_h5(13, 4, 4)) == 2

    def test_per_block_edges(self):
        h = gen_h5(9, 4, 5)
        for block in ({1, 2, 3, 4}, {5, 6, 7, 8}):
            assert sum(1 for e in h.edges if set(e) - {0} <= block) == 4

    @pytest.mark.parametrize("n,r,k", [(13, 4, 4), (13, 4, 5), (13, 3, 3), (13, 3, 4), (9, 4, 3), (7, 3, 4)])
    def test_degree_exact(self, n, r, k):
        h = gen_h5(n, r, k)
        assert delta(h) == k - 2
        assert all(0 in e for e in h.edges)

    def test_range(self):
        with pytest.raises(ConstructionError):
            gen_h5(13, 4, 6)


class TestTightCycle:
    def test_regular(self):
        h = gen_tight_cycle(7, 4)
        assert h.num_edges == 7 and set(degree_profile(h).degrees) == {4}
        assert set(degree_profile(gen_tight_cycle(6, 3)).degrees) == {3}


class TestRandom:
    def test_sparse(self):
        h = gen_random_min_degree(8, 3, 0, seed=1)
        assert validate(h) is None

    def test_floor(self):
        assert delta(gen_random_min_degree(8, 3, 7, seed=42)) >= 7

    def test_deterministic(self):
        assert gen_random_min_degree(8, 3, 7, seed=42) == gen_random_min_degree(8, 3, 7, seed=42)

    def test_unreachable(self):
        with pytest.raises(ConstructionError):
            gen_random_min_degree(6, 3, 11, seed=0)

    def test_min_edges(self):
        assert gen_random_min_degree(9, 5, 2, seed=3, min_edges=9).num_edges >= 9

    @settings(max_examples=60, deadline=None)
    @given(st.integers(4, 10).flatmap(lambda n: st.tuples(st.just(n), st.integers(2, n - 1))),
           st.integers(0, 60), st.integers(0, 2**32))
    def test_always_valid_and_meets_floor(self, nr, d, seed):
        n, r = nr
        d = min(d, comb(n - 1, r - 1))
        h = gen_random_min_degree(n, r, d, seed)
        assert validate(h) is None and delta(h) >= d


class TestConstructionSpec:
    def test_build_and_metadata(self):
        spec = ConstructionSpec("h4", 13, 3, k=6)
        meta = spec.metadata()
        assert delta(spec.build()) == meta["expected_min_degree"] == 6
        assert meta["expected_circumference"] == 5

    def test_missing_params(self):
        with pytest.raises(ConstructionError):
            ConstructionSpec("h5", 13, 4).build()
        with pytest.raises(ConstructionError):
            ConstructionSpec("random_min_degree", 8, 3).build()
        with pytest.raises(ConstructionError):
            ConstructionSpec("h9", 8, 3).build()
