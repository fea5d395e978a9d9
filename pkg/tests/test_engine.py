import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergecycle import engine
from bergecycle.constructions import gen_h1, gen_random_min_degree, gen_tight_cycle
from bergecycle.engine import (CyclePathPair, PairRank, StaleMoveError, applicable_moves, apply_move, compare,
                               make_pair, rank, validate_pair)
from bergecycle.hypergraph import BergeWalk, UniformHypergraph, complete, validate_walk
from bergecycle.solver import EXHAUSTED, FOUND, find_berge_cycle, find_hamiltonian_cycle


def cyc(vs, es):
    return BergeWalk("cycle", tuple(vs), tuple(es))


def path(vs, es=()):
    return BergeWalk("path", tuple(vs), tuple(es))


# 4-cycle 0,1,2,3 on edges 0..3; edges 4 and 5 let vertex 4 sit between 0 and 1
SQUARE = UniformHypergraph(5, 3, ((0, 1, 2), (1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 4), (1, 3, 4)))


def square_pair():
    return make_pair(SQUARE, cyc((0, 1, 2, 3), (0, 1, 2, 3)), path((4,)))


class TestRank:
    def test_identical(self):
        assert compare(square_pair(), square_pair()) == 0

    def test_cycle_length_first(self):
        h = complete(7, 3)
        big = make_pair(h, cyc((0, 1, 2, 3, 4, 5), (E(h, 0, 1, 6), E(h, 1, 2, 6), E(h, 2, 3, 6), E(h, 3, 4, 6),
                                                     E(h, 4, 5, 6), E(h, 5, 0, 6))), path((6,)))
        small = make_pair(h, cyc((0, 1, 2, 3, 4), (E(h, 0, 1, 2), E(h, 1, 2, 3), E(h, 2, 3, 4), E(h, 3, 4, 0),
                                                   E(h, 4, 0, 1))), path((5, 6), (E(h, 5, 6, 0),)))
        assert compare(big, small) == 1 and compare(small, big) == -1

    def test_path_length_second(self):
        h = complete(8, 3)
        ce = (E(h, 0, 1, 7), E(h, 1, 2, 7), E(h, 2, 0, 7))
        longer = make_pair(h, cyc((0, 1, 2), ce), path((3, 4, 5), (E(h, 3, 4, 6), E(h, 4, 5, 6))))
        shorter = make_pair(h, cyc((0, 1, 2), ce), path((3, 4), (E(h, 3, 4, 6),)))
        assert rank(longer).p_len == 2 and compare(longer, shorter) == 1

    def test_covers(self):
        p = square_pair()
        assert rank(p) == PairRank(4, 0, 0, 0)
        q = make_pair(SQUARE, cyc((0, 1, 2, 3), (4, 1, 2, 3)), path((4,)))
        assert rank(q) == PairRank(4, 0, 1, 0)


def E(h, *vs):
    return h.edges.index(tuple(sorted(vs)))


class TestPairValidation:
    def test_shared_vertex(self):
        bad = CyclePathPair(SQUARE, cyc((0, 1, 2, 3), (0, 1, 2, 3)), path((3,)))
        assert "share a vertex" in validate_pair(bad)

    def test_shared_edge(self):
        h = complete(6, 3)
        c = cyc((0, 1, 2), (E(h, 0, 1, 5), E(h, 1, 2, 5), E(h, 2, 0, 5)))
        assert validate_walk(h, c) is None
        bad = CyclePathPair(h, c, path((3, 4), (E(h, 0, 1, 5),)))
        assert validate_pair(bad) is not None

    def test_empty_path_needs_hamiltonian(self):
        with pytest.raises(ValueError):
            make_pair(SQUARE, cyc((0, 1, 2, 3), (0, 1, 2, 3)), None)


class TestMoves:
    def test_insert_endpoint(self):
        moves = [m for m in applicable_moves(square_pair()) if m.kind == "insert_endpoint"]
        assert moves
        new = apply_move(square_pair(), moves[0])
        assert new.cycle.length == 5 and validate_walk(SQUARE, new.cycle) is None
        assert new.path is None

    def test_extend(self):
        h = UniformHypergraph(7, 3, ((0, 1, 2), (1, 2, 3), (0, 2, 3), (0, 1, 3), (4, 5, 6)))
        pair = make_pair(h, cyc((0, 1, 2, 3), (0, 1, 2, 3)), path((4,)))
        ext = [m for m in applicable_moves(pair) if m.kind == "extend_path"]
        assert ext
        assert rank(apply_move(pair, ext[0])).p_len == 1

    def test_hamiltonian_pair_has_no_moves(self):
        h = gen_tight_cycle(5, 3)
        pair = make_pair(h, cyc((1, 2, 3, 4, 0), (0, 1, 2, 3, 4)), None)
        assert applicable_moves(pair) == []

    def test_absorb_grows_by_path_size(self):
        # cycle 0..3, path 4-5; {0,4,x} and {5,1,x} let the path replace edge 0-1
        h = UniformHypergraph(6, 3, ((0, 1, 2), (1, 2, 3), (0, 2, 3), (0, 1, 3),
                                     (3, 4, 5), (0, 2, 4), (1, 2, 5)))
        pair = make_pair(h, cyc((0, 1, 2, 3), (0, 1, 2, 3)), path((4, 5), (4,)))
        absorb = [m for m in applicable_moves(pair, compound=False) if m.kind == "absorb_path"]
        assert absorb
        best = engine.best_move(absorb)
        new = apply_move(pair, best)
        assert new.cycle.length == 6 and validate_walk(h, new.cycle) is None

    def test_close_cycle(self):
        h = complete(7, 3)
        ce = (E(h, 0, 1, 3), E(h, 1, 2, 3), E(h, 2, 0, 3))
        pv = (3, 4, 5, 6)
        pe = (E(h, 3, 4, 0), E(h, 4, 5, 0), E(h, 5, 6, 0))
        pair = make_pair(h, cyc((0, 1, 2), ce), path(pv, pe))
        close = [m for m in applicable_moves(pair, compound=False) if m.kind == "close_cycle"]
        assert close
        new = apply_move(pair, close[0])
        assert new.cycle.length >= 4

    def test_swap_cover_edge(self):
        # cycle edge 0 = {0,1,2} misses the path vertex 4; edge 4 = {0,1,4} covers it
        pair = square_pair()
        swaps = [m for m in applicable_moves(pair, compound=False) if m.kind == "swap_cover_edge"]
        assert any(m.payload["new"] == 4 for m in swaps)

    def test_stale(self):
        pair = square_pair()
        mv = applicable_moves(pair)[0]
        new = apply_move(pair, mv)
        other = engine.best_move(applicable_moves(pair))
        with pytest.raises(StaleMoveError):
            apply_move(new, other)


class TestProgress:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32))
    def test_every_move_strictly_improves(self, seed):
        rng = random.Random(seed)
        n = rng.randint(5, 8)
        r = rng.randint(3, min(4, n - 1))
        h = gen_random_min_degree(n, r, rng.randint(1, 4), seed)
        pair = engine.random_pair(h, rng)
        if pair is None:
            return
        assert validate_pair(pair) is None
        for mv in applicable_moves(pair):
            new = apply_move(pair, mv)
            assert validate_pair(new) is None
            assert rank(new) > rank(pair)


class TestRun:
    def test_complete(self):
        res = engine.run(complete(6, 3), 6, check=True)
        assert res.status == engine.FOUND and res.cycle.length == 6
        assert validate_walk(complete(6, 3), res.cycle) is None

    def test_tight_cycle(self):
        assert engine.run(gen_tight_cycle(7, 3), 7).status == engine.FOUND

    def test_h1_stuck_and_solver_agrees(self):
        h = gen_h1(9, 3)
        res = engine.run(h, 9, check=True)
        assert res.status == engine.STUCK and validate_pair(res.pair) is None
        assert find_hamiltonian_cycle(h).verdict == EXHAUSTED

    def test_max_steps_flag(self):
        h = gen_random_min_degree(10, 3, 3, seed=12)
        full = engine.run(h, 10)
        assert full.status == engine.FOUND and full.steps > 0
        capped = engine.run(h, 10, max_steps=1)
        assert capped.status == engine.STUCK and capped.max_steps_exceeded

    def test_trace(self):
        res = engine.run(gen_random_min_degree(10, 3, 3, seed=12), 10, trace=True)
        assert res.steps >= 2
        assert len(res.trace) == res.steps
        for row in res.trace:
            assert row["rank_after"] > row["rank_before"]

    @pytest.mark.parametrize("seed", range(20))
    def test_termination_and_soundness(self, seed):
        h = gen_random_min_degree(8, 3, 3, seed)
        res = engine.run(h, 8, check=True)
        assert res.steps <= engine.rank_bound(h)
        if res.status == engine.FOUND:
            assert validate_walk(h, res.cycle) is None

    def test_no_cycle_at_all(self):
        h = UniformHypergraph(5, 3, ((0, 1, 2),))
        res = engine.run(h, 3)
        assert res.status == engine.STUCK and res.pair is None
        assert find_berge_cycle(h, 3).verdict != FOUND
