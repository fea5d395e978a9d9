"""Exact search for Berge cycles and paths.

The search walks vertex sequences depth first. A sequence extends to a
Berge walk iff its consecutive pairs can be given pairwise distinct host
edges, i.e. iff the bipartite graph (pairs x edges) has a matching
saturating the pairs. That matching is kept incrementally: pushing a pair
runs one augmenting-path search, popping a pair just frees its edge (a
matching restricted to fewer pairs is still a matching).

Two shadow-graph prunes sit on top. A flood fill checks that the open end
can still get back to the anchor through unused vertices, and, for hard
anchors, a subset dynamic programme over the 2-shadow rules out cycle
lengths (and hamiltonian completions) that the shadow cannot even host.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Sequence

from .hypergraph import BergeWalk, UniformHypergraph, validate_walk

FOUND = "found"
EXHAUSTED = "exhausted"
BUDGET_EXCEEDED = "budget_exceeded"

# nodes an anchor may use before the shadow DP is built for it
_DP_TRIGGER = 256
# the DP table has 2**(free vertices) entries per anchor
_DP_MAX_FREE = 16
# randomized restarts: node caps _RESTART_BASE * 2**j for j < _RESTARTS
_RESTART_BASE = 1024
_RESTARTS = 6


@dataclass(frozen=True)
class SearchBudget:
    node_limit: int | None = None
    time_limit: float | None = None

    def __post_init__(self) -> None:
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node_limit must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")


@dataclass
class SolveOutcome:
    verdict: str
    witness: BergeWalk | None = None
    nodes_explored: int = 0
    reason: str | None = None

    def to_json(self) -> dict:
        d = {"verdict": self.verdict, "nodes_explored": self.nodes_explored}
        d["witness"] = self.witness.to_json() if self.witness else None
        if self.reason:
            d["reason"] = self.reason
        return d


class _BudgetExceeded(Exception):
    pass


class _Abandon(Exception):
    """Internal: the current anchor was shown infeasible mid-search."""


def pair_matching_feasible(pairs: Sequence[tuple[int, int]], h: UniformHypergraph) -> bool:
    """True iff every pair can be given its own (pairwise distinct) edge of ``h``
    containing it."""
    return match_pairs(pairs, h) is not None


def match_pairs(pairs: Sequence[tuple[int, int]], h: UniformHypergraph) -> list[int] | None:
    """Kuhn's augmenting-path matching of pairs to distinct containing edges.

    Returns one edge index per pair, or ``None`` when no such assignment exists.
    """
    cands = [h.edges_with(u, v) for (u, v) in pairs]
    owner: dict[int, int] = {}
    assign = [-1] * len(pairs)

    def augment(p: int, seen: set[int]) -> bool:
        for e in cands[p]:
            if e in seen:
                continue
            seen.add(e)
            q = owner.get(e)
            if q is None or augment(q, seen):
                owner[e] = p
                assign[p] = e
                return True
        return False

    for p in range(len(pairs)):
        if not augment(p, set()):
            return None
    return assign


class _Search:
    """Mutable DFS state for one solve call on one hypergraph."""

    def __init__(self, h: UniformHypergraph, budget: SearchBudget | None, seed_order: int | None = None):
        self.h = h
        self.n = h.n
        self.m_edges = h.num_edges
        self.budget = budget or SearchBudget()
        self.deadline = None if self.budget.time_limit is None else time.monotonic() + self.budget.time_limit
        self.nodes = 0
        n = h.n
        pe = [[() for _ in range(n)] for _ in range(n)]
        for (u, v), es in h.pair_edges.items():
            pe[u][v] = es
            pe[v][u] = es
        self.pe = pe
        self.shadow = h.shadow
        if seed_order is None:
            tiebreak = list(range(n))
        else:
            tiebreak = list(range(n))
            random.Random(seed_order).shuffle(tiebreak)
        # fail-first: fewest containing edges first, then vertex id (or seeded order)
        self.nbrs = [sorted((w for w in range(n) if pe[x][w]), key=lambda w, x=x: (len(pe[x][w]), tiebreak[w]))
                     for x in range(n)]
        self.owner = [-1] * self.m_edges
        self.assign: list[int] = []
        self.cands: list[tuple[int, ...]] = []
        self.seen = [0] * self.m_edges
        self.stamp = 0
        self.dp_cache: dict[tuple[int, int], tuple[list[int], int, dict[int, int]] | None] = {}

    # budget -------------------------------------------------------------
    def tick(self) -> None:
        self.nodes += 1
        lim = self.budget.node_limit
        if lim is not None and self.nodes > lim:
            raise _BudgetExceeded
        if self.deadline is not None and (self.nodes & 1023) == 0 and time.monotonic() > self.deadline:
            raise _BudgetExceeded

    # matching -----------------------------------------------------------
    def _augment(self, p: int) -> bool:
        stamp = self.stamp
        seen = self.seen
        owner = self.owner
        for e in self.cands[p]:
            if seen[e] == stamp:
                continue
            seen[e] = stamp
            q = owner[e]
            if q < 0 or self._augment(q):
                owner[e] = p
                self.assign[p] = e
                return True
        return False

    def push_pair(self, u: int, v: int) -> bool:
        cands = self.pe[u][v]
        p = len(self.cands)
        self.cands.append(cands)
        self.assign.append(-1)
        owner = self.owner
        for e in cands:
            if owner[e] < 0:
                owner[e] = p
                self.assign[p] = e
                return True
        self.stamp += 1
        if self._augment(p):
            return True
        self.cands.pop()
        self.assign.pop()
        return False

    def pop_pair(self) -> None:
        e = self.assign.pop()
        self.cands.pop()
        self.owner[e] = -1

    def reset(self) -> None:
        while self.cands:
            self.pop_pair()

    # shadow DP ----------------------------------------------------------
    def shadow_dp(self, anchor: int, allowed: int) -> tuple[list[int], int, dict[int, int]] | None:
        """Subset DP over the shadow restricted to ``allowed``.

        Returns ``(ends, cycle_lengths, index)``. Subsets of ``allowed`` are
        encoded on relative bit positions given by ``index``; ``ends[S]`` is
        the (relative) mask of end vertices ``v`` of shadow paths that start
        at ``anchor`` and visit exactly ``S + {anchor}``. ``cycle_lengths``
        has bit ``L`` set iff the shadow has a cycle of length ``L >= 3``
        through ``anchor`` inside ``allowed + {anchor}``. ``None`` when the
        table would be too big.
        """
        key = (anchor, allowed)
        if key in self.dp_cache:
            return self.dp_cache[key]
        verts = [v for v in range(self.n) if allowed >> v & 1]
        if len(verts) > _DP_MAX_FREE:
            self.dp_cache[key] = None
            return None
        idx = {v: i for i, v in enumerate(verts)}
        shadow = self.shadow
        # local adjacency (relative bit positions)
        ladj = [0] * len(verts)
        for v, i in idx.items():
            m = 0
            for w in verts:
                if shadow[v] >> w & 1:
                    m |= 1 << idx[w]
            ladj[i] = m
        start = 0
        for v, i in idx.items():
            if shadow[anchor] >> v & 1:
                start |= 1 << i
        size = 1 << len(verts)
        ends = [0] * size
        for i in range(len(verts)):
            if start >> i & 1:
                ends[1 << i] = 1 << i
        cyc = 0
        popcount = int.bit_count
        for mask in range(1, size):
            e = ends[mask]
            if not e:
                continue
            if e & start:
                L = popcount(mask) + 1
                if L >= 3:
                    cyc |= 1 << L
            x = e
            while x:
                low = x & -x
                i = low.bit_length() - 1
                x ^= low
                ext = ladj[i] & ~mask
                while ext:
                    b = ext & -ext
                    ext ^= b
                    ends[mask | b] |= b
        res = (ends, cyc, idx)
        self.dp_cache[key] = res
        return res


def _flood(shadow: Sequence[int], src: int, region: int) -> int:
    """Vertices of ``region`` reachable from ``src`` through ``region`` in the shadow."""
    reached = 0
    frontier = shadow[src] & region
    while frontier:
        reached |= frontier
        nxt = 0
        f = frontier
        while f:
            b = f & -f
            f ^= b
            nxt |= shadow[b.bit_length() - 1]
        frontier = nxt & region & ~reached
    return reached


class _CycleSearch(_Search):
    def run(self, k: int, at_least: bool) -> BergeWalk | None:
        n = self.n
        limit = min(n, self.m_edges)
        for a in range(n):
            allowed = ((1 << n) - 1) & ~((1 << (a + 1)) - 1)
            if allowed.bit_count() + 1 < k:
                break
            first_nodes = self.nodes
            self.dp = None
            self.a = a
            try:
                w = self._anchor(a, allowed, k, at_least, limit, trigger=first_nodes + _DP_TRIGGER)
            except _Abandon:
                self.reset()
                w = None
            if w is not None:
                return w
        return None

    def _anchor(self, a, allowed, k, at_least, limit, trigger):
        self.trigger = trigger
        self.path = [a]
        self.k = k
        self.at_least = at_least
        self.limit = limit
        self.allowed = allowed
        return self._dfs(a, 1 << a)

    def _enable_dp(self) -> None:
        a, k = self.a, self.k
        dp = self.shadow_dp(a, self.allowed)
        self.trigger = None
        if dp is None:
            return
        self.dp = dp
        cyc = dp[1]
        if self.at_least:
            ok = cyc >> k != 0
        else:
            ok = bool(cyc >> k & 1)
        if not ok:
            raise _Abandon

    def _dfs(self, x: int, visited: int):
        self.tick()
        if self.trigger is not None and self.nodes >= self.trigger:
            self._enable_dp()
        path = self.path
        m = len(path)
        a = path[0]
        k = self.k
        # try to close
        if m >= k and m >= 3 and path[1] < x:
            if self.push_pair(x, a):
                return self._witness()
        if m == self.limit or (not self.at_least and m == k):
            return None
        free = self.allowed & ~visited
        need = k - m  # vertices still required before closing
        if need > 0:
            reach = _flood(self.shadow, x, free)
            if reach.bit_count() < need or not (self.shadow[a] & reach):
                return None
            if self.dp is not None and m > 1 and need == free.bit_count():
                ends, _, idx = self.dp
                rel = 0
                for v in _bits(free | (1 << x)):
                    rel |= 1 << idx[v]
                if not (ends[rel] >> idx[x] & 1):
                    return None
        for w in self.nbrs[x]:
            if not (free >> w & 1):
                continue
            if m + 1 == k and not self.at_least:
                # last vertex: must see the anchor and respect the orientation
                if not (self.shadow[w] >> a & 1) or w < path[1]:
                    continue
            if not self.push_pair(x, w):
                continue
            path.append(w)
            res = self._dfs(w, visited | (1 << w))
            if res is not None:
                return res
            path.pop()
            self.pop_pair()
        return None

    def _witness(self) -> BergeWalk:
        return BergeWalk("cycle", tuple(self.path), tuple(self.assign))


def _bits(mask: int):
    while mask:
        b = mask & -mask
        mask ^= b
        yield b.bit_length() - 1


def _relabel(h: UniformHypergraph, rng: random.Random) -> tuple[UniformHypergraph, list[int]]:
    """Copy of ``h`` under a random vertex permutation; edge indices are kept."""
    perm = list(range(h.n))
    rng.shuffle(perm)
    edges = tuple(tuple(sorted(perm[v] for v in e)) for e in h.edges)
    inv = [0] * h.n
    for v, p in enumerate(perm):
        inv[p] = v
    return UniformHypergraph(h.n, h.r, edges), inv


def find_berge_cycle(h: UniformHypergraph, k: int, budget: SearchBudget | None = None,
                     at_least: bool = False, seed_order: int | None = None,
                     restarts: bool = True) -> SolveOutcome:
    """Decide whether ``h`` has a Berge cycle of length exactly ``k``
    (or ``>= k`` with ``at_least``).

    Backtracking run times are heavy-tailed, so with ``restarts`` the search
    first runs under node caps of 1024, 2048, ... on randomly relabelled
    copies of ``h`` before a last uncapped run. Every run is complete on its
    own, so a capped run that finishes gives the final answer either way.
    """
    limit = min(h.n, h.num_edges)
    if k < 3 or k > limit:
        return SolveOutcome(EXHAUSTED, None, 0, reason=f"k={k} outside 3..min(n, |E|)={limit}")
    budget = budget or SearchBudget()
    deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit
    schedule: list[int | None] = [_RESTART_BASE << j for j in range(_RESTARTS)] if restarts else []
    schedule.append(None)
    rng = random.Random(seed_order)
    total = 0
    for j, cap in enumerate(schedule):
        left = None if budget.node_limit is None else budget.node_limit - total
        if left is not None and left <= 0:
            break
        node_cap = left if cap is None else (cap if left is None else min(cap, left))
        time_left = None if deadline is None else max(deadline - time.monotonic(), 1e-9)
        view, inv = (h, None) if j == 0 else _relabel(h, rng)
        s = _CycleSearch(view, SearchBudget(node_cap, time_left), seed_order)
        try:
            w = s.run(k, at_least)
        except _BudgetExceeded:
            total += s.nodes
            if deadline is not None and time.monotonic() >= deadline:
                break
            continue
        total += s.nodes
        if w is None:
            return SolveOutcome(EXHAUSTED, None, total)
        if inv is not None:
            w = BergeWalk("cycle", tuple(inv[v] for v in w.vertices), w.edge_indices)
        return SolveOutcome(FOUND, w, total)
    return SolveOutcome(BUDGET_EXCEEDED, None, total, reason="search budget exceeded")


def find_hamiltonian_cycle(h: UniformHypergraph, budget: SearchBudget | None = None) -> SolveOutcome:
    return find_berge_cycle(h, h.n, budget)


def circumference(h: UniformHypergraph, budget: SearchBudget | None = None) -> tuple[int, SolveOutcome]:
    """Length of a longest Berge cycle (0 if there is none of length >= 3).

    Tries ``k = min(n, |E|), ..., 3`` in turn. On budget exhaustion the
    returned outcome has verdict ``budget_exceeded`` and the length is only
    a lower bound (0 if nothing was found yet).
    """
    total = 0
    deadline = None if budget is None or budget.time_limit is None else time.monotonic() + budget.time_limit
    for k in range(min(h.n, h.num_edges), 2, -1):
        sub = budget
        if budget is not None:
            left_nodes = None if budget.node_limit is None else budget.node_limit - total
            left_time = None if deadline is None else deadline - time.monotonic()
            if (left_nodes is not None and left_nodes <= 0) or (left_time is not None and left_time <= 0):
                return 0, SolveOutcome(BUDGET_EXCEEDED, None, total, reason=f"budget exhausted before k={k}")
            sub = SearchBudget(left_nodes, left_time)
        out = find_berge_cycle(h, k, sub)
        total += out.nodes_explored
        out.nodes_explored = total
        if out.verdict == FOUND:
            return k, out
        if out.verdict == BUDGET_EXCEEDED:
            out.reason = f"budget exceeded while deciding k={k}; value is a lower bound"
            return 0, out
    return 0, SolveOutcome(EXHAUSTED, None, total)


class _PathSearch(_Search):
    def run(self) -> BergeWalk:
        n = self.n
        cap = min(n - 1, self.m_edges)
        self.best = BergeWalk("path", (0,), ()) if n else None
        self.best_len = 0
        for s in range(n):
            if self.best_len >= cap:
                break
            self.path = [s]
            self.cap = cap
            self._dfs(s, 1 << s)
        return self.best

    def _dfs(self, x: int, visited: int) -> None:
        self.tick()
        path = self.path
        length = len(path) - 1
        if length > self.best_len:
            self.best_len = length
            self.best = BergeWalk("path", tuple(path), tuple(self.assign))
            if length >= self.cap:
                return
        free = ((1 << self.n) - 1) & ~visited
        reach = _flood(self.shadow, x, free)
        if length + min(reach.bit_count(), self.m_edges - length) <= self.best_len:
            return
        for w in self.nbrs[x]:
            if not (free >> w & 1):
                continue
            if not self.push_pair(x, w):
                continue
            path.append(w)
            self._dfs(w, visited | (1 << w))
            path.pop()
            self.pop_pair()
            if self.best_len >= self.cap:
                return


def longest_berge_path(h: UniformHypergraph, budget: SearchBudget | None = None) -> tuple[int, SolveOutcome]:
    """Maximum number of edges in a Berge path (0 for an edgeless hypergraph)."""
    s = _PathSearch(h, budget)
    try:
        w = s.run()
    except _BudgetExceeded:
        w = s.best
        return s.best_len, SolveOutcome(BUDGET_EXCEEDED, w, s.nodes, reason="budget exceeded; value is a lower bound")
    return s.best_len, SolveOutcome(FOUND, w, s.nodes)


def brute_circumference(h: UniformHypergraph) -> int:
    """Reference circumference by plain enumeration (``n <= 8`` only).

    Every vertex subset, every cyclic order of it, and every assignment of
    edges to the consecutive pairs is tried. Shares no code with the search
    above.
    """
    if h.n > 8:
        raise ValueError(f"brute_circumference refuses n={h.n} > 8")
    edge_sets = [set(e) for e in h.edges]

    def containing(u: int, v: int) -> list[int]:
        return [i for i, e in enumerate(edge_sets) if u in e and v in e]

    def assignable(options: list[list[int]], used: set[int], i: int) -> bool:
        if i == len(options):
            return True
        for e in options[i]:
            if e not in used:
                used.add(e)
                if assignable(options, used, i + 1):
                    return True
                used.discard(e)
        return False

    for k in range(min(h.n, len(h.edges)), 2, -1):
        for subset in combinations(range(h.n), k):
            head, rest = subset[0], subset[1:]
            for perm in permutations(rest):
                if perm[0] > perm[-1]:
                    continue
                order = (head, *perm)
                options = [containing(order[i], order[(i + 1) % k]) for i in range(k)]
                if any(not o for o in options):
                    continue
                if assignable(options, set(), 0):
                    return k
    return 0


def check_witness(h: UniformHypergraph, outcome: SolveOutcome) -> None:
    """Raise ``AssertionError`` if a ``found`` outcome carries an invalid witness."""
    if outcome.verdict == FOUND:
        assert outcome.witness is not None, "found without witness"
        problem = validate_walk(h, outcome.witness)
        assert problem is None, problem
