"""Cycle/path exchange heuristic.

State is a pair ``(C, P)``: a Berge cycle ``C`` and a Berge path ``P`` that
shares no vertex and no edge with it. Pairs are ranked lexicographically by

1. ``|E(C)|``,
2. ``|E(P)|``,
3. the number of incidences between ``V(P)`` and the edges of ``C``,
4. the number of incidences between ``V(P)`` and the edges of ``P``,

and the engine only ever moves to a strictly higher rank, so it terminates.

Move catalogue
--------------
``extend_path``        prepend an outside vertex to an end of ``P`` via an unused edge
``close_cycle``        a stretch of ``P`` closes into a cycle longer than ``C``
``insert_endpoint``    an end of ``P`` goes between two consecutive cycle vertices
``insert_vertex``      same for any other vertex off ``C``
``absorb_path``        a stretch of ``P`` replaces a shorter arc of ``C``
``swap_cover_edge``    swap a cycle or path edge for an unused one covering more of ``V(P)``
``rotate_path``        re-root ``P`` at an interior vertex (same length), then improve
``rotate_cycle_start`` trade the first vertex of ``P`` (or a vertex of ``C``) for an
                       outside vertex in the same edges, then improve

The last two rarely raise the rank by themselves; they are offered as
compound moves whose second half strictly improves the pair.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .hypergraph import BergeWalk, UniformHypergraph, validate_walk

log = logging.getLogger(__name__)

FOUND = "found"
STUCK = "stuck"


class StaleMoveError(ValueError):
    pass


class PairRank(NamedTuple):
    c_len: int
    p_len: int
    cover_c: int
    cover_p: int


@dataclass(frozen=True)
class CyclePathPair:
    host: UniformHypergraph = field(repr=False, compare=False)
    cycle: BergeWalk
    path: BergeWalk | None  # None only when C covers every vertex

    def key(self) -> tuple:
        p = self.path
        return (self.cycle.vertices, self.cycle.edge_indices,
                p.vertices if p else (), p.edge_indices if p else ())

    def to_json(self) -> dict:
        return {"cycle": self.cycle.to_json(), "path": self.path.to_json() if self.path else None,
                "rank": list(rank(self))}


@dataclass(frozen=True)
class Move:
    kind: str
    payload: dict = field(compare=False)
    source: tuple = field(repr=False)
    result: CyclePathPair = field(repr=False, compare=False)

    @property
    def gain(self) -> PairRank:
        return rank(self.result)

    @property
    def touched_min(self) -> int:
        t = self.payload.get("touched", ())
        return min(t) if t else -1


def _rank_raw(h: UniformHypergraph, ce: Sequence[int], pv: Sequence[int], pe: Sequence[int]) -> PairRank:
    sets = h.edge_sets
    pset = set(pv)
    cover_c = sum(len(sets[e] & pset) for e in ce)
    cover_p = sum(len(sets[e] & pset) for e in pe)
    return PairRank(len(ce), len(pe), cover_c, cover_p)


def rank(pair: CyclePathPair) -> PairRank:
    p = pair.path
    return _rank_raw(pair.host, pair.cycle.edge_indices, p.vertices if p else (), p.edge_indices if p else ())


def compare(a: CyclePathPair, b: CyclePathPair) -> int:
    """1 if ``a`` is the better pair, -1 if ``b`` is, 0 if they tie on every criterion."""
    ra, rb = rank(a), rank(b)
    return (ra > rb) - (ra < rb)


def validate_pair(pair: CyclePathPair) -> str | None:
    h = pair.host
    c, p = pair.cycle, pair.path
    if c.kind != "cycle" or c.length < 3:
        return "pair cycle must be a cycle of length >= 3"
    problem = validate_walk(h, c)
    if problem:
        return f"cycle: {problem}"
    if p is None:
        if len(c.vertices) != h.n:
            return "empty path while vertices remain off the cycle"
        return None
    if p.kind != "path":
        return "pair path must be a path"
    problem = validate_walk(h, p)
    if problem:
        return f"path: {problem}"
    if set(c.vertices) & set(p.vertices):
        return "cycle and path share a vertex"
    if set(c.edge_indices) & set(p.edge_indices):
        return "cycle and path share an edge"
    return None


def make_pair(h: UniformHypergraph, cycle: BergeWalk, path: BergeWalk | None) -> CyclePathPair:
    pair = CyclePathPair(h, cycle, path)
    problem = validate_pair(pair)
    if problem:
        raise ValueError(problem)
    return pair


# -- construction helpers -----------------------------------------------------

def _cut(fragment: tuple[Sequence[int], Sequence[int]], cset: set[int], ceset: set[int]):
    """Maximal sub-paths of ``fragment`` avoiding cycle vertices and edges."""
    vs, es = fragment
    runs = []
    cur_v: list[int] = []
    cur_e: list[int] = []
    for i, v in enumerate(vs):
        if v in cset:
            if cur_v:
                runs.append((cur_v, cur_e))
            cur_v, cur_e = [], []
            continue
        if cur_v and es[i - 1] in ceset:
            runs.append((cur_v, cur_e))
            cur_v, cur_e = [], []
        if cur_v:
            cur_e.append(es[i - 1])
        cur_v.append(v)
    if cur_v:
        runs.append((cur_v, cur_e))
    return runs


def _assemble(h: UniformHypergraph, cv: list[int], ce: list[int],
              fragments: Sequence[tuple[Sequence[int], Sequence[int]]]) -> CyclePathPair:
    """Pair with cycle ``(cv, ce)`` and the best path found among the pieces of
    ``fragments`` left over once the cycle is removed, or a single outside
    vertex if no piece survives."""
    cset, ceset = set(cv), set(ce)
    best = None
    best_key = None
    for frag in fragments:
        for pv, pe in _cut(frag, cset, ceset):
            key = (_rank_raw(h, ce, pv, pe), tuple(-v for v in pv))
            if best_key is None or key > best_key:
                best, best_key = (pv, pe), key
    sets = h.edge_sets
    for v in range(h.n):
        if v in cset:
            continue
        key = (PairRank(len(ce), 0, sum(v in sets[e] for e in ce), 0), (-v,))
        if best_key is None or key > best_key:
            best, best_key = ([v], []), key
    cycle = BergeWalk("cycle", tuple(cv), tuple(ce))
    if best is None:
        return CyclePathPair(h, cycle, None)
    return CyclePathPair(h, cycle, BergeWalk("path", tuple(best[0]), tuple(best[1])))


def _cycle_as_fragments(cv: Sequence[int], ce: Sequence[int]):
    s = len(cv)
    for t in range(s):
        vs = [cv[(t + i) % s] for i in range(s)]
        es = [ce[(t + i) % s] for i in range(s - 1)]
        yield vs, es


# -- move enumeration ---------------------------------------------------------

class _State:
    """Unpacked pair for move enumeration."""

    def __init__(self, pair: CyclePathPair):
        self.pair = pair
        self.h = pair.host
        self.cv = list(pair.cycle.vertices)
        self.ce = list(pair.cycle.edge_indices)
        self.pv = list(pair.path.vertices) if pair.path else []
        self.pe = list(pair.path.edge_indices) if pair.path else []
        self.cset = set(self.cv)
        self.ceset = set(self.ce)
        self.pset = set(self.pv)
        self.peset = set(self.pe)
        self.used = self.ceset | self.peset
        self.free = [v for v in range(self.h.n) if v not in self.cset and v not in self.pset]

    def orientations(self):
        if len(self.pv) <= 1:
            return [(self.pv, self.pe)]
        return [(self.pv, self.pe), (self.pv[::-1], self.pe[::-1])]


def _same_path_pair(h, cv, ce, pv, pe) -> CyclePathPair:
    return CyclePathPair(h, BergeWalk("cycle", tuple(cv), tuple(ce)),
                         BergeWalk("path", tuple(pv), tuple(pe)) if pv else None)


def _primary_moves(st: _State) -> list[tuple[str, dict, CyclePathPair]]:
    h = st.h
    cv, ce, pv, pe = st.cv, st.ce, st.pv, st.pe
    s = len(cv)
    out: list[tuple[str, dict, CyclePathPair]] = []
    path_frag = [(pv, pe)] if pv else []

    # extend_path: outside vertex w joins an end of P through an unused edge
    for ov, oe in st.orientations():
        if not ov:
            continue
        u = ov[0]
        for e in h.incidence[u]:
            if e in st.used:
                continue
            for w in h.edges[e]:
                if w in st.cset or w in st.pset:
                    continue
                res = _same_path_pair(h, cv, ce, [w] + ov, [e] + oe)
                out.append(("extend_path", {"end": u, "vertex": w, "edge": e, "touched": [u, w]}, res))

    # close_cycle: u_i .. u_j plus a closing edge beats |C|
    if len(pv) > s:
        for i in range(len(pv)):
            for j in range(i + max(s, 2), len(pv)):
                seg_e = set(pe[i:j])
                for g in h.edges_with(pv[i], pv[j]):
                    if g in seg_e:
                        continue
                    new_cv, new_ce = pv[i:j + 1], pe[i:j] + [g]
                    res = _assemble(h, new_cv, new_ce, path_frag + list(_cycle_as_fragments(cv, ce)))
                    out.append(("close_cycle", {"from": pv[i], "to": pv[j], "edge": g,
                                                "length": len(new_cv), "touched": [pv[i], pv[j]]}, res))
                    break

    # insert a single off-cycle vertex between consecutive cycle vertices
    ends = {pv[0], pv[-1]} if pv else set()
    for x in range(h.n):
        if x in st.cset:
            continue
        for a in range(s):
            va, vb = cv[a], cv[(a + 1) % s]
            blocked = st.ceset - {ce[a]}
            pick = _two_edges(h, va, x, x, vb, blocked)
            if pick is None:
                continue
            g1, g2 = pick
            new_cv = cv[:a + 1] + [x] + cv[a + 1:]
            new_ce = ce[:a] + [g1, g2] + ce[a + 1:]
            res = _assemble(h, new_cv, new_ce, path_frag)
            kind = "insert_endpoint" if x in ends else "insert_vertex"
            out.append((kind, {"vertex": x, "between": [va, vb], "edges": [g1, g2],
                               "touched": [x, va, vb]}, res))

    # absorb_path: u_i..u_j replaces the arc v_a .. v_b (d edges, d <= j - i + 1)
    for ov, oe in st.orientations():
        m = len(ov)
        for i in range(m):
            for j in range(i + 1, m):
                seg_len = j - i + 1
                seg_v, seg_e = ov[i:j + 1], oe[i:j]
                for a in range(s):
                    for d in range(1, min(seg_len, s - 1) + 1):
                        b = (a + d) % s
                        kept_e = [ce[(b + t) % s] for t in range(s - d)]
                        blocked = set(kept_e) | set(seg_e)
                        pick = _two_edges(h, cv[a], ov[i], ov[j], cv[b], blocked)
                        if pick is None:
                            continue
                        g1, g2 = pick
                        kept_v = [cv[(b + t) % s] for t in range(s - d + 1)]
                        new_cv = kept_v + seg_v
                        new_ce = kept_e + [g1] + seg_e + [g2]
                        arc = ([cv[(a + 1 + t) % s] for t in range(d - 1)],
                               [ce[(a + 1 + t) % s] for t in range(max(d - 2, 0))])
                        res = _assemble(h, new_cv, new_ce, [(ov, oe), arc])
                        out.append(("absorb_path", {"segment": seg_v, "arc_from": cv[a], "arc_to": cv[b],
                                                    "edges": [g1, g2], "touched": sorted({*seg_v, cv[a], cv[b]})},
                                    res))

    # swap_cover_edge: unused edge covering more of V(P)
    sets = h.edge_sets
    if st.pset:
        for i in range(s):
            cur = len(sets[ce[i]] & st.pset)
            for g in h.edges_with(cv[i], cv[(i + 1) % s]):
                if g in st.used or len(sets[g] & st.pset) <= cur:
                    continue
                new_ce = ce[:i] + [g] + ce[i + 1:]
                res = _same_path_pair(h, cv, new_ce, pv, pe)
                out.append(("swap_cover_edge", {"on": "cycle", "position": i, "old": ce[i], "new": g,
                                                "touched": [cv[i], cv[(i + 1) % s]]}, res))
        for i in range(len(pv) - 1):
            cur = len(sets[pe[i]] & st.pset)
            for g in h.edges_with(pv[i], pv[i + 1]):
                if g in st.used or len(sets[g] & st.pset) <= cur:
                    continue
                new_pe = pe[:i] + [g] + pe[i + 1:]
                res = _same_path_pair(h, cv, ce, pv, new_pe)
                out.append(("swap_cover_edge", {"on": "path", "position": i, "old": pe[i], "new": g,
                                                "touched": [pv[i], pv[i + 1]]}, res))
    return out


def _two_edges(h: UniformHypergraph, a: int, b: int, c: int, d: int, blocked: set[int]):
    """Lowest-index distinct edges ``g1 >= {a, b}`` and ``g2 >= {c, d}`` outside ``blocked``."""
    first = [g for g in h.edges_with(a, b) if g not in blocked]
    if not first:
        return None
    second = [g for g in h.edges_with(c, d) if g not in blocked]
    for g1 in first:
        for g2 in second:
            if g2 != g1:
                return g1, g2
    return None


def _neutral_steps(st: _State) -> list[tuple[str, dict, CyclePathPair]]:
    """Restructurings that keep ``|E(C)|`` and ``|E(P)|``."""
    h = st.h
    cv, ce = st.cv, st.ce
    out: list[tuple[str, dict, CyclePathPair]] = []
    # rotate_path: u_1 joins u_{i+1} through f_i or an unused edge; new first vertex u_i
    for ov, oe in st.orientations():
        m = len(ov)
        for i in range(1, m - 1):
            options = [oe[i]] if ov[0] in h.edge_sets[oe[i]] else []
            options += [g for g in h.edges_with(ov[0], ov[i + 1]) if g not in st.used]
            for g in options[:2]:
                new_pv = ov[i::-1] + ov[i + 1:]
                new_pe = oe[i - 1::-1] + [g] + oe[i + 1:]
                res = _same_path_pair(h, cv, ce, new_pv, new_pe)
                out.append(("rotate_path", {"pivot": ov[i], "edge": g, "touched": [ov[0], ov[i]]}, res))
    # rotate_cycle_start: swap the first path vertex for an outside vertex in f_1
    for ov, oe in st.orientations():
        if not ov:
            continue
        if len(ov) == 1:
            cands = st.free
        else:
            cands = [w for w in h.edges[oe[0]] if w in st.free]
        for w in cands:
            res = _same_path_pair(h, cv, ce, [w] + ov[1:], oe)
            out.append(("rotate_cycle_start", {"on": "path", "old": ov[0], "new": w, "touched": [ov[0], w]}, res))
    # ... or a cycle vertex for an outside vertex lying in both its cycle edges
    s = len(cv)
    sets = h.edge_sets
    for i in range(s):
        both = sets[ce[i - 1]] & sets[ce[i]]
        for w in sorted(both):
            if w in st.free:
                new_cv = cv[:i] + [w] + cv[i + 1:]
                res = _same_path_pair(h, new_cv, ce, st.pv, st.pe)
                out.append(("rotate_cycle_start", {"on": "cycle", "old": cv[i], "new": w,
                                                   "touched": [cv[i], w]}, res))
    return out


def _wrap(pair: CyclePathPair, kind: str, payload: dict, result: CyclePathPair) -> Move:
    return Move(kind, payload, pair.key(), result)


def applicable_moves(pair: CyclePathPair, compound: bool = True) -> list[Move]:
    """Every catalogued move that strictly improves ``pair``.

    With ``compound`` the neutral restructurings are expanded one level: each
    is followed by every primary move of the restructured pair, and kept when
    the end result beats ``pair``.
    """
    if pair.path is None:
        return []
    base = rank(pair)
    st = _State(pair)
    moves = [_wrap(pair, k, p, r) for (k, p, r) in _primary_moves(st) if rank(r) > base]
    if compound:
        for kind, payload, mid in _neutral_steps(st):
            if rank(mid) > base:
                moves.append(_wrap(pair, kind, payload, mid))
            for k2, p2, res in _primary_moves(_State(mid)):
                if rank(res) > base:
                    p = dict(payload)
                    p["then"] = {"kind": k2, **{key: val for key, val in p2.items() if key != "touched"}}
                    p["touched"] = sorted(set(payload.get("touched", ())) | set(p2.get("touched", ())))
                    moves.append(_wrap(pair, kind, p, res))
    return moves


def apply_move(pair: CyclePathPair, move: Move) -> CyclePathPair:
    if move.source != pair.key():
        raise StaleMoveError("move was enumerated for a different pair")
    result = CyclePathPair(pair.host, move.result.cycle, move.result.path)
    problem = validate_pair(result)
    if problem:
        raise ValueError(f"{move.kind} produced an invalid pair: {problem}")
    if not rank(result) > rank(pair):
        raise ValueError(f"{move.kind} did not improve the pair")
    return result


def best_move(moves: Sequence[Move]) -> Move | None:
    """Highest resulting rank; ties go to the move touching the lowest vertex id."""
    best = None
    best_key = None
    for mv in moves:
        key = (mv.gain, -mv.touched_min)
        if best_key is None or key > best_key:
            best, best_key = mv, key
    return best


# -- initial pair ------------------------------------------------------------

def greedy_path(h: UniformHypergraph, start: int) -> tuple[list[int], list[int]]:
    """Grow a Berge path from ``start`` in both directions, always stepping to
    the outside vertex of smallest degree (then smallest id)."""
    deg = [len(x) for x in h.incidence]
    pv, pe = [start], []
    on = {start}
    used: set[int] = set()
    for _ in range(2):
        while True:
            tail = pv[-1]
            best = None
            for e in h.incidence[tail]:
                if e in used:
                    continue
                for w in h.edges[e]:
                    if w in on:
                        continue
                    key = (deg[w], w, e)
                    if best is None or key < best:
                        best = key
            if best is None:
                break
            _, w, e = best
            pv.append(w)
            pe.append(e)
            on.add(w)
            used.add(e)
        pv.reverse()
        pe.reverse()
    return pv, pe


def initial_pair(h: UniformHypergraph) -> CyclePathPair | None:
    """Greedy path, then its longest closable stretch as the first cycle."""
    order = sorted(range(h.n), key=lambda v: (len(h.incidence[v]), v))
    for start in order:
        pv, pe = greedy_path(h, start)
        best = None
        for i in range(len(pv)):
            for j in range(i + 2, len(pv)):
                seg_e = set(pe[i:j])
                for g in h.edges_with(pv[i], pv[j]):
                    if g not in seg_e:
                        if best is None or j - i > best[1] - best[0]:
                            best = (i, j, g)
                        break
        if best is not None:
            i, j, g = best
            return _assemble(h, pv[i:j + 1], pe[i:j] + [g], [(pv, pe)])
    return None


@dataclass
class EngineResult:
    status: str
    cycle: BergeWalk | None
    pair: CyclePathPair | None
    steps: int
    max_steps_exceeded: bool = False
    trace: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "cycle": self.cycle.to_json() if self.cycle else None,
            "pair": self.pair.to_json() if self.pair else None,
            "steps": self.steps,
            "max_steps_exceeded": self.max_steps_exceeded,
            "trace": self.trace,
        }


def rank_bound(h: UniformHypergraph) -> int:
    """Coarse count of distinct ranks, hence of improving steps."""
    n, r = h.n, h.r
    return (n + 1) ** 2 * (r * n + 1) ** 2


def run(h: UniformHypergraph, target_k: int, max_steps: int | None = None,
        trace: bool = False, check: bool = False) -> EngineResult:
    """Improve pairs until the cycle reaches ``target_k`` or nothing applies.

    Compound moves are only consulted when no primary move lengthens the
    cycle. ``check`` re-validates every intermediate pair.
    """
    if max_steps is None:
        max_steps = rank_bound(h)
    pair = initial_pair(h)
    steps = 0
    log_rows: list[dict] = []
    if pair is None:
        return EngineResult(STUCK, None, None, 0, trace=log_rows)
    while True:
        if check:
            problem = validate_pair(pair)
            if problem:
                raise AssertionError(problem)
        if pair.cycle.length >= target_k:
            return EngineResult(FOUND, pair.cycle, pair, steps, trace=log_rows)
        if steps >= max_steps:
            return EngineResult(STUCK, None, pair, steps, max_steps_exceeded=True, trace=log_rows)
        before = rank(pair)
        moves = applicable_moves(pair, compound=False)
        mv = best_move(moves)
        if mv is None or mv.gain.c_len <= before.c_len:
            extra = [m for m in applicable_moves(pair, compound=True) if m.kind in ("rotate_path", "rotate_cycle_start")]
            mv = best_move(moves + extra)
        if mv is None:
            return EngineResult(STUCK, None, pair, steps, trace=log_rows)
        pair = apply_move(pair, mv)
        steps += 1
        if trace:
            log_rows.append({"step": steps, "kind": mv.kind, "rank_before": list(before),
                             "rank_after": list(rank(pair))})
        log.debug("step %d: %s %s -> %s", steps, mv.kind, tuple(before), tuple(rank(pair)))


def random_pair(h: UniformHypergraph, rng, max_tries: int = 8) -> CyclePathPair | None:
    """A valid but otherwise arbitrary pair, for fuzzing.

    The cycle comes from a randomized solver run; the path is a random walk
    through unused edges started at a random vertex off the cycle.
    """
    from .solver import FOUND as SOLVED, SearchBudget, find_berge_cycle

    top = min(h.n, h.num_edges)
    for _ in range(max_tries):
        if top < 3:
            return None
        k = rng.randint(3, top)
        out = find_berge_cycle(h, k, SearchBudget(node_limit=2000), seed_order=rng.randrange(1 << 30))
        if out.verdict != SOLVED:
            continue
        cycle = out.witness
        off = [v for v in range(h.n) if v not in set(cycle.vertices)]
        if not off:
            return CyclePathPair(h, cycle, None)
        used = set(cycle.edge_indices)
        on = set(cycle.vertices)
        pv = [rng.choice(off)]
        pe: list[int] = []
        on.add(pv[0])
        target = rng.randint(0, len(off) - 1)
        for _ in range(2):
            while len(pe) < target:
                steps = [(w, e) for e in h.incidence[pv[-1]] if e not in used
                         for w in h.edges[e] if w not in on]
                if not steps:
                    break
                w, e = rng.choice(steps)
                pv.append(w)
                pe.append(e)
                on.add(w)
                used.add(e)
            pv.reverse()
            pe.reverse()
        return CyclePathPair(h, cycle, BergeWalk("path", tuple(pv), tuple(pe)))
    return None
