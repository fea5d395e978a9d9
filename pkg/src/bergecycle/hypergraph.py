"""Uniform hypergraphs, Berge walks and the ``.bhg`` text format."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence


class HypergraphError(ValueError):
    """Raised when a hypergraph or a walk violates its invariants."""


class BhgFormatError(HypergraphError):
    """Raised by :func:`parse` on malformed ``.bhg`` text."""


Edge = tuple[int, ...]


@dataclass(frozen=True)
class UniformHypergraph:
    """An r-uniform hypergraph on vertices ``0..n-1``.

    Edges are kept in insertion order; each edge is a strictly increasing
    tuple. Instances are immutable, and the derived lookup tables below are
    computed lazily and cached.
    """

    n: int
    r: int
    edges: tuple[Edge, ...]

    @classmethod
    def build(cls, n: int, r: int, edges: Iterable[Iterable[int]], dedupe: bool = False) -> "UniformHypergraph":
        """Canonicalise ``edges`` (sort each one) and validate the result.

        With ``dedupe`` set, repeated edges are dropped (first occurrence
        wins) instead of raising.
        """
        canon: list[Edge] = []
        seen: set[Edge] = set()
        for e in edges:
            t = tuple(sorted(e))
            if dedupe:
                if t in seen:
                    continue
                seen.add(t)
            canon.append(t)
        h = cls(n, r, tuple(canon))
        problem = validate(h)
        if problem is not None:
            raise HypergraphError(problem)
        return h

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """``incidence[v]`` lists the indices of edges containing ``v``."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            for v in e:
                inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def pair_edges(self) -> dict[tuple[int, int], tuple[int, ...]]:
        """Map ``(u, v)`` with ``u < v`` to the indices of edges containing both."""
        table: dict[tuple[int, int], list[int]] = {}
        for i, e in enumerate(self.edges):
            for pair in combinations(e, 2):
                table.setdefault(pair, []).append(i)
        return {k: tuple(v) for k, v in table.items()}

    def edges_with(self, u: int, v: int) -> tuple[int, ...]:
        if u > v:
            u, v = v, u
        return self.pair_edges.get((u, v), ())

    @cached_property
    def edge_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(e) for e in self.edges)

    @cached_property
    def shadow(self) -> tuple[int, ...]:
        """Adjacency bitmasks of the 2-shadow: ``u ~ v`` iff some edge holds both."""
        adj = [0] * self.n
        for (u, v) in self.pair_edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)


@dataclass(frozen=True)
class DegreeProfile:
    degrees: tuple[int, ...]
    min_degree: int


@dataclass(frozen=True)
class BergeWalk:
    """A Berge path or cycle given as vertex ids and host edge indices.

    A cycle lists ``l`` vertices and ``l`` edges, edge ``i`` joining vertex
    ``i`` to vertex ``i+1 (mod l)``. A path lists ``l+1`` vertices and ``l``
    edges.
    """

    kind: str
    vertices: tuple[int, ...]
    edge_indices: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind not in ("path", "cycle"):
            raise HypergraphError(f"unknown walk kind {self.kind!r}")
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edge_indices", tuple(self.edge_indices))

    @property
    def length(self) -> int:
        return len(self.edge_indices)

    def pairs(self) -> list[tuple[int, int]]:
        """Consecutive vertex pairs in walk order, closing pair included for cycles."""
        vs = self.vertices
        out = [(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]
        if self.kind == "cycle" and vs:
            out.append((vs[-1], vs[0]))
        return out

    def to_json(self) -> dict:
        return {"kind": self.kind, "vertices": list(self.vertices), "edge_indices": list(self.edge_indices)}

    @classmethod
    def from_json(cls, data: dict | str) -> "BergeWalk":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["kind"], tuple(data["vertices"]), tuple(data["edge_indices"]))


def validate(h: UniformHypergraph) -> str | None:
    """Return ``None`` if ``h`` is a valid simple r-uniform hypergraph, else a
    description naming the first offending edge."""
    if h.n < 1:
        return f"vertex count must be positive, got {h.n}"
    if h.r < 1:
        return f"uniformity must be positive, got {h.r}"
    seen: dict[frozenset[int], int] = {}
    for i, e in enumerate(h.edges):
        if len(e) != h.r:
            return f"edge {i} {list(e)}: wrong edge size {len(e)} (expected {h.r})"
        for v in e:
            if not isinstance(v, int) or v < 0 or v >= h.n:
                return f"edge {i} {list(e)}: vertex {v} out of range 0..{h.n - 1}"
        key = frozenset(e)
        if len(key) != len(e):
            return f"edge {i} {list(e)}: repeated vertex inside edge"
        if tuple(sorted(e)) != tuple(e):
            return f"edge {i} {list(e)}: not in canonical sorted order"
        if key in seen:
            return f"edge {i} {list(e)}: duplicate edge (same as edge {seen[key]})"
        seen[key] = i
    return None


def degree_profile(h: UniformHypergraph) -> DegreeProfile:
    degrees = [0] * h.n
    for e in h.edges:
        for v in e:
            degrees[v] += 1
    return DegreeProfile(tuple(degrees), min(degrees))


def min_degree(h: UniformHypergraph) -> int:
    return degree_profile(h).min_degree


def validate_walk(h: UniformHypergraph, w: BergeWalk) -> str | None:
    """Check ``w`` against the Berge definition in ``h``.

    Returns ``None`` when valid. Positions in messages are 1-based, matching
    the usual ``v_1, e_1, v_2, ...`` labelling.
    """
    vs, es = w.vertices, w.edge_indices
    if w.kind == "cycle":
        if len(vs) != len(es):
            return f"cycle lists {len(vs)} vertices but {len(es)} edges"
        if len(vs) < 2:
            return "a cycle needs at least two vertices"
    else:
        if len(vs) != len(es) + 1:
            return f"path lists {len(vs)} vertices but {len(es)} edges"
    for v in vs:
        if v < 0 or v >= h.n:
            return f"vertex {v} out of range"
    for e in es:
        if e < 0 or e >= h.num_edges:
            return f"edge index {e} out of range"
    if len(set(vs)) != len(vs):
        return "repeated vertex"
    if len(set(es)) != len(es):
        return "repeated edge"
    sets = h.edge_sets
    for i, (a, b) in enumerate(w.pairs()):
        e = sets[es[i]]
        if a not in e or b not in e:
            return f"containment failure at position {i + 1}: edge {es[i]} does not contain {{{a}, {b}}}"
    return None


def parse(text: str, strict: bool = True) -> UniformHypergraph:
    """Read ``.bhg`` text.

    First significant line is ``n r``; each further non-empty, non-comment
    line is one edge. Duplicate edges raise unless ``strict`` is off, in
    which case they are dropped.
    """
    header: tuple[int, int] | None = None
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise BhgFormatError(f"line {lineno}: non-integer token in {raw!r}") from None
        if header is None:
            if len(nums) != 2:
                raise BhgFormatError(f"line {lineno}: malformed header {raw!r}, expected 'n r'")
            header = (nums[0], nums[1])
            continue
        if len(nums) != header[1]:
            raise BhgFormatError(f"line {lineno}: wrong arity {len(nums)} (expected {header[1]})")
        e = tuple(sorted(nums))
        if e in seen:
            if strict:
                raise BhgFormatError(f"line {lineno}: duplicate edge {list(e)}")
            continue
        seen.add(e)
        edges.append(e)
    if header is None:
        raise BhgFormatError("missing header line 'n r'")
    h = UniformHypergraph(header[0], header[1], tuple(edges))
    problem = validate(h)
    if problem is not None:
        raise BhgFormatError(problem)
    return h


def serialize(h: UniformHypergraph) -> str:
    lines = [f"{h.n} {h.r}"]
    lines.extend(" ".join(map(str, e)) for e in h.edges)
    return "\n".join(lines) + "\n"


def complete(n: int, r: int) -> UniformHypergraph:
    """The complete r-graph on ``n`` vertices, edges in lexicographic order."""
    return UniformHypergraph(n, r, tuple(combinations(range(n), r)))


def from_edges(n: int, r: int, edges: Sequence[Iterable[int]]) -> UniformHypergraph:
    return UniformHypergraph.build(n, r, edges)
