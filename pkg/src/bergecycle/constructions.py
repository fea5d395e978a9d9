"""Deterministic extremal constructions and a seeded random generator.

``h1`` .. ``h5`` are the sharpness examples for the degree thresholds in
:mod:`bergecycle.thresholds`; ``tight_cycle`` is the r-regular tight cycle
that ``h3`` is cut from.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from itertools import combinations
from math import comb

from .hypergraph import UniformHypergraph
from .thresholds import t_of


class ConstructionError(ValueError):
    pass


FAMILIES = ("h1", "h2", "h3", "h4", "h5", "tight_cycle", "random_min_degree")


def _cliques(blocks: list[list[int]], r: int) -> list[tuple[int, ...]]:
    edges: list[tuple[int, ...]] = []
    for block in blocks:
        edges.extend(combinations(sorted(block), r))
    return edges


def _require_small_r(n: int, r: int) -> None:
    if r < 3:
        raise ConstructionError(f"need r >= 3, got {r}")
    if r > t_of(n):
        raise ConstructionError(f"need r <= t = {t_of(n)} (n={n}), got r={r}")


def gen_h1(n: int, r: int) -> UniformHypergraph:
    """Two r-cliques glued at vertex 0 (n odd), or two disjoint cliques plus
    the bridge ``{0, n/2, ..., n/2 + r - 2}`` (n even)."""
    _require_small_r(n, r)
    if n % 2:
        m = (n + 1) // 2
        edges = _cliques([list(range(m)), [0, *range(m, n)]], r)
    else:
        m = n // 2
        edges = _cliques([list(range(m)), list(range(m, n))], r)
        edges.append((0, *range(m, m + r - 1)))
    return UniformHypergraph(n, r, tuple(edges))


def gen_h2(n: int, r: int) -> UniformHypergraph:
    """All r-sets with at most one vertex in ``Y = {t, ..., n-1}``."""
    _require_small_r(n, r)
    t = t_of(n)
    edges = [e for e in combinations(range(n), r) if sum(v >= t for v in e) <= 1]
    return UniformHypergraph(n, r, tuple(edges))


def _windows(n: int, r: int, starts) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(sorted((i + j) % n for j in range(r))) for i in starts)


def gen_tight_cycle(n: int, r: int) -> UniformHypergraph:
    if not (3 <= r < n):
        raise ConstructionError(f"need 3 <= r < n, got n={n}, r={r}")
    return UniformHypergraph(n, r, _windows(n, r, range(n)))


def gen_h3(n: int, r: int) -> UniformHypergraph:
    """Tight cycle with the window starting at vertex 0 removed."""
    if not (2 * r >= n and 3 <= r < n):
        raise ConstructionError(f"need n/2 <= r < n and r >= 3, got n={n}, r={r}")
    return UniformHypergraph(n, r, _windows(n, r, range(1, n)))


def gen_h4(n: int, r: int, k: int, strict: bool = True) -> UniformHypergraph:
    """``(n-1)/(k-2)`` copies of the complete r-graph on ``k-1`` vertices, all
    sharing vertex 0.

    ``strict`` additionally enforces ``k < t + 2``, the range where the
    construction is extremal; the hypergraph itself only needs ``k >= r + 2``.
    """
    if r < 3 or k < r + 2:
        raise ConstructionError(f"need r >= 3 and k >= r + 2, got r={r}, k={k}")
    if strict and k >= t_of(n) + 2:
        raise ConstructionError(f"need k < t + 2 = {t_of(n) + 2}, got k={k}")
    if (n - 1) % (k - 2):
        raise ConstructionError(f"n - 1 = {n - 1} is not divisible by k - 2 = {k - 2}")
    blocks = [[0, *range(1 + j * (k - 2), 1 + (j + 1) * (k - 2))] for j in range((n - 1) // (k - 2))]
    return UniformHypergraph(n, r, tuple(_cliques(blocks, r)))


def gen_h5(n: int, r: int, k: int) -> UniformHypergraph:
    """``(n-1)/r`` sets of ``r+1`` vertices sharing vertex 0, each carrying
    ``k-1`` of its r-subsets: those omitting its ``k-1`` largest non-shared ids."""
    if r < 3 or k < 3:
        raise ConstructionError(f"need r >= 3 and k >= 3, got r={r}, k={k}")
    if not (k <= r + 1 <= t_of(n) + 1):
        raise ConstructionError(f"need k <= r + 1 <= t + 1, got n={n}, r={r}, k={k}")
    if (n - 1) % r:
        raise ConstructionError(f"n - 1 = {n - 1} is not divisible by r = {r}")
    edges: list[tuple[int, ...]] = []
    for j in range((n - 1) // r):
        block = list(range(1 + j * r, 1 + (j + 1) * r))
        for omit in reversed(block[-(k - 1):]):
            edges.append(tuple([0] + [v for v in block if v != omit]))
    return UniformHypergraph(n, r, tuple(edges))


def gen_random_min_degree(n: int, r: int, delta: int, seed: int, base_edges: int = 0,
                          min_edges: int = 0) -> UniformHypergraph:
    """Seeded random r-graph with minimum degree at least ``delta``.

    ``base_edges`` uniformly random edges are drawn first; then, while some
    vertex is below the floor, a random deficient vertex receives a new edge
    whose other members are drawn from the deficient vertices before the rest.
    Finally random edges are added until there are ``min_edges`` of them.
    """
    if not (1 <= r <= n):
        raise ConstructionError(f"need 1 <= r <= n, got n={n}, r={r}")
    if delta > comb(n - 1, r - 1):
        raise ConstructionError(f"delta={delta} unreachable: max degree is C({n - 1},{r - 1})")
    if min_edges > comb(n, r) or base_edges > comb(n, r):
        raise ConstructionError("more edges requested than r-subsets exist")
    rng = random.Random(seed)
    present: set[tuple[int, ...]] = set()
    edges: list[tuple[int, ...]] = []
    deg = [0] * n

    def add(e: tuple[int, ...]) -> None:
        present.add(e)
        edges.append(e)
        for v in e:
            deg[v] += 1

    def random_new_edge(through: int | None = None) -> tuple[int, ...]:
        for _ in range(32):
            if through is None:
                e = tuple(sorted(rng.sample(range(n), r)))
            else:
                low = [u for u in range(n) if u != through and deg[u] < delta]
                rest = [u for u in range(n) if u != through and deg[u] >= delta]
                rng.shuffle(low)
                rng.shuffle(rest)
                if rng.random() < 0.5:
                    e = tuple(sorted([through, *(low + rest)[: r - 1]]))
                else:
                    e = tuple(sorted([through, *rng.sample(low + rest, r - 1)]))
            if e not in present:
                return e
        pool = range(n) if through is None else [u for u in range(n) if u != through]
        fresh = [tuple(sorted(c + ((through,) if through is not None else ())))
                 for c in combinations(pool, r if through is None else r - 1)]
        fresh = [e for e in fresh if e not in present]
        return rng.choice(fresh)

    for _ in range(base_edges):
        add(random_new_edge())
    while True:
        deficient = [v for v in range(n) if deg[v] < delta]
        if not deficient:
            break
        add(random_new_edge(rng.choice(deficient)))
    while len(edges) < min_edges:
        add(random_new_edge())
    return UniformHypergraph(n, r, tuple(edges))


@dataclass(frozen=True)
class ConstructionSpec:
    family: str
    n: int
    r: int
    k: int | None = None
    delta: int | None = None
    seed: int | None = None

    def build(self) -> UniformHypergraph:
        f = self.family
        if f == "h1":
            return gen_h1(self.n, self.r)
        if f == "h2":
            return gen_h2(self.n, self.r)
        if f == "h3":
            return gen_h3(self.n, self.r)
        if f == "tight_cycle":
            return gen_tight_cycle(self.n, self.r)
        if f in ("h4", "h5"):
            if self.k is None:
                raise ConstructionError(f"{f} needs k")
            return (gen_h4 if f == "h4" else gen_h5)(self.n, self.r, self.k)
        if f == "random_min_degree":
            if self.delta is None or self.seed is None:
                raise ConstructionError("random_min_degree needs delta and seed")
            return gen_random_min_degree(self.n, self.r, self.delta, self.seed)
        raise ConstructionError(f"unknown family {f!r}")

    def metadata(self) -> dict:
        """Expected minimum degree and circumference facts for the sidecar."""
        n, r, k, t = self.n, self.r, self.k, t_of(self.n)
        meta: dict = {key: val for key, val in asdict(self).items() if val is not None}
        f = self.family
        if f in ("h1", "h2"):
            meta["expected_min_degree"] = comb(t, r - 1)
            meta["hamiltonian"] = False
            if f == "h1":
                meta["expected_circumference"] = -(-n // 2)
        elif f == "h3":
            meta["expected_min_degree"] = r - 1
            meta["expected_edges"] = n - 1
            meta["hamiltonian"] = False
        elif f == "h4":
            meta["expected_min_degree"] = comb(k - 2, r - 1)
            meta["expected_circumference"] = k - 1
        elif f == "h5":
            meta["expected_min_degree"] = k - 2
            meta["circumference_at_most"] = k - 1
        elif f == "tight_cycle":
            meta["expected_min_degree"] = r
            meta["hamiltonian"] = True
        elif f == "random_min_degree":
            meta["min_degree_at_least"] = self.delta
        return meta
