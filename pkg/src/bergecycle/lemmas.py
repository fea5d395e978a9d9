"""Exhaustive checks of three counting lemmas on a plain graph cycle.

Positions are 0-based: vertex ``i`` of the cycle ``C_s`` and edge ``i``
joining vertices ``i`` and ``i+1 (mod s)``. Distances between positions are
cyclic, ``min(|i-j|, s-|i-j|)``. All subsets are bitmasks over positions.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import combinations


def cyclic_distance(i: int, j: int, s: int) -> int:
    d = abs(i - j) % s
    return min(d, s - d)


def _members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _rotl(mask: int, s: int) -> int:
    full = (1 << s) - 1
    return ((mask << 1) | (mask >> (s - 1))) & full


def is_independent(mask: int, s: int) -> bool:
    """No two members cyclically adjacent (a single vertex is independent)."""
    return mask & _rotl(mask, s) == 0


def independent_sets(s: int) -> list[int]:
    return [m for m in range(1 << s) if is_independent(m, s)]


def _ceil_half(x: int) -> int:
    return -((-x) // 2)


@dataclass(frozen=True)
class IndepReport:
    s: int
    c: int
    bound: int
    max_size: int
    edges: tuple[int, ...]
    independent: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return self.max_size <= self.bound

    @property
    def attained(self) -> bool:
        return self.max_size == self.bound

    def to_json(self) -> dict:
        d = asdict(self)
        d.update(lemma="indep", holds=self.holds, attained=self.attained)
        return d


def max_independent_disjoint(s: int, c: int) -> IndepReport:
    """Largest independent vertex set avoiding every vertex of some ``c``
    cycle edges, over all choices of those edges."""
    if s < 3 or not (0 <= c <= s):
        raise ValueError(f"need s >= 3 and 0 <= c <= s, got s={s}, c={c}")
    indep = sorted(independent_sets(s), key=int.bit_count, reverse=True)
    best, best_a, best_i = -1, (), ()
    for edges in combinations(range(s), c):
        covered = 0
        for i in edges:
            covered |= 1 << i | 1 << ((i + 1) % s)
        for m in indep:
            if m & covered == 0:
                size = m.bit_count()
                if size > best:
                    best, best_a, best_i = size, edges, tuple(_members(m))
                break  # sorted by size, first hit is the largest for this choice
    return IndepReport(s, c, _ceil_half(s - 1 - c), best, best_a, best_i)


@dataclass(frozen=True)
class CaseReport:
    max_a: int | None  # None when no configuration exists
    witness_a: tuple[int, ...] | None
    witness_b: tuple[int, ...] | None

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class VercReport:
    s: int
    q: int
    same: CaseReport  # configurations with B == A
    different: CaseReport  # configurations with B != A
    configurations: int

    @property
    def holds_same(self) -> bool:
        return self.same.max_a is None or self.same.max_a * self.q <= self.s

    @property
    def holds_different(self) -> bool:
        a = self.different.max_a
        return a is None or 2 * a <= self.s - 2 * self.q + 2

    @property
    def holds(self) -> bool:
        return self.holds_same and self.holds_different

    @property
    def in_domain(self) -> bool:
        # with q > s a lone edge A = B satisfies the separation vacuously and
        # a = 1 > s/q; the bound is only meaningful for q <= s
        return self.q <= self.s

    def to_json(self) -> dict:
        return {
            "lemma": "verc", "s": self.s, "q": self.q, "in_domain": self.in_domain,
            "bound_same": f"{self.s}/{self.q}", "bound_different": self.s / 2 - self.q + 1,
            "same": self.same.to_json(), "different": self.different.to_json(),
            "configurations": self.configurations, "holds": self.holds,
        }


def lemma_row_ok(row: dict) -> bool:
    """A suite row passes if its bound holds or it lies outside the lemma's domain."""
    return row["holds"] or not row.get("in_domain", True)


def _far_from(mask_a: int, s: int, q: int, include_self: bool) -> int:
    """Positions ``j`` with ``dist(i, j) >= q`` for every ``i`` in ``mask_a``;
    with ``include_self`` a member ``j`` of ``mask_a`` may also be equal to
    ``i`` (every other member still has to be far)."""
    members = _members(mask_a)
    out = 0
    for j in range(s):
        ok = True
        for i in members:
            if i == j:
                if not include_self:
                    ok = False
                    break
                continue
            if cyclic_distance(i, j, s) < q:
                ok = False
                break
        if ok:
            out |= 1 << j
    return out


def _submasks(mask: int):
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def max_verc_config(s: int, q: int) -> VercReport:
    """Edge sets ``A, B`` of ``C_s`` with ``|B| >= |A|`` where each pair
    ``(i in A, j in B)`` has ``i == j`` or distance at least ``q``.

    Reports the largest ``|A|`` separately for ``B == A`` and ``B != A``.
    """
    if s < 3 or q < 2:
        raise ValueError(f"need s >= 3 and q >= 2, got s={s}, q={q}")
    same: tuple = (None, None, None)
    diff: tuple = (None, None, None)
    count = 0
    for a_mask in range(1, 1 << s):
        a = a_mask.bit_count()
        allowed = _far_from(a_mask, s, q, include_self=True)
        if allowed.bit_count() < a:
            continue
        need_same = same[0] is None or a > same[0]
        need_diff = diff[0] is None or a > diff[0]
        if not (need_same or need_diff):
            continue
        for b_mask in _submasks(allowed):
            if b_mask.bit_count() < a:
                continue
            count += 1
            if b_mask == a_mask:
                if need_same:
                    same = (a, tuple(_members(a_mask)), tuple(_members(b_mask)))
                    need_same = False
            elif need_diff:
                diff = (a, tuple(_members(a_mask)), tuple(_members(b_mask)))
                need_diff = False
            if not (need_same or need_diff):
                break
    return VercReport(s, q, CaseReport(*same), CaseReport(*diff), count)


@dataclass(frozen=True)
class Verc2Report:
    s: int
    q: int
    max_a: int | None
    witness_a: tuple[int, ...] | None
    witness_b: tuple[int, ...] | None
    configurations: int

    @property
    def holds(self) -> bool:
        return self.max_a is None or 2 * self.max_a <= self.s - 2 * self.q + 2

    def to_json(self) -> dict:
        d = asdict(self)
        d.update(lemma="verc2", bound=self.s / 2 - self.q + 1, holds=self.holds)
        return d


def max_verc2_config(s: int, q: int) -> Verc2Report:
    """Independent vertex sets ``A, B`` with ``B - A`` nonempty and every
    vertex of ``B - A`` at distance at least ``q`` from every vertex of ``A``."""
    if s < 3 or q < 2:
        raise ValueError(f"need s >= 3 and q >= 2, got s={s}, q={q}")
    indep = independent_sets(s)
    best: tuple = (None, None, None)
    count = 0
    for a_mask in indep:
        if a_mask == 0 or (best[0] is not None and a_mask.bit_count() <= best[0]):
            continue
        far = _far_from(a_mask, s, q, include_self=False)
        for d_mask in _submasks(far):
            if not is_independent(d_mask, s):
                continue
            # B = D plus any part of A keeping B independent; B = D is enough
            # for existence, so only D is enumerated
            count += 1
            best = (a_mask.bit_count(), tuple(_members(a_mask)), tuple(_members(d_mask)))
            break
    return Verc2Report(s, q, *best, count)


def verc_pair_ok(a: tuple[int, ...], b: tuple[int, ...], s: int, q: int) -> bool:
    """Independent check of the separation condition used by :func:`max_verc_config`."""
    return all(i == j or cyclic_distance(i, j, s) >= q for i in a for j in b)


def verc2_pair_ok(a: tuple[int, ...], b: tuple[int, ...], s: int, q: int) -> bool:
    bs, as_ = set(b), set(a)
    if not as_ or not bs or not (bs - as_):
        return False
    for group in (as_, bs):
        if any(cyclic_distance(i, j, s) == 1 for i in group for j in group if i != j):
            return False
    return all(cyclic_distance(i, j, s) >= q for i in as_ for j in bs - as_)


def indep_config_ok(edges: tuple[int, ...], indep: tuple[int, ...], s: int) -> bool:
    covered = {i for e in edges for i in (e, (e + 1) % s)}
    if covered & set(indep):
        return False
    return all(cyclic_distance(i, j, s) != 1 for i in indep for j in indep if i != j)


def run_lemma_suite(max_s_indep: int = 10, max_s_verc: int = 12, max_q: int = 4) -> list[dict]:
    """Full grid as JSON-ready rows."""
    rows: list[dict] = []
    for s in range(3, max_s_indep + 1):
        for c in range(0, s + 1):
            rows.append(max_independent_disjoint(s, c).to_json())
    for s in range(3, max_s_verc + 1):
        for q in range(2, max_q + 1):
            rows.append(max_verc_config(s, q).to_json())
            rows.append(max_verc2_config(s, q).to_json())
    return rows
