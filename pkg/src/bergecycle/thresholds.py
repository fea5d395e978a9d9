"""Minimum-degree thresholds for long and hamiltonian Berge cycles.

Regime tags
-----------
``main_a``  / ``main_b``                hamiltonian cycle, ``r <= t`` / ``r >= n/2``
``main3_a`` / ``main3_b`` / ``main3_c`` cycle of length >= k with ``r <= t``
``main4``                               cycle of length >= k with ``r > t``
``main41``                              ``ceil(k/2)`` variant, needs ``k`` edges
``bermond``                             the older baseline bound (comparison only)

Binomials come from :func:`math.comb`, which is exact on Python ints.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from math import comb


class ThresholdError(ValueError):
    pass


def t_of(n: int) -> int:
    return (n - 1) // 2


@dataclass(frozen=True)
class ThresholdQuery:
    n: int
    r: int
    k: int

    @property
    def t(self) -> int:
        return t_of(self.n)


@dataclass(frozen=True)
class ThresholdAnswer:
    regime: str
    bound: int
    extra_precondition: int | None = None  # minimum number of edges, if any

    def to_json(self) -> dict:
        d = asdict(self)
        if d["extra_precondition"] is None:
            del d["extra_precondition"]
        else:
            d["min_edges"] = d.pop("extra_precondition")
        return d


def _check_nr(n: int, r: int) -> None:
    if not (3 <= r < n):
        raise ThresholdError(f"need 3 <= r < n, got n={n}, r={r}")


def hamiltonian_threshold(n: int, r: int) -> ThresholdAnswer:
    _check_nr(n, r)
    t = t_of(n)
    if r <= t:
        return ThresholdAnswer("main_a", comb(t, r - 1) + 1)
    # r > t is the same as 2r >= n for integers
    return ThresholdAnswer("main_b", r)


def circumference_threshold(n: int, r: int, k: int) -> ThresholdAnswer:
    """Degree bound forcing a Berge cycle of length ``k`` or longer."""
    _check_nr(n, r)
    t = t_of(n)
    if r <= t:
        if not (3 <= k <= n):
            raise ThresholdError(f"need 3 <= k <= n, got k={k}, n={n}")
        if k <= r + 1:
            return ThresholdAnswer("main3_a", k - 1)
        if k < t + 2:
            return ThresholdAnswer("main3_b", comb(k - 2, r - 1) + 1)
        return ThresholdAnswer("main3_c", comb(t, r - 1) + 1)
    if not (r <= k <= n):
        raise ThresholdError(f"need r <= k <= n when r > t, got r={r}, k={k}, n={n}")
    return ThresholdAnswer("main4", r * (k - 1) // n + 1)


def half_k_threshold(n: int, r: int, k: int) -> ThresholdAnswer:
    """``ceil(k/2)`` bound, valid only for ``r > t`` and at least ``k`` edges."""
    _check_nr(n, r)
    if r <= t_of(n):
        raise ThresholdError(f"r={r} <= t={t_of(n)}: half-k bound only holds for r > t")
    if not (r <= k <= n):
        raise ThresholdError(f"need r <= k <= n, got r={r}, k={k}, n={n}")
    return ThresholdAnswer("main41", -(-k // 2), extra_precondition=k)


def bermond_baseline(r: int, k: int) -> int:
    if r < 3:
        raise ThresholdError(f"need r >= 3, got {r}")
    if k <= r:
        raise ThresholdError(f"need k >= r + 1, got r={r}, k={k}")
    return comb(k - 2, r - 1) + r - 1


def threshold_for_query(q: ThresholdQuery) -> ThresholdAnswer:
    """Hamiltonian bound when ``k == n``, otherwise the circumference bound."""
    if q.k == q.n:
        return hamiltonian_threshold(q.n, q.r)
    return circumference_threshold(q.n, q.r, q.k)
