"""Verification sweeps: sharpness of the constructions, exhaustive and sampled
checks of the degree thresholds, and engine stuck-rate on the same instances."""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from math import ceil, comb
from pathlib import Path
from typing import Iterator

from . import engine
from .constructions import gen_h1, gen_h2, gen_h3, gen_h4, gen_h5, gen_random_min_degree
from .hypergraph import UniformHypergraph, degree_profile, serialize, validate_walk
from .solver import BUDGET_EXCEEDED, FOUND, SearchBudget, circumference, find_berge_cycle, find_hamiltonian_cycle
from .thresholds import (ThresholdError, circumference_threshold, half_k_threshold, hamiltonian_threshold,
                         t_of)


class ConfigError(ValueError):
    pass


@dataclass
class SweepConfig:
    grid: list[tuple[int, int, int]] = field(default_factory=list)
    samples_per_cell: int = 100
    exhaustive_cells: list[tuple[int, int, int]] = field(default_factory=list)
    sharpness: bool = True
    seed: int = 0
    node_limit: int | None = None
    time_limit: float | None = None
    engine: bool = True

    def __post_init__(self) -> None:
        self.grid = [tuple(c) for c in self.grid]
        self.exhaustive_cells = [tuple(c) for c in self.exhaustive_cells]
        for n, r, k in self.exhaustive_cells:
            if n > 6 or r != 3:
                raise ConfigError(f"exhaustive cells need n <= 6 and r = 3, got {(n, r, k)}")
        if self.samples_per_cell < 0:
            raise ConfigError("samples_per_cell must be >= 0")

    @property
    def budget(self) -> SearchBudget | None:
        if self.node_limit is None and self.time_limit is None:
            return None
        return SearchBudget(self.node_limit, self.time_limit)

    @classmethod
    def from_mapping(cls, data: dict) -> "SweepConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> "SweepConfig":
        """JSON object, or ``key = value`` lines whose values are JSON literals."""
        text = Path(path).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            data = {}
            for lineno, line in enumerate(text.splitlines(), 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise ConfigError(f"line {lineno}: expected key = value")
                try:
                    data[key.strip()] = json.loads(value.strip())
                except json.JSONDecodeError as exc:
                    raise ConfigError(f"line {lineno}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be an object")
        return cls.from_mapping(data)


def default_grid(n_lo: int = 7, n_hi: int = 11) -> list[tuple[int, int, int]]:
    return [(n, r, k) for n in range(n_lo, n_hi + 1) for r in range(3, n) for k in range(max(r, 3), n + 1)]


def default_config(seed: int = 0) -> SweepConfig:
    return SweepConfig(grid=default_grid(), exhaustive_cells=[(5, 3, 5), (6, 3, 6)], seed=seed)


# -- exhaustive enumeration --------------------------------------------------

def edge_subsets_with_floor(n: int, r: int, floor: int) -> Iterator[int]:
    """Bitmasks over ``combinations(range(n), r)`` whose hypergraph has minimum
    degree at least ``floor``.

    Edges are decided in order; a branch is cut as soon as some vertex can no
    longer reach the floor with the undecided edges left.
    """
    edges = list(combinations(range(n), r))
    m = len(edges)
    deg = [0] * n
    left = [comb(n - 1, r - 1)] * n
    if floor > left[0]:
        return

    def rec(i: int, mask: int) -> Iterator[int]:
        if i == m:
            yield mask
            return
        e = edges[i]
        for v in e:
            left[v] -= 1
        # include
        for v in e:
            deg[v] += 1
        yield from rec(i + 1, mask | (1 << i))
        for v in e:
            deg[v] -= 1
        # exclude, only if every vertex of e can still make the floor
        if all(deg[v] + left[v] >= floor for v in e):
            yield from rec(i + 1, mask)
        for v in e:
            left[v] += 1

    yield from rec(0, 0)


@dataclass
class CellReport:
    kind: str  # sharpness | exhaustive | sampled
    n: int
    r: int
    k: int | None
    regime: str | None = None
    threshold: int | None = None
    instances: int = 0
    violations: list[dict] = field(default_factory=list)
    undecided: int = 0
    engine_runs: int = 0
    engine_stuck: int = 0
    engine_gaps: int = 0  # engine stuck although the solver found the cycle
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations and self.undecided == 0

    def to_json(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        d["engine_stuck_rate"] = (self.engine_stuck / self.engine_runs) if self.engine_runs else None
        return d


@dataclass
class VerificationReport:
    cells: list[CellReport]
    seed: int
    elapsed: float | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cells)

    def to_json(self) -> dict:
        d = {
            "passed": self.passed,
            "seed": self.seed,
            "cells": [c.to_json() for c in self.cells],
            "totals": {
                "instances": sum(c.instances for c in self.cells),
                "violations": sum(len(c.violations) for c in self.cells),
                "undecided": sum(c.undecided for c in self.cells),
                "engine_runs": sum(c.engine_runs for c in self.cells),
                "engine_stuck": sum(c.engine_stuck for c in self.cells),
                "engine_gaps": sum(c.engine_gaps for c in self.cells),
            },
        }
        if self.elapsed is not None:
            d["elapsed_seconds"] = round(self.elapsed, 3)
        return d


def _violation(h: UniformHypergraph, **info) -> dict:
    return {"bhg": serialize(h), **info}


def _engine_probe(cell: CellReport, h: UniformHypergraph, k: int, solver_found: bool) -> None:
    res = engine.run(h, k)
    cell.engine_runs += 1
    if res.steps > engine.rank_bound(h):
        cell.violations.append(_violation(h, reason="engine exceeded the rank bound", steps=res.steps))
    if res.status == engine.FOUND:
        if validate_walk(h, res.cycle) is not None or res.cycle.length < k:
            cell.violations.append(_violation(h, reason="engine returned an invalid cycle"))
    else:
        cell.engine_stuck += 1
        if solver_found:
            cell.engine_gaps += 1


def run_exhaustive_cell(n: int, r: int, k: int, budget: SearchBudget | None = None,
                        with_engine: bool = False) -> CellReport:
    """Every hypergraph on ``n`` vertices meeting the threshold for ``k``.

    A cycle found for one instance is a cycle of every superset of its edges,
    so recent witnesses are tried against each new instance before solving.
    """
    ans = hamiltonian_threshold(n, r) if k == n else circumference_threshold(n, r, k)
    cell = CellReport("exhaustive", n, r, k, ans.regime, ans.bound)
    all_edges = list(combinations(range(n), r))
    index = {e: i for i, e in enumerate(all_edges)}
    recent: list[int] = []  # witness edge masks over all_edges
    solved = 0
    for mask in edge_subsets_with_floor(n, r, ans.bound):
        cell.instances += 1
        if any(w & mask == w for w in recent):
            continue
        edges = tuple(e for i, e in enumerate(all_edges) if mask >> i & 1)
        h = UniformHypergraph(n, r, edges)
        out = find_berge_cycle(h, k, budget, at_least=True)
        solved += 1
        if out.verdict == FOUND:
            w = 0
            for ei in out.witness.edge_indices:
                w |= 1 << index[h.edges[ei]]
            recent.insert(0, w)
            del recent[16:]
        elif out.verdict == BUDGET_EXCEEDED:
            cell.undecided += 1
        else:
            cell.violations.append(_violation(h, reason=f"no Berge cycle of length >= {k}", verdict=out.verdict))
        if with_engine:
            _engine_probe(cell, h, k, out.verdict == FOUND)
    cell.details = {"edge_subsets": 2 ** len(all_edges), "solver_calls": solved,
                    "covered_by_earlier_witness": cell.instances - solved}
    return cell


# -- sampled cells -------------------------------------------------------------

def _cell_variants(n: int, r: int, k: int):
    """(regime, bound, min_edges) pairs to sample for a grid cell."""
    out = []
    try:
        a = circumference_threshold(n, r, k)
        out.append((a.regime, a.bound, 0))
    except ThresholdError:
        return out
    if r > t_of(n):
        b = half_k_threshold(n, r, k)
        out.append((b.regime, b.bound, b.extra_precondition))
    return out


def run_sampled_cell(n: int, r: int, k: int, regime: str, bound: int, min_edges: int, samples: int,
                     seed: int, budget: SearchBudget | None = None, with_engine: bool = True) -> CellReport:
    cell = CellReport("sampled", n, r, k, regime, bound)
    if min_edges:
        cell.details["min_edges"] = min_edges
    for i in range(samples):
        inst_seed = random.Random(f"{seed}:{n}:{r}:{k}:{regime}:{i}").randrange(1 << 62)
        base = random.Random(inst_seed).randrange(0, n + 1)
        h = gen_random_min_degree(n, r, bound, inst_seed, base_edges=min(base, comb(n, r)), min_edges=min_edges)
        cell.instances += 1
        prof = degree_profile(h)
        if prof.min_degree < bound or h.num_edges < min_edges:
            cell.violations.append(_violation(h, reason="generator missed the degree floor"))
            continue
        out = find_berge_cycle(h, k, budget, at_least=True)
        if out.verdict == BUDGET_EXCEEDED:
            cell.undecided += 1
        elif out.verdict != FOUND:
            cell.violations.append(_violation(h, reason=f"no Berge cycle of length >= {k}", seed=inst_seed))
        if with_engine:
            _engine_probe(cell, h, k, out.verdict == FOUND)
    return cell


# -- sharpness -------------------------------------------------------------------

def sharpness_instances(n_max: int = 13):
    """(label, builder, threshold answer, expectation) for every construction
    with legal parameters up to ``n_max``."""
    out = []
    for n in range(7, min(n_max, 12) + 1):
        for r in (3, 4):
            if r <= t_of(n):
                ans = hamiltonian_threshold(n, r)
                exp = {"circumference": ceil(n / 2)} if r == 3 else {"hamiltonian": False}
                out.append((("h1", n, r, None), ans, exp))
                out.append((("h2", n, r, None), ans, {"hamiltonian": False}))
    for n in range(5, 11):
        for r in range(ceil(n / 2), n):
            if r >= 3:
                out.append((("h3", n, r, None), hamiltonian_threshold(n, r), {"hamiltonian": False}))
    for n in range(7, n_max + 1):
        t = t_of(n)
        for r in range(3, t + 1):
            for k in range(r + 2, t + 2):
                if (n - 1) % (k - 2) == 0:
                    out.append((("h4", n, r, k), circumference_threshold(n, r, k), {"circumference": k - 1}))
            if (n - 1) % r == 0:
                for k in range(3, r + 2):
                    out.append((("h5", n, r, k), circumference_threshold(n, r, k), {"circumference_at_most": k - 1}))
    return out


_BUILDERS = {"h1": gen_h1, "h2": gen_h2, "h3": gen_h3}


def _build(label) -> UniformHypergraph:
    fam, n, r, k = label
    if fam in _BUILDERS:
        return _BUILDERS[fam](n, r)
    return (gen_h4 if fam == "h4" else gen_h5)(n, r, k)


def run_sharpness_cell(label, ans, expect: dict, budget: SearchBudget | None = None) -> CellReport:
    fam, n, r, k = label
    h = _build(label)
    cell = CellReport("sharpness", n, r, k, ans.regime, ans.bound, instances=1)
    delta = degree_profile(h).min_degree
    cell.details = {"family": fam, "min_degree": delta, "edges": h.num_edges, "expected": expect}
    if delta != ans.bound - 1:
        cell.violations.append(_violation(h, reason=f"min degree {delta} != threshold - 1 = {ans.bound - 1}"))
    if "hamiltonian" in expect:
        out = find_hamiltonian_cycle(h, budget)
        cell.details["hamiltonian_verdict"] = out.verdict
        if out.verdict == BUDGET_EXCEEDED:
            cell.undecided += 1
        elif (out.verdict == FOUND) != expect["hamiltonian"]:
            cell.violations.append(_violation(h, reason="hamiltonicity differs from expectation"))
    if "circumference" in expect or "circumference_at_most" in expect:
        c, out = circumference(h, budget)
        cell.details["circumference"] = c
        if out.verdict == BUDGET_EXCEEDED:
            cell.undecided += 1
        elif "circumference" in expect and c != expect["circumference"]:
            cell.violations.append(_violation(h, reason=f"circumference {c} != {expect['circumference']}"))
        elif "circumference_at_most" in expect and c > expect["circumference_at_most"]:
            cell.violations.append(_violation(h, reason=f"circumference {c} > {expect['circumference_at_most']}"))
    return cell


# -- driver -------------------------------------------------------------------------

def _tasks(config: SweepConfig) -> list[tuple]:
    tasks: list[tuple] = []
    if config.sharpness:
        for label, ans, expect in sharpness_instances():
            tasks.append(("sharpness", label, ans, expect))
    for n, r, k in config.exhaustive_cells:
        tasks.append(("exhaustive", n, r, k))
    for n, r, k in config.grid:
        for regime, bound, min_edges in _cell_variants(n, r, k):
            tasks.append(("sampled", n, r, k, regime, bound, min_edges))
    return tasks


def _run_task(task: tuple, config: SweepConfig) -> CellReport:
    kind = task[0]
    if kind == "sharpness":
        return run_sharpness_cell(task[1], task[2], task[3], config.budget)
    if kind == "exhaustive":
        return run_exhaustive_cell(*task[1:], budget=config.budget)
    n, r, k, regime, bound, min_edges = task[1:]
    return run_sampled_cell(n, r, k, regime, bound, min_edges, config.samples_per_cell, config.seed,
                            config.budget, config.engine)


def _run_task_star(args) -> CellReport:
    return _run_task(*args)


def cmd_verify(config: SweepConfig, jobs: int = 1, deterministic: bool = False, records=None) -> VerificationReport:
    """Run every cell of ``config``; cells are merged in task order whatever
    the worker count. ``records`` (a text stream) receives one JSON line per cell."""
    start = time.perf_counter()
    tasks = _tasks(config)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_run_task_star, [(t, config) for t in tasks]))
    else:
        cells = [_run_task(t, config) for t in tasks]
    if records is not None:
        for c in cells:
            records.write(json.dumps(c.to_json(), sort_keys=True) + "\n")
    elapsed = None if deterministic else time.perf_counter() - start
    return VerificationReport(cells, config.seed, elapsed)
