"""Command-line entry point.

Exit codes: 0 success, 1 findings (violations, stuck engine, exhausted
budget), 2 usage or input errors. Output is JSON unless ``--human``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import engine
from .constructions import FAMILIES, ConstructionError, ConstructionSpec
from .hypergraph import HypergraphError, degree_profile, parse, serialize
from .lemmas import lemma_row_ok, run_lemma_suite
from .solver import (BUDGET_EXCEEDED, SearchBudget, circumference, find_berge_cycle, find_hamiltonian_cycle,
                     longest_berge_path)
from .thresholds import (ThresholdError, bermond_baseline, circumference_threshold, half_k_threshold,
                         hamiltonian_threshold)
from . import verify as sweep
from .verify import ConfigError, SweepConfig, default_config, run_exhaustive_cell, sharpness_instances

OK, FINDINGS, USAGE = 0, 1, 2


class UsageError(Exception):
    def __init__(self, message: str, detail: str = "usage"):
        super().__init__(message)
        self.detail = detail


def _emit(args, payload, text: str | None = None) -> None:
    out = sys.stdout
    if getattr(args, "human", False):
        if text is not None:
            out.write(text if text.endswith("\n") else text + "\n")
        else:
            _human(payload, out)
    else:
        out.write(json.dumps(payload, sort_keys=True) + "\n")


def _human(payload, out, indent: str = "") -> None:
    if isinstance(payload, dict):
        for key, val in payload.items():
            if isinstance(val, (dict, list)) and len(json.dumps(val)) > 60:
                out.write(f"{indent}{key}:\n")
                _human(val, out, indent + "  ")
            else:
                out.write(f"{indent}{key}: {json.dumps(val) if isinstance(val, (dict, list)) else val}\n")
    elif isinstance(payload, list):
        for item in payload:
            out.write(f"{indent}- {json.dumps(item, sort_keys=True)}\n")
    else:
        out.write(f"{indent}{payload}\n")


def _read_input(args):
    src = args.input
    if src is None or src == "-":
        text = sys.stdin.read()
    else:
        path = Path(src)
        if not path.is_file():
            raise UsageError(f"input file not found: {src}", "file_not_found")
        text = path.read_text()
    try:
        return parse(text)
    except HypergraphError as exc:
        raise UsageError(f"malformed .bhg input: {exc}", "malformed_input") from None


def _budget(args) -> SearchBudget | None:
    if args.node_limit is None and args.time_limit is None:
        return None
    try:
        return SearchBudget(args.node_limit, args.time_limit)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- subcommands ------------------------------------------------------------------

def cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else (0 if args.family == "random_min_degree" else None)
    spec = ConstructionSpec(args.family, args.n, args.r, args.k, args.delta, seed)
    try:
        h = spec.build()
    except ConstructionError as exc:
        raise UsageError(str(exc)) from None
    meta = spec.metadata()
    prof = degree_profile(h)
    meta.update(edges=h.num_edges, min_degree=prof.min_degree)
    text = serialize(h)
    if args.output:
        Path(args.output).write_text(text)
        sidecar = Path(args.sidecar) if args.sidecar else Path(args.output + ".json")
        sidecar.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text)
        if args.sidecar:
            Path(args.sidecar).write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
        else:
            sys.stderr.write(json.dumps(meta, sort_keys=True) + "\n")
    return OK


def _parse_target(target: str, n: int) -> tuple[str, int | None]:
    if target == "ham":
        return "ham", n
    if target in ("circumference", "path"):
        return target, None
    for prefix, kind in (("k=", "k"), ("at-least=", "at_least")):
        if target.startswith(prefix):
            try:
                return kind, int(target[len(prefix):])
            except ValueError:
                break
    raise UsageError(f"bad --target {target!r}; use ham, k=<int>, at-least=<int>, circumference or path")


def cmd_solve(args) -> int:
    h = _read_input(args)
    kind, k = _parse_target(args.target, h.n)
    budget = _budget(args)
    t0 = time.perf_counter()
    payload: dict = {"target": args.target}
    if kind == "ham":
        out = find_hamiltonian_cycle(h, budget) if args.seed_order is None else \
            find_berge_cycle(h, h.n, budget, seed_order=args.seed_order)
    elif kind in ("k", "at_least"):
        out = find_berge_cycle(h, k, budget, at_least=kind == "at_least", seed_order=args.seed_order)
    elif kind == "circumference":
        length, out = circumference(h, budget)
        payload["length"] = length
    else:
        length, out = longest_berge_path(h, budget)
        payload["length"] = length
    payload.update(out.to_json())
    if not args.deterministic:
        payload["seconds"] = round(time.perf_counter() - t0, 6)
    if out.verdict == BUDGET_EXCEEDED:
        payload["detail"] = "budget_exceeded"
    _emit(args, payload)
    return FINDINGS if out.verdict == BUDGET_EXCEEDED else OK


def cmd_engine(args) -> int:
    h = _read_input(args)
    target = h.n if args.target in (None, "ham") else _int_arg(args.target, "--target")
    top = min(h.n, h.num_edges)
    if not 3 <= target <= max(top, 3):
        raise UsageError(f"--target must lie in 3..min(n, |E|) = {top}")
    res = engine.run(h, target, max_steps=args.max_steps, trace=args.trace)
    _emit(args, res.to_json())
    return OK if res.status == engine.FOUND else FINDINGS


def _int_arg(value: str, flag: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"{flag} expects an integer, got {value!r}") from None


def cmd_lemmas(args) -> int:
    rows = run_lemma_suite(args.max_s_indep, args.max_s_verc, args.max_q)
    bad = [row for row in rows if not lemma_row_ok(row)]
    payload = {"passed": not bad, "rows": rows, "failures": len(bad)}
    if args.output:
        Path(args.output).write_text("".join(json.dumps(r, sort_keys=True) + "\n" for r in rows))
    _emit(args, payload, text=f"{len(rows)} cells, {len(bad)} failing" if args.human else None)
    return OK if not bad else FINDINGS


def cmd_threshold(args) -> int:
    try:
        if args.bermond:
            if args.k is None:
                raise UsageError("--bermond needs --k")
            payload = {"regime": "bermond", "bound": bermond_baseline(args.r, args.k)}
        elif args.half_k:
            if args.k is None:
                raise UsageError("--half-k needs --k")
            payload = half_k_threshold(args.n, args.r, args.k).to_json()
        elif args.k is None or args.k == args.n:
            payload = hamiltonian_threshold(args.n, args.r).to_json()
        else:
            payload = circumference_threshold(args.n, args.r, args.k).to_json()
    except ThresholdError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, payload)
    return OK


def cmd_verify(args) -> int:
    try:
        config = SweepConfig.load(args.config) if args.config else default_config()
        if args.seed is not None:
            config.seed = args.seed
        if args.samples is not None:
            config.samples_per_cell = args.samples
        if args.no_engine:
            config.engine = False
    except (ConfigError, TypeError, OSError) as exc:
        raise UsageError(f"bad config: {exc}") from None
    budget = _budget(args)
    if budget is not None:
        config.node_limit, config.time_limit = budget.node_limit, budget.time_limit
    suite = args.suite
    if suite == "lemmas":
        return cmd_lemmas(args)
    if suite == "sharpness":
        config.grid, config.exhaustive_cells = [], []
    elif suite == "exhaustive":
        config.grid, config.sharpness = [], False
    elif suite == "sampled":
        config.exhaustive_cells, config.sharpness = [], False
    records = open(args.output, "w") if args.output else None
    try:
        report = sweep.cmd_verify(config, jobs=args.jobs, deterministic=args.deterministic, records=records)
    finally:
        if records:
            records.close()
    payload = report.to_json()
    text = None
    if args.human:
        t = payload["totals"]
        text = (f"passed: {payload['passed']}\ncells: {len(payload['cells'])}\ninstances: {t['instances']}\n"
                f"violations: {t['violations']}\nundecided: {t['undecided']}\n"
                f"engine stuck: {t['engine_stuck']}/{t['engine_runs']} (solver found a cycle in {t['engine_gaps']})")
    _emit(args, payload, text)
    return OK if report.passed else FINDINGS


def cmd_bench(args) -> int:
    """Solver timings on the constructions plus the exhaustive n = 5 cell."""
    rows = []
    budget = _budget(args)
    for (fam, n, r, k), _, expect in sharpness_instances(n_max=args.n_max):
        h = ConstructionSpec(fam, n, r, k).build()
        t0 = time.perf_counter()
        if "hamiltonian" in expect:
            out = find_hamiltonian_cycle(h, budget)
            value = out.verdict
        else:
            value, out = circumference(h, budget)
        row = {"family": fam, "n": n, "r": r, "k": k, "result": value, "nodes": out.nodes_explored}
        if not args.deterministic:
            row["seconds"] = round(time.perf_counter() - t0, 6)
        rows.append(row)
    t0 = time.perf_counter()
    cell = run_exhaustive_cell(5, 3, 5)
    ex = {"cell": [5, 3, 5], "instances": cell.instances, "passed": cell.passed}
    if not args.deterministic:
        ex["seconds"] = round(time.perf_counter() - t0, 6)
    _emit(args, {"constructions": rows, "exhaustive": ex})
    return OK


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help=".bhg file ('-' or omitted: stdin)")
    common.add_argument("--output", help="output path")
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--deterministic", action="store_true", help="omit timings from output")
    common.add_argument("--human", action="store_true", help="plain-text output")
    common.add_argument("--config", help="sweep config (JSON or key = value lines)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="bergecycle", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a construction")
    g.add_argument("--family", required=True, choices=FAMILIES)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--r", type=int, required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--delta", type=int, help="degree floor (random_min_degree)")
    g.add_argument("--sidecar", help="metadata JSON path")
    g.set_defaults(func=cmd_gen)

    def budget_flags(sp):
        sp.add_argument("--node-limit", type=int)
        sp.add_argument("--time-limit", type=float)

    s = sub.add_parser("solve", parents=[common], help="exact Berge cycle / path search")
    s.add_argument("--target", default="ham", help="ham | k=<int> | at-least=<int> | circumference | path")
    budget_flags(s)
    s.add_argument("--seed-order", type=int, help="seed for tie-breaks and restart relabelling")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("engine", parents=[common], help="run the cycle/path exchange engine")
    e.add_argument("--target", help="cycle length to reach (default: n)")
    e.add_argument("--max-steps", type=int)
    e.add_argument("--trace", action="store_true", help="include a per-move log")
    e.set_defaults(func=cmd_engine)

    def lemma_flags(sp):
        sp.add_argument("--max-s-indep", type=int, default=10)
        sp.add_argument("--max-s-verc", type=int, default=12)
        sp.add_argument("--max-q", type=int, default=4)

    lm = sub.add_parser("lemmas", parents=[common], help="brute-force lemma suites")
    lemma_flags(lm)
    lm.set_defaults(func=cmd_lemmas)

    t = sub.add_parser("threshold", parents=[common], help="minimum-degree threshold for (n, r, k)")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--r", type=int, required=True)
    t.add_argument("--k", type=int, help="target length (default: hamiltonian)")
    t.add_argument("--half-k", action="store_true", help="ceil(k/2) bound for large r")
    t.add_argument("--bermond", action="store_true", help="older baseline bound")
    t.set_defaults(func=cmd_threshold)

    v = sub.add_parser("verify", parents=[common], help="threshold verification sweeps")
    v.add_argument("--suite", default="all", choices=["all", "sharpness", "exhaustive", "sampled", "lemmas"])
    v.add_argument("--samples", type=int, help="override samples_per_cell")
    v.add_argument("--no-engine", action="store_true", help="skip engine stuck-rate probes")
    budget_flags(v)
    lemma_flags(v)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", parents=[common], help="solver timings on the constructions")
    b.add_argument("--n-max", type=int, default=13)
    budget_flags(b)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.jobs < 1:
        sys.stderr.write(json.dumps({"error": "--jobs must be >= 1", "detail": "usage"}) + "\n")
        return USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "detail": exc.detail}) + "\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
