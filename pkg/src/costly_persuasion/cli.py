"""Command-line interface: configuration ingestion and result serialization.

Commands
--------
analyze   classify the cost pair and report the crossing boundary data
solve     regime-appropriate equilibria (separating, or pooling set plus
          uninformative-outcome report) with Blackwell comparisons
verify    check a per-type experiment profile against the D1 verifier
bench     symmetric-information benchmark per type and at the common prior
wald      sequential-sampling Monte Carlo against the closed forms
curves    tabular indifference curves, tangency loci, and obedience lines

Exit status: 0 success, 1 verifier violations, 2 invalid input,
3 crossing-regime mismatch.

The game configuration is a JSON document::

    {"cost": {"model": "llr", "C_g": 5.0, "C_b": 1.0},
     "beta_bar": 0.7,
     "types": [{"mu": 0.2, "prob": 0.5}, {"mu": 0.4, "prob": 0.5}]}

(for the entropy model: {"model": "shannon", "C": 1.0}). Profiles for
``verify`` list one [p, q] pair per type: {"experiments": [[0.6, 0.2], ...]}.
Floats serialize via repr, which round-trips losslessly.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
from enum import Enum
from typing import Any, Mapping

from . import equilibria, verifier, wald
from .benchmark import solve_benchmark
from .crossing import (classify_crossing, shannon_peak_locus, tangency_high,
                       tangency_low, trace_indifference)
from .errors import ConfigError, NoIntersectionError, RegimeError
from .game import (Experiment, GameConfig, LlrCost, odds_ratio,
                   validate_config)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_INVALID = 2
EXIT_REGIME = 3


def load_config(source: str) -> GameConfig:
    """Parse a game configuration from a file path or inline JSON text."""
    text = source
    name = "<inline>"
    if os.path.exists(source):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
        name = source
    elif not source.lstrip().startswith("{"):
        raise ConfigError([f"config source is neither an existing file nor inline JSON: {source!r}"])
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"{name}: line {exc.lineno}, column {exc.colno}: {exc.msg}"])
    return validate_config(raw)


def _load_profile(source: str, cfg: GameConfig) -> verifier.StrategyProfile:
    text = source
    if os.path.exists(source):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"profile: line {exc.lineno}, column {exc.colno}: {exc.msg}"])
    if isinstance(raw, Mapping):
        raw = raw.get("profile", raw.get("experiments"))
    if not isinstance(raw, list):
        raise ConfigError(["profile: expected a list of [p, q] pairs"])
    exps = []
    for i, pair in enumerate(raw):
        try:
            p, q = float(pair[0]), float(pair[1])
            exps.append(Experiment(p, q))
        except (TypeError, ValueError, IndexError) as exc:
            raise ConfigError([f"profile[{i}]: {exc}"])
    if len(exps) != cfg.n_types:
        raise ConfigError([f"profile lists {len(exps)} experiments for {cfg.n_types} types"])
    return verifier.StrategyProfile(tuple(exps))


def _jsonify(obj: Any) -> Any:
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _jsonify(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Experiment):
        return {"p": obj.p, "q": obj.q, "uninformative": obj.uninformative}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(x) for x in obj]
    if isinstance(obj, Mapping):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    return obj


def _emit(doc: Any, args) -> None:
    text = json.dumps(_jsonify(doc), indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_rows(rows: list[dict], args) -> None:
    if args.format == "json":
        _emit(rows, args)
        return
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["kind", "label", "p", "q"])
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def _cmd_analyze(args) -> int:
    cfg = load_config(args.config)
    if not isinstance(cfg.cost, LlrCost):
        print("analyze requires the LLR cost model (the entropy model never "
              "satisfies single crossing)", file=sys.stderr)
        return EXIT_INVALID
    report = classify_crossing(cfg.cost.cost_good, cfg.cost.cost_bad)
    _emit(report, args)
    return EXIT_OK


def _cmd_solve(args) -> int:
    cfg = load_config(args.config)
    if not isinstance(cfg.cost, LlrCost):
        print("solve supports the LLR cost model only", file=sys.stderr)
        return EXIT_INVALID
    report = classify_crossing(cfg.cost.cost_good, cfg.cost.cost_bad)
    doc: dict[str, Any] = {"regime": report.regime.value,
                           "cost_good_bound": report.bound}
    if report.triple:
        pooling = equilibria.solve_pooling(cfg)
        uninf = equilibria.solve_uninformative(cfg)
        doc["pooling"] = {
            "q_lo": pooling.q_lo, "q_hi": pooling.q_hi,
            "obedience_bound": pooling.obedience_bound,
            "participation_bound": pooling.participation_bound,
            "large_deviation_bound": pooling.large_dev_bound,
            "empty": pooling.is_empty,
        }
        doc["uninformative"] = uninf
        if not pooling.is_empty:
            top = pooling.experiment_at(pooling.q_hi)
            doc["profile"] = [[top.p, top.q]] * cfg.n_types
            doc["blackwell"] = equilibria.blackwell_report(pooling, cfg)
    else:
        outcome = equilibria.solve_separating(cfg)
        doc["separating"] = {
            "payoffs": list(outcome.payoffs),
            "guarantees": list(outcome.guarantees),
            "binding": list(outcome.binding),
            "uninformative_types": list(outcome.uninformative_types),
        }
        doc["profile"] = [[e.p, e.q] for e in outcome.experiments]
        doc["blackwell"] = equilibria.blackwell_report(outcome, cfg)
    _emit(doc, args)
    return EXIT_OK


def _cmd_verify(args) -> int:
    cfg = load_config(args.config)
    profile = _load_profile(args.profile, cfg)
    grid = verifier.GridSpec(n_p=args.grid, n_q=args.grid, tol=args.tol)
    report = verifier.verify_d1(profile, cfg, grid)
    doc = {
        "ok": report.ok,
        "n_violations": len(report.violations),
        "violations": [
            {"kind": v.kind.value, "type_index": v.type_index,
             "experiment": v.experiment, "belief": v.belief, "margin": v.margin}
            for v in report.violations[:args.max_violations]],
    }
    _emit(doc, args)
    return EXIT_OK if report.ok else EXIT_VIOLATIONS


def _cmd_bench(args) -> int:
    cfg = load_config(args.config)
    doc = {"per_type": [], "common_prior": None}
    for i, mu in enumerate(cfg.mus):
        sol = solve_benchmark(mu, mu, cfg)
        doc["per_type"].append({"type_index": i, "mu": mu, "solution": sol})
    doc["common_prior"] = {"mu": cfg.mu0,
                           "solution": solve_benchmark(cfg.mu0, cfg.mu0, cfg)}
    _emit(doc, args)
    return EXIT_OK


def _cmd_wald(args) -> int:
    try:
        wcfg = wald.WaldConfig(alpha=args.alpha, draw_cost_good=args.draw_cost_good,
                               draw_cost_bad=args.draw_cost_bad, n_high=args.n_high,
                               n_low=args.n_low, mu0=args.mu0, seed=args.seed,
                               n_paths=args.paths)
    except ValueError as exc:
        print(f"invalid sampling configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    stats = wald.simulate(wcfg)
    cost_g, cost_b = wald.closed_form_cost_by_state(wcfg)
    c_good, c_bad = wald.map_to_llr_constants(wcfg.alpha, wcfg.draw_cost_good,
                                              wcfg.draw_cost_bad)
    doc = {
        "config": wcfg,
        "experiment": wald.thresholds_to_experiment(wcfg.alpha, wcfg.n_high, wcfg.n_low),
        "posteriors": dict(zip(("after_good", "after_bad"),
                               wald.posterior_thresholds(wcfg.mu0, wcfg.alpha,
                                                         wcfg.n_high, wcfg.n_low))),
        "closed_form": {"mean_cost": wald.closed_form_cost(wcfg),
                        "cost_good_state": cost_g, "cost_bad_state": cost_b},
        "llr_constants": {"cost_good": c_good, "cost_bad": c_bad},
        "equivalent_llr_cost": wald.equivalent_llr_cost(wcfg),
        "simulation": stats,
    }
    _emit(doc, args)
    return EXIT_OK


def _cmd_curves(args) -> int:
    cfg = load_config(args.config)
    try:
        at = Experiment(args.at_p, args.at_q)
    except ValueError as exc:
        print(f"invalid --at experiment: {exc}", file=sys.stderr)
        return EXIT_INVALID
    rows: list[dict] = []
    q_axis = [i / (args.points + 1) for i in range(1, args.points + 1)]
    if isinstance(cfg.cost, LlrCost):
        report = classify_crossing(cfg.cost.cost_good, cfg.cost.cost_bad)
        if report.triple:
            for q in q_axis:
                rows.append({"kind": "locus", "label": "tangency_low",
                             "p": tangency_low(q, report), "q": q})
                rows.append({"kind": "locus", "label": "tangency_high",
                             "p": tangency_high(q, report), "q": q})
    else:
        for q in q_axis:
            rows.append({"kind": "locus", "label": "shannon_peak",
                         "p": shannon_peak_locus(q, cfg.cost.scale), "q": q})
    for i, mu in enumerate(cfg.mus):
        ratio = odds_ratio(mu, cfg.beta_bar)
        for q in q_axis:
            if q / ratio <= 1.0:
                rows.append({"kind": "obedience", "label": f"type_{i}",
                             "p": q / ratio, "q": q})
        if at.interior:
            for p_stop in (1.0 - 1e-6, 1e-6):
                ps, qs = trace_indifference(at, mu, cfg.cost, p_stop=p_stop,
                                            step=args.step)
                stride = max(1, len(ps) // args.points)
                for p, q in zip(ps[::stride].tolist(), qs[::stride].tolist()):
                    rows.append({"kind": "indifference", "label": f"type_{i}",
                                 "p": p, "q": q})
    ratio0 = odds_ratio(cfg.mu0, cfg.beta_bar)
    for q in q_axis:
        if q / ratio0 <= 1.0:
            rows.append({"kind": "obedience", "label": "common_prior",
                         "p": q / ratio0, "q": q})
    _emit_rows(rows, args)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="costly-persuasion",
        description="Equilibria of costly binary-experiment persuasion games.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config=True):
        if config:
            p.add_argument("--config", required=True,
                           help="path to a JSON config, or inline JSON")
        p.add_argument("--out", default=None, help="write output to a file")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("analyze", help="classify the cost pair")
    add_common(p)
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("solve", help="solve regime-appropriate equilibria")
    add_common(p)
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("verify", help="verify a strategy profile against D1")
    add_common(p)
    p.add_argument("--profile", required=True,
                   help="JSON profile: {\"experiments\": [[p, q], ...]}")
    p.add_argument("--grid", type=int, default=201, help="deviation grid resolution")
    p.add_argument("--tol", type=float, default=1e-9, help="violation tolerance")
    p.add_argument("--max-violations", type=int, default=50,
                   help="cap on serialized violation records")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("bench", help="symmetric-information benchmark")
    add_common(p)
    p.set_defaults(fn=_cmd_bench)

    p = sub.add_parser("wald", help="sequential-sampling Monte Carlo")
    add_common(p, config=False)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n-high", type=int, required=True)
    p.add_argument("--n-low", type=int, required=True)
    p.add_argument("--draw-cost-good", type=float, default=1.0)
    p.add_argument("--draw-cost-bad", type=float, default=1.0)
    p.add_argument("--mu0", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--paths", type=int, default=100_000)
    p.set_defaults(fn=_cmd_wald)

    p = sub.add_parser("curves", help="loci, obedience lines, indifference curves")
    add_common(p)
    p.add_argument("--at-p", type=float, default=0.5,
                   help="p of the experiment the curves pass through")
    p.add_argument("--at-q", type=float, default=0.25,
                   help="q of the experiment the curves pass through")
    p.add_argument("--points", type=int, default=99, help="samples per curve")
    p.add_argument("--step", type=float, default=1e-3, help="curve-tracing step")
    p.set_defaults(fn=_cmd_curves)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        for line in exc.errors:
            print(f"config error: {line}", file=sys.stderr)
        return EXIT_INVALID
    except RegimeError as exc:
        print(f"regime mismatch: {exc} (cost_good={exc.cost_good}, "
              f"single-crossing bound={exc.bound})", file=sys.stderr)
        return EXIT_REGIME
    except NoIntersectionError as exc:
        print(f"no intersection: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
