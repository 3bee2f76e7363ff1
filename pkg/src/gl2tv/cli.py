"""Command-line driver: ``gl2tv verify ...``, ``gl2tv solve``, ``gl2tv eval``.

Exit codes: 0 when every selected check passes, 1 on a verification
failure, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import padic
from .field import SpecializationPole, specialize
from .padic import Mat2, gl2_order, is_prime
from .principal_series import (
    MU1,
    MU2,
    EvalContext,
    eval_new_vector,
    eval_pair,
    eval_v2star,
    restrict_to_little_f,
)
from . import verifier as V

CHECKS = [
    "lemma2",
    "lemma3",
    "tables",
    "hecke",
    "kdecomp",
    "f1f2",
    "gamma-table",
    "simple-case",
    "little-f",
    "all",
]

DEFAULT_BUDGET = 10**8


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    prime: int = 2
    level_m: int = 2
    variant: str = "both"
    seed: int = 0
    output: str | None = None
    format: str = "text"
    workers: int = 1
    budget: int = DEFAULT_BUDGET
    force: bool = False
    timing: bool = False

    def validate(self):
        if not is_prime(self.prime):
            raise UsageError(f"--prime {self.prime} is not prime")
        if self.level_m < 1:
            raise UsageError("--level-m must be >= 1")
        if self.variant not in ("1", "2", "both"):
            raise UsageError(f"unknown variant {self.variant!r}")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")

    def variants(self):
        if self.variant == "both":
            return [V.FormulaVariant.FORMULA_1, V.FormulaVariant.FORMULA_2]
        return [V.FormulaVariant(int(self.variant))]


def _guard(cfg, name, work):
    if work > cfg.budget and not cfg.force:
        raise UsageError(
            f"{name}: projected {work:.3g} evaluations exceed the budget of {cfg.budget:.3g}; "
            "rerun with --force or raise GL2TV_BUDGET"
        )


def _run(name, fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    details = {}
    if isinstance(out, tuple):
        out, summary = out
        details["summary"] = summary
    if isinstance(out, V.CheckResult):
        result = out
        result.name = name
    else:
        result = V.CheckResult(name, list(out))
    result.notes.update(details)
    result.elapsed_ms = (time.perf_counter() - start) * 1000.0
    return result


def _bool_check(name, ok, p, count):
    one = V.FieldElement.const(p, 1)
    return [V.CellReport(name, None, None, one, V.FieldElement.const(p, int(ok)), ok, count)]


def run_checks(which, cfg):
    """Run the selected check class; returns a list of CheckResults."""
    p, m = cfg.prime, cfg.level_m
    ctx = EvalContext(p)
    pairs = gl2_order(p, m) ** 2
    singles = p ** (4 * m)
    selected = CHECKS[:-1] + ["solve"] if which == "all" else [which]
    results = []
    for name in selected:
        if name == "hecke":
            _guard(cfg, name, p ** 8)
            results.append(_run("hecke", lambda: _bool_check(
                "hecke/decomposition", padic.verify_hecke_decomposition(p, m=2), p, p + 1)))
        elif name == "kdecomp":
            results.append(_run("kdecomp", lambda: _bool_check(
                "kdecomp/partition", padic.verify_k_decomposition(p), p, gl2_order(p, 1))))
        elif name == "simple-case":
            results.append(_run("simple-case", V.simple_case_reports, ctx))
        elif name == "lemma2":
            _guard(cfg, name, p ** 8)
            results.append(_run("lemma2", V.lemma2_reports, ctx))
        elif name == "f1f2":
            _guard(cfg, name, singles)
            results.append(_run("f1f2/F1", V.f_constant_reports, "F1", ctx, m))
            results.append(_run("f1f2/F2", V.f_constant_reports, "F2", ctx, m))
        elif name == "gamma-table":
            results.append(_run("gamma-table", V.check_gamma_translate_table, ctx))
        elif name == "tables":
            _guard(cfg, name, singles)
            results.append(_run("tables", V.check_proof_tables, ctx, m))
        elif name == "little-f":
            for v in cfg.variants():
                results.append(_run(f"little-f/formula{v.value}", V.verify_little_f, v, ctx, seed=cfg.seed))
        elif name == "lemma3":
            _guard(cfg, name, pairs)
            for v in cfg.variants():
                results.append(_run(f"lemma3/formula{v.value}", V.verify_lemma3, v, ctx, m, workers=cfg.workers))
                results.append(_run(f"mutation/formula{v.value}", V.mutation_reports, v, ctx, m))
                elem = V.build_formula(v, ctx)
                results.append(_run(
                    f"lift-invariance/formula{v.value}",
                    V.check_lift_invariance, elem, ctx, m, samples=25, seed=cfg.seed,
                ))
        elif name == "solve":
            _guard(cfg, name, singles)
            for v in cfg.variants():
                results.append(_run(f"solve/formula{v.value}", V.solve_reports, ctx, v, m))
        else:
            raise UsageError(f"unknown check {name!r}")
    return results


def key_values(p):
    ctx = EvalContext(p)
    ident = Mat2.identity(p)
    return {
        "A": str(V.coefficient_A(p)),
        "F1_constant": str(V.F1_constant(p)),
        "F2_constant": str(V.F2_constant(p)),
        "v2star(1)": str(eval_v2star(ident, ctx)),
        "v2star(w)": str(eval_v2star(ctx.w, ctx)),
    }


def build_report(cfg, results):
    checks = []
    for r in results:
        entry = {
            "name": r.name,
            "cells": r.cells,
            "failures": [f.to_dict() for f in r.failures],
            "elapsed_ms": round(r.elapsed_ms, 3) if cfg.timing else None,
            "pass": r.passed,
        }
        if r.notes:
            entry["details"] = {k: r.notes[k] for k in sorted(r.notes)}
        checks.append(entry)
    config = asdict(cfg)
    config.pop("output")
    return {
        "config": config,
        "checks": checks,
        "values": key_values(cfg.prime),
        "pass": all(r.passed for r in results),
    }


def render_text(report, results):
    lines = []
    c = report["config"]
    lines.append(f"prime={c['prime']} level_m={c['level_m']} variant={c['variant']} seed={c['seed']}")
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        extra = f"  [{r.notes['summary']}]" if "summary" in r.notes else ""
        lines.append(
            f"[{status}] {r.name:<28} cells={r.cells:<10} failures={r.failed_cells:<6} "
            f"{r.elapsed_ms:9.1f} ms{extra}"
        )
        for f in r.failures[:5]:
            lines.append(f"    {f.label}: k={f.k} k'={f.k_prime} expected={f.expected} computed={f.computed}")
    for name, value in report["values"].items():
        lines.append(f"  {name} = {value}")
    lines.append("ALL PASS" if report["pass"] else "FAILED")
    return "\n".join(lines)


def _emit(text, cfg):
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _parse_rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational {text!r}") from exc


def run_eval(args, cfg):
    p = cfg.prime
    ctx = EvalContext(p)
    try:
        mats = [Mat2.parse(t, p) for t in args.matrix]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    for g in mats:
        if not g.det():
            raise UsageError(f"matrix {g} is singular")
    which = args.which
    single = {"v1", "v2", "v2star", "little-f1", "little-f2"}
    needed = 1 if which in single else 2
    if len(mats) != needed:
        raise UsageError(f"--which {which} needs {needed} --matrix argument(s)")
    if which == "v1":
        value = eval_new_vector(MU1, mats[0])
    elif which == "v2":
        value = eval_new_vector(MU2, mats[0])
    elif which == "v2star":
        value = eval_v2star(mats[0], ctx)
    elif which.startswith("little-f"):
        value = restrict_to_little_f(V.build_formula(int(which[-1]), ctx), mats[0], ctx)
    else:
        elem = {
            "F1": lambda: V.build_F1(ctx),
            "F2": lambda: V.build_F2(ctx),
            "formula1": lambda: V.build_formula(1, ctx),
            "formula2": lambda: V.build_formula(2, ctx),
        }[which]()
        value = eval_pair(elem, mats[0], mats[1], ctx)
    out = {"which": which, "matrices": [str(g) for g in mats], "value": str(value)}
    if args.x is not None or args.y is not None:
        if args.x is None or args.y is None:
            raise UsageError("--x and --y must be given together")
        x, y = _parse_rational(args.x), _parse_rational(args.y)
        if which.startswith("formula") or which.startswith("little-f"):
            try:
                V.check_parameters(int(which[-1]), x, y, p)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
        try:
            out["specialized"] = str(specialize(value, x, y))
        except SpecializationPole as exc:
            raise UsageError(str(exc)) from exc
    if cfg.format == "json":
        return json.dumps(out, indent=2, sort_keys=True)
    text = out["value"]
    if "specialized" in out:
        text += f"\n{out['specialized']}"
    return text


def _common(parser):
    env_workers = int(os.environ.get("GL2TV_WORKERS", "1"))
    env_budget = int(float(os.environ.get("GL2TV_BUDGET", DEFAULT_BUDGET)))
    parser.add_argument("--prime", type=int, default=2)
    parser.add_argument("--level-m", type=int, default=2, dest="level_m")
    parser.add_argument("--variant", default="both", choices=["1", "2", "both"])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--output", default=None)
    parser.add_argument("--format", default="text", choices=["text", "json"])
    parser.add_argument("--workers", type=int, default=env_workers)
    parser.add_argument("--budget", type=float, default=env_budget)
    parser.add_argument("--force", action="store_true")
    parser.add_argument("--timing", action="store_true", help="record wall time in JSON reports")


def make_parser():
    parser = argparse.ArgumentParser(
        prog="gl2tv",
        description="Exact verification of the conductor-one test-vector computation for GL2(Q_p).",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    pv = sub.add_parser("verify", help="run verification checks")
    pv.add_argument("check", choices=CHECKS)
    _common(pv)
    ps = sub.add_parser("solve", help="solve for the coefficients by linear algebra")
    _common(ps)
    pe = sub.add_parser("eval", help="evaluate v1, v2, v2* or a built element at rational matrices")
    pe.add_argument("--matrix", action="append", required=True, help='row-major "a,b;c,d"')
    pe.add_argument(
        "--which",
        required=True,
        choices=["v1", "v2", "v2star", "F1", "F2", "formula1", "formula2", "little-f1", "little-f2"],
    )
    pe.add_argument("--x", default=None, help="specialise X to this rational")
    pe.add_argument("--y", default=None, help="specialise Y to this rational")
    _common(pe)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        prime=args.prime,
        level_m=args.level_m,
        variant=args.variant,
        seed=args.seed,
        output=args.output,
        format=args.format,
        workers=args.workers,
        budget=int(args.budget),
        force=args.force,
        timing=args.timing,
    )
    try:
        cfg.validate()
        if args.command == "eval":
            _emit(run_eval(args, cfg), cfg)
            return 0
        which = "solve" if args.command == "solve" else args.check
        results = run_checks(which, cfg)
    except UsageError as exc:
        print(f"gl2tv: error: {exc}", file=sys.stderr)
        return 2
    report = build_report(cfg, results)
    if cfg.format == "json":
        _emit(json.dumps(report, indent=2, sort_keys=True), cfg)
    else:
        _emit(render_text(report, results), cfg)
    if not report["pass"]:
        first = next(r.name for r in results if not r.passed)
        print(f"gl2tv: first failing check: {first}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
