"""Command line interface.

Subcommands: ``exact`` (closed-form constants and catalog bounds),
``estimate`` (alternating-ascent lower bounds on a chosen model),
``verify`` (the property battery), ``catalog`` (consistency report), and
``report`` (re-render a saved estimate report).

Exit codes: 0 success; 2 invalid exponents; 3 unknown catalog name;
4 model construction failure; 5 verification failure.  Every numeric that
text mode prints is also present in the JSON output, and identical command
lines with identical seeds produce byte-identical JSON.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

from .catalog import (
    builtin_catalog,
    catalog_consistency_check,
    load_catalog,
    max_compact_bound,
    nielsen_exact,
)
from .constants import beckner_Y_Rn, boundary_value, neg_log_constant
from .estimator import EstimatorConfig, estimate
from .exponents import ExponentError, young_p
from .groups import (
    GroupModelError,
    affine_prime_field,
    cyclic_group,
    load_group_table,
    make_affine_group,
    make_integer_line,
    make_plane,
    make_real_line,
    make_torus,
)
from .verify import proof_chain_table, run_battery

EXIT_OK = 0
EXIT_BAD_EXPONENTS = 2
EXIT_UNKNOWN_GROUP = 3
EXIT_BAD_MODEL = 4
EXIT_VERIFY_FAILED = 5


def _emit(payload: dict, args, text_lines):
    """Write the canonical JSON and/or the text rendering of one result."""
    blob = json.dumps(payload, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(blob + "\n")
    if args.format == "json":
        print(blob)
    else:
        for line in text_lines:
            print(line)


def _parse_triple(args):
    try:
        return young_p(args.p1, args.p2)
    except ExponentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_EXPONENTS)


def cmd_exact(args) -> int:
    ex = _parse_triple(args)
    catalog = load_catalog(args.catalog) if args.catalog else builtin_catalog()
    by_name = {d.name: d for d in catalog}
    y_r = beckner_Y_Rn(ex.p1, ex.p2, 1)
    payload = {
        "p1": str(ex.p1),
        "p2": str(ex.p2),
        "p": str(ex.p),
        "boundary": ex.boundary,
        "boundary_value": boundary_value(ex),
        "beckner_Y_R1": y_r,
        "neg_log_Y_R1": neg_log_constant(y_r),
    }
    lines = [
        f"exponents: p1={ex.p1} p2={ex.p2} p={ex.p}"
        + (" (boundary: optimal constant 1 on every group)" if ex.boundary else ""),
        f"Y(p1,p2;R) = {y_r:.10f}   -ln = {payload['neg_log_Y_R1']:.10f}",
    ]
    if args.group:
        desc = by_name.get(args.group)
        if desc is None:
            print(f"error: unknown catalog name {args.group!r}", file=sys.stderr)
            return EXIT_UNKNOWN_GROUP
        info = {"name": desc.name, "dim": desc.dim, "r": desc.r}
        if desc.flag("in_class_A"):
            bound = max_compact_bound(desc, ex)
            info["max_compact_bound"] = bound
            info["neg_log_bound"] = neg_log_constant(bound)
            lines.append(
                f"{desc.name}: dim={desc.dim} r={desc.r} "
                f"bound Y <= Y(R)^{desc.dim - desc.r} = {bound:.10f}"
            )
        exact = nielsen_exact(desc, ex)
        info["exact_value"] = exact
        if exact is not None:
            info["neg_log_exact"] = neg_log_constant(exact)
            lines.append(f"{desc.name}: exact value {exact:.10f}")
        payload["group"] = info
    _emit(payload, args, lines)
    return EXIT_OK


def _build_model(selector: str):
    """Parse a group selector like Rline:h=0.05,L=8 into a model."""
    if ":" not in selector:
        raise GroupModelError(f"selector {selector!r} needs the form name:params")
    name, _, params = selector.partition(":")
    name = name.lower()
    kv = {}
    plain = []
    for tok in params.split(","):
        if not tok:
            continue
        if "=" in tok:
            key, _, val = tok.partition("=")
            kv[key.strip()] = val.strip()
        else:
            plain.append(tok.strip())
    if name == "zmod":
        return cyclic_group(int(plain[0] if plain else kv["n"]))
    if name == "afff":
        return affine_prime_field(int(plain[0] if plain else kv["q"]))
    if name == "torus":
        return make_torus(int(plain[0] if plain else kv["n"]))
    if name == "zwindow":
        return make_integer_line(int(plain[0] if plain else kv["L"]))
    if name == "rline":
        return make_real_line(float(kv["h"]), float(kv["L"]))
    if name in ("plane", "r2"):
        return make_plane(float(kv["h"]), float(kv["L"]))
    if name == "affine":
        return make_affine_group(
            float(kv.get("hu", kv.get("h", 0.05))),
            float(kv["U"]),
            float(kv.get("hb", kv.get("h", 0.05))),
            float(kv["B"]),
        )
    if name == "table":
        return load_group_table(plain[0] if plain else kv["path"])
    raise GroupModelError(f"unknown group selector {name!r}")


def cmd_estimate(args) -> int:
    ex = _parse_triple(args)
    try:
        model = _build_model(args.group)
    except (GroupModelError, KeyError, ValueError, IndexError, OSError) as exc:
        print(f"error: cannot build model from {args.group!r}: {exc}", file=sys.stderr)
        return EXIT_BAD_MODEL
    if ex.boundary:
        payload = {
            "group": model.name,
            "p1": str(ex.p1),
            "p2": str(ex.p2),
            "p": str(ex.p),
            "boundary_value": 1.0,
        }
        _emit(payload, args, [f"{model.name}: boundary triple, optimal constant 1"])
        return EXIT_OK
    cfg = EstimatorConfig(
        restarts=args.restarts, max_iters=args.iters, tol=args.tol, seed=args.seed
    )
    report = estimate(model, ex, cfg)
    payload = report.to_json_dict()
    best_ref = min(v for _, v in report.upper_bound_refs)
    lines = [
        f"{model.name}: lower bound {report.lower_bound:.6f} "
        f"(best upper reference {best_ref:.6f})",
        f"restarts={report.restarts} best_restart={report.best_restart} "
        f"iterations={report.iterations} converged={report.converged}",
        f"truncation_mass={report.truncation_mass:.3e}",
    ]
    if not report.converged:
        lines.append("warning: at least one restart hit the iteration cap")
    _emit(payload, args, lines)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(
                handle, fieldnames=["restart", "final_ratio", "iterations", "converged"]
            )
            writer.writeheader()
            writer.writerows(report.restart_rows())
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.proof_chain:
        rows, ok = proof_chain_table(seeds=args.seeds, corrupt=args.corrupt)
        payload = {"proof_chain": rows, "passed": ok}
        lines = [
            f"{r['pair']:24s} ({r['p1']},{r['p2']}) {r['step']:28s} "
            f"{r['worst_residual']:.3e} {'ok' if r['passed'] else 'FAIL'}"
            for r in rows
        ]
        _emit(payload, args, lines)
        if args.csv:
            with open(args.csv, "w", newline="", encoding="utf-8") as handle:
                writer = csv.DictWriter(handle, fieldnames=list(rows[0].keys()))
                writer.writeheader()
                writer.writerows(rows)
        if not ok:
            first = next(r for r in rows if not r["passed"])
            print(f"verify failed at: {first['step']} on {first['pair']}", file=sys.stderr)
            return EXIT_VERIFY_FAILED
        return EXIT_OK
    items, ok = run_battery(
        seeds=args.seeds,
        proof_seeds=max(2, args.seeds),
        corrupt=args.corrupt,
        with_estimates=not args.no_estimates,
    )
    payload = {"battery": [i.as_dict() for i in items], "passed": ok}
    _emit(payload, args, [str(i) for i in items])
    if not ok:
        first = next(i for i in items if not i.passed)
        print(f"verify failed at: {first.name}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_catalog(args) -> int:
    try:
        catalog = load_catalog(args.catalog) if args.catalog else builtin_catalog()
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_MODEL
    ex = young_p(args.p1, args.p2)
    report = catalog_consistency_check(catalog, ex)
    entries = []
    lines = []
    for desc in catalog:
        row = {
            "name": desc.name,
            "dim": desc.dim,
            "r": desc.r,
            "exact_value_rule": desc.exact_value_rule,
            "links": [list(l) for l in desc.links],
        }
        if desc.flag("in_class_A"):
            row["max_compact_bound"] = max_compact_bound(desc, ex)
        row["exact_value"] = nielsen_exact(desc, ex)
        entries.append(row)
        bound = row.get("max_compact_bound")
        lines.append(
            f"{desc.name:14s} dim={desc.dim} r={desc.r} "
            + (f"bound={bound:.6f} " if bound is not None else "bound=n/a    ")
            + (
                f"exact={row['exact_value']:.6f}"
                if row["exact_value"] is not None
                else "exact=n/a"
            )
        )
    payload = {
        "p1": args.p1,
        "p2": args.p2,
        "entries": entries,
        "violations": [str(v) for v in report.violations],
        "consistent": report.ok,
    }
    lines.append(
        "catalog consistent"
        if report.ok
        else "violations: " + "; ".join(str(v) for v in report.violations)
    )
    _emit(payload, args, lines)
    return EXIT_OK if report.ok else EXIT_VERIFY_FAILED


def cmd_report(args) -> int:
    try:
        with open(args.input, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read report: {exc}", file=sys.stderr)
        return EXIT_BAD_MODEL
    if args.format == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["restart", "final_ratio"])
        for idx, trace in enumerate(payload.get("ratio_trace", [])):
            writer.writerow([idx, trace[-1] if trace else math.nan])
        return EXIT_OK
    lines = [
        f"group: {payload['group']}",
        f"exponents: p1={payload['exponents']['p1']} p2={payload['exponents']['p2']} "
        f"p={payload['exponents']['p']}",
        f"lower bound: {payload['lower_bound']:.6f}",
        f"restarts: {payload['restarts']}  best: {payload['best_restart']}  "
        f"converged: {payload['converged']}",
        f"truncation mass: {payload['truncation_mass']:.3e}",
        "upper references: "
        + ", ".join(
            f"{r['source']}={r['value']:.6f}" for r in payload["upper_bound_refs"]
        ),
    ]
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="youngconv",
        description="Optimal constants of Young's convolution inequality on "
        "discretized locally compact groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--format", choices=["text", "json"], default="text")
        p.add_argument("--out", help="write the canonical JSON payload here")

    p_exact = sub.add_parser("exact", help="closed-form constants and bounds")
    p_exact.add_argument("--p1", required=True)
    p_exact.add_argument("--p2", required=True)
    p_exact.add_argument("--group", help="catalog name (e.g. R, affine_R, sl2_R)")
    p_exact.add_argument("--catalog", help="catalog JSON file (default: shipped)")
    add_common(p_exact)
    p_exact.set_defaults(func=cmd_exact)

    p_est = sub.add_parser("estimate", help="lower-bound estimation on a model")
    p_est.add_argument("--group", required=True, help="Zmod:8 | AffF:5 | Torus:16 | "
                       "Zwindow:40 | Rline:h=0.05,L=8 | Plane:h=0.2,L=4 | "
                       "Affine:hu=0.05,U=1.5,hb=0.05,B=3 | Table:file.json")
    p_est.add_argument("--p1", required=True)
    p_est.add_argument("--p2", required=True)
    p_est.add_argument("--restarts", type=int, default=16)
    p_est.add_argument("--iters", type=int, default=500)
    p_est.add_argument("--tol", type=float, default=1e-9)
    p_est.add_argument("--seed", type=int, default=42)
    p_est.add_argument("--csv", help="write one row per restart here")
    add_common(p_est)
    p_est.set_defaults(func=cmd_estimate)

    p_ver = sub.add_parser("verify", help="run the property battery")
    p_ver.add_argument("--seeds", type=int, default=5)
    p_ver.add_argument("--proof-chain", action="store_true",
                       help="emit the per-step proof chain residual table only")
    p_ver.add_argument("--corrupt", choices=["delta"], help="negative control")
    p_ver.add_argument("--no-estimates", action="store_true",
                       help="skip the (slower) monotonicity audit")
    p_ver.add_argument("--csv", help="write the residual table here (proof-chain mode)")
    add_common(p_ver)
    p_ver.set_defaults(func=cmd_verify)

    p_cat = sub.add_parser("catalog", help="catalog entries and consistency")
    p_cat.add_argument("--catalog", help="catalog JSON file (default: shipped)")
    p_cat.add_argument("--p1", default="4/3")
    p_cat.add_argument("--p2", default="4/3")
    add_common(p_cat)
    p_cat.set_defaults(func=cmd_catalog)

    p_rep = sub.add_parser("report", help="re-render a saved estimate report")
    p_rep.add_argument("--input", required=True)
    p_rep.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p_rep.add_argument("--out", help=argparse.SUPPRESS)
    p_rep.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
