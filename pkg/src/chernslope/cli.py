"""Command-line interface.

Reports go to stdout as JSON (exact rationals as {"num", "den"} pairs;
floats only in *_approx fields); logs and errors go to stderr. Exit codes:
0 success, 2 invalid input, 3 search exhausted / cap hit. A key=value
config file can predefine any long option; explicit flags win.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import multiprocessing
import os
import sys
from fractions import Fraction

from . import density, nefcheck, pipeline, prank
from .badset import bad_set, verify_bounds
from .geometry import (
    ArrangementParams,
    DegenerateParameterError,
    Family,
    build_resolution,
    log_chern_closed,
    log_chern_pair,
)
from .numtheory import DomainError, dedekind_data, is_prime, primes_between
from .partitions import NotFound, PartitionProblem, sample_with_stats, search_assignment
from .rootcover import BranchAssignment, InvalidAssignmentError, chern_of_cover
from .serialize import canonical_json, jsonable

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NOT_FOUND = 3


def _emit(obj) -> None:
    print(canonical_json(obj))


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _params_from_args(args) -> ArrangementParams:
    return ArrangementParams(
        family=Family(args.family), p=args.p, r=args.r, e=args.e,
        d=args.d, g=args.g, u=args.u, w=args.w,
    )


def _add_family_options(sub,*, default_family="A0") -> None:
    sub.add_argument("--family", default=default_family, choices=[f.value for f in Family])
    sub.add_argument("--p", type=int, default=2)
    sub.add_argument("--r", type=int, default=1)
    sub.add_argument("--e", type=int, default=1)
    sub.add_argument("--d", type=int, default=3)
    sub.add_argument("--g", type=int, default=0)
    sub.add_argument("--u", type=int, default=0)
    sub.add_argument("--w", type=int, default=0)


def _cmd_dedekind(args) -> int:
    data = dedekind_data(args.q, args.a)
    _emit({
        "q": data.q, "a": data.a, "digits": list(data.digits), "length": data.length,
        "s": data.s, "s_approx": float(data.s),
        "c": data.c, "c_approx": float(data.c),
    })
    return EXIT_OK


def _cmd_badset(args) -> int:
    C = Fraction(args.C)
    fs = bad_set(args.q, C)
    out = {
        "q": fs.q, "C": C, "size": len(fs.members),
        "bad": list(fs.members), "good": list(fs.complement),
    }
    if args.verify:
        rep = verify_bounds(args.q, C)
        out["bounds"] = {
            "cardinality_ok": rep.card_bound_ok,
            "length_ok": rep.length_bound_ok,
            "sum_ok": rep.sum_bound_ok,
            "worst_length": {"a": rep.worst_length[0], "l": rep.worst_length[1]},
            "worst_scaled_sum": {"a": rep.worst_scaled_sum[0], "value": rep.worst_scaled_sum[1]},
            "ok": rep.ok,
        }
    _emit(out)
    return EXIT_OK


def _cmd_arrangement(args) -> int:
    params = _params_from_args(args)
    c1b, c2b, slope = log_chern_closed(params)
    out = {
        "params": {"family": params.family.value, "p": params.p, "r": params.r,
                   "e": params.e, "d": params.d, "g": params.g, "u": params.u, "w": params.w},
        "delta": params.delta,
        "closed": {"c1sq_bar": c1b, "c2_bar": c2b,
                   "limit_slope": slope, "limit_slope_approx": float(slope)},
    }
    if not args.closed_only:
        config = build_resolution(params)
        b1, b2 = log_chern_pair(config)
        out["census"] = {
            "components": len(config.components),
            "t2": config.t2,
            "c1sq_bar": b1,
            "c2_bar": b2,
            "c1sq_ambient": config.c1sq_ambient,
            "c2_ambient": config.c2_ambient,
        }
        if args.full:
            out["census"]["component_list"] = [
                {"id": c.cid, "kind": c.kind, "self": c.self_int, "genus": c.genus}
                for c in config.components
            ]
            out["census"]["nodes"] = [list(n) for n in config.nodes]
    _emit(out)
    return EXIT_OK


def _search(args):
    """Rejection sampling first, deterministic backtracking as a fallback."""
    params = _params_from_args(args)
    config = build_resolution(params)
    problem = PartitionProblem(config, args.q)
    result, tries = sample_with_stats(problem, seed=args.seed, max_tries=args.max_tries)
    method = "rejection"
    if isinstance(result, NotFound):
        fallback = search_assignment(problem, seed=args.seed)
        if not isinstance(fallback, NotFound):
            result, method = fallback, "backtracking"
    return config, result, tries, method


def _cmd_search(args) -> int:
    config, result, tries, method = _search(args)
    if isinstance(result, NotFound):
        _emit({"status": "not_found", "tries": result.tries, "zero_hits": result.zero_hits,
               "fewest_bad": result.fewest_bad,
               "worst_node": list(result.worst_node) if result.worst_node else None})
        return EXIT_NOT_FOUND
    _emit({"status": "ok", "q": result.q, "tries": tries, "method": method,
           "nus": dict(result.nus)})
    return EXIT_OK


def _cmd_cover(args) -> int:
    params = _params_from_args(args)
    config = build_resolution(params)
    if args.base_file:
        with open(args.base_file, "r", encoding="utf-8") as fh:
            base = {k: int(v) for k, v in json.load(fh).items()}
        assign = BranchAssignment.from_base(config, args.q, base)
        tries = 0
    else:
        problem = PartitionProblem(config, args.q)
        result, tries = sample_with_stats(problem, seed=args.seed, max_tries=args.max_tries)
        if isinstance(result, NotFound):
            result = search_assignment(problem, seed=args.seed)
        if isinstance(result, NotFound):
            _emit({"status": "not_found", "tries": result.tries})
            return EXIT_NOT_FOUND
        assign = result
    cover = chern_of_cover(config, assign)
    out = {
        "status": "ok", "q": args.q, "tries": tries,
        "c1sq": cover.c1sq, "c2": cover.c2, "chi": cover.chi,
        "slope": cover.slope, "slope_approx": float(cover.slope),
        "c_correction": cover.c_correction, "l_correction": cover.l_correction,
        "defect_bound": cover.defect_bound,
    }
    if args.singularities:
        out["singularities"] = [
            {"node": list(s.node), "a": s.a, "l": s.l, "c": s.c, "digits": list(s.hj_digits)}
            for s in cover.singularities
        ]
    _emit(out)
    return EXIT_OK


def _cmd_slope(args) -> int:
    result = pipeline.run_pipeline(
        target=Fraction(args.target), epsilon=Fraction(args.eps), p=args.p,
        family=Family(args.family), q_hint=args.q_hint, seed=args.seed,
        g=args.g, e=args.e, w=args.w, sample=not args.no_sample,
        component_cap=args.component_cap, node_cap=args.node_cap,
        max_tries=args.max_tries,
    )
    print(result.to_json())
    return EXIT_OK if result.status == "ok" else EXIT_NOT_FOUND


def _cmd_prank(args) -> int:
    mults = tuple(int(x) for x in args.mults.split(","))
    data = prank.CyclicCoverData(q=args.q, p=args.p, mults=mults)
    out = {
        "q": args.q, "p": args.p, "mults": list(mults),
        "genus": prank.genus(data),
        "B": prank.prank_upper_bound(data),
        "orbits": [list(o) for o in prank.frobenius_orbits(args.q, args.p)],
    }
    if is_prime(args.q):
        out["primitive_root"] = prank.is_primitive_root(args.p, args.q)
    _emit(out)
    return EXIT_OK


def _cmd_nef(args) -> int:
    params = _params_from_args(args)
    if args.find:
        threshold = nefcheck.min_nef_q(params, q_cap=args.q_cap)
        if threshold is None:
            _emit({"status": "not_found", "q_cap": args.q_cap})
            return EXIT_NOT_FOUND
        rep = nefcheck.nef_report(params, threshold)
        _emit({"status": "ok", "min_nef_q": threshold, "entries": rep.entries,
               "all_nonnegative": rep.all_nef, "t_value": rep.t_value})
        return EXIT_OK
    rep = nefcheck.nef_report(params, args.q)
    _emit({
        "q": args.q,
        "entries": rep.entries,
        "config_entries": rep.config_entries,
        "mismatched_labels": list(rep.mismatched_labels),
        "all_nonnegative": rep.all_nef,
        "t_value": rep.t_value,
    })
    return EXIT_OK


def _sweep_row(task) -> dict:
    params_tuple, q, seed, max_tries = task
    params = ArrangementParams(*params_tuple)
    config = build_resolution(params)
    problem = PartitionProblem(config, q)
    result, tries = sample_with_stats(problem, seed=seed, max_tries=max_tries)
    if isinstance(result, NotFound):
        result = search_assignment(problem, seed=seed)
    _, _, limit = log_chern_closed(params)
    if isinstance(result, NotFound):
        return {"q": q, "seed": seed, "status": "not_found", "tries": tries,
                "c1sq": "", "c2": "", "chi": "", "slope_approx": "",
                "limit_slope_approx": float(limit), "abs_err_approx": "",
                "c_correction": "", "defect_bound": ""}
    cover = chern_of_cover(config, result)
    return {
        "q": q, "seed": seed, "status": "ok", "tries": tries,
        "c1sq": str(cover.c1sq), "c2": str(cover.c2), "chi": str(cover.chi),
        "slope_approx": float(cover.slope),
        "limit_slope_approx": float(limit),
        "abs_err_approx": abs(float(cover.slope) - float(limit)),
        "c_correction": str(cover.c_correction),
        "defect_bound": cover.defect_bound,
    }


def _per_q_seed(master_seed: int, q: int) -> int:
    digest = hashlib.sha256(f"{master_seed}:{q}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _cmd_sweep(args) -> int:
    params = _params_from_args(args)
    params_tuple = (params.family, params.p, params.r, params.e,
                    params.d, params.g, params.u, params.w)
    primes = [q for q in primes_between(args.q_min, args.q_max) if q != params.p]
    tasks = [(params_tuple, q, _per_q_seed(args.seed, q), args.max_tries) for q in primes]
    workers = int(os.environ.get("CHERNSLOPE_WORKERS", "1"))
    if workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(workers) as pool:
            rows = pool.map(_sweep_row, tasks)
    else:
        rows = [_sweep_row(t) for t in tasks]
    rows.sort(key=lambda r: r["q"])

    fieldnames = ["q", "seed", "status", "tries", "c1sq", "c2", "chi", "slope_approx",
                  "limit_slope_approx", "abs_err_approx", "c_correction", "defect_bound"]
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            out.close()
    _log(f"sweep: {len(rows)} primes in [{args.q_min}, {args.q_max}]")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chernslope",
        description="Exact invariants of cyclic branched covers: continued "
                    "fractions, residue classes, slopes, and search reports.",
    )
    parser.add_argument("--config", help="key=value file of option defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("dedekind", help="HJ expansion, Dedekind sum and c-invariant of (a, q)")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--a", type=int, required=True)
    s.set_defaults(func=_cmd_dedekind)

    s = sub.add_parser("badset", help="bad/good residue split at a prime q")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--C", default="1")
    s.add_argument("--verify", action="store_true", help="also check the size/length/sum bounds")
    s.set_defaults(func=_cmd_badset)

    s = sub.add_parser("arrangement", help="resolved arrangement census and closed forms")
    _add_family_options(s)
    s.add_argument("--closed-only", action="store_true")
    s.add_argument("--full", action="store_true", help="include full component/node lists")
    s.set_defaults(func=_cmd_arrangement)

    s = sub.add_parser("search", help="seeded search for a good branch assignment")
    _add_family_options(s)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-tries", type=int, default=200)
    s.set_defaults(func=_cmd_search)

    s = sub.add_parser("cover", help="Chern numbers of the degree-q cover")
    _add_family_options(s)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-tries", type=int, default=200)
    s.add_argument("--base-file", help="JSON file of component multiplicities (skips sampling)")
    s.add_argument("--singularities", action="store_true")
    s.set_defaults(func=_cmd_cover)

    s = sub.add_parser("slope", help="end-to-end: target slope -> parameters -> sampled cover")
    s.add_argument("--target", required=True)
    s.add_argument("--eps", default="1/100")
    s.add_argument("--p", type=int, default=2)
    s.add_argument("--family", default="A", choices=[f.value for f in Family if f is not Family.A0])
    s.add_argument("--q-hint", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--g", type=int, default=0)
    s.add_argument("--e", type=int, default=1)
    s.add_argument("--w", type=int, default=1)
    s.add_argument("--no-sample", action="store_true")
    s.add_argument("--component-cap", type=int, default=pipeline.DEFAULT_COMPONENT_CAP)
    s.add_argument("--node-cap", type=int, default=pipeline.DEFAULT_NODE_CAP)
    s.add_argument("--max-tries", type=int, default=200)
    s.set_defaults(func=_cmd_slope)

    s = sub.add_parser("prank", help="genus and p-rank bound of cyclic cover data")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--mults", required=True, help="comma-separated multiplicities")
    s.set_defaults(func=_cmd_prank)

    s = sub.add_parser("nef", help="canonical-class intersection table at q")
    _add_family_options(s)
    s.add_argument("--q", type=int)
    s.add_argument("--find", action="store_true", help="find the smallest workable prime q")
    s.add_argument("--q-cap", type=int, default=10007)
    s.set_defaults(func=_cmd_nef)

    s = sub.add_parser("sweep", help="CSV of sampled cover invariants over a prime range")
    _add_family_options(s)
    s.add_argument("--q-min", type=int, required=True)
    s.add_argument("--q-max", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-tries", type=int, default=200)
    s.add_argument("--out", help="output CSV path (default: stdout)")
    s.set_defaults(func=_cmd_sweep)

    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Turn `--config FILE` key=value pairs into leading CLI defaults."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    path = argv[idx + 1]
    rest = argv[:idx] + argv[idx + 2:]
    injected: list[str] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            injected += [f"--{key.strip().replace('_', '-')}", value.strip()]
    # config-derived options go right after the subcommand so explicit flags win
    if not rest:
        return rest
    return rest[:1] + injected + rest[1:]


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config_file(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except (DomainError, DegenerateParameterError, InvalidAssignmentError,
            ValueError, OSError) as exc:
        _log(f"error: {exc}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
