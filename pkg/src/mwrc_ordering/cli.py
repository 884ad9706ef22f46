"""Command-line entry point: ``mwrc {rate,optimal,brute,simulate,verify}``.

Exit codes: 0 success, 1 usage error, 2 domain error (invalid input,
infeasible ordering, failed verification), 3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import optimal, verify
from .core import build_client_graph, canonicalize, is_tree, ordering_from_json
from .errors import EnumerationCapError, InfeasibleOrderingError, MwrcError
from .oracle import DEFAULT_CAP, Objective, brute_force_best, prufer_decode, prufer_encode
from .rates import BoundKind, evaluate
from .sim import ChannelConfig, run_gap_experiment, to_csv

EXIT_USAGE, EXIT_DOMAIN, EXIT_CAP = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_range(text: str) -> list[int]:
    try:
        if ":" in text:
            lo, hi = (int(v) for v in text.split(":"))
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO:HI, got {text!r}") from None


def _sweep(text: str) -> list[float]:
    """``start:step:stop`` (inclusive) or a comma-separated list, in dB."""
    try:
        if ":" in text:
            start, step, stop = (float(v) for v in text.split(":"))
            if step <= 0:
                raise ValueError
            count = int((stop - start) / step + 1e-9) + 1
            return [start + k * step for k in range(count)]
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected START:STEP:STOP or a list, got {text!r}") from None


def _profile(args):
    snrs = args.snr
    if args.db:
        snrs = [10 ** (v / 10) for v in snrs]
    return canonicalize(snrs)


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def cmd_rate(args) -> int:
    ordering, n, _labels = ordering_from_json(Path(args.ordering).read_text(encoding="utf-8"))
    profile = _profile(args)
    if n != profile.n:
        raise MwrcError(f"ordering has n={n} but {profile.n} SNRs were given")
    canon = profile.to_canonical(ordering)
    graph = build_client_graph(canon, n)
    if args.require_tree and not (is_tree(graph) and ordering.m == n - 1):
        raise InfeasibleOrderingError("not a tree ordering")
    report = evaluate(graph, profile, BoundKind(args.bound), m=ordering.m)
    sys.stdout.write(report.to_json(profile) + "\n")
    return 0


def cmd_optimal(args) -> int:
    profile = _profile(args)
    n = profile.n
    if args.objective == "common":
        canon = optimal.chain_ordering(n)
        closed = optimal.max_common_rate_closed_form(profile)
        graph = build_client_graph(canon, n)
        evaluated = evaluate(graph, profile, BoundKind.WEAK).common_rate
        clamped: tuple[int, ...] = ()
    else:
        canon = optimal.star_ordering(n)
        result = optimal.sum_rate_result(profile)
        closed, evaluated, clamped = result.closed_form, result.star_weak, result.clamped_users
    lab = profile.original_label
    _emit(
        {
            "objective": args.objective,
            "n": n,
            "pairs": [list(p) for p in profile.to_original(canon).pairs],
            "closed_form": closed,
            "evaluated_weak": evaluated,
            "weak_bound_equivalent": optimal.weak_bound_equivalent(profile),
            "low_snr_regime": bool(clamped),
            "clamped_users": [lab[i - 1] for i in clamped],
        }
    )
    return 0


def cmd_brute(args) -> int:
    profile = _profile(args)
    n = profile.n
    objective = Objective(args.objective)
    result = brute_force_best(profile, objective, BoundKind(args.bound), cap=args.cap, workers=args.workers)
    constructive = optimal.chain_ordering(n) if objective is Objective.COMMON else optimal.star_ordering(n)
    constructive_code = prufer_encode(build_client_graph(constructive, n))
    co = []
    for code in result.co_optimal:
        tree = prufer_decode(code, n).to_ordering()
        co.append(
            {
                "prufer": list(code),
                "ordering": {"n": n, "pairs": [list(p) for p in profile.to_original(tree).pairs]},
            }
        )
    _emit(
        {
            "objective": objective.value,
            "bound_kind": args.bound,
            "best_value": result.best_value,
            "tree_count": result.tree_count,
            "constructive_co_optimal": result.contains(constructive_code),
            "original_label": list(profile.original_label),
            "co_optimal": co,
        }
    )
    return 0


def cmd_simulate(args) -> int:
    try:
        config = ChannelConfig(
            n_users=args.n,
            snr_sweep_db=tuple(args.sweep),
            trials=args.trials,
            seed=args.seed,
            transmit_power=args.power,
            fading_variance=args.variance,
            workers=args.workers,
        )
    except ValueError as exc:
        raise MwrcError(str(exc)) from None
    text = to_csv(run_gap_experiment(config))
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_bytes(text.encode("utf-8"))
    return 0


def cmd_verify(args) -> int:
    ns = args.n
    if any(n < 2 for n in ns):
        raise MwrcError("n must be >= 2")
    if max(ns) > args.cap:
        raise EnumerationCapError(f"n={max(ns)} exceeds enumeration cap {args.cap}")
    start = time.perf_counter()
    results = verify.run_verification(ns, args.profiles, args.seed)
    for r in results:
        print(r.line())
        for ex in r.examples:
            print(f"    e.g. {ex}")
    failed = sum(not r.ok for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed in {time.perf_counter() - start:.1f}s")
    return 0 if failed == 0 else EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mwrc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def snr_args(p):
        p.add_argument("--snr", type=_float_list, required=True, help="comma-separated per-user SNRs")
        p.add_argument("--db", action="store_true", help="SNRs are given in dB")

    p = sub.add_parser("rate", help="evaluate rates of an ordering file")
    p.add_argument("--ordering", required=True, help="ordering JSON file")
    snr_args(p)
    p.add_argument("--bound", choices=[k.value for k in BoundKind], default="exact")
    p.add_argument("--require-tree", action="store_true")
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("optimal", help="optimal ordering and its closed-form rate")
    snr_args(p)
    p.add_argument("--objective", choices=["common", "sum"], required=True)
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("brute", help="exhaustive search over all tree orderings")
    snr_args(p)
    p.add_argument("--objective", choices=["common", "sum"], required=True)
    p.add_argument("--bound", choices=[k.value for k in BoundKind], default="weak")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("simulate", help="Monte Carlo optimal-vs-random gap experiment (CSV)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sweep", type=_sweep, default=_sweep("1:2:15"), help="1/sigma^2 in dB, START:STEP:STOP")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--variance", type=float, default=0.5, help="variance of each fading component")
    p.add_argument("--power", type=float, default=1.0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="check the optimality claims against brute force")
    p.add_argument("--n", type=_int_range, default=_int_range("3:5"), help="N or LO:HI")
    p.add_argument("--profiles", type=int, default=500)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # --help exits 0, usage errors exit 1
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except EnumerationCapError as exc:
        print(f"error: enumeration cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (MwrcError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
