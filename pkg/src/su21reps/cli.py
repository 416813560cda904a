"""Command line entry point: ``su21reps {search,weights,check,certify}``.

Exit codes are 0 for success, 1 for a failed check or certification (or an
internal error) and 2 for bad input.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

from . import __version__
from .check import run_all
from .io import MalformedRunError, RunDocument, emit_run, format_table, read_run, recertify
from .presentation import BrieskornPresentation, PresentationError, check_coprime, solve_weights
from .search import THREADS_ENV, SearchConfig, search

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("su21reps")


class UsageError(Exception):
    pass


def _triple(text: str) -> tuple[int, int, int]:
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"expected three comma-separated integers, got {text!r}") from None
    if len(vals) != 3:
        raise UsageError(f"expected three comma-separated integers, got {text!r}")
    return vals


def cmd_search(args) -> int:
    try:
        check_coprime(args.p, args.q, args.r)
        weights = _triple(args.weights) if args.weights else None
        if weights is not None:
            BrieskornPresentation(args.p, args.q, args.r, *weights)
        cfg = SearchConfig(
            grid_step=args.grid,
            patch_bound=args.bound,
            solve_tol=args.tol,
            cluster_radius=args.cluster,
            seed=args.seed,
            threads=args.threads,
        )
    except (PresentationError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    start = time.perf_counter()
    result = search(args.p, args.q, args.r, cfg, weights=weights)
    elapsed = time.perf_counter() - start
    doc = RunDocument.from_result(result, __version__, elapsed if args.record_time else None)
    print(format_table(doc), end="")
    log.info("diagnostics: %s", result.diagnostics)
    print(f"search took {elapsed:.1f} s", file=sys.stderr)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(emit_run(doc))
    return EXIT_OK


def cmd_weights(args) -> int:
    p, q, r = args.p, args.q, args.r
    try:
        a, b, c = solve_weights(p, q, r)
        given = _triple(args.verify) if args.verify else None
    except (PresentationError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    lhs = a * q * r + b * p * r + c * p * q
    print(f"(a, b, c) = ({a}, {b}, {c})")
    print(f"{a}*{q * r} + {b}*{p * r} + {c}*{p * q} = {lhs}")
    if given is not None:
        ga, gb, gc = given
        value = ga * q * r + gb * p * r + gc * p * q
        if value != 1:
            print(f"({ga}, {gb}, {gc}) gives {value}, not 1", file=sys.stderr)
            return EXIT_USAGE
        print(f"({ga}, {gb}, {gc}) is also valid: {value}")
    return EXIT_OK


def cmd_check(args) -> int:
    if args.samples < 0:
        print("error: --samples must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    if args.samples == 0:
        print("warning: --samples 0, nothing to check (vacuous pass)", file=sys.stderr)
    results = run_all(args.samples, args.seed)
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.ok]
    for r in failed:
        print(f"FAILED {r.name}: {r.failures} sample(s), offending seed {r.worst_seed}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_certify(args) -> int:
    try:
        doc = read_run(args.json)
    except (OSError, MalformedRunError) as exc:
        print(f"error: cannot read {args.json}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    bad = 0
    for i, rec in enumerate(doc.points, 1):
        chk = recertify(doc, rec, i)
        worst = max(chk.residuals.values(), default=float("nan"))
        status = "ok" if chk.accepted else "FAILED"
        print(f"point {i}: {status}  max relation residual {worst:.2e}  coordinate drift {chk.coordinate_error:.2e}")
        for name, v in chk.residuals.items():
            print(f"    {name:<10} {v:.2e}")
        if not chk.accepted:
            bad += 1
            print(f"    reason: {chk.reason}")
    print(f"{len(doc.points) - bad}/{len(doc.points)} certificates accepted")
    return EXIT_FAIL if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="su21reps", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    defaults = SearchConfig()
    s = sub.add_parser("search", help="find irreducible representation points of Sigma(p,q,r)")
    for name in ("p", "q", "r"):
        s.add_argument(name, type=int)
    s.add_argument("--grid", type=float, default=defaults.grid_step, help="grid step on the slice")
    s.add_argument("--bound", type=float, default=defaults.patch_bound, help="box bound on free magnitudes")
    s.add_argument("--tol", type=float, default=defaults.solve_tol, help="solve tolerance")
    s.add_argument("--cluster", type=float, default=defaults.cluster_radius, help="dedup radius")
    s.add_argument("--seed", type=int, default=defaults.seed)
    s.add_argument("--weights", metavar="a,b,c", help="override the canonical Seifert weights")
    s.add_argument("--json", metavar="PATH", help="write the run as JSON")
    s.add_argument("--threads", type=int, default=None, help=f"worker threads (default: ${THREADS_ENV} or 1)")
    s.add_argument("--record-time", action="store_true", help="store wall time in the JSON manifest")
    s.set_defaults(func=cmd_search)

    w = sub.add_parser("weights", help="canonical (a,b,c) with a qr + b pr + c pq = 1")
    for name in ("p", "q", "r"):
        w.add_argument(name, type=int)
    w.add_argument("--verify", metavar="a,b,c", help="also check a given triple")
    w.set_defaults(func=cmd_weights)

    c = sub.add_parser("check", help="run the seeded identity and domain property suites")
    c.add_argument("--samples", type=int, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_check)

    f = sub.add_parser("certify", help="re-certify the points stored in a JSON run")
    f.add_argument("--json", metavar="PATH", required=True)
    f.set_defaults(func=cmd_certify)
    return parser


def _join_negative_values(argv):
    # "--weights -1,1,2" would otherwise be read as an unknown option.
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--weights", "--verify"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error: %s", exc)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
