"""Command line interface: info, embed, verify, sweep, count.

Exit codes: 0 success, 1 verification failure, 2 bad input,
3 internal self-check failure, 4 search exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import certificate
from .geometry import MAX_POINTS, GeometryContext, count_lines, count_points
from .gf import NonPrime, SizeExceeded, field_of_order
from .plane import OutOfRange, SearchExhausted
from .space import embed_cycle, sigma_anchored_cycle
from .verifier import BudgetExceeded, brute_force_cycle_count

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_SELFCHECK, EXIT_SEARCH = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _context(n: int, q: int) -> GeometryContext:
    if n < 2:
        raise UsageError(f"--n must be at least 2, got {n}")
    try:
        F = field_of_order(q)
    except (NonPrime, SizeExceeded) as exc:
        raise UsageError(str(exc)) from exc
    if count_points(n, q) > MAX_POINTS:
        raise UsageError(f"PG({n},{q}) is too large")
    return GeometryContext(n, F)


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=1))
    else:
        print(text)


def cmd_info(args) -> int:
    ctx = _context(args.n, args.q)
    n, q = ctx.n, ctx.q
    info = {
        "n": n,
        "q": q,
        "p": ctx.field.p,
        "e": ctx.field.e,
        "modulus": list(ctx.field.modulus),
        "points": count_points(n, q),
        "lines": count_lines(n, q),
        "points_per_line": q + 1,
        "max_k": count_points(n, q),
    }
    text = "\n".join(f"{key}: {value}" for key, value in info.items())
    _emit(args, info, text)
    return EXIT_OK


def _build(ctx: GeometryContext, k: int, seed: int, anchored: bool) -> dict:
    if anchored:
        anchor = ctx.hyperplane()
        cycle = sigma_anchored_cycle(ctx, anchor, k, seed)
        return certificate.to_certificate(ctx, cycle, command="embed", seed=seed, anchor=anchor)
    cycle = embed_cycle(ctx, k, seed)
    return certificate.to_certificate(ctx, cycle, command="embed", seed=seed)


def cmd_embed(args) -> int:
    ctx = _context(args.n, args.q)
    limit = ctx.q**ctx.n + 2 if args.anchored else ctx.num_points
    if not 3 <= args.k <= limit:
        raise UsageError(f"--k must lie in [3, {limit}] for PG({ctx.n},{ctx.q})")
    try:
        cert = _build(ctx, args.k, args.seed, args.anchored)
    except SearchExhausted as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXIT_SEARCH
    report = certificate.verify_certificate(certificate.from_certificate(cert))
    if not report.valid:
        print(f"self-verification failed:\n{report}", file=sys.stderr)
        return EXIT_SELFCHECK
    text = certificate.dumps(cert)
    if args.out:
        certificate.write_atomic(args.out, text)
        print(f"wrote {args.k}-cycle in PG({ctx.n},{ctx.q}) to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        cert = certificate.load(args.certificate)
    except certificate.MalformedCertificate as exc:
        print(f"malformed certificate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = certificate.verify_certificate(cert)
    _emit(args, report.to_dict(), str(report))
    return EXIT_OK if report.valid else EXIT_INVALID


def _sweep_one(n: int, q: int, k: int, seed: int) -> dict:
    start = time.perf_counter()
    ctx = _context(n, q)
    try:
        cert = _build(ctx, k, seed, anchored=False)
        report = certificate.verify_certificate(certificate.from_certificate(json.loads(certificate.dumps(cert))))
        status = "verified" if report.valid else "invalid"
        detail = "" if report.valid else str(report)
    except SearchExhausted as exc:
        status, detail = "search-exhausted", str(exc)
    except Exception as exc:  # reported per k, never swallowed silently
        status, detail = "error", f"{type(exc).__name__}: {exc}"
    out = {"k": k, "status": status, "seconds": round(time.perf_counter() - start, 4)}
    if detail:
        out["detail"] = detail
    return out


def cmd_sweep(args) -> int:
    ctx = _context(args.n, args.q)
    ks = list(range(3, ctx.num_points + 1))
    started = time.perf_counter()
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_sweep_one, *zip(*[(ctx.n, ctx.q, k, args.seed) for k in ks])))
    else:
        results = [_sweep_one(ctx.n, ctx.q, k, args.seed) for k in ks]
    ok = all(r["status"] == "verified" for r in results)
    summary = {
        "n": ctx.n,
        "q": ctx.q,
        "seed": args.seed,
        "lengths": len(ks),
        "verified": sum(r["status"] == "verified" for r in results),
        "all_verified": ok,
        "seconds": round(time.perf_counter() - started, 3),
        "results": results,
    }
    if args.out:
        certificate.write_atomic(args.out, json.dumps(summary, indent=1) + "\n")
    text = "\n".join(
        [f"k={r['k']:>4}  {r['status']:<16} {r['seconds']:.3f}s" for r in results]
        + [f"PG({ctx.n},{ctx.q}): {summary['verified']}/{len(ks)} lengths verified"]
    )
    _emit(args, summary, text)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_count(args) -> int:
    ctx = _context(args.n, args.q)
    try:
        value = brute_force_cycle_count(ctx, args.k)
    except BudgetExceeded as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, {"n": ctx.n, "q": ctx.q, "k": args.k, "count": value}, str(value))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pgcycles", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def geometry_args(p, with_k=False):
        p.add_argument("--n", type=int, required=True, help="projective dimension")
        p.add_argument("--q", type=int, required=True, help="field order (a prime power)")
        if with_k:
            p.add_argument("--k", type=int, required=True, help="cycle length")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("info", help="counts for PG(n,q)")
    geometry_args(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("embed", help="construct a k-cycle and write its certificate")
    geometry_args(p, with_k=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="certificate path (default: stdout)")
    p.add_argument("--anchored", action="store_true", help="anchor the cycle on the hyperplane x_n = 0")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("verify", help="check a certificate")
    p.add_argument("certificate")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="embed and verify every feasible k")
    geometry_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="summary JSON path")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("count", help="brute-force count of k-cycles (small geometries only)")
    geometry_args(p, with_k=True)
    p.set_defaults(func=cmd_count)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, OutOfRange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
