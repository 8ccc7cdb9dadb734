"""Command-line frontend: compute, oracle, verify-tables, sweep, embed, selftest.

Exit codes: 0 ok, 1 parse error, 2 unresolved, 3 budget refusal,
4 verification failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Sequence

from . import embed
from .cache import ResultCache
from .engine import Engine, apply_D, count_fallbacks
from .fixtures import (
    CHAIN_POLY_COEFFS,
    COUNTS_Q2,
    COUNTS_Q3,
    EULER_A,
    chain_degree_bound,
    chain_poly,
)
from .oracle import BudgetExceeded, DEFAULT_BUDGET, PosetSystem, count_k, count_k_system
from .poset import Poset, antichain, canonical_key, chain, covers, parse_poset, remove
from .posetgen import sweep_posets

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_UNRESOLVED = 2
EXIT_BUDGET = 3
EXIT_VERIFY = 4


class CliError(Exception):
    """Fatal command error carrying the process exit code."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _parse_target(tokens: Sequence[str]) -> Poset:
    """Builtin spec ('chain 6', 'antichain 4', 'p-diamond') or a poset file."""
    if len(tokens) == 2 and tokens[0] in ("chain", "antichain"):
        try:
            n = int(tokens[1])
        except ValueError:
            raise CliError(
                EXIT_PARSE, f"{tokens[0]} needs an integer size, got {tokens[1]!r}"
            )
        if n < 0:
            raise CliError(EXIT_PARSE, f"{tokens[0]} size must be nonnegative")
        return chain(n) if tokens[0] == "chain" else antichain(n)
    if len(tokens) == 1:
        if tokens[0] == "p-diamond":
            return embed.p_diamond()
        path = Path(tokens[0])
        try:
            text = path.read_text()
        except OSError as exc:
            raise CliError(EXIT_PARSE, f"cannot read {path}: {exc}")
        try:
            return parse_poset(text)
        except ValueError as exc:
            raise CliError(EXIT_PARSE, f"{path}: {exc}")
    raise CliError(EXIT_PARSE, f"unrecognized target {' '.join(tokens)!r}")


def _emit(args: argparse.Namespace, obj: dict, text: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(obj))
    else:
        for line in text:
            print(line)


def _fail(args: argparse.Namespace, message: str, **extra) -> None:
    if getattr(args, "json", False):
        print(json.dumps({"error": message, **extra}))
    print(message, file=sys.stderr)


# ---------------------------------------------------------------------------
# compute


def cmd_compute(args: argparse.Namespace) -> int:
    P = _parse_target(args.target)
    cache = ResultCache(args.cache)
    res = cache.get(P)
    cached = res is not None
    if res is None:
        res = Engine(budget=args.budget, threads=args.threads).compute_k(P)
        cache.put(P, res)
    cache_path = cache.path_for(P) if res.status == "proven" else None
    obj = {
        "command": "compute",
        "target": " ".join(args.target),
        "status": res.status,
        "poly": res.poly.to_json() if res.poly is not None else None,
        "poly_str": str(res.poly) if res.poly is not None else None,
        "q_basis": [str(c) for c in res.poly.to_q_basis()] if res.poly is not None else None,
        "degree": res.poly.degree if res.poly is not None else None,
        "residual_count": len(res.residual),
        "cached": cached,
        "cache_path": str(cache_path) if cache_path else None,
    }
    if res.status == "unresolved":
        _emit(args, obj, [f"unresolved: {len(res.residual)} residual systems"])
        return EXIT_UNRESOLVED
    lines = [f"{res.poly} [{res.status}]", f"q-basis: {list(res.poly.to_q_basis())}"]
    if cache_path:
        lines.append(f"cache: {cache_path}")
    _emit(args, obj, lines)
    return EXIT_OK


# ---------------------------------------------------------------------------
# oracle


def _parse_fiber(P: Poset, spec: str) -> PosetSystem:
    """Fiber spec 'm:a1,a2' marks maximal m with antichain {a1, a2}."""
    try:
        m_txt, _, a_txt = spec.partition(":")
        m = int(m_txt)
        A = frozenset(int(x) for x in a_txt.split(",") if x)
    except ValueError:
        raise CliError(EXIT_PARSE, f"fiber spec must look like 'm:a1,a2', got {spec!r}")
    try:
        return PosetSystem(P, m, A)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"invalid fiber: {exc}")


def cmd_oracle(args: argparse.Namespace) -> int:
    P = _parse_target(args.target)
    try:
        if args.fiber:
            S = _parse_fiber(P, args.fiber)
            count = count_k_system(S, args.q, budget=args.budget)
        else:
            count = count_k(P, args.q, budget=args.budget, threads=args.threads)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, str(exc))
    obj = {
        "command": "oracle",
        "target": " ".join(args.target),
        "q": args.q,
        "fiber": args.fiber,
        "count": count,
    }
    _emit(args, obj, [str(count)])
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify-tables


def cmd_verify_tables(args: argparse.Namespace) -> int:
    checks = []

    def check(name: str, ok: bool, detail: str) -> None:
        checks.append({"name": name, "ok": bool(ok), "detail": detail})

    for n in sorted(CHAIN_POLY_COEFFS):
        a2, a3 = chain_poly(n).eval_at_q(2), chain_poly(n).eval_at_q(3)
        ok = a2 == COUNTS_Q2[n - 1] and a3 == COUNTS_Q3[n - 1]
        check(f"fixture-consistency-{n}", ok, f"eval at q=2,3 -> {a2}, {a3}")

    kirillov_ok = sum(1 for n in range(1, 17) if COUNTS_Q2[n - 1] >= EULER_A[n - 1])
    check("kirillov-lower-bound", kirillov_ok == 16, f"{kirillov_ok}/16 rows")

    eng = Engine(budget=args.budget, threads=args.threads)
    exceptional = {}
    for n in range(1, args.chains + 1):
        res = eng.compute_k(chain(n))
        ok = (
            res.status == "proven"
            and res.poly is not None
            and res.poly.coeffs == tuple(CHAIN_POLY_COEFFS[n])
        )
        check(f"chain-{n}-poly", ok, f"status {res.status}")
        check(
            f"chain-{n}-degree",
            res.poly is not None and res.poly.degree == chain_degree_bound(n),
            f"degree {res.poly.degree if res.poly else None}",
        )
        exceptional[n] = count_fallbacks(res.trace)

    for n in range(1, args.q2 + 1):
        got = count_k(chain(n), 2, budget=args.budget, threads=args.threads)
        check(f"oracle-chain-{n}-q2", got == COUNTS_Q2[n - 1], f"count {got}")
    for n in range(1, args.q3 + 1):
        got = count_k(chain(n), 3, budget=args.budget, threads=args.threads)
        check(f"oracle-chain-{n}-q3", got == COUNTS_Q3[n - 1], f"count {got}")

    all_ok = all(c["ok"] for c in checks)
    obj = {
        "command": "verify-tables",
        "checks": checks,
        "exceptional_systems": {str(n): c for n, c in exceptional.items()},
        "ok": all_ok,
    }
    lines = [f"{'pass' if c['ok'] else 'FAIL'}  {c['name']}: {c['detail']}" for c in checks]
    exc_txt = ", ".join(f"n={n}: {c}" for n, c in exceptional.items())
    lines.append(f"exceptional systems (reported, not asserted): {exc_txt}")
    lines.append(f"{sum(c['ok'] for c in checks)}/{len(checks)} checks passed")
    _emit(args, obj, lines)
    return EXIT_OK if all_ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# sweep


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.max > args.cap:
        raise CliError(
            EXIT_PARSE, f"sweep over {args.max} elements exceeds the cap {args.cap}"
        )
    posets = sweep_posets(args.max)
    by_size: dict = {}
    for P in posets:
        by_size[P.n] = by_size.get(P.n, 0) + 1
    eng = Engine(budget=args.budget, threads=args.threads)
    rows = []
    failures = []
    statuses = {"proven": 0, "interpolated": 0, "unresolved": 0}
    for P in posets:
        res = eng.compute_k(P)
        statuses[res.status] += 1
        key = canonical_key(P).hex()
        if res.status == "unresolved" or res.poly is None:
            failures.append(f"{key}: unresolved")
            continue
        if any(c < 0 for c in res.poly.coeffs):
            failures.append(f"{key}: negative t-coefficient")
        for q in (2, 3):
            want = count_k(P, q, budget=args.budget, threads=args.threads)
            if res.poly.eval_at_q(q) != want:
                failures.append(f"{key}: disagrees with the oracle at q={q}")
        rows.append(
            {
                "key": key,
                "n": P.n,
                "covers": [list(c) for c in sorted(covers(P))],
                "coeffs": [str(c) for c in res.poly.coeffs],
                "status": res.status,
            }
        )
    out = Path(args.out if args.out else f"sweep-{args.max}.json")
    out.write_text(json.dumps({"max_elements": args.max, "posets": rows}, indent=1))
    obj = {
        "command": "sweep",
        "max_elements": args.max,
        "poset_count": len(posets),
        "by_size": {str(n): c for n, c in sorted(by_size.items())},
        "statuses": statuses,
        "failures": failures,
        "out": str(out),
        "ok": not failures,
    }
    lines = [
        f"{by_size.get(args.max, 0)} posets on {args.max} elements, "
        f"{len(posets)} in all up to {args.max}: "
        f"{statuses['proven']} proven, {statuses['interpolated']} interpolated, "
        f"{statuses['unresolved']} unresolved",
    ]
    lines.extend(f"FAIL  {f}" for f in failures)
    lines.append(f"wrote {out}")
    _emit(args, obj, lines)
    return EXIT_OK if not failures else EXIT_VERIFY


# ---------------------------------------------------------------------------
# embed


def cmd_embed(args: argparse.Namespace) -> int:
    if args.target == ["p-diamond"]:
        cert = embed.p_diamond_c59_cert()
    else:
        P = _parse_target(args.target)
        cert = embed.chain_univ_cert(P)
    strong = sum(s.atomic_count()[0] for s in cert.steps)
    duals = sum(s.atomic_count()[1] for s in cert.steps)
    out = Path(args.out if args.out else "embed-cert.json")
    out.write_text(json.dumps(embed.cert_to_json(cert), indent=1))
    verified = None
    vr = None
    if args.verify or args.numeric:
        vr = embed.verify(cert, numeric=args.numeric, budget=args.budget)
        verified = vr.ok
    obj = {
        "command": "embed",
        "source_n": cert.source.n,
        "target_n": cert.target.n,
        "kind": cert.kind,
        "length": cert.length,
        "strong_steps": strong,
        "dual_steps": duals,
        "out": str(out),
        "verified": verified,
        "steps_checked": vr.steps_checked if vr else None,
        "numeric_checked": vr.numeric_checked if vr else None,
        "numeric_skipped": vr.numeric_skipped if vr else None,
        "failures": [list(f) for f in vr.failures] if vr else None,
    }
    lines = [
        f"{cert.kind} certificate: {cert.source.n} elements into chain {cert.target.n} "
        f"in {cert.length} steps ({strong} strong, {duals} dual)",
        f"wrote {out}",
    ]
    if vr is not None:
        if vr.ok:
            detail = f"{vr.steps_checked} steps"
            if args.numeric:
                detail += f", {vr.numeric_checked} numeric, {vr.numeric_skipped} skipped"
            lines.append(f"verified: ok ({detail})")
        else:
            path, reason = vr.failures[0]
            lines.append(f"verification FAILED at {path}: {reason}")
    _emit(args, obj, lines)
    if verified is False:
        return EXIT_VERIFY
    return EXIT_OK


# ---------------------------------------------------------------------------
# selftest


def cmd_selftest(args: argparse.Namespace) -> int:
    checks = []

    def check(name: str, ok: bool, detail: str = "") -> None:
        checks.append({"name": name, "ok": bool(ok), "detail": detail})

    consistent = all(
        chain_poly(n).eval_at_q(2) == COUNTS_Q2[n - 1]
        and chain_poly(n).eval_at_q(3) == COUNTS_Q3[n - 1]
        for n in range(1, 17)
    )
    check("fixture-consistency", consistent, "appendix tables agree at q=2,3")

    res = Engine().compute_k(chain(4))
    check(
        "engine-chain-4",
        res.status == "proven" and res.poly.coeffs == (1, 6, 7, 2),
        str(res.poly),
    )

    got = count_k(chain(4), 2)
    check("oracle-chain-4-q2", got == 16, f"count {got}")

    S = PosetSystem(chain(3), 3, frozenset([1]))
    got_s = count_k_system(S, 2)
    reduced = remove(apply_D(S), S.m)
    check("oracle-fiber", got_s == count_k(reduced, 2), f"fiber count {got_s}")

    cert = embed.chain_univ_cert(antichain(2))
    vr = embed.verify(cert, numeric=True)
    check(
        "embed-a2-c4",
        vr.ok and cert.target.rel == chain(4).rel,
        f"length {cert.length}",
    )

    with tempfile.TemporaryDirectory() as tmp:
        c = ResultCache(tmp)
        c.put(chain(4), res)
        back = c.get(chain(4))
        check(
            "cache-round-trip",
            back is not None and back.poly is not None and back.poly.coeffs == res.poly.coeffs,
            "proven entry served back",
        )

    all_ok = all(c["ok"] for c in checks)
    obj = {"command": "selftest", "checks": checks, "ok": all_ok}
    lines = [f"{'pass' if c['ok'] else 'FAIL'}  {c['name']}: {c['detail']}" for c in checks]
    lines.append(f"{sum(c['ok'] for c in checks)}/{len(checks)} checks passed")
    _emit(args, obj, lines)
    return EXIT_OK if all_ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# wiring


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument(
        "--threads", type=int, default=os.cpu_count() or 1, help="worker threads"
    )
    common.add_argument(
        "--budget", type=int, default=DEFAULT_BUDGET, help="max group elements to enumerate"
    )
    common.add_argument(
        "--cache", default=None, help="result cache directory (overrides POSETK_CACHE_DIR)"
    )

    p = argparse.ArgumentParser(
        prog="posetk", description="Conjugacy-class counts for pattern groups."
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", parents=[common], help="class-count polynomial in t")
    c.add_argument("target", nargs="+", help="'chain N', 'antichain N', 'p-diamond', or a file")
    c.set_defaults(func=cmd_compute)

    o = sub.add_parser("oracle", parents=[common], help="exact count by enumeration")
    o.add_argument("target", nargs="+")
    o.add_argument("-q", "--q", type=int, required=True, help="prime field size")
    o.add_argument("--fiber", default=None, help="system spec 'm:a1,a2' for a fiber count")
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("verify-tables", parents=[common], help="check built-in tables")
    v.add_argument("--chains", type=int, default=8, help="engine check up to this chain")
    v.add_argument("--q2", type=int, default=7, help="oracle check at q=2 up to this chain")
    v.add_argument("--q3", type=int, default=6, help="oracle check at q=3 up to this chain")
    v.set_defaults(func=cmd_verify_tables)

    s = sub.add_parser("sweep", parents=[common], help="all posets up to a size")
    s.add_argument("max", type=int, nargs="?", default=6)
    s.add_argument("--cap", type=int, default=6, help="refuse sweeps above this size")
    s.add_argument("--out", default=None, help="results file (default sweep-MAX.json)")
    s.set_defaults(func=cmd_sweep)

    e = sub.add_parser("embed", parents=[common], help="embedding certificate into a chain")
    e.add_argument("target", nargs="+")
    e.add_argument("--out", default=None, help="certificate file (default embed-cert.json)")
    e.add_argument("--verify", action="store_true", help="re-check the certificate")
    e.add_argument("--numeric", action="store_true", help="add count conservation checks")
    e.set_defaults(func=cmd_embed)

    t = sub.add_parser("selftest", parents=[common], help="quick end-to-end checks")
    t.set_defaults(func=cmd_selftest)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_PARSE
    try:
        return args.func(args)
    except CliError as exc:
        _fail(args, str(exc))
        return exc.code
    except BudgetExceeded as exc:
        _fail(
            args,
            f"budget exceeded: needs {exc.required} group elements, budget is {exc.budget}",
            required=exc.required,
            budget=exc.budget,
        )
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
