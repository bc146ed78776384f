"""Command-line front end.

Subcommands: sieve, verify, mellin, mellin-check, identity, convert,
bootstrap, report.  Exit status: 0 success, 1 a checked inequality or
enclosure failed, 2 usage error, 3 internal accuracy failure.  Numeric
output uses 15 significant digits.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from . import chains
from .bounds import (
    BoundForm,
    SqrtModel,
    bootstrap as run_bootstrap,
    load_ledger,
    parse_plan,
    serialize_ledger,
)
from .errors import (
    AccuracyError,
    DomainError,
    InvalidArgumentError,
    MobsumError,
    NoDescentError,
    PlanError,
    RangeError,
)
from .identities import (
    residual_bal2,
    residual_mchliss,
    residual_thm1_G,
    residual_thm1_H,
)
from .quad import mellin_numeric
from .special import (
    h2_integral_bound,
    mellin_G1_closed,
    mellin_G1check_closed,
    mellin_H1_closed,
)
from .tables import (
    SeriesPair,
    Tables,
    build_tables,
    cache_path,
    ell_series,
    load_table,
    m_series,
    save_table,
    sieve_mu,
)
from .verify import PREDICATES, verify_range
from .weights import G1_SPEC, H1_SPEC, load_coeff_weight

CACHE_ENV = "MOBSUM_CACHE_DIR"


def _fmt(v: float) -> str:
    return f"{v:.15g}"


def _cache_dir(flag_value):
    return flag_value if flag_value else os.environ.get(CACHE_ENV)


def _get_tables(limit: int, cache_dir, jobs: int = 1, block_size: int = 1 << 20) -> Tables:
    """Load a cached sieve covering `limit` if available, else build (and
    cache when a cache directory is configured)."""
    cdir = _cache_dir(cache_dir)
    if cdir:
        path = cache_path(cdir, limit)
        if os.path.exists(path):
            mu = load_table(path)
            return Tables(mu=mu, series=SeriesPair(m=m_series(mu), ell=ell_series(mu)))
    tables = build_tables(limit, block_size=block_size, jobs=jobs)
    if cdir:
        os.makedirs(cdir, exist_ok=True)
        save_table(tables.mu, cache_path(cdir, limit))
    return tables


# ---------------------------------------------------------------------------
# subcommands

def _cmd_sieve(args) -> int:
    mu = sieve_mu(args.limit, block_size=args.block_size, jobs=args.jobs)
    cdir = _cache_dir(args.cache_dir)
    line = f"sieve limit={args.limit} mertens_at_limit={int(mu.mertens[args.limit])}"
    if cdir:
        os.makedirs(cdir, exist_ok=True)
        path = cache_path(cdir, args.limit)
        save_table(mu, path)
        line += f" cache={path}"
    print(line)
    return 0


def _cmd_verify(args) -> int:
    if args.pred not in PREDICATES:
        print(f"unknown predicate {args.pred!r}; known: {', '.join(sorted(PREDICATES))}",
              file=sys.stderr)
        return 2
    pred = PREDICATES[args.pred]
    limit = args.limit if args.limit else int(math.ceil(args.to))
    tables = _get_tables(limit, args.cache_dir, jobs=args.jobs)
    rep = verify_range(pred, getattr(args, "from"), args.to, tables, jobs=args.jobs)
    for n, value, margin in rep.violations:
        print(f"violation pred={pred.name} n={n} value={_fmt(value)} margin={_fmt(margin)}")
    for n in rep.indeterminate:
        print(f"escalated pred={pred.name} n={n}")
    status = "PASS" if rep.passed else "FAIL"
    print(f"verify pred={pred.name} range=[{rep.lo},{rep.hi}) checked={rep.checked} "
          f"violations={len(rep.violations)} max_ratio={_fmt(rep.max_ratio)} "
          f"argmax={rep.argmax} status={status}")
    return 0 if rep.passed else 1


def _cmd_mellin(args) -> int:
    s = args.s
    if args.form == "g1":
        sv = mellin_G1_closed(s)
    elif args.form == "h1":
        sv = mellin_H1_closed(s)
    elif args.form == "g1check":
        sv = mellin_G1check_closed(s)
    else:  # h2bound
        print(f"mellin form=h2bound delta={_fmt(s)} value={_fmt(h2_integral_bound(s))}")
        return 0
    print(f"mellin form={args.form} s={_fmt(s)} value={_fmt(sv.value)} "
          f"error={_fmt(sv.abs_error)}")
    return 0


def _cmd_mellin_check(args) -> int:
    spec = G1_SPEC if args.weight == "g1" else H1_SPEC
    closed = mellin_G1_closed(args.s) if args.weight == "g1" else mellin_H1_closed(args.s)
    bracket = mellin_numeric(spec, args.s, args.X, envelope=args.envelope, tol=args.tol)
    ok = bracket.lo <= closed.value + closed.abs_error and \
        closed.value - closed.abs_error <= bracket.hi
    print(f"mellin-check weight={args.weight} s={_fmt(args.s)} X={args.X} "
          f"bracket=[{_fmt(bracket.lo)},{_fmt(bracket.hi)}] width={_fmt(bracket.width)} "
          f"closed={_fmt(closed.value)} tail={bracket.tail_bound_used} "
          f"status={'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def _cmd_identity(args) -> int:
    limit = args.limit if args.limit else max(2, int(math.ceil(args.x)))
    tables = _get_tables(limit, args.cache_dir)
    gspec, hspec = G1_SPEC, H1_SPEC
    if args.weight:
        wspec = load_coeff_weight(args.weight)
        if wspec.kind == "analytic-h" or args.name == "thm1h":
            hspec = wspec
        else:
            gspec = wspec
    if args.name == "thm1g":
        rep = residual_thm1_G(tables, args.x, spec=gspec, tol=args.tol)
    elif args.name == "thm1h":
        rep = residual_thm1_H(tables, args.x, spec=hspec, tol=args.tol)
    elif args.name == "bal2":
        rep = residual_bal2(tables, args.x, tol=args.tol)
    else:  # mchliss
        rep = residual_mchliss(tables, args.x, spec=gspec, tol=args.tol)
    print(f"identity name={rep.name} x={_fmt(rep.x)} lhs={_fmt(rep.lhs)} "
          f"rhs={_fmt(rep.rhs)} residual={_fmt(rep.residual)} "
          f"tolerance={_fmt(rep.tolerance)} status={'PASS' if rep.passed else 'FAIL'}")
    return 0 if rep.passed else 1


def _cmd_convert(args) -> int:
    if args.ledger:
        with open(args.ledger, "r", encoding="utf-8") as fh:
            ledger = load_ledger(fh.read())
    else:
        ledger = chains.base_ledger()
    with open(args.plan, "r", encoding="utf-8") as fh:
        plan = parse_plan(fh.read())
    run_bootstrap(ledger, plan)
    text = serialize_ledger(ledger)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _describe_entry(entry) -> str:
    if isinstance(entry, SqrtModel):
        if entry.target == "M-over-x":
            head = f"|M(x)| ≤ {_fmt(entry.c)} sqrt(x)"
        else:
            lhs = {"m": "sqrt(x) |m(x)|", "m1": "sqrt(x) |m1(x)|",
                   "mcheck-minus-1": "sqrt(x) |mcheck(x) - 1|"}.get(entry.target,
                                                                    entry.target)
            head = f"{lhs} ≤ {_fmt(entry.c)}"
        return head + f" on [{_fmt(entry.x_lo)}, {_fmt(entry.x_hi)}]"
    assert isinstance(entry, BoundForm)
    lhs = {"M-over-x": "|M(x)|/x", "m": "m", "m1": "m1",
           "mcheck-minus-1": "(mcheck - 1)"}[entry.target]
    weight = {0.0: "", 1.0: "log x · ", 2.0: "log^2 x · "}.get(entry.j, f"log^{_fmt(entry.j)} x · ")
    inv = 1.0 / entry.A if entry.A > 0 else 0.0
    if inv >= 10 and abs(inv - round(inv)) <= 1e-9 * inv:
        rhs = f"1/{int(round(inv))}"
    else:
        rhs = _fmt(entry.A)
    T = entry.T
    if T <= 1.0:
        rank = "for x > 1"
    else:
        rank = f"for x ≥ {int(round(T))}" if abs(T - round(T)) <= 1e-6 * T \
            else f"for x ≥ {_fmt(T)}"
    return f"{weight}{lhs} ≤ {rhs} {rank}"


def _cmd_bootstrap(args) -> int:
    res = chains.run_chain(args.chain)
    for step in res.steps:
        printed = "" if step.printed is None else f" ≤ {_fmt(step.printed)}"
        note = f"  [{step.note}]" if step.note else ""
        print(f"step {step.name}: {_fmt(step.computed)}{printed} "
              f"{'ok' if step.ok else 'FAIL'}{note}")
    for desc, pred, lo, hi in res.obligations:
        print(f"obligation: {desc} pred={pred} range=[{_fmt(lo)},{_fmt(hi)})")
    marker = chains._MARKERS[args.chain]
    for name, entry in res.finals.items():
        if name != marker:
            print(f"result {name}: " + _describe_entry(entry))
    if marker in res.finals:
        print(_describe_entry(res.finals[marker]))
    return 0 if res.ok else 1


def _cmd_report(args) -> int:
    with open(args.ledger, "r", encoding="utf-8") as fh:
        ledger = load_ledger(fh.read())
    sys.stdout.write(serialize_ledger(ledger))
    return 0


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mobsum", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sieve", help="build (and cache) a Moebius/Mertens table")
    sp.add_argument("--limit", type=int, required=True)
    sp.add_argument("--block-size", type=int, default=1 << 20)
    sp.add_argument("--cache-dir", default=None)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=_cmd_sieve)

    sp = sub.add_parser("verify", help="exhaustively verify a named inequality")
    sp.add_argument("--pred", required=True)
    sp.add_argument("--from", type=float, required=True)
    sp.add_argument("--to", type=float, required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--limit", type=int, default=None)
    sp.add_argument("--cache-dir", default=None)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("mellin", help="closed-form Mellin value with certified error")
    sp.add_argument("--form", choices=["g1", "h1", "g1check", "h2bound"], required=True)
    sp.add_argument("--s", type=float, required=True)
    sp.set_defaults(func=_cmd_mellin)

    sp = sub.add_parser("mellin-check",
                        help="numeric Mellin enclosure vs closed form")
    sp.add_argument("--weight", choices=["g1", "h1"], required=True)
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--X", type=float, required=True)
    sp.add_argument("--envelope", choices=["sharp", "simple"], default="sharp")
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.set_defaults(func=_cmd_mellin_check)

    sp = sub.add_parser("identity", help="residual of an integral identity")
    sp.add_argument("--name", choices=["thm1g", "thm1h", "bal2", "mchliss"],
                    required=True)
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--weight", default=None, help="coefficient-weight file")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--limit", type=int, default=None)
    sp.add_argument("--cache-dir", default=None)
    sp.set_defaults(func=_cmd_identity)

    sp = sub.add_parser("convert", help="run a conversion plan against a ledger")
    sp.add_argument("--plan", required=True)
    sp.add_argument("--ledger", default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_convert)

    sp = sub.add_parser("bootstrap", help="replay a named derivation chain")
    sp.add_argument("--chain", choices=["models", "const", "log", "log2", "mcheck"],
                    required=True)
    sp.set_defaults(func=_cmd_bootstrap)

    sp = sub.add_parser("report", help="round-trip a ledger file")
    sp.add_argument("--ledger", required=True)
    sp.set_defaults(func=_cmd_report)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except AccuracyError as exc:
        print(f"accuracy failure: {exc}", file=sys.stderr)
        return 3
    except NoDescentError as exc:
        print(f"bound not attainable: {exc}", file=sys.stderr)
        return 1
    except (InvalidArgumentError, DomainError, PlanError, RangeError,
            FileNotFoundError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except MobsumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
