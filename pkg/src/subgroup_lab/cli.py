"""Command-line front end.

Exit codes: 0 success, 1 identity violation, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import collinear, energy
from .errors import ConfigInvalid, SubgroupLabError
from .field import is_prime
from .groups import coset_reps, subgroup
from .harness import QUANTITIES, ScanConfig, scan, summarize
from .report import render
from .verify import identity_suite, spot_check

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class _Usage(Exception):
    pass


def _validate_pd(p: int, *ds: int):
    if p < 3 or not is_prime(p):
        raise _Usage("p not prime")
    for d in ds:
        if d < 1 or (p - 1) % d:
            raise _Usage(f"d={d} does not divide p-1={p - 1}")


def cmd_inspect(args) -> int:
    _validate_pd(args.p, args.d)
    p = args.p
    G = subgroup(p, args.d)
    g = G.elements
    info = {
        "p": p,
        "d": args.d,
        "primitive_root": G.ctx.g,
        "generator": G.generator,
        "elements": g.tolist(),
        "coset_reps": coset_reps(G).reps.tolist(),
        "size_2G": len(energy.iterated_sumset(g, 2, p)),
        "size_3G": len(energy.iterated_sumset(g, 3, p)),
        "additive_energy": energy.additive_energy(g, g, p),
        "mul_energy_shift1": energy.multiplicative_energy((g + 1) % p, (g + 1) % p, p),
    }
    if args.format == "json":
        print(json.dumps(info))
    else:
        for k, v in info.items():
            print(f"{k}: {v}")
    return EXIT_OK


def cmd_verify(args) -> int:
    suite = identity_suite(args.p_max, seed=args.seed)
    total = failed = 0
    for name, run in suite.items():
        t0 = time.perf_counter()
        n = bad = 0
        for chk in run():
            n += 1
            if not chk.ok:
                bad += 1
                print(f"FAIL p={chk.p} {chk.name} {chk.detail}")
        total += n
        failed += bad
        print(f"{name}: {n - bad}/{n} passed ({time.perf_counter() - t0:.2f}s)")
    print(f"total: {total - failed}/{total} checks passed")
    return EXIT_VIOLATION if failed else EXIT_OK


def _parse_d_policy(text: str):
    if text in ("below_sqrt_p", "all_divisors"):
        return text
    try:
        return tuple(int(t) for t in text.split(",") if t)
    except ValueError:
        raise _Usage(f"bad --d-policy {text!r}")


def cmd_scan(args) -> int:
    quantities = tuple(args.quantities.split(",")) if args.quantities else QUANTITIES
    config = ScanConfig(
        p_min=args.p_min, p_max=args.p_max, d_policy=_parse_d_policy(args.d_policy),
        quantities=quantities, seed=args.seed, budget=args.budget, workers=args.workers,
    )
    try:
        config.validate()
    except ConfigInvalid as exc:
        raise _Usage(str(exc))
    records = scan(config)
    text = render(records, args.format)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(args.out, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    if args.summary:
        print(json.dumps(summarize(records), indent=1), file=sys.stderr)
    if args.spot_check:
        res = spot_check(records, args.spot_check, seed=args.seed)
        print(f"spot check: {res.checked} checked, {res.skipped} skipped, "
              f"{len(res.mismatches)} mismatches", file=sys.stderr)
        if res.mismatches:
            return EXIT_VIOLATION
    return EXIT_OK


def cmd_hist(args) -> int:
    _validate_pd(args.p, args.d_gamma, args.d_pi)
    G, P = subgroup(args.p, args.d_gamma), subgroup(args.p, args.d_pi)
    h = collinear.richness_histogram(G, P)
    out = {
        "p": h.p, "d_gamma": h.gamma_order, "d_pi": h.pi_order,
        "multiplicity": h.multiplicity, "zero_one_count": h.zero_one_count,
        "buckets": {str(k): v for k, v in h.buckets.items()},
        "q_tau": {str(k): v for k, v in h.q_tau.items()},
        "axis": [list(a) for a in h.axis],
        "incidence_total": h.incidence_total(),
    }
    if args.format == "json":
        print(json.dumps(out))
    else:
        for k, v in out.items():
            print(f"{k}: {v}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="subgroup-lab", description=__doc__.splitlines()[0])
    ap.add_argument("--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="dump one subgroup and its basic statistics")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("verify", help="run the exact-identity suite")
    p.add_argument("--p-max", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="evaluate bound ratios over a prime range")
    p.add_argument("--p-min", type=int, default=3)
    p.add_argument("--p-max", type=int, default=2000)
    p.add_argument("--d-policy", default="below_sqrt_p",
                   help="below_sqrt_p, all_divisors, or a comma list of orders")
    p.add_argument("--quantities", default="", help="comma list; default all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=ScanConfig.budget)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--summary", action="store_true", help="print extreme ratios to stderr")
    p.add_argument("--spot-check", type=float, default=0.0, metavar="FRACTION")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("hist", help="richness histogram for one subgroup pair")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d-gamma", type=int, required=True)
    p.add_argument("--d-pi", type=int, required=True)
    p.add_argument("--format", choices=("text", "json"), default="json")
    p.set_defaults(func=cmd_hist)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (_Usage, SubgroupLabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
