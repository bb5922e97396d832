"""Command-line interface: ``flatstat <command> ...``.

Exit codes: 0 success, 1 bad input, 2 a claim or bound was violated,
3 a resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from fractions import Fraction

from . import __version__, bounds, kernels, search
from .constructions import RNG_NAME, ConstructionSpec
from .gf2core import MAX_N
from .stats import PointSet, cube_profile, default_threads, flat_profile, flat_profile_bruteforce

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_INPUT, EXIT_VIOLATION, EXIT_CAP = 0, 1, 2, 3

log = logging.getLogger("flatstat")


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def rational(x: Fraction, precision: int) -> dict:
    """{"num", "den"} as decimal strings plus a rounded decimal rendering."""
    x = Fraction(x)
    scaled = round(x * 10**precision)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(precision + 1, "0")
    dec = digits if precision == 0 else f"{digits[:-precision]}.{digits[-precision:]}"
    return {"num": str(x.numerator), "den": str(x.denominator), "decimal": sign + dec}


def _q(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _read_set(args) -> PointSet:
    given = [args.mask is not None, args.points is not None, args.construct is not None]
    if sum(given) != 1:
        raise InputError("give exactly one of --mask, --points, --construct")
    n = args.n
    if args.construct is not None:
        return ConstructionSpec.parse(args.construct).build(n)
    if n is None:
        raise InputError("--n is required with --mask or --points")
    if args.mask is not None:
        try:
            mask = int(args.mask, 16)
        except ValueError:
            raise InputError(f"--mask must be hexadecimal, got {args.mask!r}") from None
        return PointSet(n, mask)
    pts = []
    for tok in args.points:
        if len(tok) != n or set(tok) - {"0", "1"}:
            raise InputError(f"point {tok!r} is not a length-{n} binary string (x_n ... x_1)")
        pts.append(int(tok, 2))
    return PointSet.from_points(n, pts)


def _profile_results(a: PointSet, prof, prec):
    return {
        "n": a.n,
        "d": prof.d,
        "family": prof.family,
        "set_size": len(a),
        "set_mask": format(a.mask, "x"),
        "total": prof.total,
        "counts": list(prof.counts),
        "fractions": [rational(f, prec) for f in prof.fractions()],
        "odd_fraction": rational(prof.odd_fraction(), prec),
    }


def cmd_profile(args):
    a = _read_set(args)
    if args.n is not None and a.n != args.n:
        raise InputError("construction n does not match --n")
    if not 1 <= args.d <= a.n:
        raise InputError(f"need 1 <= d <= n, got d={args.d}, n={a.n}")
    if args.family == "subcubes":
        prof = cube_profile(a, args.d)
    elif args.bruteforce:
        prof = flat_profile_bruteforce(a, args.d)
    else:
        prof = flat_profile(a, args.d, threads=args.threads)
    res = _profile_results(a, prof, args.precision)
    rows = [["s", "count", "fraction"]] + [
        [s, c, _q(f)] for s, (c, f) in enumerate(zip(prof.counts, prof.fractions()))
    ]
    return {"n": a.n, "d": args.d, "family": args.family}, res, rows, EXIT_OK


def _bound_results(rep, prec):
    def side(entries):
        return {k: {"value": rational(v, prec), "tag": t} for k, (v, t) in sorted(entries.items())}

    return {
        "d": rep.d,
        "s": rep.s,
        "k": rep.k,
        "j": rep.j,
        "n": rep.n,
        "lower": side(rep.lower),
        "upper": side(rep.upper),
        "best_lower": rational(rep.best_lower, prec),
        "best_upper": rational(rep.best_upper, prec),
        "exact": rational(rep.exact, prec) if rep.exact is not None else None,
    }


def cmd_bounds(args):
    if args.d < 1 or not 1 <= args.s < 1 << args.d:
        raise InputError(f"need d >= 1 and 1 <= s <= 2^d - 1, got d={args.d}, s={args.s}")
    rep = bounds.summary(args.d, args.s, args.n, terms=args.terms)
    rows = [["side", "name", "value", "tag"]]
    for name, (v, t) in sorted(rep.lower.items()):
        rows.append(["lower", name, _q(v), t])
    for name, (v, t) in sorted(rep.upper.items()):
        rows.append(["upper", name, _q(v), t])
    params = {"d": args.d, "s": args.s, "n": args.n, "terms": args.terms}
    return params, _bound_results(rep, args.precision), rows, EXIT_OK


def cmd_verify(args):
    claims = [c.strip() for c in args.claims.split(",") if c.strip()] if args.claims else None
    rep = search.verify_all(args.n, args.d, claims, threads=args.threads, corrupt=args.corrupt)
    res = {
        "n": rep.n,
        "d": rep.d,
        "claims": [
            {"claim": r.claim, "params": r.params, "status": r.status, "details": r.details, "witness": r.witness}
            for r in rep.results
        ],
        "violations": len(rep.violated),
    }
    rows = [["claim", "status", "witness"]] + [[r.claim, r.status, r.witness or ""] for r in rep.results]
    params = {"n": args.n, "d": args.d, "claims": claims, "corrupt": args.corrupt}
    return params, res, rows, EXIT_VIOLATION if rep.violated else EXIT_OK


def cmd_search(args):
    initial = ConstructionSpec.parse(args.initial) if args.initial else None
    cfg = search.SearchConfig(
        args.n, args.d, args.s, mode=args.mode, iterations=args.iterations,
        restarts=args.restarts, seed=args.seed, initial=initial, t0=args.t0, cooling=args.cooling,
    )
    if cfg.mode == "exhaustive":
        r = search.exhaustive_max(
            args.n, args.d, args.s, allow_long=args.allow_long, checkpoint=args.checkpoint,
            max_chunks=args.max_chunks, witness_limit=args.witness_limit, threads=args.threads,
        )
    else:
        r = search.anneal_max(cfg)
    res = {
        "value": rational(r.value, args.precision),
        "count": r.count,
        "total": r.total,
        "visited": r.visited,
        "witness_count": r.witness_count,
        "witnesses": [format(w.mask, "x") for w in r.witnesses],
        "trace": [list(t) for t in r.trace],
        "exceeds_bound": rational(r.exceeds_bound, args.precision) if r.exceeds_bound is not None else None,
    }
    rows = [["value", "count", "total", "witness"]] + [
        [_q(r.value), r.count, r.total, format(w.mask, "x")] for w in r.witnesses
    ]
    code = EXIT_VIOLATION if r.exceeds_bound is not None else EXIT_OK
    return r.config, res, rows, code


def _construct_spec(args) -> ConstructionSpec:
    if args.kind:
        if args.spec:
            raise InputError("give either a positional spec or --kind, not both")
        params = {k: getattr(args, k) for k in ("d", "k", "j", "parity") if getattr(args, k) is not None}
        return ConstructionSpec(args.kind, params)
    if not args.spec:
        raise InputError("construct needs a spec or --kind")
    return ConstructionSpec.parse(args.spec)


def cmd_construct(args):
    spec = _construct_spec(args)
    a = spec.build(args.n)
    res = {
        "spec": spec.to_dict(),
        "n": a.n,
        "size": len(a),
        "mask": format(a.mask, "x"),
        "points": [format(p, f"0{a.n}b") for p in a.points()],
    }
    code = EXIT_OK
    if spec.kind == "symmetric_poly":
        d = int(spec.params["d"])
        prof = cube_profile(a, d)
        even = sum(prof.counts[0::2])
        res["cube_check"] = {"d": d, "subcubes": prof.total, "even_intersections": even, "all_odd": even == 0}
        code = EXIT_OK if even == 0 else EXIT_VIOLATION
    rows = [["point"]] + [[format(p, f"0{a.n}b")] for p in a.points()]
    return {"spec": spec.to_dict(), "n": a.n}, res, rows, code


def cmd_table(args):
    if args.d is not None:
        ds = [args.d]
    else:
        ds = range(1, args.dmax + 1)
    rows = [["d", "s", "k", "best_lower", "best_upper"]]
    entries = []
    for d in ds:
        if d < 1:
            raise InputError("d must be at least 1")
        for s in range(1, 1 << d):
            rep = bounds.summary(d, s, args.n, terms=args.terms)
            rows.append([d, s, rep.k, _q(rep.best_lower), _q(rep.best_upper)])
            entries.append({
                "d": d, "s": s, "k": rep.k,
                "best_lower": rational(rep.best_lower, args.precision),
                "best_upper": rational(rep.best_upper, args.precision),
            })
    if args.csv is None:
        args.csv = True
    params = {"d": args.d, "dmax": None if args.d is not None else args.dmax, "n": args.n, "terms": args.terms}
    return params, {"rows": entries}, rows, EXIT_OK


def _add_globals(p, suppress):
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    p.add_argument("--threads", type=int, help="worker threads, default all cores (results never depend on this)",
                   **(kw or {"default": None}))
    p.add_argument("--out", help="write the report here instead of stdout", **(kw or {"default": None}))
    p.add_argument("--csv", action="store_true", help="emit CSV instead of JSON",
                   **(kw or {"default": None}))
    p.add_argument("--precision", type=int, help="decimal digits in rendered rationals",
                   **(kw or {"default": 12}))
    p.add_argument("-v", "--verbose", action="store_true", **(kw or {"default": False}))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="flatstat", description="Exact statistics of point sets in F_2^n against affine flats.")
    parser.add_argument("--version", action="version", version=f"flatstat {__version__}")
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("profile", help="intersection profile of one set")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--mask", help="hex mask, bit p set iff point p is in the set")
    p.add_argument("--points", nargs="+", help="binary strings written x_n ... x_1")
    p.add_argument("--construct", nargs="+", help="JSON spec or 'kind key=value ...'")
    p.add_argument("--family", choices=["flats", "subcubes"], default="flats")
    p.add_argument("--bruteforce", action="store_true", help="use the slow reference enumeration")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("bounds", help="every applicable bound for (d, s)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--n", type=int, help="bound lambda*(n, d, s) instead of the limit")
    p.add_argument("--terms", type=int, default=bounds.DEFAULT_TERMS)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="run the claim battery")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--claims", help=f"comma list from: {','.join(search.CLAIMS)}")
    p.add_argument("--corrupt", action="store_true", help="self-test: tamper with profiles")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="maximize lambda*(n, d, s)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "anneal"], default="anneal")
    p.add_argument("--iterations", type=int, default=10_000)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--initial", nargs="+", help="starting construction")
    p.add_argument("--t0", type=float, default=1.0)
    p.add_argument("--cooling", type=float, default=0.999)
    p.add_argument("--allow-long", action="store_true", help="permit the n = 5 exhaustive scan")
    p.add_argument("--checkpoint", help="resume file for long exhaustive scans")
    p.add_argument("--max-chunks", type=int)
    p.add_argument("--witness-limit", type=int)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("construct", help="build a construction and list its points")
    p.add_argument("spec", nargs="*", help="JSON spec or 'kind key=value ...'")
    p.add_argument("--kind", help="construction kind (alternative to a positional spec)")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--parity", type=int)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("table", help="CSV of best bounds over 1 <= s < 2^d")
    p.add_argument("--d", type=int, help="a single d (default: every d up to --dmax)")
    p.add_argument("--dmax", type=int, default=4)
    p.add_argument("--n", type=int)
    p.add_argument("--terms", type=int, default=bounds.DEFAULT_TERMS)
    p.set_defaults(func=cmd_table)

    for p in sub.choices.values():
        _add_globals(p, suppress=True)
    return parser


def render(command: str, params: dict, results: dict, rows, as_csv: bool) -> str:
    if as_csv:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue()
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "results": results,
        "provenance": {
            "package": "flatstat",
            "version": __version__,
            "rng": RNG_NAME,
            "e_bounds": [_q(bounds.E_LOWER), _q(bounds.E_UPPER)],
        },
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.threads is None:
        args.threads = default_threads()
    if args.threads < 1 or args.precision < 0:
        print("flatstat: --threads must be >= 1 and --precision >= 0", file=sys.stderr)
        return EXIT_INPUT
    for name in ("n", "d"):
        v = getattr(args, name, None)
        if v is not None and not 0 <= v <= MAX_N:
            print(f"flatstat: --{name} must lie in [0, {MAX_N}]", file=sys.stderr)
            return EXIT_INPUT
    start = time.perf_counter()
    try:
        params, results, rows, code = args.func(args)
    except search.ResourceCapExceeded as exc:
        print(f"flatstat: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"flatstat: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"flatstat: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    text = render(args.command, params, results, rows, bool(args.csv))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    log.info("%s finished in %.3fs (backend=%s, threads=%d)",
             args.command, time.perf_counter() - start, kernels.BACKEND, args.threads)
    return code


if __name__ == "__main__":
    sys.exit(main())
