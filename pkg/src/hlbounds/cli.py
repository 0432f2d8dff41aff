"""Command line reproduction harness.

    hlbounds table dell99 --m-max 5
    hlbounds table t44 --include-heavy --format json
    hlbounds bound --method clarkson --m 2 --p 4
    hlbounds verify optimal3

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import sys
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from . import __version__
from ._exponents import as_exponent, format_exponent, is_inf
from .bounds import (
    BoundRecord,
    bound_clarkson,
    bound_dimant,
    bound_gbh_jfapel,
    bound_gbh_thispel,
    bound_numeric,
    poly_lower_bound,
    poly_lower_bound_root,
    records_to_csv,
    verify_three_linear_optimal,
)
from .forms import make_littlewood, make_tilde
from .optimizer import (
    DEFAULT_SEED,
    OptimizeConfig,
    OptimizeResult,
    brute_force_linf_norm,
    clarkson_sup,
    sup_norm,
)
from .polynomials import check_eq_m

logger = logging.getLogger("hlbounds")

# printed (norm, bound) pairs of the two comparison tables, keyed by m
REF_DELL99 = {
    2: (1.74, 1.149), 3: (3.29, 1.215), 4: (6.40, 1.250), 5: (12.60, 1.269),
    6: (25.00, 1.280), 7: (49.47, 1.293), 8: (98.36, 1.301), 9: (195.81, 1.307),
}
REF_T44 = {4: (6.20, 1.290), 8: (91.48, 1.399), 16: (22137.70, 1.480)}

FAMILIES = {"dell99": ("littlewood", make_littlewood), "t44": ("tilde", make_tilde)}
HEAVY = {("t44", 16)}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# cache and manifest
# ---------------------------------------------------------------------------


def _cache_key(family, m, p, cfg: OptimizeConfig) -> str:
    key = json.dumps([family, m, format_exponent(p), cfg.starts, cfg.master_seed,
                      cfg.sweep_tol, cfg.max_sweeps])
    return hashlib.sha256(key.encode()).hexdigest()[:32]


def _cache_path(family, m, p, cfg, cache_dir) -> Path:
    return Path(cache_dir) / f"{family}-m{m}-{_cache_key(family, m, p, cfg)}.json"


def cached_sup_norm(family, m, p, cfg: OptimizeConfig, cache_dir: Path | None):
    """``sup_norm`` of the named family with a JSON file cache."""
    build = make_littlewood if family == "littlewood" else make_tilde
    expr = build(m)
    path = None
    if cache_dir is not None:
        path = _cache_path(family, m, p, cfg, cache_dir)
        if path.exists():
            logger.info("cache hit %s", path)
            return expr, OptimizeResult.from_dict(json.loads(path.read_text()))
    res = sup_norm(expr, cfg)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(res.to_json())
    return expr, res


def _manifest(command: str, argv: list, config: dict, output: str) -> dict:
    return {
        "command": command,
        "argv": argv,
        "config": config,
        "version": __version__,
        "output_sha256": hashlib.sha256(output.encode()).hexdigest(),
    }


def _half_up(x: float, places: int) -> str:
    q = Decimal(1).scaleb(-places)
    return str(Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_UP))


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------


def build_table(name: str, ms, cfg_kwargs: dict, cache_dir, include_heavy=False) -> list[dict]:
    family, _ = FAMILIES[name]
    reference = REF_DELL99 if name == "dell99" else REF_T44
    rows = []
    for m in ms:
        p = as_exponent(2 * m)
        ref_norm, ref_bound = reference.get(m, (None, None))
        row = {"table": name, "m": m, "p": format_exponent(p), "ref_norm": ref_norm,
               "ref_bound": ref_bound}
        cfg = OptimizeConfig(p=p, **cfg_kwargs)
        heavy = (name, m) in HEAVY and not include_heavy
        if heavy and (cache_dir is None or not _cache_path(family, m, p, cfg, cache_dir).exists()):
            row.update(status="absent (use --include-heavy)", numerator=None, norm=None,
                       bound=None, certified_bound=None, rel_dev=None)
            rows.append(row)
            continue
        try:
            expr, res = cached_sup_norm(family, m, p, cfg, cache_dir)
            rec = bound_numeric(expr, m, p, res, family=family)
        except (ValueError, MemoryError) as exc:
            row.update(status=f"error: {exc}", numerator=None, norm=None, bound=None,
                       certified_bound=None, rel_dev=None)
            rows.append(row)
            continue
        row.update(
            status="cached" if heavy else "ok",
            numerator=rec.numerator,
            norm=rec.norm,
            bound=rec.bound,
            certified_bound=rec.certified_bound,
            rel_dev=None if ref_norm is None else (rec.norm - ref_norm) / ref_norm,
            seed=cfg.master_seed,
            starts=cfg.starts,
        )
        rows.append(row)
    return rows


def _format_table(rows, fmt):
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    cols = ["m", "p", "numerator", "norm", "bound", "ref_norm", "ref_bound", "rel_dev", "status"]
    if fmt == "csv":
        lines = [",".join(cols)]
        for r in rows:
            lines.append(",".join("" if r.get(c) is None else
                                  (repr(r[c]) if isinstance(r[c], float) else str(r[c])) for c in cols))
        return "\n".join(lines) + "\n"
    lines = ["| m | p | numerator | norm | bound | ref. norm | ref. bound | rel. dev. | status |",
             "|---|---|---|---|---|---|---|---|---|"]
    for r in rows:
        def cell(key, places):
            v = r.get(key)
            return "" if v is None else _half_up(v, places)
        dev = r.get("rel_dev")
        dev = "" if dev is None else f"{dev:+.2%}"
        ref_n = "" if r["ref_norm"] is None else f"{r['ref_norm']:.2f}"
        ref_b = "" if r["ref_bound"] is None else f"{r['ref_bound']:.3f}"
        lines.append(
            f"| {r['m']} | {r['p']} | {cell('numerator', 2)} | {cell('norm', 2)} | {cell('bound', 3)} "
            f"| {ref_n} | {ref_b} | {dev} | {r['status']} |"
        )
    return "\n".join(lines) + "\n"


def cmd_table(args) -> int:
    name = args.name
    if name == "dell99":
        lo, hi = args.m_min or 2, args.m_max or 5
        if not 2 <= lo <= hi <= 9:
            raise UsageError("dell99 rows need 2 <= m-min <= m-max <= 9")
        ms = list(range(lo, hi + 1))
    else:
        ms = [4, 8, 16]
    cfg_kwargs = dict(starts=args.starts, master_seed=args.seed, sweep_tol=args.tol,
                      max_sweeps=args.max_sweeps)
    cache_dir = None if args.no_cache else Path(args.cache_dir)
    rows = build_table(name, ms, cfg_kwargs, cache_dir, include_heavy=args.include_heavy)
    out = _format_table(rows, args.format)
    config = {"table": name, "m": ms, **cfg_kwargs, "include_heavy": args.include_heavy}
    _emit(out, "table", config, args)
    return 0


# ---------------------------------------------------------------------------
# bound
# ---------------------------------------------------------------------------


def cmd_bound(args) -> int:
    method = args.method
    if method in ("clarkson", "dimant", "numeric") and (args.m is None or args.p is None):
        raise UsageError(f"--method {method} needs --m and --p")
    if method.startswith("gbh") and (args.m is None or args.alpha is None):
        raise UsageError(f"--method {method} needs --m and --alpha")
    if method == "poly" and (args.m is None or args.n is None):
        raise UsageError("--method poly needs --m and --n")
    try:
        if method == "clarkson":
            rec = bound_clarkson(args.m, args.p)
        elif method == "dimant":
            rec = bound_dimant(args.m, args.p)
        elif method == "numeric":
            family = args.family
            cfg = OptimizeConfig(p=args.p, starts=args.starts, master_seed=args.seed,
                                 sweep_tol=args.tol, max_sweeps=args.max_sweeps)
            cache_dir = None if args.no_cache else Path(args.cache_dir)
            expr, res = cached_sup_norm(family, args.m, as_exponent(args.p), cfg, cache_dir)
            rec = bound_numeric(expr, args.m, args.p, res, family=family)
        elif method == "gbh-jfapel":
            rec = bound_gbh_jfapel(args.m, args.alpha, ordering=args.ordering)
        elif method == "gbh-thispel":
            rec = bound_gbh_thispel(args.m, args.alpha)
        else:
            value = poly_lower_bound(args.m, args.n)
            rec = BoundRecord(args.m, math.inf, "poly", args.n, value, 1.0, value,
                              provenance={"root_form": poly_lower_bound_root(args.m, args.n)})
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "json":
        out = json.dumps(rec.to_dict(), indent=2) + "\n"
    elif args.format == "csv":
        out = records_to_csv([rec])
    else:
        out = f"{rec.method}: m={rec.m} p={format_exponent(rec.p)} bound={rec.bound!r}\n"
    _emit(out, "bound", {k: _plain(v) for k, v in vars(args).items() if k not in ("func", "argv")}, args)
    return 0


def _plain(v):
    if isinstance(v, (int, float, str, type(None), bool)) and not (isinstance(v, float) and is_inf(v)):
        return v
    return format_exponent(v) if not isinstance(v, Path) else str(v)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verify_optimal3(args):
    lines, ok = [], True
    for r in verify_three_linear_optimal():
        ok &= r["passed"]
        lines.append(f"[{'PASS' if r['passed'] else 'FAIL'}] q={r['q']} via {r['mechanism']}: "
                     f"lower = upper = 2^(3/4) (lower={r['lower']!r}, upper={r['upper']!r})")
    return ok, lines


def _verify_oracles(args):
    lines, ok = [], True
    t2 = make_littlewood(2)
    for p in (4, 8, 16):
        res = sup_norm(t2, OptimizeConfig(p=p, starts=args.starts, master_seed=args.seed))
        ref = clarkson_sup(p)
        good = abs(res.best_value - ref) <= 1e-4
        ok &= good
        lines.append(f"[{'PASS' if good else 'FAIL'}] T_2 on l_{p}: sup_norm={res.best_value:.12f} "
                     f"clarkson_sup={ref:.12f}")
    for m in (2, 3, 4):
        expr = make_littlewood(m)
        res = sup_norm(expr, OptimizeConfig(p=math.inf, starts=args.starts, master_seed=args.seed))
        ref = brute_force_linf_norm(expr)
        good = abs(res.best_value - ref) <= 1e-9
        ok &= good
        lines.append(f"[{'PASS' if good else 'FAIL'}] T_{m} on l_inf: sup_norm={res.best_value!r} "
                     f"corners={ref!r}")
    return ok, lines


def _verify_sandwich(args):
    lines, ok = [], True
    for m in range(2, (args.max_m or 5) + 1):
        for p in (2 * m, 3 * m, math.inf):
            res = sup_norm(make_littlewood(m), OptimizeConfig(p=p, starts=args.starts, master_seed=args.seed))
            upper = 2.0 ** (m - 2) * clarkson_sup(p)
            good = res.best_value <= upper + 1e-9
            ok &= good
            lines.append(f"[{'PASS' if good else 'FAIL'}] T_{m} on l_{format_exponent(as_exponent(p))}: "
                         f"{res.best_value:.10f} <= {upper:.10f}")
    return ok, lines


def _verify_eqm(args):
    lines, ok = [], True
    for m in range(1, (args.max_m or 2) + 1):
        for n in range(1, (args.max_n or 3) + 1):
            r = check_eq_m(m, n)
            ok &= r["holds"]
            lines.append(f"[{'PASS' if r['holds'] else 'FAIL'}] m={m} n={n}: "
                         f"|Q^n|_inf={r['lhs']} >= {r['rhs']:.6g}")
    return ok, lines


SUITES = {"optimal3": _verify_optimal3, "oracles": _verify_oracles,
          "sandwich": _verify_sandwich, "eqm": _verify_eqm}


def cmd_verify(args) -> int:
    ok, lines = SUITES[args.suite](args)
    out = "\n".join(lines) + "\n"
    _emit(out, "verify", {"suite": args.suite, "starts": args.starts, "seed": args.seed,
                          "max_m": args.max_m, "max_n": args.max_n}, args)
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def _emit(out: str, command: str, config: dict, args):
    sys.stdout.write(out)
    if args.manifest:
        Path(args.manifest).write_text(json.dumps(_manifest(command, args.argv, config, out), indent=2) + "\n")


def _exponent_arg(s):
    try:
        return as_exponent(s)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"invalid exponent {s!r}") from exc


def _seed_arg(s):
    return int(s, 0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hlbounds", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--starts", type=int, default=64, help="random starts per norm (default 64)")
    common.add_argument("--seed", type=_seed_arg, default=DEFAULT_SEED,
                        help=f"master seed, decimal or 0x-hex (default {DEFAULT_SEED:#x})")
    common.add_argument("--tol", type=float, default=1e-10, help="relative sweep tolerance")
    common.add_argument("--max-sweeps", type=int, default=500, help="sweeps per start")
    common.add_argument("--format", choices=("json", "csv", "md"), default="md")
    common.add_argument("--cache-dir", default=".hlb-cache", help="optimizer result cache")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    common.add_argument("--manifest", help="write a run manifest JSON to this path")

    t = sub.add_parser("table", parents=[common], help="regenerate a numerical table")
    t.add_argument("name", choices=sorted(FAMILIES))
    t.add_argument("--m-min", type=int, help="first dell99 row (default 2)")
    t.add_argument("--m-max", type=int, help="last dell99 row (default 5, at most 9)")
    t.add_argument("--include-heavy", action="store_true", help="compute the 16-linear t44 row")
    t.set_defaults(func=cmd_table)

    b = sub.add_parser("bound", parents=[common], help="evaluate one lower-bound formula")
    b.add_argument("--method", required=True,
                   choices=("clarkson", "dimant", "numeric", "gbh-jfapel", "gbh-thispel", "poly"))
    b.add_argument("--m", type=int)
    b.add_argument("--p", type=_exponent_arg, help="exponent: integer, a/b, decimal or inf")
    b.add_argument("--alpha", type=_exponent_arg)
    b.add_argument("--n", type=int, help="power n for --method poly")
    b.add_argument("--ordering", choices=("alpha_first", "alpha_last"), default="alpha_first")
    b.add_argument("--family", choices=("littlewood", "tilde"), default="littlewood")
    b.set_defaults(func=cmd_bound)

    v = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--max-m", type=int)
    v.add_argument("--max-n", type=int)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    args.argv = argv
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "starts", 1) < 1:
        parser.error("--starts must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hlbounds: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
