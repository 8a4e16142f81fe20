"""Command-line interface: ``siegelcov <command> [flags]``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import construct as cons
from . import hecke, harder
from .cache import Cache, CacheError
from . import linalg
from .covariant import CovariantError, covariants, decomposition
from .fourier import FourierError, SiegelExpansion, VectorExpansion, mul
from .pipeline import SPACES, build_space
from .theta import chi5 as theta_chi5
from .theta import chi63 as theta_chi63

DEFAULT_PREC = 40
PRIMES = (2, 3)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# seeds


def load_seeds(prec, cache=None):
    """``(chi5, chi10, chi63)`` at precision ``prec``, through the cache when given."""
    if prec < cons.PREC_FLOOR:
        raise UsageError(f"precision {prec} is below the floor {cons.PREC_FLOOR}")
    c5 = c63 = None
    if cache is not None:
        hit5, hit63 = cache.read("chi5", prec), cache.read("chi63", prec)
        if hit5 is not None:
            c5 = SiegelExpansion.from_dict(hit5[1]).truncate(prec)
        if hit63 is not None:
            c63 = VectorExpansion.from_dict(hit63[1]).truncate(prec)
    if c5 is None:
        c5 = theta_chi5(prec)
        if cache is not None:
            cache.write("chi5", prec, c5.to_dict())
    if c63 is None:
        c63 = theta_chi63(prec)
        if cache is not None:
            cache.write("chi63", prec, c63.to_dict())
    return c5, mul(c5, c5), c63


# ---------------------------------------------------------------------------
# formatting


def _q(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _poly_list(cp):
    if hasattr(cp, "coeffs"):
        return [int(c) for c in cp.coeffs()]
    return [_q(c) for c in cp]


def _poly_str(coeffs):
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = Fraction(coeffs[i])
        if not c:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        mag = abs(c)
        body = (_q(mag) if (mag != 1 or not mono) else "") + ("*" if mag != 1 and mono else "") + mono
        terms.append(("- " if c < 0 else "+ ") + body)
    s = " ".join(terms)
    return s[2:] if s.startswith("+ ") else ("-" + s[2:] if s.startswith("- ") else s)


def _table(headers, rows):
    cols = list(zip(*([headers] + rows))) if rows else [[h] for h in headers]
    widths = [max(len(str(x)) for x in col) for col in cols]
    lines = ["  ".join(str(h).rjust(w) for h, w in zip(headers, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(str(x).rjust(w) for x, w in zip(r, widths)))
    return "\n".join(lines)


def _emit(out, data, pretty_text=None, pretty=False):
    if pretty and pretty_text is not None:
        out.write(pretty_text + "\n")
    else:
        out.write(json.dumps(data, indent=1, sort_keys=False) + "\n")


def _eigen_expr(cp):
    """Display-style ``u +- v sqrt(D)`` for a split quadratic, plain roots for linear."""
    coeffs = _poly_list(cp)
    if len(coeffs) == 2:
        return [_q(-Fraction(coeffs[0]))]
    if len(coeffs) == 3 and all(isinstance(c, int) for c in coeffs):
        u, v, D = hecke.quadratic_form_of_roots(cp)
        if D == 1:
            return [_q(u + v), _q(u - v)]
        return [f"{_q(u)} +- {_q(v)}*sqrt({D})"]
    return None


# ---------------------------------------------------------------------------
# commands


def cmd_seed(args, out):
    cache = Cache(args.cache_dir)
    c5, c10, c63 = load_seeds(args.prec, cache)
    data = []
    for name in ("chi5", "chi63"):
        hit = cache.read(name, args.prec)
        data.append({"artifact": name, "prec": hit[0],
                     "path": str(cache.path(name, hit[0]))})
    text = _table(["artifact", "prec", "path"], [[d["artifact"], d["prec"], d["path"]]
                                                 for d in data])
    _emit(out, {"seeds": data, "chi10_terms": len(c10)}, text, args.pretty)


def cmd_decompose(args, out):
    d = args.d
    rows = [{"lambda": list(lam), "multiplicity": m,
             "weight": [lam[0] - lam[1], lam[1] + 3 * d]} for lam, m in decomposition(d)]
    text = _table(["lambda", "mult", "weight"],
                  [[str(r["lambda"]), r["multiplicity"], str(tuple(r["weight"]))] for r in rows])
    _emit(out, {"d": d, "decomposition": rows}, text, args.pretty)


def cmd_covariants(args, out):
    lam = _pair(args.lam, "--lambda")
    cs = covariants(args.d, lam)
    data = [c.to_dict() for c in cs]
    text = "\n\n".join(
        "\n".join(f"[{k}] {e!r}" for k, e in enumerate(c.entries)) for c in cs)
    _emit(out, data, text, args.pretty)


def _cache_for(args):
    return Cache(args.cache_dir) if args.cache_dir or args.use_cache else None


def cmd_construct(args, out):
    lam = _pair(args.lam, "--lambda")
    c5, c10, c63 = load_seeds(args.prec, _cache_for(args))
    ev = cons.GammaEvaluator(c63)
    made = cons.construct(args.d, lam, c63, ev)
    orders, layers = cons.filtration([c.form for c in made])
    result = {"d": args.d, "lambda": list(lam), "orders": orders}
    if args.reduce:
        forms = [c.form for c in made]
        reduced = []
        for m in sorted(set(orders)):
            lower = layers[m + 1]
            for row in layers[m]:
                if linalg.rank(lower + [row]) > linalg.rank(lower):
                    lower = lower + [row]
                    F = cons.vector_linear_combination(row, forms)
                    reduced.append(cons.reduce(F, c5, args.d, lam, row))
        made = reduced
    result["forms"] = [c.to_dict() for c in made]
    text = _table(["source", "weight", "char", "divisions", "prec"],
                  [[",".join(_q(x) for x in c.source), str(c.weight), c.character,
                    c.divisions, c.form.prec] for c in made])
    _emit(out, result, f"orders {orders}\n" + text, args.pretty)


def _space_matrices(weight, prec, primes, cache):
    c5, c10, c63 = load_seeds(prec, cache)
    forms, info = build_space(weight, c63, c5, c10)
    mats = {p: hecke.siegel_hecke(p, forms, weight) for p in primes}
    return forms, info, mats


def cmd_hecke(args, out):
    weight = _pair(args.space, "--space")
    primes = [args.p] if args.p else list(PRIMES)
    _, info, mats = _space_matrices(weight, args.prec, primes, _cache_for(args))
    data = []
    lines = []
    for p, M in mats.items():
        cp = hecke.charpoly(M)
        entry = M.to_dict()
        entry["charpoly"] = _poly_list(cp)
        entry["eigenvalues"] = _eigen_expr(cp)
        data.append(entry)
        lines.append(f"T({p}) on S_{weight}:")
        lines.append(_table([f"G{i + 1}" for i in range(len(M.rows))],
                            [[_q(x) for x in r] for r in M.rows]))
        lines.append(f"charpoly: {_poly_str(entry['charpoly'])}")
        if entry["eigenvalues"]:
            lines.append("lambda_%d: %s" % (p, ", ".join(entry["eigenvalues"])))
    _emit(out, data, "\n".join(lines), args.pretty)


def cmd_harder(args, out):
    weight = (args.j, args.k)
    case = harder.CongruenceCase(args.j, args.k, args.ell or
                                 harder.CongruenceCase.from_table(*weight).ell,
                                 tuple(args.primes))
    _, _, mats = _space_matrices(weight, args.prec, case.primes, _cache_for(args))
    rows = []
    for p in case.primes:
        ok, res = harder.check_congruence(case, p, hecke.charpoly(mats[p]))
        rows.append({"p": p, "resultant": str(res), "divisible": ok})
    data = {"j": case.j, "k": case.k, "ell": case.ell, "elliptic_weight": case.elliptic_weight,
            "exponents": list(case.exponents), "checks": rows}
    text = _table(["p", "ell | Res", "resultant"],
                  [[r["p"], "yes" if r["divisible"] else "no", r["resultant"]] for r in rows])
    _emit(out, data, text, args.pretty)


def cmd_reproduce(args, out):
    if args.table in ("d4-orders", "d5-orders"):
        d = 4 if args.table == "d4-orders" else 5
        c5, c10, c63 = load_seeds(args.prec, _cache_for(args))
        ev = cons.GammaEvaluator(c63)
        rows = []
        for lam, m in decomposition(d):
            orders = cons.order_table(d, lam, c63, ev)
            rows.append({"lambda": list(lam), "multiplicity": m,
                         "weight": [lam[0] - lam[1], lam[1] + 3 * d], "orders": orders})
        text = _table(["[m,n]", "mu", "weight", "order"],
                      [[str(r["lambda"]), r["multiplicity"], str(tuple(r["weight"])),
                        ",".join(map(str, r["orders"]))] for r in rows])
        _emit(out, {"d": d, "rows": rows}, text, args.pretty)
        return
    if args.table != "9":
        raise UsageError(f"unknown table {args.table!r}")
    cache = _cache_for(args)
    c5, c10, c63 = load_seeds(args.prec, cache)
    ev = cons.GammaEvaluator(c63)
    rows = []
    for weight in [(8, 8), (12, 6), (6, 12), (10, 10), (12, 9), (14, 8)]:
        forms, _ = build_space(weight, c63, c5, c10, ev)
        for p in PRIMES:
            cp = hecke.charpoly(hecke.siegel_hecke(p, forms, weight))
            rows.append({"space": list(weight), "p": p, "charpoly": _poly_list(cp),
                         "lambda": _eigen_expr(cp)})
    text = _table(["space", "q", "lambda_q"],
                  [[str(tuple(r["space"])), r["p"], ", ".join(r["lambda"] or [])] for r in rows])
    _emit(out, {"table": "9", "rows": rows}, text, args.pretty)


# ---------------------------------------------------------------------------
# argument parsing


def _pair(text, flag):
    try:
        a, b = (int(x) for x in text.split(","))
    except (AttributeError, ValueError):
        raise UsageError(f"{flag} expects two comma-separated integers, got {text!r}")
    return (a, b)


def _prime_list(text):
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=DEFAULT_PREC,
                        help="precision in Q = q^(1/2) units (default %(default)s)")
    common.add_argument("--cache-dir", default=None,
                        help="seed cache directory (default: $SIEGELCOV_CACHE or ~/.cache/siegelcov)")
    common.add_argument("--use-cache", action="store_true",
                        help="read and write seeds through the default cache directory")
    common.add_argument("--pretty", action="store_true", help="aligned text instead of JSON")

    parser = argparse.ArgumentParser(prog="siegelcov",
                                     description="Siegel modular forms from covariants of binary sextics")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("seed", parents=[common], help="materialize chi5 / chi63 caches")
    p = sub.add_parser("decompose", parents=[common], help="isotypical decomposition of Sym^d(Sym^6)")
    p.add_argument("--d", type=int, required=True)
    p = sub.add_parser("covariants", parents=[common], help="covariants of type A[lambda]")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p = sub.add_parser("construct", parents=[common], help="gamma images and their reductions")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--reduce", action="store_true")
    p = sub.add_parser("hecke", parents=[common], help="Hecke matrices on a named space")
    p.add_argument("--space", required=True, help="weight j,k; one of " +
                   " ".join(f"{j},{k}" for j, k in sorted(SPACES)))
    p.add_argument("--p", type=int, default=None)
    p = sub.add_parser("harder", parents=[common], help="Harder congruence checks")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--primes", type=_prime_list, default=list(PRIMES))
    p = sub.add_parser("reproduce", parents=[common], help="regenerate a table")
    p.add_argument("--table", required=True, choices=["9", "d4-orders", "d5-orders"])
    return parser


COMMANDS = {
    "seed": cmd_seed,
    "decompose": cmd_decompose,
    "covariants": cmd_covariants,
    "construct": cmd_construct,
    "hecke": cmd_hecke,
    "harder": cmd_harder,
    "reproduce": cmd_reproduce,
}


def run(argv=None, out=None):
    """Run one command; returns the exit status."""
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.prec < cons.PREC_FLOOR:
        parser.error(f"--prec must be at least {cons.PREC_FLOOR}")
    try:
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        parser.error(str(exc))
    except (CacheError, FourierError, CovariantError, KeyError, ValueError) as exc:
        sys.stderr.write(f"siegelcov: error: {exc}\n")
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
