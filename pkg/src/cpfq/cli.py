"""Command line interface.

All subcommands emit one JSON object on stdout (deterministic key order,
so identical invocations are byte-identical); --format text renders the
same data as aligned key/value lines.  Exit codes: 0 success, 1 domain
errors (bad polynomial, guard exceeded, wrong modulus shape), 2 usage.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
import time

from . import chen, counting, oracle, wagner
from .field import field_make
from .polyring import (ParseError, Poly, factorize, parse, parse_prime_coeffs,
                       to_text)
from .residue import FunctionTable, ResidueRing, crt_combine, crt_split


class DomainError(ValueError):
    pass


def _field_from_args(args):
    if args.q is not None and args.p is not None:
        raise DomainError("give either --q (prime field) or --p/--m, not both")
    if args.q is not None:
        try:
            return field_make(args.q, 1, None)
        except ValueError:
            raise DomainError(
                f"--q must be prime (got {args.q}); for prime powers use "
                "--p and --m") from None
    if args.p is not None:
        m = args.m or 2
        modulus = None
        if args.field_modulus:
            modulus = parse_prime_coeffs(args.field_modulus, args.p, "u")
        return field_make_checked(args.p, m, modulus)
    raise DomainError("a field is required: --q for prime q, --p/--m for extensions")


def field_make_checked(p, m, modulus):
    try:
        return field_make(p, m, modulus)
    except ValueError as e:
        raise DomainError(str(e)) from None


def _parse_poly(field, text, name):
    try:
        return parse(field, text)
    except ParseError as e:
        raise DomainError(f"malformed polynomial for --{name}: {e}") from None


def _guard_from_args(args) -> oracle.EnumerationGuard:
    kw = {}
    if getattr(args, "guard_functions", None):
        kw["max_functions"] = args.guard_functions
    if getattr(args, "guard_degree", None):
        kw["max_degree"] = args.guard_degree
    return oracle.EnumerationGuard(**kw)


def _render_gamma(g):
    return "inf" if g == math.inf else g


def _fraction_obj(fr):
    return {"num": fr.numerator, "den": fr.denominator}


def _load_sigma(path) -> FunctionTable:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        return FunctionTable.from_json(text)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as e:
        raise DomainError(f"cannot load function table: {e}") from None


# ------------------------------------------------------------- commands
def _cmd_count(args, kind: str):
    field = _field_from_args(args)
    f = _parse_poly(field, args.f, "f")
    g = _parse_poly(field, args.g, "g")
    try:
        if kind == "cpf":
            c = counting.count_cpf(f, g)
        else:
            c = counting.count_polyfn(f, g, literal=args.literal)
    except ValueError as e:
        raise DomainError(str(e)) from None
    out = {"q": field.q, "f": to_text(f), "g": to_text(g),
           "count": str(c), "exponent": c.exponent}
    if args.decimal:
        d = c.decimal()
        if d is None:
            print(f"note: {c} exceeds the decimal render guard", file=sys.stderr)
        else:
            out["decimal"] = d
    return out


def _cmd_gamma(args):
    field = _field_from_args(args)
    g = _parse_poly(field, args.g, "g")
    try:
        value = chen.gamma(g)
    except ValueError as e:
        raise DomainError(str(e)) from None
    return {"q": field.q, "g": to_text(g), "gamma": _render_gamma(value)}


def _cmd_chen(args):
    field = _field_from_args(args)
    f = _parse_poly(field, args.f, "f")
    g = _parse_poly(field, args.g, "g")
    try:
        verdict = chen.is_chen_pair(f, g)
    except ValueError as e:
        raise DomainError(str(e)) from None
    return {"chen_pair": verdict.chen_pair, "deg_f": verdict.deg_f,
            "gamma_g": _render_gamma(verdict.gamma_g)}


def _cmd_density(args):
    field = _field_from_args(args)
    rho = chen.density_exact(field.q)
    out = {"q": field.q, "rho": _fraction_obj(rho)}
    if args.empirical:
        try:
            rep = chen.density_empirical(field, args.max_degree,
                                         monic_only=args.monic_only)
        except ValueError as e:
            raise DomainError(str(e)) from None
        out["max_degree"] = rep.max_degree
        out["monic_only"] = rep.monic_only
        out["per_degree"] = list(rep.per_degree)
        out["per_degree_total"] = list(rep.per_degree_total)
        out["fraction"] = _fraction_obj(rep.fraction)
        out["error"] = _fraction_obj(rep.error)
    return out


def _cmd_factor(args):
    field = _field_from_args(args)
    g = _parse_poly(field, args.g, "g")
    try:
        fact = factorize(g)
    except ValueError as e:
        raise DomainError(str(e)) from None
    out = {"q": field.q, "g": to_text(g)}
    out.update(fact.to_json())
    out["text"] = str(fact)
    return out


def _cmd_enumerate(args):
    field = _field_from_args(args)
    f = _parse_poly(field, args.f, "f")
    try:
        ring = ResidueRing(f)
    except ValueError as e:
        raise DomainError(str(e)) from None
    guard = _guard_from_args(args)
    if ring.size > guard.max_functions:
        raise DomainError(f"{ring.size} residues exceed the enumeration guard")
    return {"q": field.q, "f": to_text(f), "size": ring.size,
            "residues": [to_text(r) for r in ring.elements()]}


def _cmd_decompose(args):
    field = _field_from_args(args)
    f = _parse_poly(field, args.f, "f")
    p = _parse_poly(field, args.P, "P")
    sigma = _load_sigma(args.sigma)
    if sigma.domain.field != field:
        raise DomainError("function table field does not match --q/--p")
    if sigma.domain.modulus != f:
        raise DomainError("function table domain modulus does not match --f")
    expected = (p ** args.e).monic()
    if sigma.codomain.modulus.monic() != expected:
        raise DomainError("function table codomain modulus is not P^e")
    try:
        report = wagner.is_cpf_via_basis(sigma)
    except (ValueError, ArithmeticError) as e:
        raise DomainError(str(e)) from None
    co = report.coefficients
    return {
        "q": field.q, "f": to_text(f), "P": to_text(p), "e": args.e,
        "coefficients": [to_text(c) for c in co.coefficients],
        "mu": list(co.mus),
        "valuations": ["inf" if v == math.inf else v for v in co.valuations],
        "cpf": report.cpf,
        "failures": co.cpf_failures(),
    }


def _cmd_characterize(args):
    field = _field_from_args(args)
    f = _parse_poly(field, args.f, "f")
    g = _parse_poly(field, args.g, "g")
    sigma = _load_sigma(args.sigma)
    if sigma.domain.field != field:
        raise DomainError("function table field does not match --q/--p")
    if sigma.domain.modulus != f or sigma.codomain.modulus != g:
        raise DomainError("function table moduli do not match --f/--g")
    try:
        rep = wagner.crt_characterize(sigma)
    except (ValueError, ArithmeticError) as e:
        raise DomainError(str(e)) from None
    factors = []
    for p, e, part in rep.parts:
        factors.append({"P": to_text(p), "e": e, "cpf": part.cpf,
                        "failures": part.coefficients.cpf_failures()})
    return {"q": field.q, "f": to_text(f), "g": to_text(g),
            "cpf": rep.cpf, "factors": factors}


def _cmd_verify(args):
    field = _field_from_args(args)
    guard = _guard_from_args(args)
    t0 = time.perf_counter()
    try:
        out = _verify_dispatch(args, field, guard)
    except (ValueError, ArithmeticError) as e:
        raise DomainError(str(e)) from None
    if args.timing:
        out["elapsed_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    return out


def _verify_dispatch(args, field, guard):
    what = args.what
    if what in ("cpf-count", "poly-count", "chen", "basis", "crt"):
        if not args.f or not args.g:
            raise DomainError(f"verify --what {what} needs --f and --g")
        f = _parse_poly(field, args.f, "f")
        g = _parse_poly(field, args.g, "g")
    if what == "cpf-count":
        formula = counting.count_cpf(f, g)
        got = oracle.count_cpf_bruteforce(f, g, engine=args.engine, guard=guard)
        return {"what": what, "q": field.q, "f": to_text(f), "g": to_text(g),
                "engine": args.engine, "formula": str(formula), "oracle": got,
                "match": formula.equals_int(got)}
    if what == "poly-count":
        formula = counting.count_polyfn(f, g)
        got = oracle.polyfn_module(f, g, guard).size
        return {"what": what, "q": field.q, "f": to_text(f), "g": to_text(g),
                "formula": str(formula), "oracle": got,
                "match": formula.equals_int(got)}
    if what == "chen":
        verdict = chen.is_chen_pair(f, g)
        m = oracle.count_cpf_bruteforce(f, g, engine=args.engine, guard=guard)
        n = oracle.polyfn_module(f, g, guard).size
        return {"what": what, "q": field.q, "f": to_text(f), "g": to_text(g),
                "formula": verdict.chen_pair, "oracle": m == n,
                "M": m, "N": n, "match": verdict.chen_pair == (m == n)}
    if what == "basis":
        return _verify_basis(args, field, guard, f, g)
    if what == "crt":
        return _verify_crt(args, field, guard, f, g)
    if what == "census":
        if args.n is None:
            raise DomainError("verify --what census needs --n")
        c = oracle.census_self_chen(field, args.n)
        if field.q == 2:
            formula = chen.chen_self_count(args.n)
        else:
            formula = (field.q - 1) * chen.squarefree_count(args.n, field.q)
        out = {"what": what, "q": field.q, "n": args.n,
               "formula": formula, "census": c.total, "match": formula == c.total}
        if c.components is not None:
            out["components"] = list(c.components)
        return out
    raise DomainError(f"unknown verification {what!r}")


def _verify_basis(args, field, guard, f, g):
    fact = factorize(g)
    if len(fact.factors) != 1:
        raise DomainError("verify --what basis needs a prime power --g")
    tables = oracle.enumerate_cpf_tables(f, g, guard=guard)
    all_cp_pass = all(wagner.is_cpf_via_basis(tb).cpf for tb in tables)
    rng = random.Random(args.seed)
    dom, cod = ResidueRing(f), ResidueRing(g)
    agree = 0
    for _ in range(args.samples):
        tb = oracle.random_table(dom, cod, rng)
        if wagner.is_cpf_via_basis(tb).cpf == oracle.is_congruence_preserving(tb).ok:
            agree += 1
    return {"what": "basis", "q": field.q, "f": to_text(f), "g": to_text(g),
            "cp_tables": len(tables), "all_cp_pass": all_cp_pass,
            "samples": args.samples, "agreements": agree,
            "match": all_cp_pass and agree == args.samples}


def _verify_crt(args, field, guard, f, g):
    rng = random.Random(args.seed)
    dom, cod = ResidueRing(f), ResidueRing(g)
    roundtrip_ok = True
    local_global_ok = True
    for _ in range(args.samples):
        tb = oracle.random_table(dom, cod, rng)
        parts = crt_split(tb)
        back = crt_combine(parts, modulus=cod.modulus)
        roundtrip_ok = roundtrip_ok and back == tb
        whole = oracle.is_congruence_preserving(tb).ok
        locals_ok = all(oracle.is_congruence_preserving(p).ok for p in parts)
        local_global_ok = local_global_ok and (whole == locals_ok)
    return {"what": "crt", "q": field.q, "f": to_text(f), "g": to_text(g),
            "samples": args.samples, "roundtrip_ok": roundtrip_ok,
            "local_global_ok": local_global_ok,
            "match": roundtrip_ok and local_global_ok}


# --------------------------------------------------------------- render
def _render_text(obj, indent=0) -> str:
    lines = []
    pad = " " * indent
    if isinstance(obj, dict):
        width = max((len(str(k)) for k in obj), default=0)
        for k, v in obj.items():
            nested = (isinstance(v, dict) and v) or (
                isinstance(v, list) and v and isinstance(v[0], dict))
            if nested:
                lines.append(f"{pad}{k}:")
                lines.append(_render_text(v, indent + 2))
            else:
                lines.append(f"{pad}{str(k).ljust(width)}  {json.dumps(v)}")
    elif isinstance(obj, list):
        for v in obj:
            lines.append(_render_text(v, indent))
    else:
        lines.append(f"{pad}{json.dumps(obj)}")
    return "\n".join(lines)


def _emit(args, obj) -> None:
    if args.format == "text":
        print(_render_text(obj))
    else:
        print(json.dumps(obj))


# ---------------------------------------------------------------- parser
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, help="prime field size")
    common.add_argument("--p", type=int, help="characteristic (extension fields)")
    common.add_argument("--m", type=int, help="extension degree")
    common.add_argument("--field-modulus", help="modulus in u for F_{p^m}")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--guard-functions", type=int,
                        help="override the table enumeration guard")
    common.add_argument("--guard-degree", type=int,
                        help="override the degree guard")

    ap = argparse.ArgumentParser(
        prog="cpfq",
        description="Congruence-preserving functions between residue class "
                    "rings of F_q[t]: exact counts, Chen pairs, basis "
                    "decompositions and brute-force verification.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count-cpf", parents=[common],
                       help="count congruence-preserving functions A_f -> A_g")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--decimal", action="store_true")
    p.add_argument("--literal", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(fn=lambda a: _cmd_count(a, "cpf"))

    p = sub.add_parser("count-poly", parents=[common],
                       help="count polynomial functions A_f -> A_g")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--decimal", action="store_true")
    p.add_argument("--literal", action="store_true",
                   help="recompute factorial gcd degrees literally")
    p.set_defaults(fn=lambda a: _cmd_count(a, "poly"))

    p = sub.add_parser("gamma", parents=[common],
                       help="threshold degree gamma(g)")
    p.add_argument("--g", required=True)
    p.set_defaults(fn=_cmd_gamma)

    p = sub.add_parser("chen", parents=[common],
                       help="decide whether (f, g) is a Chen pair")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.set_defaults(fn=_cmd_chen)

    p = sub.add_parser("density", parents=[common],
                       help="density of self Chen pairs")
    p.add_argument("--empirical", action="store_true")
    p.add_argument("--max-degree", type=int, default=8)
    p.add_argument("--monic-only", action="store_true")
    p.set_defaults(fn=_cmd_density)

    p = sub.add_parser("factor", parents=[common], help="factor a modulus")
    p.add_argument("--g", required=True)
    p.set_defaults(fn=_cmd_factor)

    p = sub.add_parser("enumerate", parents=[common],
                       help="canonical residues of A_f in index order")
    p.add_argument("--f", required=True)
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("decompose", parents=[common],
                       help="basis coordinates of a table into A_{P^e}")
    p.add_argument("--f", required=True)
    p.add_argument("--P", required=True)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--sigma", required=True, help="function table JSON ('-' = stdin)")
    p.set_defaults(fn=_cmd_decompose)

    p = sub.add_parser("characterize", parents=[common],
                       help="prime power by prime power basis verdicts")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--sigma", required=True, help="function table JSON ('-' = stdin)")
    p.set_defaults(fn=_cmd_characterize)

    p = sub.add_parser("verify", parents=[common],
                       help="formula vs independent brute force")
    p.add_argument("--what", required=True,
                   choices=("cpf-count", "poly-count", "chen", "basis", "crt",
                            "census"))
    p.add_argument("--f")
    p.add_argument("--g")
    p.add_argument("--n", type=int, help="degree for --what census")
    p.add_argument("--engine", choices=("exhaustive", "backtracking"),
                   default="exhaustive")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timing", action="store_true",
                   help="include elapsed milliseconds")
    p.set_defaults(fn=_cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        out = args.fn(args)
    except DomainError as e:
        print(json.dumps({"error": str(e)}), file=sys.stderr)
        return 1
    except oracle.GuardExceeded as e:
        print(json.dumps({"error": str(e), "guard": True}), file=sys.stderr)
        return 1
    _emit(args, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
