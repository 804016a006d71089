"""Command-line entry point: ``mahlerexp <group> <command> [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .exactcore import GF, ZZ
from .exponent import (
    CoefficientBound,
    certified_cf,
    evaluate_at,
    evaluate_series_at,
    mu_bound_from_rho,
)
from .hankel import DEFAULT_WINDOW, hankel_det, hankel_table
from .hfrac import hankel_from_hfrac, hfrac_expand
from .mahler import (
    audit_approximation,
    build_approximant,
    iterate_equation,
    log_abs,
    q_sandwich,
)
from .pade import contact_order, pade_construct
from .sequences import (
    EQUATIONS,
    MahlerEquation,
    SequenceSpec,
    feq_generate,
    list_sequences,
)
from .verify import FIXTURES, periodicity_evidence, quadratic_periodicity, run_fixture


class CliError(Exception):
    pass


def _json_default(o):
    if isinstance(o, Fraction):
        return o.numerator if o.denominator == 1 else str(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=_json_default, indent=2)


# ----------------------------------------------------------------------
# argument helpers


def _add_source(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--seq", help="registered sequence name (see `seq list`)")
    g.add_argument("--equation", help='JSON {"A":[..],"B":[..],"C":[..],"D":[..],"d":n}')
    g.add_argument("--product2", help='JSON {"u":u,"C":[..],"D":[..]}')
    g.add_argument("--product3", help='JSON {"C":[..],"D":[..]}')
    g.add_argument("--double-sum", help="alpha,beta,sign  (sign +1 for F, -1 for G)")
    p.add_argument("--c0", type=int, help="constant term when the equation leaves it free")
    p.add_argument("--mod", type=int, help="reduce coefficients modulo this prime")


def _json_arg(text: str, what: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{what}: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict):
        raise CliError(f"{what}: expected a JSON object")
    return data


def spec_from_args(args) -> SequenceSpec:
    ring = ZZ if args.mod is None else GF(args.mod)
    if args.seq:
        return SequenceSpec.named(args.seq, ring)
    if args.equation:
        eq = MahlerEquation.from_json(_json_arg(args.equation, "--equation"))
        return SequenceSpec("functional_equation", {"equation": eq, "c0": args.c0}, ring)
    if args.product2:
        data = _json_arg(args.product2, "--product2")
        return SequenceSpec("product2", {"u": int(data["u"]), "C": data["C"], "D": data["D"]}, ring)
    if args.product3:
        data = _json_arg(args.product3, "--product3")
        return SequenceSpec("product3", {"C": data["C"], "D": data["D"]}, ring)
    if args.double_sum:
        try:
            a, b, s = (int(x) for x in args.double_sum.split(","))
        except ValueError:
            raise CliError("--double-sum expects alpha,beta,sign") from None
        return SequenceSpec("double_sum", {"alpha": a, "beta": b, "sign": s}, ring)
    raise CliError("no series given: use --seq, --equation, --product2, --product3 or --double-sum")


def equation_from_args(args) -> tuple[MahlerEquation, object]:
    if args.equation:
        return MahlerEquation.from_json(_json_arg(args.equation, "--equation")), args.c0
    if args.seq:
        if args.seq not in EQUATIONS:
            raise CliError(f"no functional equation registered for {args.seq!r}")
        return EQUATIONS[args.seq]
    found = spec_from_args(args).equation()
    if found is None:
        raise CliError("this series has no Mahler equation")
    return found


# ----------------------------------------------------------------------
# commands


def cmd_seq(args) -> dict:
    if args.action == "list":
        return {"sequences": list_sequences()}
    f = spec_from_args(args).generate(args.n)
    return {"series": f.to_json()}


def _hankel_csv(rep, mod: int | None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "H_n", "H_n_mod_p"])
    for n, h in enumerate(rep.table, start=1):
        w.writerow([n, rep.ring.to_json(h), "" if mod is None else int(h) % mod])
    return buf.getvalue()


def cmd_hankel(args):
    spec = spec_from_args(args)
    if args.action == "det":
        f = spec.generate(args.k + 2 * args.n)
        return {"n": args.n, "k": args.k, "ring": f.ring.name,
                "value": f.ring.to_json(hankel_det(f, args.n, args.k))}
    f = spec.generate(args.k + 2 * args.n)
    rep = hankel_table(f, args.n, args.k, args.window)
    if args.format == "csv":
        return _hankel_csv(rep, args.csv_mod)
    return {"hankel": rep.to_json()}


def cmd_hfrac(args):
    if args.action == "periodicity":
        if args.fixture:
            ev = periodicity_evidence(args.fixture, args.horizon)
            return {"periodicity": ev, "passed": ev["passed"]}
        res = quadratic_periodicity(args.horizon)
        return {"periodicity": res.to_json(), "passed": res.passed}
    spec = spec_from_args(args)
    f = spec.generate(args.order)
    h = hfrac_expand(f, args.delta, args.max_levels, exact=args.exact)
    out = {"hfrac": h.to_json()}
    if args.delta == 2:
        out["hankel_nonzero"] = [
            {"n": n, "H": h.ring.to_json(v)} for n, v in hankel_from_hfrac(h)
        ]
    return out


def cmd_pade(args):
    f = spec_from_args(args).generate(args.order)
    a = pade_construct(f, args.k)
    c = contact_order(f, a)
    out = a.to_json()
    out["contact_order"] = "inf" if c == float("inf") else c
    return {"pade": out}


def cmd_mahler(args):
    eq, c0 = equation_from_args(args)
    if args.action == "iterate":
        it = iterate_equation(eq, args.m)
        return {"iterated": it.to_json()}
    f = feq_generate(eq, args.order, c0)
    if args.action == "approximate":
        app = build_approximant(eq, f, args.b, args.i, args.m)
        return {"approximant": app.to_json()}
    # audit
    apps = [build_approximant(eq, f, args.b, args.i, m) for m in range(args.m + 1)]
    bound = CoefficientBound.parse(args.bound)
    need = max(args.M, 1)
    x = evaluate_series_at(feq_generate(eq, need, c0), args.b, need, bound)
    rows = [audit_approximation(a, x, eq, args.tolerance).to_json() for a in apps]
    sandwich = q_sandwich([a.q for a in apps[1:]], eq.d, args.eps)
    last = rows[-1]
    return {
        "audit": rows,
        "q_sandwich": sandwich,
        "passed": bool(last["within_tolerance"]) and all(sandwich),
    }


def cmd_mu(args):
    if args.action == "bound":
        return {"mu_bound": mu_bound_from_rho(Fraction(args.rho), args.d)}
    spec = spec_from_args(args)
    if spec.ring != ZZ:
        raise CliError("evaluation needs integer coefficients; drop --mod")
    x = evaluate_at(spec, args.b, args.M, CoefficientBound.parse(args.bound))
    out = {"b": args.b, "M": args.M, "error_bound_log2": None}
    if x.error_bound:
        out["error_bound_log2"] = round(log_abs(x.error_bound, 2), 3)
    if args.action == "eval":
        out["approximation"] = str(x.approximation) if args.full else float(x.approximation)
        return {"evaluation": out}
    est = certified_cf(x, args.window)
    return {"estimate": est.to_json()}


def cmd_verify(args):
    res = run_fixture(args.fixture, args.n)
    return {"verify": res.to_json(), "passed": res.passed}


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # --out/--json are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", dest="sub_out", help="write the report to this path")
    common.add_argument("--json", dest="sub_json", action="store_true",
                        help="JSON output (the default)")
    p = argparse.ArgumentParser(prog="mahlerexp", description=__doc__)
    p.add_argument("--out", help="write the report to this path instead of stdout")
    p.add_argument("--json", action="store_true", help="JSON output (the default)")
    sub = p.add_subparsers(dest="group", required=True)
    _add_parser = sub.add_parser

    def add_parser(name, **kw):
        return _add_parser(name, parents=[common], **kw)

    sub.add_parser = add_parser

    s = sub.add_parser("seq", help="list or generate sequences")
    s.add_argument("action", choices=["list", "gen"])
    _add_source(s)
    s.add_argument("--n", type=int, default=32)
    s.set_defaults(func=cmd_seq)

    h = sub.add_parser("hankel", help="Hankel determinants")
    h.add_argument("action", choices=["table", "det"])
    _add_source(h)
    h.add_argument("--n", type=int, default=16)
    h.add_argument("--k", type=int, default=0)
    h.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    h.add_argument("--format", choices=["json", "csv"], default="json")
    h.add_argument("--csv-mod", type=int, help="add an H_n mod p column to CSV output")
    h.set_defaults(func=cmd_hankel)

    f = sub.add_parser("hfrac", help="Hankel continued fractions")
    f.add_argument("action", choices=["expand", "periodicity"])
    _add_source(f)
    f.add_argument("--order", type=int, default=64)
    f.add_argument("--delta", type=int, default=2)
    f.add_argument("--max-levels", type=int)
    f.add_argument("--exact", action="store_true", help="assert the input is an exact rational expansion")
    f.add_argument("--fixture", help="quadratic fixture name for periodicity (default: all)")
    f.add_argument("--horizon", type=int, default=200)
    f.set_defaults(func=cmd_hfrac)

    a = sub.add_parser("pade", help="Padé approximants [k-1/k]")
    a.add_argument("action", choices=["build"])
    _add_source(a)
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--order", type=int, default=64)
    a.set_defaults(func=cmd_pade)

    m = sub.add_parser("mahler", help="iterated equations and explicit approximations")
    m.add_argument("action", choices=["iterate", "approximate", "audit"])
    _add_source(m)
    m.add_argument("--m", type=int, default=2)
    m.add_argument("--i", type=int, default=1, help="index of the nonzero Hankel determinant, from 0")
    m.add_argument("--b", type=int, default=2)
    m.add_argument("--order", type=int, default=64, help="series order for the Padé step")
    m.add_argument("--M", type=int, default=2048, help="coefficients for evaluating f(1/b)")
    m.add_argument("--bound", default="linear", help="const:K | linear | geometric:r")
    m.add_argument("--tolerance", type=float, default=0.05)
    m.add_argument("--eps", type=float, default=0.1)
    m.set_defaults(func=cmd_mahler)

    u = sub.add_parser("mu", help="evaluation and irrationality exponent estimates")
    u.add_argument("action", choices=["eval", "estimate", "bound"])
    _add_source(u)
    u.add_argument("--b", type=int, default=2)
    u.add_argument("--M", type=int, default=1024)
    u.add_argument("--bound", default="const:1", help="const:K | linear | geometric:r")
    u.add_argument("--window", type=int)
    u.add_argument("--full", action="store_true", help="print the exact rational")
    u.add_argument("--rho", default="1")
    u.add_argument("--d", type=int, default=2)
    u.set_defaults(func=cmd_mu)

    v = sub.add_parser("verify", help="run a named reproducibility fixture")
    v.add_argument("fixture", choices=sorted(FIXTURES))
    v.add_argument("--n", type=int)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.out = args.sub_out or args.out
    try:
        result = args.func(args)
    except (CliError, ValueError, ArithmeticError, KeyError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc).strip("'\"")}
        print(dump(err), file=sys.stderr)
        return 2
    text = result if isinstance(result, str) else dump(result) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if isinstance(result, dict) and result.get("passed") is False:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
