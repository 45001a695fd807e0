"""Command-line driver: normalize, check, act, pair, coproduct, verify,
solve-types.

Exit codes: 0 success (all verified identities pass, known-discrepancy
certificates excluded), 1 at least one unexpected FAIL, 2 usage or input
error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .coeffs import (
    PARAMS_I,
    PARAMS_II,
    PARAMS_III,
    MissingVariable,
    PoleAtAssignment,
    QspError,
)
from .algebra import (
    CalculusType,
    InconsistentType,
    NonInvertibleRule,
    RuleTable,
    build_rule_table,
)
from . import calculus
from . import covariance as cov
from . import hopf
from .exprio import (
    BadExponent,
    ExprSyntaxError,
    UnknownSymbol,
    emit_report,
    parse_element,
    parse_uelement,
    print_canonical,
    print_tensor,
)

_USAGE_ERRORS = (ExprSyntaxError, UnknownSymbol, BadExponent, MissingVariable,
                 PoleAtAssignment, calculus.UnknownIdentity,
                 cov.UnderdeterminedSystem, cov.InconsistentSideConditions,
                 argparse.ArgumentTypeError)
_INTERNAL_ERRORS = (NonInvertibleRule, InconsistentType)


def _parse_param(text: str) -> tuple[str, Fraction]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected NAME=RATIONAL, got {text!r}")
    name, _, value = text.partition("=")
    try:
        return name.strip(), Fraction(value.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational {value!r}: {exc}") from None


def _read_config(path: str) -> dict:
    config: dict = {"params": []}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise argparse.ArgumentTypeError(f"bad config line {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key == "param":
                config["params"].append(_parse_param(value))
            else:
                config[key] = value
    return config


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsp",
        description="Exact calculus engine on the quantum superplane")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--type", dest="ctype", choices=("I", "II", "III"),
                       default=None, help="calculus type (default II)")
        p.add_argument("--param", dest="params", action="append",
                       type=_parse_param, default=None,
                       metavar="NAME=RAT", help="numeric specialization")
        p.add_argument("--bound", dest="bound", type=int, default=None,
                       metavar="D", help="basis bound for action checks")
        p.add_argument("--format", dest="fmt", choices=("text", "json"),
                       default=None)
        p.add_argument("--config", dest="config", default=None,
                       metavar="PATH", help="key=value configuration file")

    p = sub.add_parser("normalize", help="print the canonical form of EXPR")
    common(p)
    p.add_argument("expr")

    p = sub.add_parser("check", help='verify "LHS == RHS"')
    common(p)
    p.add_argument("expr")

    p = sub.add_parser("act", help="apply operator OP to EXPR")
    common(p)
    p.add_argument("op")
    p.add_argument("expr")

    p = sub.add_parser("pair", help="dual pairing <U, A>")
    common(p)
    p.add_argument("u")
    p.add_argument("a")

    p = sub.add_parser("coproduct", help="coordinate coproduct of EXPR")
    common(p)
    p.add_argument("expr")

    p = sub.add_parser("verify", help="run the identity catalog")
    common(p)
    p.add_argument("--id", dest="identity", default=None,
                   help="run one identity (or glob pattern)")
    p.add_argument("--suite", dest="suite", choices=("all",), default=None)

    p = sub.add_parser("solve-types", help="print the covariant families")
    common(p)
    return parser


def _effective(args, config: dict, key: str, default):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    mapped = {"ctype": "type", "fmt": "format", "bound": "bound"}.get(key, key)
    if mapped in config:
        value = config[mapped]
        return int(value) if key == "bound" else value
    return default


def _engine(args, config) -> tuple[RuleTable, str, dict]:
    ctype = _effective(args, config, "ctype", "II")
    ct = CalculusType.by_name(ctype)
    params = list(config.get("params", []))
    if args.params:
        params.extend(args.params)
    assignment = {name: value for name, value in params}
    for name in assignment:
        if name not in ct.params.variables:
            raise MissingVariable(f"type {ctype} has no parameter {name!r}")
    if assignment:
        ct = ct.specialize(assignment)
    return build_rule_table(ct), ctype, assignment


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        config = _read_config(args.config) if args.config else {}
        bound = int(_effective(args, config, "bound", 6))
        if bound < 1:
            raise argparse.ArgumentTypeError("--bound must be at least 1")
        fmt = _effective(args, config, "fmt", "text")
        rt, ctype, assignment = _engine(args, config)
        if args.command == "normalize":
            e = parse_element(rt, args.expr, calculus.expand_derived)
            print(print_canonical(e))
            return 0
        if args.command == "check":
            if "==" not in args.expr:
                raise ExprSyntaxError('check expects "LHS == RHS"', 0)
            lhs, rhs = args.expr.split("==", 1)
            residual = (parse_element(rt, lhs, calculus.expand_derived)
                        - parse_element(rt, rhs, calculus.expand_derived))
            if residual.is_zero():
                print("PASS  residual 0")
                return 0
            print(f"FAIL  residual {print_canonical(residual)}")
            return 1
        if args.command == "act":
            op = parse_element(rt, args.op, calculus.expand_derived)
            arg = parse_element(rt, args.expr, calculus.expand_derived)
            print(print_canonical(calculus.act_on_function(rt, op, arg)))
            return 0
        if args.command == "pair":
            u = parse_uelement(rt.params, args.u)
            a = parse_element(rt, args.a, calculus.expand_derived)
            print(hopf.pair(rt, u, a))
            return 0
        if args.command == "coproduct":
            e = parse_element(rt, args.expr, calculus.expand_derived)
            print(print_tensor(hopf.coproduct_A(rt, e)))
            return 0
        if args.command == "verify":
            pattern = args.identity
            results = calculus.run_suite(rt, bound=bound, pattern=pattern)
            payload = emit_report(results, fmt, ctype, assignment or None)
            sys.stdout.write(payload.decode("utf-8"))
            bad = [r for r in results
                   if r.status == "FAIL"
                   and r.identityId not in calculus.KNOWN_DISCREPANCY_IDS]
            return 1 if bad else 0
        if args.command == "solve-types":
            _print_families()
            return 0
        parser.error(f"unknown command {args.command!r}")
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _INTERNAL_ERRORS as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except QspError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def _print_families() -> None:
    cases = (
        ("I", {"Q12": 0, "Q22": 0}, PARAMS_I),
        ("II", {"Q22": 0, "Q": "r"}, PARAMS_II),
        ("III", {"Q12": 0, "Q": "p"}, PARAMS_III),
    )
    for mode, conditions, params in cases:
        ct = cov.solve_family(conditions, params)
        fixed = ", ".join(f"{k} = {params.rf(v)}" for k, v in conditions.items())
        print(f"Type {mode}: {fixed} =>")
        for name in ("Q", "Q11", "Q12", "Q21", "Q22", "Qp"):
            print(f"  {name:<3} = {ct.coefficient(name)}")


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
