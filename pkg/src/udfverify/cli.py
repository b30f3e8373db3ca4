"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from udfverify.enveloping import builtin_spec
from udfverify.errors import UdfError
from udfverify.estimates import (
    FAIL,
    UNKNOWN,
    axb_inclusion_checks,
    cauchy_check,
    entire_order0_bound_check,
    equicontinuity_check,
    malleable_continuity_check,
)
from udfverify.parsing import ExpressionError
from udfverify.repspaces import Poly, format_poly, parse_poly, poly_to_json, representation_for
from udfverify.scalars import parse_scalar, to_complex
from udfverify.seminorms import (
    AnalyticQuery,
    DerivSum,
    ExpWeighted,
    PolydiskSup,
    analytic_seminorm,
    divergence_witness,
    membership_verdict,
)
from udfverify.starprod import (
    assoc_residual,
    hbar_coefficients,
    poisson_bracket,
    poisson_formula_sl,
    star_eval,
    star_terms,
)
from udfverify.suite import run_suite, suite_exit_code, suite_json
from udfverify.twists import (
    PRINTED_ORDER,
    UDF_ORDER,
    AbelianConfig,
    build_twist,
    parse_r,
    twist_to_json,
    verify_axioms,
)


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# shared argument groups


def _family_args(p: argparse.ArgumentParser, order: bool = True) -> None:
    p.add_argument("--family", required=True, choices=["abelian", "axb", "heis-sl"],
                   help="twist family: abelian (exp of a constant r-matrix), axb ([H,E]=E), "
                        "heis-sl (Heisenberg-type subalgebra of sl_d)")
    p.add_argument("--d", type=int, default=None,
                   help="dimension: number of generators (abelian, default 2) or matrix size (heis-sl, default 3)")
    p.add_argument("--r", default=None,
                   help='abelian r-matrix as "coeff:i:j, ..." with 1-based generator indices (default "1:1:2")')
    p.add_argument("--c", default=None, help='heis-sl coefficients c_1..c_{d-1} for H, e.g. "1,1" (default all 1)')
    if order:
        p.add_argument("--order", type=int, default=4, help="twist order N (components F_0..F_N)")


def _twist_from_args(args, N: int | None = None):
    N = args.order if N is None else N
    if N < 0:
        raise InputError("order must be non-negative")
    if args.family == "abelian":
        d = args.d or 2
        cfg = parse_r(args.r, d) if args.r else AbelianConfig.from_triples(d, [(1, 0, 1)])
        return build_twist("abelian", N, abelian=cfg)
    if args.family == "axb":
        return build_twist("axb", N)
    d = args.d or 3
    c = tuple(parse_scalar(x) for x in args.c.split(",")) if args.c else ()
    return build_twist("heis-sl", N, d=d, c=c)


def _poly(text: str, nvars: int, mode: str = "exact") -> Poly:
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read().strip()
    f = parse_poly(text, nvars)
    if f.nvars != nvars:
        raise InputError(f"polynomial {text!r} uses more than {nvars} variables")
    if mode == "float":
        f = Poly(nvars, {e: to_complex(c) for e, c in f.terms.items()})
    return f


def _scalar(text: str, mode: str = "exact"):
    x = parse_scalar(text)
    return to_complex(x) if mode == "float" else x


def _base(text: str):
    """``polydisk:R0`` | ``exp:r`` | ``deriv:r``."""
    try:
        kind, val = text.split(":", 1)
        x = float(Fraction(val)) if "/" in val else float(val)
    except ValueError:
        raise InputError(f"bad base seminorm {text!r}; use polydisk:r0, exp:r or deriv:r") from None
    if x <= 0:
        raise InputError("base seminorm parameter must be positive")
    table = {"polydisk": PolydiskSup, "exp": ExpWeighted, "deriv": DerivSum}
    if kind not in table:
        raise InputError(f"unknown base seminorm {kind!r}")
    return table[kind](x)


def _real(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"expected a real number, got {text!r}") from None


def _emit(args, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2, default=str)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _write_csv(path: str | None, text: str) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)


def _report_code(verdict: str, strict: bool) -> int:
    if verdict == FAIL or (strict and verdict == UNKNOWN):
        return 1
    return 0


# ---------------------------------------------------------------------------
# twist


def cmd_twist_gen(args) -> int:
    _emit(args, twist_to_json(_twist_from_args(args)))
    return 0


def cmd_twist_verify(args) -> int:
    F = _twist_from_args(args)
    report = verify_axioms(F, args.order, convention=args.convention)
    _emit(args, report.to_json())
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# star


def _star_setup(args):
    F = _twist_from_args(args, N=1)
    rep = representation_for(F.spec)
    return F, rep


def cmd_star_eval(args) -> int:
    F, rep = _star_setup(args)
    a, b = _poly(args.a, rep.nvars, args.mode), _poly(args.b, rep.nvars, args.mode)
    hbar = _scalar(args.hbar, args.mode)
    terms = star_terms(F, rep, a, b)
    out = star_eval(F, rep, a, b, hbar)
    if args.text:
        print(format_poly(out))
        return 0
    coeffs = hbar_coefficients(F, rep, a, b)
    _emit(args, {
        "result": format_poly(out),
        "result_terms": poly_to_json(out),
        "coefficients": [format_poly(c) for c in coeffs],
        "termination": {"bound": terms.bound, "certificate": terms.certificate},
    })
    return 0


def cmd_star_assoc(args) -> int:
    F, rep = _star_setup(args)
    a, b, c = (_poly(x, rep.nvars, args.mode) for x in (args.a, args.b, args.c_poly))
    res = assoc_residual(F, rep, a, b, c, _scalar(args.hbar, args.mode))
    _emit(args, {"residual": format_poly(res), "zero": res.is_zero()})
    return 0 if res.is_zero() else 1


def cmd_star_poisson(args) -> int:
    if args.family != "heis-sl":
        raise InputError("the closed-form bracket is implemented for the heis-sl family")
    F, rep = _star_setup(args)
    f, g = _poly(args.f, rep.nvars), _poly(args.g, rep.nvars)
    c = tuple(parse_scalar(x) for x in args.c.split(",")) if args.c else None
    pb = poisson_bracket(F, rep, f, g)
    formula = poisson_formula_sl(f, g, F.config.d, c)
    _emit(args, {"bracket": format_poly(pb), "formula": format_poly(formula), "equal": pb == formula})
    return 0 if pb == formula else 1


def cmd_star_coeffs(args) -> int:
    F, rep = _star_setup(args)
    a, b = _poly(args.a, rep.nvars), _poly(args.b, rep.nvars)
    coeffs = hbar_coefficients(F, rep, a, b)
    _emit(args, {"coefficients": [format_poly(c) for c in coeffs]})
    return 0


# ---------------------------------------------------------------------------
# seminorm


def _spec_rep(args):
    if args.family == "abelian":
        spec = builtin_spec(f"abelian:{args.d or 2}")
    elif args.family == "axb":
        spec = builtin_spec("axb")
    else:
        spec = builtin_spec(f"{args.family}:{args.d or 3}")
    return spec, representation_for(spec)


def _rep_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", required=True, choices=["abelian", "axb", "heis-sl", "sl", "gl"],
                   help="Lie algebra acting on polynomials (abelian: derivations; axb: d/dz and -z d/dz; "
                        "matrix algebras: B acts as sum B_ab z_a d/dz_b)")
    p.add_argument("--d", type=int, default=None, help="dimension parameter of the Lie algebra")


def cmd_seminorm_eval(args) -> int:
    spec, rep = _spec_rep(args)
    f = _poly(args.f, rep.nvars)
    q = _base(args.base)
    enc = analytic_seminorm(rep, f, AnalyticQuery(_real(args.R), _real(args.radius), q, args.K))
    _emit(args, enc.to_json())
    if args.csv:
        lines = ["n,term_lower,term_upper,cumsum_lower,cumsum_upper"]
        lines += [",".join(repr(x) for x in row) for row in enc.csv_rows()]
        _write_csv(args.csv, "\n".join(lines) + "\n")
    return 0


def cmd_seminorm_membership(args) -> int:
    spec, rep = _spec_rep(args)
    v = membership_verdict(rep, _poly(args.f, rep.nvars), _real(args.R), _real(args.r0), _base(args.base), args.K)
    _emit(args, v.to_json())
    return 0


def cmd_seminorm_diverge(args) -> int:
    spec, rep = _spec_rep(args)
    f = _poly(args.f, rep.nvars)
    try:
        xi = spec.basis(spec.index(args.xi))
    except (KeyError, ValueError):
        raise InputError(f"unknown generator {args.xi!r}; labels are {', '.join(spec.labels)}") from None
    lam = parse_scalar(args.lam)
    wit = divergence_witness(rep, f, xi, lam, _real(args.radius), _base(args.base), target=_real(args.target))
    _emit(args, wit.to_json())
    return 0 if wit.success else 1


# ---------------------------------------------------------------------------
# estimate


def cmd_estimate_cauchy(args) -> int:
    spec, rep = _spec_rep(args)
    word = []
    for label in filter(None, (x.strip() for x in args.word.split(","))):
        try:
            xi = spec.basis(spec.index(label))
        except (KeyError, ValueError):
            raise InputError(f"unknown generator {label!r}") from None
        nrm = spec.norm_of(xi)
        word.append(xi if nrm <= 1 else xi * Fraction(1, math.ceil(nrm)))
    rep_ = cauchy_check(rep, _poly(args.v, rep.nvars), _real(args.R), _real(args.radius), word, args.K)
    return _finish_report(args, rep_)


def cmd_estimate_malleable(args) -> int:
    spec, rep = _spec_rep(args)
    rep_ = malleable_continuity_check(rep, _poly(args.v, rep.nvars), _poly(args.w, rep.nvars), _real(args.R),
                                      _real(args.radius), args.K)
    return _finish_report(args, rep_)


def cmd_estimate_equicont(args) -> int:
    F = _twist_from_args(args, N=args.n_max)
    rep = representation_for(F.spec)
    radii = tuple(_real(x) for x in args.radii.split(","))
    if len(radii) != 2:
        raise InputError("--radii needs two values r1,r2")
    r_values = [_real(x) for x in args.r_values.split(",")] if args.r_values else None
    R = _real(args.R) if args.R else (0.5 if args.family == "abelian" else 1.0)
    rep_ = equicontinuity_check(F, rep, _poly(args.v, rep.nvars), _poly(args.w, rep.nvars), R, radii,
                                _real(args.m), args.n_max, args.K, r_values, lhs_fault=args.fault)
    return _finish_report(args, rep_)


def cmd_estimate_entire0(args) -> int:
    rep_ = entire_order0_bound_check(args.d, _poly(args.f, args.d), _real(args.r0), _real(args.r1), args.K)
    return _finish_report(args, rep_)


def cmd_estimate_axb(args) -> int:
    rep_ = axb_inclusion_checks(_poly(args.f, 1), _real(args.r0), _real(args.r1), args.k_max)
    return _finish_report(args, rep_)


def _finish_report(args, report) -> int:
    _emit(args, report.to_json())
    _write_csv(args.csv, report.to_csv())
    return _report_code(report.verdict, args.strict)


# ---------------------------------------------------------------------------
# suite


def cmd_suite(args) -> int:
    only = {int(x) for x in args.only.split(",")} if args.only else None
    report = run_suite(args.seed, args.jobs, only)
    text = suite_json(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return suite_exit_code(report, args.strict)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    parser = argparse.ArgumentParser(
        prog="udfverify",
        formatter_class=fmt,
        description="Exact Drinfeld-twist algebra, star products on polynomials and interval checks of the "
                    "analytic seminorm estimates behind universal deformation formulas.",
        epilog="Polynomials: z1, z2, ... (z for one variable, x, y for z1, z2), + - * / ^, explicit '*', "
               "i for the imaginary unit. Prefix with @ to read from a file. Exit codes: 0 ok, 1 check "
               "failed, 2 invalid input.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    # twist
    tw = sub.add_parser("twist", help="generate or verify twist components F_n").add_subparsers(dest="action",
                                                                                                  required=True)
    p = tw.add_parser("gen", formatter_class=fmt, help="dump F_0..F_N as JSON",
                      description="Dump the components F_n of F = sum hbar^n/n! F_n in the PBW basis.")
    _family_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_twist_gen)
    p = tw.add_parser("verify", formatter_class=fmt, help="check the twist axioms order by order",
                      description="Check, exactly and for every order n <= N: normalisation F_0 = 1 ⊗ 1, the "
                                  "2-cocycle identity (Δ⊗id)(F)(F⊗1) = (id⊗Δ)(F)(1⊗F) and the counit "
                                  "conditions (ε⊗id)F = 1 = (id⊗ε)F. The order of the factors is the one "
                                  "needed for a ⋆ b = μ(F ▷ (a⊗b)) to be associative under a left action; "
                                  "--convention printed uses (F⊗1)(Δ⊗id)(F) instead.")
    _family_args(p)
    p.add_argument("--convention", choices=[UDF_ORDER, PRINTED_ORDER], default=UDF_ORDER)
    p.add_argument("--out")
    p.set_defaults(func=cmd_twist_verify)

    # star
    st = sub.add_parser("star", help="star products a ⋆ b = μ(F_hbar ▷ (a⊗b))").add_subparsers(dest="action",
                                                                                                required=True)
    for name, func, desc in (
        ("eval", cmd_star_eval, "Evaluate a ⋆ b = sum_n hbar^n/n! μ(F_n ▷ (a⊗b)). The sum is finite; the "
                                "number of non-zero orders is certified from degrees."),
        ("assoc", cmd_star_assoc, "Compute (a ⋆ b) ⋆ c - a ⋆ (b ⋆ c); exit 1 unless it is exactly zero."),
        ("coeffs", cmd_star_coeffs, "List the coefficients of a ⋆ b as a polynomial in hbar."),
    ):
        p = st.add_parser(name, formatter_class=fmt, help=desc.split(".")[0], description=desc)
        _family_args(p, order=False)
        p.add_argument("--a", required=True)
        p.add_argument("--b", required=True)
        if name == "assoc":
            p.add_argument("--c-poly", "--third", dest="c_poly", required=True, help="third factor")
        if name != "coeffs":
            p.add_argument("--hbar", required=True, help='deformation parameter, e.g. "3/7+1/5i" or "0.25"')
            p.add_argument("--mode", choices=["exact", "float"], default="exact")
        if name == "eval":
            p.add_argument("--text", action="store_true", help="print only the resulting polynomial")
        p.add_argument("--out")
        p.set_defaults(func=func)
    p = st.add_parser("poisson", formatter_class=fmt, help="first-order commutator vs closed form",
                      description="Compare μ(F_1 ▷ (f⊗g)) - μ(F_1 ▷ (g⊗f)) with the closed-form bracket "
                                  "written in the derivatives z_1 d_s, z_s d_d and h = 1/2 sum c_s "
                                  "(z_s d_s - z_{s+1} d_{s+1}).")
    _family_args(p, order=False)
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_star_poisson)

    # seminorm
    sn = sub.add_parser("seminorm", help="enclosures of p^(R)_{r,q}").add_subparsers(dest="action", required=True)
    base_help = "base seminorm: polydisk:r0 (sup on the polydisk), exp:r (sup |f(z)| e^{-r|z|}), " \
                "deriv:r (sum_j r^j |j-th derivatives at (1,...,1)|)"
    p = sn.add_parser("eval", formatter_class=fmt, help="enclose p^(R)_{r,q}(f)",
                      description="Enclose p(f) = sum_n n!^(R-1) r^n sup_{ξ_i in unit ball} q(ξ_1...ξ_n ▷ f). "
                                  "Orders up to K are bracketed directly; the rest is bounded by a geometric "
                                  "tail with ratio at most 0.9, otherwise the upper bound is inf.")
    _rep_args(p)
    p.add_argument("--f", required=True)
    p.add_argument("--R", default="1")
    p.add_argument("--radius", "--rad", dest="radius", required=True, help="radius r")
    p.add_argument("--base", default="polydisk:1", help=base_help)
    p.add_argument("--K", type=int, default=16)
    p.add_argument("--csv", help="write n, term and partial-sum brackets")
    p.add_argument("--out")
    p.set_defaults(func=cmd_seminorm_eval)
    p = sn.add_parser("membership", formatter_class=fmt, help="is p^(R)_{r,q}(f) finite for all r < r0",
                      description="Certified member when the tail certificate covers every r < r0; certified "
                                  "non-member when a generator has f as eigenvector with |ξ|/|λ| < r0, since "
                                  "then the terms grow geometrically; Unknown otherwise.")
    _rep_args(p)
    p.add_argument("--f", required=True)
    p.add_argument("--R", default="1")
    p.add_argument("--r0", required=True)
    p.add_argument("--base", default="polydisk:1", help=base_help)
    p.add_argument("--K", type=int, default=16)
    p.add_argument("--out")
    p.set_defaults(func=cmd_seminorm_membership)
    p = sn.add_parser("diverge", formatter_class=fmt, help="eigenvector divergence witness",
                      description="For ρ(ξ)f = λf the terms of p^(R)_{r,q}(f) are at least q(f)(r|λ|/|ξ|)^n, "
                                  "so the series diverges once r|λ|/|ξ| >= 1. Reports how many terms the "
                                  "partial sums need to exceed target * q(f).")
    _rep_args(p)
    p.add_argument("--f", required=True)
    p.add_argument("--xi", required=True, help="generator label, e.g. H")
    p.add_argument("--lam", required=True, help="eigenvalue")
    p.add_argument("--radius", "--rad", dest="radius", required=True)
    p.add_argument("--base", default="polydisk:1", help=base_help)
    p.add_argument("--target", default="1000000")
    p.add_argument("--out")
    p.set_defaults(func=cmd_seminorm_diverge)

    # estimate
    es = sub.add_parser("estimate", help="interval checks of the seminorm inequalities").add_subparsers(
        dest="action", required=True)

    def common(p):
        p.add_argument("--K", type=int, default=16)
        p.add_argument("--csv", help="write n, lhs_lower, rhs_scaled_upper, margin rows")
        p.add_argument("--strict", action="store_true", help="treat uncertified (Unknown) rows as failures")
        p.add_argument("--out")

    p = es.add_parser("cauchy", formatter_class=fmt, help="Cauchy estimate for a word",
                      description="Check p_r(ξ_1...ξ_n ▷ v) <= n!^(1-R) r^(-n) p_2r(v) for letters in the "
                                  "closed unit ball, plus the same inequality order by order.")
    _rep_args(p)
    p.add_argument("--v", required=True)
    p.add_argument("--word", default="", help="comma-separated generator labels (scaled into the unit ball)")
    p.add_argument("--R", default="1")
    p.add_argument("--radius", "--rad", dest="radius", required=True)
    common(p)
    p.set_defaults(func=cmd_estimate_cauchy)
    p = es.add_parser("malleable", formatter_class=fmt, help="continuity of the pointwise product",
                      description="Check p_r(v w) <= p_(2^R r)(v) p_(2^R r)(w) for the polydisk sup norm, plus "
                                  "the Leibniz bound S_k(vw) <= sum_j C(k,j) S_j(v) S_(k-j)(w) per order.")
    _rep_args(p)
    p.add_argument("--v", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--R", default="1")
    p.add_argument("--radius", "--rad", dest="radius", required=True)
    common(p)
    p.set_defaults(func=cmd_estimate_malleable)
    p = es.add_parser("equicont", formatter_class=fmt, help="equicontinuity of the twisted product",
                      description="Check (p_r ⊗ p_r)(hbar^n/n! F_n ▷ (v⊗w)) <= C T^n p_tr(v) p_tr(w) for "
                                  "|hbar| = m, with the family constants: abelian R=1/2, T=c^2 m N, C=1; "
                                  "axb R=1, N=ceil(4/r0), C=2^(N-1), T=4m/r0; heis-sl R=1, N=ceil(|2H|/r0), "
                                  "C=2^N, T=16m/min(1,r0)^2; t=2 and r0 = min(r1,r2)/(2^R t).")
    _family_args(p, order=False)
    p.add_argument("--v", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--R", default=None, help="order (defaults to the family's)")
    p.add_argument("--radii", default="1,1", help="r1,r2")
    p.add_argument("--m", default="1", help="radius of the hbar disk")
    p.add_argument("--n-max", dest="n_max", type=int, default=8)
    p.add_argument("--r-values", dest="r_values", help="radii r in [r0/2, r0); default r0/2 and 0.9 r0")
    p.add_argument("--fault", action="store_true", help="multiply the left side by 10^(3n) (self-test)")
    common(p)
    p.set_defaults(func=cmd_estimate_equicont)
    p = es.add_parser("entire0", formatter_class=fmt, help="order-0 bound for the matrix action",
                      description="Check p^(0)_{r1,|.|_r0}(f) <= C |f|_{r0 (1 + 3 d^2 r1)} with "
                                  "C = sum_k k^k/(k! 3^k), for gl_d acting by B -> sum B_ab z_a d/dz_b.")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--r0", required=True)
    p.add_argument("--r1", required=True)
    common(p)
    p.set_defaults(func=cmd_estimate_entire0)
    p = es.add_parser("axb-inclusions", formatter_class=fmt, help="the two ax+b seminorm comparisons",
                      description="With q = q_r0 (sup |f(z)| e^{-r0|z|}): (i) S_k(f) <= (4 e^r0/r0)^k q(f) and "
                                  "(ii) sum_n r1^n q(E^n f) >= e^{-r0} m_r1(f), on partial sums.")
    p.add_argument("--f", required=True)
    p.add_argument("--r0", required=True)
    p.add_argument("--r1", required=True)
    p.add_argument("--k-max", dest="k_max", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_estimate_axb)

    # suite
    p = sub.add_parser("suite", formatter_class=fmt, help="run the acceptance battery",
                       description="Run all acceptance checks (twist axioms, associativity, unit, Poisson "
                                   "bracket, worked values, Cauchy, equicontinuity, divergence witness, "
                                   "order-0 bound, ax+b comparisons). Output is deterministic in --seed and "
                                   "independent of --jobs.")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--strict", action="store_true", help="criteria with only Unknown rows count as failures")
    p.add_argument("--only", help="comma-separated criterion ids")
    p.add_argument("--out")
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ExpressionError, ValueError, KeyError, UdfError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
