"""Star products ``a ⋆ b = sum_n hbar^n/n! mu(F_n ▷ (a ⊗ b))`` on polynomials."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from udfverify.errors import TruncationNotCertified
from udfverify.repspaces import Poly, Representation, act_mono
from udfverify.twists import ABELIAN, AXB, SL_HEIS, TwistSeries


@dataclass
class StarTermList:
    """``terms[n] = mu(F_n ▷ (a ⊗ b))``; every T_n with n > ``bound`` vanishes when certified."""

    terms: list
    bound: int | None
    certificate: str
    certified: bool

    @property
    def n_max(self) -> int:
        return len(self.terms) - 1


def structural_bound(F: TwistSeries, rep: Representation, a: Poly, b: Poly):
    """Order beyond which every T_n vanishes, and the reason; ``(None, "none")`` if unknown."""
    if a.is_zero() or b.is_zero():
        return 0, "zero-argument"
    if F.family == ABELIAN and _constant_coefficient_derivations(rep):
        # every leg of F_n has degree n and each factor lowers the degree by one
        return min(a.degree(), b.degree()), "abelian:min-degree"
    if F.family == AXB and rep.spec.name == "axb" and rep.nvars == 1:
        # left leg carries E^(n-k), right leg E^k; H keeps the degree
        return a.degree() + b.degree(), "axb:E-power"
    if F.family == SL_HEIS and rep.nvars == F.config.d:
        # each right-leg factor is z_s d/dz_d with s < d
        return b.degree_in(F.config.d - 1), "heis-sl:d-derivatives"
    return None, "none"


def _constant_coefficient_derivations(rep: Representation) -> bool:
    return all(t.var is not None and not any(t.alpha) for op in rep.operators for t in op)


def _term(F: TwistSeries, rep: Representation, n: int, a: Poly, b: Poly) -> Poly:
    out = Poly._raw(a.nvars, {})
    for (left, right), c in F.components[n].terms.items():
        fa = act_mono(rep, left, a)
        if fa.is_zero():
            continue
        gb = act_mono(rep, right, b)
        if gb.is_zero():
            continue
        out = out + fa * gb * c
    return out


def star_terms(F: TwistSeries, rep: Representation, a: Poly, b: Poly, extend: bool = True) -> StarTermList:
    """Compute T_0..T_bound. With ``extend`` the twist is regenerated to the needed order.

    If the twist is too short and ``extend`` is off (or no bound is known),
    the computed terms come back with ``certified=False``.
    """
    if rep.spec is not F.spec:
        raise ValueError("twist and representation use different Lie algebra specs")
    bound, tag = structural_bound(F, rep, a, b)
    series = F
    if bound is not None and bound > F.order and extend:
        series = F.extended(bound)
    top = series.order if bound is None else min(bound, series.order)
    terms = [_term(series, rep, n, a, b) for n in range(top + 1)]
    certified = bound is not None and bound <= series.order
    return StarTermList(terms, bound, tag, certified)


def _weighted(terms: Sequence[Poly], hbar) -> Poly:
    out = Poly._raw(terms[0].nvars, {})
    power = 1
    for n, t in enumerate(terms):
        if n:
            power = power * hbar
        if not t.is_zero() and power:
            out = out + t * (power * Fraction(1, math.factorial(n)))
    return out


def star_eval(F: TwistSeries, rep: Representation, a: Poly, b: Poly, hbar, allow_truncated: bool = False) -> Poly:
    st = star_terms(F, rep, a, b)
    if not st.certified and not allow_truncated:
        raise TruncationNotCertified(f"star product not certified to terminate ({st.certificate})")
    return _weighted(st.terms, hbar)


def hbar_coefficients(F: TwistSeries, rep: Representation, a: Poly, b: Poly) -> list:
    """Coefficients ``T_n / n!`` of the star product as a polynomial in hbar."""
    st = star_terms(F, rep, a, b)
    if not st.certified:
        raise TruncationNotCertified(f"star product not certified to terminate ({st.certificate})")
    coeffs = [t * Fraction(1, math.factorial(n)) for n, t in enumerate(st.terms)]
    while len(coeffs) > 1 and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def eval_hbar_polynomial(coeffs: Sequence[Poly], hbar) -> Poly:
    out = Poly._raw(coeffs[0].nvars, {})
    for c in reversed(coeffs):
        out = out * hbar + c
    return out


def assoc_residual(F: TwistSeries, rep: Representation, a: Poly, b: Poly, c: Poly, hbar) -> Poly:
    """(a ⋆ b) ⋆ c - a ⋆ (b ⋆ c)."""
    left = star_eval(F, rep, star_eval(F, rep, a, b, hbar), c, hbar)
    right = star_eval(F, rep, a, star_eval(F, rep, b, c, hbar), hbar)
    return left - right


def poisson_bracket(F: TwistSeries, rep: Representation, f: Poly, g: Poly) -> Poly:
    """mu(F_1 ▷ (f ⊗ g)) - mu(F_1 ▷ (g ⊗ f))."""
    if F.order < 1:
        raise ValueError("the twist must have order at least 1")
    return _term(F, rep, 1, f, g) - _term(F, rep, 1, g, f)


def poisson_formula_sl(f: Poly, g: Poly, d: int, c: Sequence | None = None) -> Poly:
    """Closed-form bracket for the sl-family twist, written with plain derivatives.

    With ``D_s = z_s d/dz_s - z_{s+1} d/dz_{s+1}`` and ``h = 1/2 sum_s c_s D_s``::

        {f,g} = (z_1 d_d g) h(f) - (z_1 d_d f) h(g)
                + sum_{s=2}^{d-1} (z_1 d_s f)(z_s d_d g) - (z_1 d_s g)(z_s d_d f)
    """
    if f.nvars != d or g.nvars != d:
        raise ValueError("polynomials must live in d variables")
    c = tuple(c) if c else (1,) * (d - 1)
    z = [Poly.var(k, d) for k in range(d)]

    def h(p: Poly) -> Poly:
        out = Poly._raw(d, {})
        for s in range(1, d):
            out = out + (z[s - 1] * p.derivative(s - 1) - z[s] * p.derivative(s)) * c[s - 1]
        return out * Fraction(1, 2)

    out = z[0] * g.derivative(d - 1) * h(f) - z[0] * f.derivative(d - 1) * h(g)
    for s in range(2, d):
        out = out + z[0] * f.derivative(s - 1) * (z[s - 1] * g.derivative(d - 1))
        out = out - z[0] * g.derivative(s - 1) * (z[s - 1] * f.derivative(d - 1))
    return out
