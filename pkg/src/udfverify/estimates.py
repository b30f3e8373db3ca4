"""Interval checks of the quantitative inequalities behind the deformation results.

Each check returns an :class:`EstimateReport`. A row passes when the inequality
holds between the sound sides of the brackets (``lower <= scaled upper`` for a
``<=`` claim). Rows whose seminorm tails could not be certified are marked
Unknown, never Pass.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from udfverify.enveloping import LieElement, builtin_spec
from udfverify.errors import UnsupportedFamilyOrder
from udfverify.repspaces import (
    Poly,
    Representation,
    act_lie,
    act_mono,
    act_word,
    mu_pointwise,
    representation_for,
)
from udfverify.scalars import to_complex
from udfverify.seminorms import (
    DOWN,
    UP,
    BaseSeminorm,
    ExpWeighted,
    PolydiskSup,
    SeminormEnclosure,
    WordSupTerms,
    enclosure_from_terms,
    word_sup_terms,
)
from udfverify.twists import ABELIAN, AXB, SL_HEIS, TwistSeries

PASS, FAIL, UNKNOWN = "Pass", "Fail", "Unknown"


@dataclass
class EstimateReport:
    inequality: str
    rows: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        verdicts = [r["verdict"] for r in self.rows]
        if FAIL in verdicts:
            return FAIL
        if UNKNOWN in verdicts:
            return UNKNOWN
        return PASS

    @property
    def unknown_count(self) -> int:
        return sum(r["verdict"] == UNKNOWN for r in self.rows)

    def extend(self, other: EstimateReport) -> None:
        self.rows.extend(other.rows)

    def to_json(self) -> dict:
        return {
            "inequality": self.inequality,
            "verdict": self.verdict,
            "notes": list(self.notes),
            "rows": [_jsonable(r) for r in self.rows],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "lhs_lower", "rhs_scaled_upper", "margin", "verdict"])
        for r in self.rows:
            w.writerow([r.get("n", ""), _fmt(r["lhs_lower"]), _fmt(r["rhs_scaled_upper"]), _fmt(r["margin"]), r["verdict"]])
        return buf.getvalue()


def _fmt(x) -> str:
    if isinstance(x, float):
        return "inf" if math.isinf(x) else repr(x)
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return x


def _margin(lhs_lower: float, rhs_upper: float) -> float:
    if lhs_lower <= 0:
        return math.inf
    return rhs_upper / lhs_lower


def _row(lhs_lo: float, rhs_up: float, certified: bool = True, **params) -> dict:
    """Row for the claim ``true LHS <= true RHS`` given a lower bound of the left and an upper bound of the right."""
    if not certified or math.isinf(rhs_up):
        verdict = UNKNOWN
    else:
        verdict = PASS if lhs_lo <= rhs_up else FAIL
    row = dict(params)
    row.update(lhs_lower=lhs_lo, rhs_scaled_upper=rhs_up, margin=_margin(lhs_lo, rhs_up), verdict=verdict)
    return row


def _enc(e: SeminormEnclosure) -> dict:
    return e.to_json()


class _TermCache:
    """Order-by-order brackets per (representation, polynomial, base seminorm)."""

    def __init__(self):
        self._store: dict = {}

    def get(self, rep: Representation, f: Poly, q: BaseSeminorm, n_max: int) -> WordSupTerms:
        key = (rep, _poly_key(f), q)
        hit = self._store.get(key)
        if hit is None or len(hit.upper) <= n_max:
            hit = word_sup_terms(rep, f, q, n_max)
            self._store[key] = hit
        return hit

    def enclosure(self, rep, f, q, R, r, K) -> SeminormEnclosure:
        if f.is_zero():
            return SeminormEnclosure(0.0, 0.0, K, True, 0.0)
        return enclosure_from_terms(self.get(rep, f, q, K), R, r, K)


def _poly_key(f: Poly):
    return (f.nvars, tuple(sorted((e, str(c)) for e, c in f.terms.items())))


_CACHE = _TermCache()


def _weight(n: int, R: float, r: float) -> float:
    if n == 0:
        return 1.0
    return math.exp((R - 1) * math.lgamma(n + 1) + n * math.log(r))


def _check_ball(rep: Representation, word: Sequence[LieElement]) -> None:
    for xi in word:
        if rep.spec.norm_of(xi) > 1 + 1e-12:
            raise ValueError("word letters must lie in the closed unit ball")


# ---------------------------------------------------------------------------
# Cauchy estimates


def cauchy_check(
    rep: Representation,
    v: Poly,
    R: float,
    r: float,
    word: Sequence[LieElement],
    K: int = 16,
    q: BaseSeminorm = PolydiskSup(1.0),
) -> EstimateReport:
    """``p_r(xi_1..xi_n ▷ v) <= n!^(1-R) / r^n * p_2r(v)``.

    The term-wise companion check: the k-th term of the left side is at most
    ``n!^(1-R)/r^n (k+n)!^(R-1) (2r)^(k+n) S_(k+n)(v)`` where ``S_j`` is the
    sup over the unit ball of q on order-j words.
    """
    if r <= 0 or R < 0:
        raise ValueError("need r > 0 and R >= 0")
    _check_ball(rep, word)
    n = len(word)
    u = act_word(rep, list(word), v)
    scale = math.exp((1 - R) * math.lgamma(n + 1) - n * math.log(r))
    lhs = _CACHE.enclosure(rep, u, q, R, r, K)
    tv = _CACHE.get(rep, v, q, K + n)
    rhs = enclosure_from_terms(tv, R, 2 * r, K)
    certified = lhs.tail_certified and rhs.tail_certified
    main = _row(lhs.lower, rhs.upper * scale * UP, certified, check="cauchy", n=n, R=R, r=r,
                lhs=_enc(lhs), rhs=_enc(rhs))
    # term-wise chain, reported as the worst ratio term_k / bound_k against 1
    worst = 0.0
    for k, lo, _ in lhs.terms:
        bound = scale * _weight(k + n, R, 2 * r) * tv.upper[k + n] * UP * UP
        if lo > 0:
            worst = max(worst, lo / bound if bound > 0 else math.inf)
    mirror = _row(worst, 1.0, True, check="cauchy-termwise", n=n, R=R, r=r)
    return EstimateReport("cauchy", [main, mirror])


# ---------------------------------------------------------------------------
# continuity of the product


def malleable_continuity_check(
    rep: Representation, v: Poly, w: Poly, R: float, r: float, K: int = 16, q: BaseSeminorm = PolydiskSup(1.0)
) -> EstimateReport:
    """``p_r(v w) <= p_(2^R r)(v) * p_(2^R r)(w)`` for a submultiplicative q.

    Companion check, order by order: ``S_k(v w) <= sum_j C(k,j) S_j(v) S_(k-j)(w)``
    (Leibniz rule for first-order operators, submultiplicativity of q).
    """
    if not isinstance(q, PolydiskSup):
        raise ValueError("the product estimate needs a submultiplicative base seminorm (PolydiskSup)")
    if not rep.is_first_order():
        raise ValueError("the representation must act by derivations")
    vw = mu_pointwise(v, w)
    r2 = 2**R * r
    lhs = _CACHE.enclosure(rep, vw, q, R, r, K)
    pv = _CACHE.enclosure(rep, v, q, R, r2, K)
    pw = _CACHE.enclosure(rep, w, q, R, r2, K)
    certified = lhs.tail_certified and pv.tail_certified and pw.tail_certified
    rows = [_row(lhs.lower, pv.upper * pw.upper * UP, certified, check="product", R=R, r=r,
                 lhs=_enc(lhs), rhs_v=_enc(pv), rhs_w=_enc(pw))]
    tv = _CACHE.get(rep, v, q, K)
    tw = _CACHE.get(rep, w, q, K)
    tvw = _CACHE.get(rep, vw, q, K)
    for k in range(K + 1):
        conv = math.fsum(math.comb(k, j) * tv.upper[j] * tw.upper[k - j] for j in range(k + 1)) * UP
        rows.append(_row(tvw.lower[k], conv, True, check="leibniz", n=k))
    return EstimateReport("malleable", rows)


# ---------------------------------------------------------------------------
# equicontinuity of the twisted product


@dataclass(frozen=True)
class EquicontinuityConstants:
    family: str
    m: float
    r0: float
    N: int
    C: float
    T: float
    t: float
    R: float

    def to_json(self) -> dict:
        return {"family": self.family, "m": self.m, "r0": self.r0, "N": self.N, "C": self.C, "T": self.T,
                "t": self.t, "R": self.R}


FAMILY_ORDER = {ABELIAN: 0.5, AXB: 1.0, SL_HEIS: 1.0}


def equicontinuity_constants(F: TwistSeries, radii: tuple, m: float) -> EquicontinuityConstants:
    R = FAMILY_ORDER[F.family]
    t = 2.0
    r0 = min(radii) / (2**R * t)
    if F.family == ABELIAN:
        cfg = F.config
        N = cfg.n_terms
        T = cfg.c**2 * m * N
        C = 1.0
    elif F.family == AXB:
        N = math.ceil(4 / r0)
        C = 2.0 ** (N - 1)
        T = 4 * m / r0
    else:
        h2 = F.config.h_element() * 2
        N = math.ceil(F.spec.norm_of(h2) / r0)
        C = 2.0**N
        T = 16 * m / min(1.0, r0) ** 2
    return EquicontinuityConstants(F.family, m, r0, N, C, T, t, R)


def _tensor_lower(pairs: list, nvars: int) -> float:
    """Lower bound for the projective tensor seminorm of ``sum_t c_t a_t ⊗ b_t``.

    Uses functionals ``ev_z0 ⊗ ev_z1`` with z0, z1 in the closed unit polydisk,
    which have dual norm at most one for ``p ⊗ p`` with base PolydiskSup(1):
    the max over torus samples and the root mean square on the torus.
    """
    coeffs: dict = {}
    for c, a, b in pairs:
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                key = (ea, eb)
                coeffs[key] = coeffs.get(key, 0) + c * ca * cb
    coeffs = {k: v for k, v in coeffs.items() if v != 0}
    if not coeffs:
        return 0.0
    rms = math.sqrt(math.fsum(abs(to_complex(v)) ** 2 for v in coeffs.values()))
    left = sorted({k[0] for k in coeffs})
    right = sorted({k[1] for k in coeffs})
    li = {e: i for i, e in enumerate(left)}
    ri = {e: i for i, e in enumerate(right)}
    M = np.zeros((len(left), len(right)), dtype=complex)
    for (ea, eb), v in coeffs.items():
        M[li[ea], ri[eb]] = to_complex(v)
    m = max(1, int(math.floor(64 ** (1.0 / nvars) + 1e-9)))
    ph = np.exp(2j * np.pi * np.arange(m) / m)
    grids = np.meshgrid(*([ph] * nvars), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    A = np.stack([np.prod(pts ** np.array(e)[None, :], axis=1) for e in left], axis=1)
    B = np.stack([np.prod(pts ** np.array(e)[None, :], axis=1) for e in right], axis=1)
    samples = float(np.max(np.abs(A @ M @ B.T)))
    return max(rms, samples) * DOWN


def equicontinuity_check(
    F: TwistSeries,
    rep: Representation,
    v: Poly,
    w: Poly,
    R: float,
    radii: tuple = (1.0, 1.0),
    m: float = 1.0,
    n_max: int = 8,
    K: int = 16,
    r_values: Sequence[float] | None = None,
    q: BaseSeminorm = PolydiskSup(1.0),
    lhs_fault: bool = False,
) -> EstimateReport:
    """``(p_r ⊗ p_r)(hbar^n/n! F_n ▷ (v⊗w)) <= C T^n p_tr(v) p_tr(w)`` for ``|hbar| = m``.

    Both sides scale like ``|hbar|^n``, so the boundary circle of the disk is
    enough. ``lhs_fault`` multiplies the left side by ``10^(3n)``; it exists
    to check that the comparison is not vacuous.
    """
    if F.family not in FAMILY_ORDER:
        raise ValueError(f"unknown family {F.family!r}")
    if R != FAMILY_ORDER[F.family]:
        raise UnsupportedFamilyOrder(f"family {F.family} is estimated with R = {FAMILY_ORDER[F.family]}, not {R}")
    if not isinstance(q, PolydiskSup) or q.radius != 1.0:
        raise ValueError("the tensor lower bound is calibrated for PolydiskSup(1)")
    const = equicontinuity_constants(F, radii, m)
    if r_values is None:
        r_values = (const.r0 / 2, 0.9 * const.r0)
    for r in r_values:
        if not (const.r0 / 2 <= r < const.r0):
            raise ValueError(f"radius {r} outside [r0/2, r0) with r0 = {const.r0}")
    if F.order < n_max:
        F = F.extended(n_max)
    report = EstimateReport("equicontinuity", notes=[
        "hbar ranges over the closed disk of radius m; both sides are homogeneous of degree n in |hbar|",
        f"constants: {const.to_json()}",
    ])
    for r in r_values:
        pv = _CACHE.enclosure(rep, v, q, R, const.t * r, K)
        pw = _CACHE.enclosure(rep, w, q, R, const.t * r, K)
        rhs_cert = pv.tail_certified and pw.tail_certified
        for n in range(n_max + 1):
            pairs = []
            for (left, right), c in F.components[n].terms.items():
                a = act_mono(rep, left, v)
                if a.is_zero():
                    continue
                b = act_mono(rep, right, w)
                if b.is_zero():
                    continue
                pairs.append((c, a, b))
            pref = m**n / math.factorial(n)
            upper = 0.0
            cert = rhs_cert
            for c, a, b in pairs:
                ea = _CACHE.enclosure(rep, a, q, R, r, K)
                eb = _CACHE.enclosure(rep, b, q, R, r, K)
                cert = cert and ea.tail_certified and eb.tail_certified
                upper += abs(to_complex(c)) * ea.upper * eb.upper
            lhs_lower = pref * _tensor_lower(pairs, rep.nvars) * DOWN
            lhs_upper = pref * upper * UP
            if lhs_fault:
                lhs_lower *= 10.0 ** (3 * n)
                lhs_upper *= 10.0 ** (3 * n)
            rhs = const.C * const.T**n * pv.upper * pw.upper * UP
            row = _row(lhs_lower, rhs, cert, n=n, r=r, lhs_upper=lhs_upper, terms=len(pairs))
            report.rows.append(row)
    return report


# ---------------------------------------------------------------------------
# entire vectors of order zero for the matrix action


def entire_order0_constant() -> tuple[float, float]:
    """Enclosure of ``sum_k k^k / (k! 3^k)`` (0^0 = 1)."""
    terms = [1.0]
    k = 0
    while True:
        k += 1
        terms.append(math.exp(k * math.log(k) - math.lgamma(k + 1) - k * math.log(3)))
        # consecutive ratios (1+1/k)^k / 3 stay below e/3
        tail = terms[-1] * (math.e / 3) / (1 - math.e / 3)
        if tail < 1e-15:
            break
    s = math.fsum(terms)
    return s * DOWN, (s + tail) * UP


def entire_order0_bound_check(d: int, f: Poly, r0: float, r1: float, K: int = 16) -> EstimateReport:
    """``p^(0)_{r1, |.|_r0}(f) <= C |f|_{r0 (1 + 3 d^2 r1)}`` for the matrix action on d variables.

    The unit ball is taken in gl_d with the Frobenius norm; it contains the
    ball of sl_d, so passing here implies the sl_d statement.
    """
    if f.nvars != d:
        raise ValueError("polynomial must live in d variables")
    rep = representation_for(builtin_spec(f"gl:{d}"))
    lhs = _CACHE.enclosure(rep, f, PolydiskSup(r0), 0.0, r1, K)
    _, C_up = entire_order0_constant()
    big = PolydiskSup(r0 * (1 + 3 * d * d * r1)).upper(f)
    rhs = C_up * big * UP
    return EstimateReport("entire0", [_row(lhs.lower, rhs, lhs.tail_certified, d=d, r0=r0, r1=r1, f=str(f),
                                           lhs=_enc(lhs), C_upper=C_up)])


# ---------------------------------------------------------------------------
# the ax+b inclusion chain


def axb_inclusion_checks(f: Poly, r0: float, r1: float, k_max: int | None = None) -> EstimateReport:
    """Both inequalities for the ax+b action on one variable with ``q = q_r0``.

    (i)  ``S_k(f) <= (4 e^r0 / r0)^k q_r0(f)`` for k <= k_max;
    (ii) ``sum_n r1^n q_r0(E^n f) >= e^(-r0) m_r1(f)`` on partial sums.

    Verdicts use the sound sides. The ``certified`` column compares the
    opposite sides (upper vs lower for (i), lower vs upper for (ii)); for (ii)
    it allows a relative 1e-9 for floating evaluation in equality cases.
    """
    if not (0 < r0 <= 1):
        raise ValueError("need 0 < r0 <= 1")
    if f.nvars != 1:
        raise ValueError("ax+b acts on polynomials in one variable")
    spec = builtin_spec("axb")
    rep = representation_for(spec)
    q = ExpWeighted(r0)
    deg = max(f.degree(), 0)
    if k_max is None:
        k_max = deg + 2
    report = EstimateReport("axb-inclusions")
    qf_lo, qf_up = q.lower(f), q.upper(f)
    terms = _CACHE.get(rep, f, q, k_max)
    base = 4 * math.exp(r0) / r0
    for k in range(k_max + 1):
        bound = base**k
        row = _row(terms.lower[k], bound * qf_up * UP, True, check="i", n=k)
        row["certified"] = terms.upper[k] <= bound * qf_lo * DOWN
        report.rows.append(row)
    E = spec.basis(spec.index("E"))
    g = f
    lhs_lo = lhs_up = 0.0
    m_parts = []
    for n in range(deg + 1):
        lhs_lo += r1**n * q.lower(g)
        lhs_up += r1**n * q.upper(g)
        # E^n f = f^(n), so m_r1 collects r1^n |(E^n f)(1)|
        m_parts.append(r1**n * abs(to_complex(g(1))))
        rhs = math.exp(-r0) * math.fsum(m_parts)
        report.rows.append({
            "check": "ii", "n": n, "lhs_lower": lhs_lo * DOWN, "lhs_upper": lhs_up * UP,
            "rhs_scaled_upper": rhs, "margin": (lhs_up / rhs) if rhs > 0 else math.inf,
            "certified": lhs_lo * DOWN >= rhs * (1 - 1e-9),
            "verdict": PASS if lhs_up * UP >= rhs * DOWN else FAIL,
        })
        g = act_lie(rep, E, g)
    return report
