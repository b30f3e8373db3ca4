"""Certified enclosures of base seminorms and of the analytic-vector seminorms

    p^(R)_{r,q}(v) = sum_n n!^(R-1) r^n sup_{xi_1..xi_n in B} q(xi_1 ... xi_n ▷ v).

Every bound is a float interval ``[lower, upper]`` that contains the true value.
Floating error is handled by outward scaling with ``1 ± 1e-12`` and, for
coefficient vectors computed in floating point, by an explicit error majorant.

The supremum over the unit ball B is bracketed:

* upper: the smallest of (a) the sum over all basis words with per-slot
  coefficient caps, (b) an entrywise majorant Phi^n(|v|) and (c) a one-step
  operator bound ``L`` chained from the previous order;
* lower: basis-vertex words ``e_k/|e_k|``, exhaustive while the word count fits
  the budget and a beam search afterwards.

The tail beyond the truncation depth K is certified by the geometric bound
``rho = r * L * (K+1)^(R-1)`` (needs R <= 1 and rho <= 0.9), or is exactly zero
when the majorant vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from udfverify.enveloping import FROBENIUS, LieElement
from udfverify.errors import CombinatorialBudgetExceeded, NotAnEigenvector
from udfverify.repspaces import Poly, Representation, eigenvalue, eval_points, monomials_up_to

UP = 1.0 + 1e-12
DOWN = 1.0 - 1e-12
EPS = np.finfo(float).eps
RATIO_MAX = 0.9
DEFAULT_BUDGET = 4096
DEFAULT_BEAM = 16
GRADINGS = (1.0, 2.0, 4.0, 16.0, 64.0, 256.0)


def _up(x: float) -> float:
    return x * UP if x > 0 else x


def _down(x: float) -> float:
    return x * DOWN if x > 0 else 0.0


# ---------------------------------------------------------------------------
# one-dimensional certified maximisation


def _poly_val(coeffs: Sequence[float], x: float) -> float:
    out = 0.0
    for c in reversed(coeffs):
        out = out * x + c
    return out


def max_weighted_radial(A: Sequence[float], r: float, rel: float = 1e-12) -> tuple[float, float, float]:
    """Enclose ``max_{rho >= 0} P(rho) exp(-r rho)`` for ``P = sum A_k rho^k`` with A_k >= 0.

    Returns ``(lower, upper, argmax)``. Branch and bound on [0, B], where B is
    a Cauchy bound for the roots of ``Q = P' - r P``; cells on which Q has a
    certified sign are settled at an endpoint, the rest are bisected.
    """
    A = [float(a) for a in A]
    while len(A) > 1 and A[-1] == 0.0:
        A.pop()
    D = len(A) - 1
    if D <= 0 or r <= 0:
        if r <= 0 and D > 0:
            return math.inf, math.inf, math.inf
        return A[0], A[0], 0.0
    q = [(k + 1) * A[k + 1] - r * A[k] for k in range(D)] + [-r * A[D]]
    B = 1.0 + max(abs(c) for c in q[:-1]) / abs(q[-1])
    qpos = [max(c, 0.0) for c in q]
    qneg = [max(-c, 0.0) for c in q]

    def g(x):
        return _poly_val(A, x) * math.exp(-r * x)

    best_lo, arg = g(0.0), 0.0
    gb = g(B)
    if gb > best_lo:
        best_lo, arg = gb, B
    best_hi = max(best_lo, 0.0)
    stack = [(0.0, B)]
    floor = B * 1e-15
    while stack:
        a, b = stack.pop()
        qlo = _poly_val(qpos, a) - _poly_val(qneg, b)
        qhi = _poly_val(qpos, b) - _poly_val(qneg, a)
        if qlo > 0:  # increasing on the cell
            v = g(b)
            best_hi = max(best_hi, v * (1 + 1e-14))
            if v > best_lo:
                best_lo, arg = v, b
            continue
        if qhi < 0:  # decreasing
            v = g(a)
            best_hi = max(best_hi, v * (1 + 1e-14))
            if v > best_lo:
                best_lo, arg = v, a
            continue
        if b - a <= rel * b or b - a <= floor:
            hi = _poly_val(A, b) * math.exp(-r * a)
            best_hi = max(best_hi, hi)
            for x in (a, b):
                v = g(x)
                if v > best_lo:
                    best_lo, arg = v, x
            continue
        m = 0.5 * (a + b)
        stack.append((a, m))
        stack.append((m, b))
    return _down(best_lo), _up(best_hi), arg


# ---------------------------------------------------------------------------
# base seminorms


def _torus_points(nvars: int, radius: float) -> np.ndarray:
    m = min(64, int(math.floor(4096 ** (1.0 / nvars) + 1e-9)))
    m = max(m, 1)
    phases = radius * np.exp(2j * np.pi * np.arange(m) / m)
    grids = np.meshgrid(*([phases] * nvars), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _abs_coeffs(f: Poly):
    exps = list(f.terms)
    return exps, np.array([abs(complex(f.terms[e])) for e in exps], dtype=float)


@dataclass(frozen=True)
class PolydiskSup:
    """Sup norm on the closed polydisk of radius ``radius``."""

    radius: float

    kind = "polydisk"

    def weight(self, exps) -> np.ndarray:
        return np.array([self.radius ** sum(e) for e in exps], dtype=float)

    def upper(self, f: Poly) -> float:
        exps, a = _abs_coeffs(f)
        return _up(float(np.dot(a, self.weight(exps)))) if exps else 0.0

    def lower(self, f: Poly) -> float:
        if f.is_zero():
            return 0.0
        exps, a = _abs_coeffs(f)
        rms = math.sqrt(float(np.dot(a * a, self.weight(exps) ** 2)))
        samples = float(np.max(np.abs(eval_points(f, _torus_points(f.nvars, self.radius)))))
        return _down(max(rms, samples))

    def upper_from_moduli(self, exps, u: np.ndarray) -> float:
        return _up(float(np.dot(u, self.weight(exps))))

    def lower_from_dense(self, space: DenseSpace, vecs: np.ndarray, err: np.ndarray) -> np.ndarray:
        # root mean square over the torus of radius r (Parseval)
        mod = np.maximum(np.abs(vecs) - err, 0.0)
        w = self.weight(space.exps)[:, None]
        return np.sqrt(np.sum((mod * w) ** 2, axis=0)) * DOWN

    def upper_from_dense(self, space: DenseSpace, vecs: np.ndarray, err: np.ndarray) -> np.ndarray:
        w = self.weight(space.exps)[:, None]
        return np.sum((np.abs(vecs) + err) * w, axis=0) * UP

    def to_json(self) -> dict:
        return {"kind": self.kind, "radius": self.radius}


@dataclass(frozen=True)
class ExpWeighted:
    """``q_r(f) = sup_z |f(z)| exp(-r |z|)`` with the Euclidean norm on C^d."""

    rate: float

    kind = "expweighted"

    def weight(self, exps) -> np.ndarray:
        # sup_rho rho^k exp(-r rho) = (k / (e r))^k
        return np.array([_rho_power_sup(sum(e), self.rate) for e in exps], dtype=float)

    def _radial(self, exps, u: np.ndarray):
        if not len(exps):
            return 0.0, 0.0, 0.0
        D = max(sum(e) for e in exps)
        A = [0.0] * (D + 1)
        for e, x in zip(exps, u):
            A[sum(e)] += float(x)
        A = [a * UP for a in A]
        return max_weighted_radial(A, self.rate)

    def upper(self, f: Poly) -> float:
        exps, a = _abs_coeffs(f)
        return self._radial(exps, a)[1]

    def upper_from_moduli(self, exps, u: np.ndarray) -> float:
        return self._radial(exps, u)[1]

    def sample_points(self, nvars: int, rho_star: float) -> np.ndarray:
        pts = [np.zeros(nvars, dtype=complex), np.ones(nvars, dtype=complex)]
        radii = sorted({rho_star, 0.5 * rho_star, 1.5 * rho_star, 1.0 / self.rate, float(nvars) / self.rate})
        phases = np.exp(2j * np.pi * np.arange(8) / 8)
        dirs = [np.eye(nvars)[k] for k in range(nvars)] + [np.ones(nvars) / math.sqrt(nvars)]
        for rho in radii:
            if rho <= 0 or not math.isfinite(rho):
                continue
            for u in dirs:
                for ph in phases:
                    pts.append(rho * ph * u)
        return np.array(pts)

    def lower(self, f: Poly) -> float:
        if f.is_zero():
            return 0.0
        exps, a = _abs_coeffs(f)
        _, _, rho_star = self._radial(exps, a)
        pts = self.sample_points(f.nvars, rho_star)
        vals = np.abs(eval_points(f, pts)) * np.exp(-self.rate * np.linalg.norm(pts, axis=1))
        return _down(float(np.max(vals)))

    def lower_from_dense(self, space: DenseSpace, vecs: np.ndarray, err: np.ndarray) -> np.ndarray:
        # radii k / r maximise rho^k exp(-r rho) for each degree k present
        pts = np.concatenate([self.sample_points(space.nvars, k / self.rate) for k in range(1, space.degree + 1)]
                             or [self.sample_points(space.nvars, 1 / self.rate)])
        mon = space.monomial_values(pts)  # (P, S)
        vals = np.abs(mon @ vecs) - np.abs(mon) @ err
        weights = np.exp(-self.rate * np.linalg.norm(pts, axis=1))[:, None]
        return np.maximum(np.max(vals * weights, axis=0), 0.0) * DOWN

    def upper_from_dense(self, space: DenseSpace, vecs: np.ndarray, err: np.ndarray) -> np.ndarray:
        mod = np.abs(vecs) + err
        return np.array([self.upper_from_moduli(space.exps, mod[:, j]) for j in range(mod.shape[1])])

    def to_json(self) -> dict:
        return {"kind": self.kind, "rate": self.rate}


def _rho_power_sup(k: int, r: float) -> float:
    if k == 0:
        return 1.0
    return (k / (math.e * r)) ** k * UP


@dataclass(frozen=True)
class DerivSum:
    """``m_r(f) = sum_j r^j sum_{k_1..k_j} |d^j f / dz_k1..dz_kj (1,...,1)|``."""

    rate: float

    kind = "derivsum"

    def _value_from_taylor(self, b: dict) -> float:
        # ordered index tuples for a multi-index beta: |beta|!/beta! of them, each equal to beta! b_beta
        return math.fsum(self.rate ** sum(e) * math.factorial(sum(e)) * abs(complex(c)) for e, c in b.items())

    def value(self, f: Poly) -> float:
        return self._value_from_taylor(f.taylor_at([1] * f.nvars).terms)

    def upper(self, f: Poly) -> float:
        return _up(self.value(f))

    def lower(self, f: Poly) -> float:
        return _down(self.value(f))

    def weight(self, exps) -> np.ndarray:
        # m_r(z^alpha) = sum_{beta <= alpha} r^|beta| |beta|! prod C(alpha_k, beta_k)
        out = []
        for a in exps:
            total = 0.0
            for b in np.ndindex(*(x + 1 for x in a)):
                c = 1
                for x, y in zip(a, b):
                    c *= math.comb(x, y)
                total += self.rate ** sum(b) * math.factorial(sum(b)) * c
            out.append(total * UP)
        return np.array(out, dtype=float)

    def upper_from_moduli(self, exps, u: np.ndarray) -> float:
        return _up(float(np.dot(u, self.weight(exps))))

    def _dense_parts(self, space: DenseSpace):
        T = space.taylor_matrix()
        w = np.array([self.rate ** sum(e) * math.factorial(sum(e)) for e in space.exps])[:, None]
        return T, w

    def lower_from_dense(self, space: DenseSpace, vecs: np.ndarray, err: np.ndarray) -> np.ndarray:
        T, w = self._dense_parts(space)
        return np.sum(np.maximum(np.abs(T @ vecs) - np.abs(T) @ err, 0.0) * w, axis=0) * DOWN

    def upper_from_dense(self, space: DenseSpace, vecs: np.ndarray, err: np.ndarray) -> np.ndarray:
        T, w = self._dense_parts(space)
        return np.sum((np.abs(T @ vecs) + np.abs(T) @ err) * w, axis=0) * UP

    def to_json(self) -> dict:
        return {"kind": self.kind, "rate": self.rate}


BaseSeminorm = PolydiskSup | ExpWeighted | DerivSum


@dataclass
class SeminormEnclosure:
    lower: float
    upper: float
    K: int = 0
    tail_certified: bool = True
    ratio: float | None = None
    terms: list = field(default_factory=list)  # (n, term_lower, term_upper)
    budget_exceeded: bool = False

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"empty enclosure [{self.lower}, {self.upper}]")

    @property
    def finite(self) -> bool:
        return math.isfinite(self.upper)

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper if math.isfinite(self.upper) else "inf",
            "K": self.K,
            "tail_certified": self.tail_certified,
            "ratio": self.ratio,
        }

    def csv_rows(self) -> list:
        rows = []
        lo_sum = up_sum = 0.0
        for n, lo, up in self.terms:
            lo_sum += lo
            up_sum += up
            rows.append((n, lo, up, lo_sum, up_sum))
        return rows


def base_eval(q: BaseSeminorm, f: Poly) -> SeminormEnclosure:
    if isinstance(q, DerivSum):
        v = q.value(f)
        return SeminormEnclosure(v, v, 0, True, None, [(0, v, v)])
    lo, up = q.lower(f), q.upper(f)
    return SeminormEnclosure(lo, max(up, lo), 0, True, None, [(0, lo, max(up, lo))])


# ---------------------------------------------------------------------------
# dense action data


class DenseSpace:
    """Monomials of degree <= D and the representation as dense matrices on them."""

    def __init__(self, rep: Representation, degree: int):
        for i in range(rep.spec.dim):
            if rep.op_degree_shift(i) > 0:
                raise ValueError("the seminorm engine needs operators that do not raise the degree")
        self.rep = rep
        self.nvars = rep.nvars
        self.degree = degree
        self.exps = monomials_up_to(rep.nvars, degree)
        self.index = {e: i for i, e in enumerate(self.exps)}
        S = len(self.exps)
        d = rep.spec.dim
        self.mats = np.zeros((d, S, S), dtype=complex)
        for k in range(d):
            for j, e in enumerate(self.exps):
                for e2, c in rep._apply_to_mono(k, e).items():
                    self.mats[k, self.index[e2], j] = complex(c)
        self.abs_mats = np.abs(self.mats)
        self.real = not np.any(self.mats.imag)
        stacked = self.mats.reshape(d * S, S)
        self._stacked = stacked.real.copy() if self.real else stacked
        self._abs_stacked = self.abs_mats.reshape(d * S, S)
        spec = rep.spec
        if spec.norm == FROBENIUS:
            G = [[Fraction(x) for x in row] for row in spec.gram()]
            Ginv = np.array(_inverse(G), dtype=float)
            self.caps = np.sqrt(np.diag(Ginv)) * UP
            self.psi_matrix = np.abs(Ginv) * UP
            self.vertex_scale = np.array([1.0 / spec.norm_of(spec.basis(k)) for k in range(d)])
        else:
            self.caps = np.ones(d)
            self.psi_matrix = None
            self.vertex_scale = np.ones(d)
        self._taylor = None
        self._monvals: dict = {}

    def apply_all(self, X: np.ndarray, absolute: bool = False) -> np.ndarray:
        """Columns ``[rho(e_0) X, rho(e_1) X, ...]`` (absolute-value matrices if asked)."""
        M = self._abs_stacked if absolute else self._stacked
        S, m = X.shape
        Y = M @ X
        return Y.reshape(-1, S, m).transpose(1, 0, 2).reshape(S, -1)

    def dense(self, f: Poly) -> np.ndarray:
        v = np.zeros(len(self.exps), dtype=complex)
        for e, c in f.terms.items():
            v[self.index[e]] = complex(c)
        return v

    def psi(self, V: np.ndarray) -> np.ndarray:
        """sup over x in the unit ball of sum_k |x_k| V[k], column by column (V >= 0)."""
        if self.psi_matrix is None:
            return V.sum(axis=0) * UP
        return np.sqrt(np.einsum("ks,kl,ls->s", V, self.psi_matrix, V)) * UP

    def phi(self, u: np.ndarray) -> np.ndarray:
        return self.psi(np.einsum("kij,j->ki", self.abs_mats, u))

    def operator_bound(self, omega: np.ndarray) -> float:
        """L with lambda(rho(xi) g) <= L lambda(g) for xi in B, lambda = weighted l1 norm."""
        W = np.einsum("kij,i->kj", self.abs_mats, omega)
        return float(np.max(self.psi(W) / omega)) * UP

    def taylor_matrix(self) -> np.ndarray:
        if self._taylor is None:
            S = len(self.exps)
            T = np.zeros((S, S))
            for j, a in enumerate(self.exps):
                for b in np.ndindex(*(x + 1 for x in a)):
                    c = 1
                    for x, y in zip(a, b):
                        c *= math.comb(x, y)
                    T[self.index[tuple(b)], j] = c
            self._taylor = T
        return self._taylor

    def monomial_values(self, pts: np.ndarray) -> np.ndarray:
        key = pts.tobytes()
        hit = self._monvals.get(key)
        if hit is None:
            hit = np.stack(
                [np.prod(pts ** np.array(e)[None, :], axis=1) for e in self.exps], axis=1
            )
            self._monvals[key] = hit
        return hit


def _inverse(G):
    n = len(G)
    M = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(G)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [[float(x) for x in row[n:]] for row in M]


def dense_space(rep: Representation, degree: int) -> DenseSpace:
    cache = rep.__dict__.setdefault("_dense_spaces", {})
    hit = cache.get(degree)
    if hit is None:
        hit = DenseSpace(rep, degree)
        cache[degree] = hit
    return hit


# ---------------------------------------------------------------------------
# sup over the unit ball, order by order


@dataclass
class WordSupTerms:
    lower: list  # lower bounds for S_n = sup_B q(xi_1..xi_n ▷ f)
    upper: list  # upper bounds for S_n
    lam_upper: list  # upper bounds for sup_B lambda(xi_1..xi_n ▷ f)
    chains: list  # (s, L_s, bounds for sup_B lambda_s(order-n words ▷ f)) per grading s
    vanishes_from: int | None  # S_n = 0 for all n >= this order
    budget_exceeded: bool

    @property
    def L(self) -> float:
        return min(c[1] for c in self.chains)


def word_sup_terms(
    rep: Representation,
    f: Poly,
    q: BaseSeminorm,
    n_max: int,
    budget: int = DEFAULT_BUDGET,
    beam: int = DEFAULT_BEAM,
    strict: bool = False,
) -> WordSupTerms:
    D = max(f.degree(), 0)
    space = dense_space(rep, D)
    d = rep.spec.dim
    omega = q.weight(space.exps)
    # graded weights omega_beta s^|beta| (s >= 1) dominate lambda and make degree-lowering steps cheap
    degs = np.array([sum(e) for e in space.exps], dtype=float)
    grades = []
    for sg in GRADINGS:
        om_s = omega * sg**degs * UP
        grades.append((sg, om_s, space.operator_bound(om_s), []))
    v0 = space.dense(f)
    if space.real and not np.any(v0.imag):
        v0 = v0.real
    lows, ups, lams = [], [], []
    # (b) entrywise majorant
    u = np.abs(v0)
    # exhaustive / beam states: columns, per-column scale (lower) and cap weight (upper), error majorant
    X = v0[:, None]
    errs = np.zeros((len(space.exps), 1))
    scale = np.ones(1)
    capw = np.ones(1)
    exhaustive = True
    exceeded = False
    vanish = None
    for n in range(n_max + 1):
        if n > 0:
            u = space.phi(u)
            newX = space.apply_all(X)
            # float error: propagated old error plus a fresh rounding term for the product
            gamma = 4 * (len(space.exps) + 2) * EPS
            newE = space.apply_all(errs * (1 + gamma) + gamma * np.abs(X), absolute=True)
            scale = np.concatenate([scale * space.vertex_scale[k] for k in range(d)])
            capw = np.concatenate([capw * space.caps[k] for k in range(d)])
            X, errs = newX, newE
            if exhaustive and X.shape[1] > budget:
                exhaustive = False
                exceeded = True
                if strict:
                    raise CombinatorialBudgetExceeded(f"{d}^{n} words exceed the budget {budget}")
            if not exhaustive and X.shape[1] > beam:
                proxy = (np.abs(X) * omega[:, None]).sum(axis=0) * scale
                keep = np.sort(np.argsort(-proxy, kind="stable")[:beam])
                X, errs, scale, capw = X[:, keep], errs[:, keep], scale[keep], capw[keep]
        if vanish is None and not np.any(u):
            vanish = n
        lo = float(np.max(q.lower_from_dense(space, X, errs) * scale)) if X.shape[1] else 0.0
        if n == 0:
            lo = max(lo, q.lower(f))
        cand_q = [q.upper_from_moduli(space.exps, u)]
        cand_l = [float(np.dot(u, omega)) * UP]
        if exhaustive:
            if not isinstance(q, ExpWeighted) or X.shape[1] <= 64:
                cand_q.append(float(np.dot(q.upper_from_dense(space, X, errs), capw)) * UP)
            cand_l.append(float(np.dot(((np.abs(X) + errs) * omega[:, None]).sum(axis=0), capw)) * UP)
        lam = min(cand_l)
        for sg, om_s, L_s, vals in grades:
            cand = [float(np.dot(u, om_s)) * UP, sg**D * lam * UP]
            if vals:
                cand.append(vals[-1] * L_s)
            vals.append(min(cand))
            lam = min(lam, vals[-1])
        up = min(min(cand_q), lam)
        if vanish is not None:
            lo = up = lam = 0.0
        lows.append(min(lo, up))
        ups.append(up)
        lams.append(lam)
    chains = [(sg, L_s, vals) for sg, _, L_s, vals in grades]
    return WordSupTerms(lows, ups, lams, chains, vanish, exceeded)


def sup_unit_ball_bracket(
    rep: Representation,
    n: int,
    f: Poly,
    q: BaseSeminorm,
    budget: int = DEFAULT_BUDGET,
    strict: bool = False,
) -> SeminormEnclosure:
    """Enclosure of ``sup_{xi_1..xi_n in B} q(xi_1 ... xi_n ▷ f)``."""
    if n == 0:
        return base_eval(q, f)
    if f.is_zero():
        return SeminormEnclosure(0.0, 0.0, n, True, None, [(n, 0.0, 0.0)])
    w = word_sup_terms(rep, f, q, n, budget=budget, strict=strict)
    return SeminormEnclosure(w.lower[n], w.upper[n], n, True, None, [(n, w.lower[n], w.upper[n])], w.budget_exceeded)


# ---------------------------------------------------------------------------
# analytic seminorms


@dataclass(frozen=True)
class AnalyticQuery:
    R: float
    r: float
    q: BaseSeminorm
    K: int = 16
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.R < 0:
            raise ValueError("order R must be non-negative")
        if self.r < 0:
            raise ValueError("radius must be non-negative")
        if self.K < 0:
            raise ValueError("truncation depth must be non-negative")


def _weight(n: int, R: float, r: float) -> float:
    if r == 0:
        return 1.0 if n == 0 else 0.0
    return math.exp((R - 1) * math.lgamma(n + 1) + n * math.log(r))


def analytic_seminorm(rep: Representation, f: Poly, query: AnalyticQuery) -> SeminormEnclosure:
    R, r, q, K = query.R, query.r, query.q, query.K
    if f.is_zero():
        return SeminormEnclosure(0.0, 0.0, K, True, 0.0, [(n, 0.0, 0.0) for n in range(K + 1)])
    if r == 0:
        b = base_eval(q, f)
        return SeminormEnclosure(b.lower, b.upper, K, True, 0.0, [(0, b.lower, b.upper)])
    return enclosure_from_terms(word_sup_terms(rep, f, q, K, budget=query.budget), R, r, K)


def enclosure_from_terms(w: WordSupTerms, R: float, r: float, K: int) -> SeminormEnclosure:
    """Sum the weighted order-n brackets of ``w`` up to K and add the certified tail."""
    if K >= len(w.upper):
        raise ValueError("not enough orders computed")
    if r == 0:
        return SeminormEnclosure(w.lower[0], w.upper[0], K, True, 0.0, [(0, w.lower[0], w.upper[0])])
    terms = []
    lo_sum, up_sum = 0.0, 0.0
    for n in range(K + 1):
        wt = _weight(n, R, r)
        tl, tu = _down(wt * w.lower[n]), _up(wt * w.upper[n])
        terms.append((n, tl, tu))
        lo_sum += tl
        up_sum += tu
    lo_sum = _down(lo_sum)
    if w.vanishes_from is not None and w.vanishes_from <= K + 1:
        return SeminormEnclosure(lo_sum, max(_up(up_sum), lo_sum), K, True, 0.0, terms, w.budget_exceeded)
    best = None  # (tail, ratio)
    ratio = None
    if R <= 1:
        for _, L_s, vals in w.chains:
            rho = _up(r * L_s * (K + 1) ** (R - 1))
            ratio = rho if ratio is None else min(ratio, rho)
            if rho <= RATIO_MAX:
                tail = _up(_weight(K, R, r) * vals[K] * rho / (1 - rho))
                if best is None or tail < best[0]:
                    best = (tail, rho)
    if best is not None:
        upper = _up(up_sum + best[0])
        return SeminormEnclosure(lo_sum, max(upper, lo_sum), K, True, best[1], terms, w.budget_exceeded)
    return SeminormEnclosure(lo_sum, math.inf, K, False, ratio, terms, w.budget_exceeded)


def finiteness_radius(rep: Representation, f: Poly, q: BaseSeminorm, R: float, K: int = 16) -> float:
    """Radius below which the tail certificate always applies (inf if the majorant vanishes)."""
    if f.is_zero():
        return math.inf
    w = word_sup_terms(rep, f, q, K)
    if w.vanishes_from is not None:
        return math.inf
    if R > 1:
        return 0.0
    return 1.0 / (w.L * (K + 1) ** (R - 1))


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class DivergenceWitness:
    success: bool
    ratio: float
    q_lower: float
    target: float
    terms_needed: int | None
    partial_sums: list

    def to_json(self) -> dict:
        return {
            "success": self.success,
            "ratio": self.ratio,
            "q_lower": self.q_lower,
            "target": self.target,
            "terms_needed": self.terms_needed,
            "partial_sums": self.partial_sums,
        }


def divergence_witness(
    rep: Representation,
    f: Poly,
    xi: LieElement,
    lam,
    r: float,
    q: BaseSeminorm = PolydiskSup(1.0),
    R: float = 1.0,
    target: float = 1e6,
    max_terms: int = 100000,
) -> DivergenceWitness:
    """Geometric lower bound q(f) (r |lam| / |xi|)^n for the terms of p^(R)_{r,q}(f).

    ``terms_needed`` is the number of terms after which the partial sums of this
    lower bound exceed ``target * q(f)``.
    """
    from udfverify.repspaces import act_lie

    if f.is_zero() or act_lie(rep, xi, f) != f * lam:
        raise NotAnEigenvector("rho(xi) f is not lam * f")
    if R < 1:
        raise ValueError("the eigenvector witness needs R >= 1")
    qf = q.lower(f)
    if qf <= 0:
        raise ValueError("need a positive lower bound for q(f)")
    ratio = r * abs(complex(lam)) / rep.spec.norm_of(xi)
    partial, total, term = [], 0.0, 1.0
    needed = None
    if ratio >= 1:
        for n in range(max_terms):
            total += term
            if n < 64:
                partial.append(total)
            if total > target:
                needed = n + 1
                break
            term *= ratio
    return DivergenceWitness(ratio >= 1 and needed is not None, ratio, qf, target, needed, partial)


MEMBER = "CertifiedMember"
NON_MEMBER = "CertifiedNonMember"
UNKNOWN = "Unknown"


@dataclass
class MembershipVerdict:
    verdict: str
    evidence: dict

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "evidence": self.evidence}


def membership_verdict(
    rep: Representation, f: Poly, R: float, r0: float, q: BaseSeminorm = PolydiskSup(1.0), K: int = 16
) -> MembershipVerdict:
    """Is ``p^(R)_{r,q}(f)`` finite for every ``r < r0``?

    Member: the tail certificate covers every radius below r0, and the
    enclosure at ``0.99 r0`` is finite. Non-member: a basis eigenvector
    witness with ``|e_k| / |lam| < r0``. Otherwise Unknown.
    """
    if R < 0 or r0 <= 0:
        raise ValueError("need R >= 0 and r0 > 0")
    if f.is_zero():
        return MembershipVerdict(MEMBER, {"reason": "zero vector"})
    enc = analytic_seminorm(rep, f, AnalyticQuery(R, 0.99 * r0, q, K))
    radius = finiteness_radius(rep, f, q, R, K)
    # every r < r0 must fall under the tail certificate, not only 0.99 r0
    if enc.tail_certified and radius * RATIO_MAX >= r0:
        return MembershipVerdict(MEMBER, {"enclosure": enc.to_json(), "certified_radius": _json_float(radius)})
    if R >= 1:
        spec = rep.spec
        for k in range(spec.dim):
            xi = spec.basis(k)
            lam = eigenvalue(rep, xi, f)
            if lam is None or not lam:
                continue
            threshold = spec.norm_of(xi) / abs(complex(lam))
            if threshold < r0:
                r = 0.5 * (threshold + r0)
                wit = divergence_witness(rep, f, xi, lam, r, q, R)
                if wit.success:
                    ev = {"generator": spec.labels[k], "eigenvalue": str(lam), "r": r, "witness": wit.to_json()}
                    return MembershipVerdict(NON_MEMBER, ev)
    return MembershipVerdict(UNKNOWN, {"enclosure": enc.to_json(), "certified_radius": _json_float(radius)})


def _json_float(x: float):
    return x if math.isfinite(x) else "inf"


def m_r_value(f: Poly, r: float) -> float:
    return DerivSum(r).value(f)
