"""Polynomials, first-order differential-operator representations and their actions."""

from __future__ import annotations

import ast
import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from udfverify.enveloping import (
    LieAlgebraSpec,
    LieElement,
    TensorElement,
    UEAElement,
    builtin_spec,
    leibniz_shuffle_expand,
)
from udfverify.errors import MalleabilityViolation
from udfverify.parsing import ExpressionError, _prepare, evaluate_expression
from udfverify.scalars import GaussQ, format_scalar, parse_scalar, real_imag


def _add(acc: dict, key, c) -> None:
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


class Poly:
    """Sparse polynomial in ``nvars`` variables; keys are exponent tuples."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars or min(e, default=0) < 0:
                raise ValueError(f"bad exponent {e} for {nvars} variables")
            if c:
                _add(self.terms, e, c)

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> Poly:
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def constant(cls, nvars: int, c=1) -> Poly:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, k: int, nvars: int) -> Poly:
        return cls._raw(nvars, {tuple(1 if i == k else 0 for i in range(nvars)): 1})

    @classmethod
    def monomial(cls, exps, coeff=1) -> Poly:
        return cls(len(exps), {tuple(exps): coeff})

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable counts differ: {self.nvars} vs {other.nvars}")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self.terms)
        for e, c in other.terms.items():
            _add(acc, e, c)
        return Poly._raw(self.nvars, acc)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Poly):
            other = self._coerce(other)
            acc: dict = {}
            for ea, ca in self.terms.items():
                for eb, cb in other.terms.items():
                    _add(acc, tuple(x + y for x, y in zip(ea, eb)), ca * cb)
            return Poly._raw(self.nvars, acc)
        if not other:
            return Poly._raw(self.nvars, {})
        return Poly._raw(self.nvars, {e: c * other for e, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            raise TypeError("division by a polynomial")
        if isinstance(other, int):
            other = Fraction(other)
        return Poly._raw(self.nvars, {e: c / other for e, c in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        out = Poly.constant(self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            return self.terms == Poly.constant(self.nvars, other).terms
        except Exception:
            return NotImplemented

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, k: int) -> int:
        return max((e[k] for e in self.terms), default=-1)

    def coefficient(self, exps) -> object:
        return self.terms.get(tuple(exps), 0)

    def derivative(self, k: int) -> Poly:
        acc: dict = {}
        for e, c in self.terms.items():
            if e[k]:
                e2 = list(e)
                e2[k] -= 1
                _add(acc, tuple(e2), c * e[k])
        return Poly._raw(self.nvars, acc)

    def times_monomial(self, alpha, coeff=1) -> Poly:
        return Poly._raw(
            self.nvars, {tuple(x + y for x, y in zip(e, alpha)): c * coeff for e, c in self.terms.items()}
        )

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))

    def is_exact(self) -> bool:
        return not any(isinstance(c, (float, complex)) for c in self.terms.values())

    def __call__(self, *point):
        """Exact evaluation at a point."""
        if len(point) != self.nvars:
            raise ValueError("wrong number of coordinates")
        out = 0
        for e, c in self.terms.items():
            t = c
            for z, k in zip(point, e):
                if k:
                    t = t * z**k
            out = out + t
        return out

    def taylor_at(self, point) -> Poly:
        """Coefficients of ``f(point + u)`` as a polynomial in ``u``."""
        out = Poly._raw(self.nvars, {})
        shifted = [Poly.var(k, self.nvars) + point[k] for k in range(self.nvars)]
        for e, c in self.terms.items():
            t = Poly.constant(self.nvars, c)
            for k, a in enumerate(e):
                if a:
                    t = t * shifted[k] ** a
            out = out + t
        return out

    def abs_coefficients(self) -> dict:
        return {e: abs(complex(c)) for e, c in self.terms.items()}

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return format_poly(self)


# ---------------------------------------------------------------------------
# text and JSON formats


def var_name(k: int, nvars: int) -> str:
    return "z" if nvars == 1 else f"z{k + 1}"


def format_poly(f: Poly) -> str:
    if not f.terms:
        return "0"
    out = []
    for e, c in f.sorted_terms():
        mono = "*".join(
            (var_name(k, f.nvars) if a == 1 else f"{var_name(k, f.nvars)}^{a}") for k, a in enumerate(e) if a
        )
        cs = format_scalar(c)
        compound = isinstance(c, GaussQ) and c.re != 0 and c.im != 0
        if compound:
            cs = f"({cs})"
        if not mono:
            term = cs
        elif cs == "1":
            term = mono
        elif cs == "-1":
            term = "-" + mono
        else:
            term = f"{cs}*{mono}"
        out.append(term)
    text = out[0]
    for t in out[1:]:
        text += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return text


_VAR_NAME = re.compile(r"^(?:z(\d*)|x|y)$")


def _max_var_index(text: str) -> int:
    tree = ast.parse(_prepare(text.strip()), mode="eval")
    top = 0
    for node in ast.walk(tree):
        if isinstance(node, ast.Name):
            m = _VAR_NAME.match(node.id)
            if not m:
                continue
            if node.id == "x":
                top = max(top, 1)
            elif node.id == "y":
                top = max(top, 2)
            else:
                top = max(top, int(m.group(1)) if m.group(1) else 1)
    return top


def parse_poly(text: str, nvars: int | None = None) -> Poly:
    """Parse e.g. ``"3/2*z1^2*z3 - i*z2"``.

    Variables: ``z`` (same as ``z1``), ``z1, z2, ...``, ``x`` (= ``z1``),
    ``y`` (= ``z2``); ``i`` is the imaginary unit.
    """
    try:
        needed = _max_var_index(text)
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None
    n = nvars if nvars is not None else max(needed, 1)
    if needed > n:
        raise ExpressionError(f"{text!r} uses {needed} variables, only {n} available")

    def lookup(name):
        m = _VAR_NAME.match(name)
        if not m:
            return None
        if name == "x":
            k = 0
        elif name == "y":
            k = 1
        else:
            k = int(m.group(1)) - 1 if m.group(1) else 0
        if k < 0:
            return None
        return Poly.var(k, n)

    value = evaluate_expression(text, lookup)
    if not isinstance(value, Poly):
        value = Poly.constant(n, value)
    return value


def poly_to_json(f: Poly) -> dict:
    terms = []
    for e, c in f.sorted_terms():
        re_, im = real_imag(c)
        terms.append({"exp": list(e), "re": str(re_), "im": str(im)})
    return {"vars": f.nvars, "terms": terms}


def poly_from_json(data: dict) -> Poly:
    n = int(data["vars"])
    out: dict = {}
    for t in data["terms"]:
        re_ = parse_scalar(t.get("re", "0"))
        im = parse_scalar(t.get("im", "0"))
        c = GaussQ(re_, im) if im else re_
        _add(out, tuple(t["exp"]), c)
    return Poly(n, out)


def monomials_up_to(nvars: int, degree: int) -> list:
    """All exponent tuples of total degree <= ``degree``, graded order."""
    out = []
    for deg in range(degree + 1):
        for e in itertools.product(range(deg + 1), repeat=nvars):
            if sum(e) == deg:
                out.append(e)
    return out


# ---------------------------------------------------------------------------
# numeric evaluation


def eval_points(f: Poly, points: np.ndarray) -> np.ndarray:
    """Evaluate at an ``(m, nvars)`` complex array of points."""
    pts = np.asarray(points, dtype=complex).reshape(-1, f.nvars)
    out = np.zeros(pts.shape[0], dtype=complex)
    if not f.terms:
        return out
    deg = max(f.degree(), 0)
    powers = [np.stack([pts[:, k] ** j for j in range(deg + 1)]) for k in range(f.nvars)]
    for e, c in f.terms.items():
        t = np.full(pts.shape[0], complex(c))
        for k, a in enumerate(e):
            if a:
                t = t * powers[k][a]
        out += t
    return out


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class OpTerm:
    """``coef * z^alpha * d/dz_var``; ``var=None`` means multiplication by ``coef*z^alpha``."""

    coef: object
    alpha: tuple
    var: int | None


class Representation:
    """Basis vectors of a Lie algebra acting by differential operators on polynomials."""

    def __init__(self, spec: LieAlgebraSpec, nvars: int, operators: Sequence[Sequence[OpTerm]], name=None):
        if len(operators) != spec.dim:
            raise ValueError("need one operator per basis vector")
        self.spec = spec
        self.nvars = nvars
        self.operators = tuple(tuple(op) for op in operators)
        self.name = name or spec.name
        self._mono_cache: dict = {}

    def op_degree_shift(self, i: int) -> int:
        """Largest change in total degree produced by the i-th operator."""
        return max((sum(t.alpha) - (0 if t.var is None else 1) for t in self.operators[i]), default=-1)

    def is_first_order(self) -> bool:
        return all(t.var is not None for op in self.operators for t in op)

    def _apply_to_mono(self, i: int, e: tuple) -> dict:
        out: dict = {}
        for t in self.operators[i]:
            if t.var is None:
                _add(out, tuple(x + y for x, y in zip(e, t.alpha)), t.coef)
            elif e[t.var]:
                e2 = list(e)
                e2[t.var] -= 1
                _add(out, tuple(x + y for x, y in zip(e2, t.alpha)), t.coef * e[t.var])
        return out

    def _pbw_on_mono(self, mono: tuple, e: tuple) -> dict:
        """rho(e^mono) applied to z^e, as a dict."""
        key = (mono, e)
        hit = self._mono_cache.get(key)
        if hit is not None:
            return hit
        first = next((i for i, a in enumerate(mono) if a), None)
        if first is None:
            out = {e: 1}
        else:
            rest = list(mono)
            rest[first] -= 1
            out = {}
            for e2, c2 in self._pbw_on_mono(tuple(rest), e).items():
                for e3, c3 in self._apply_to_mono(first, e2).items():
                    _add(out, e3, c2 * c3)
        self._mono_cache[key] = out
        return out


def act_generator(rep: Representation, i: int, f: Poly) -> Poly:
    _check_vars(rep, f)
    acc: dict = {}
    for e, c in f.terms.items():
        for e2, c2 in rep._apply_to_mono(i, e).items():
            _add(acc, e2, c * c2)
    return Poly._raw(f.nvars, acc)


def act_lie(rep: Representation, xi: LieElement, f: Poly) -> Poly:
    out = Poly._raw(f.nvars, {})
    for i, c in enumerate(xi.coords):
        if c:
            out = out + act_generator(rep, i, f) * c
    return out


def act_word(rep: Representation, xis: Sequence[LieElement], f: Poly) -> Poly:
    """rho(xi_1) o ... o rho(xi_n) applied to f (xi_n acts first)."""
    for xi in reversed(xis):
        f = act_lie(rep, xi, f)
    return f


def act_basis_word(rep: Representation, word: Sequence[int], f: Poly) -> Poly:
    for i in reversed(word):
        f = act_generator(rep, i, f)
    return f


def act_uea(rep: Representation, xi: UEAElement, f: Poly) -> Poly:
    _check_vars(rep, f)
    acc: dict = {}
    for mono, cm in xi.terms.items():
        for e, c in f.terms.items():
            for e2, c2 in rep._pbw_on_mono(mono, e).items():
                _add(acc, e2, cm * c * c2)
    return Poly._raw(f.nvars, acc)


def act_mono(rep: Representation, mono: tuple, f: Poly) -> Poly:
    acc: dict = {}
    for e, c in f.terms.items():
        for e2, c2 in rep._pbw_on_mono(mono, e).items():
            _add(acc, e2, c * c2)
    return Poly._raw(f.nvars, acc)


def act_tensor(rep: Representation, T: TensorElement, f: Poly, g: Poly) -> list:
    """[(Xi1 ▷ f, Xi2 ▷ g, c)] over the terms ``c * Xi1 ⊗ Xi2`` of T, in sorted order."""
    if T.arity != 2:
        raise ValueError("expected a two-leg tensor")
    return [(act_mono(rep, left, f), act_mono(rep, right, g), c) for (left, right), c in T.sorted_terms()]


def mu_pointwise(f: Poly, g: Poly) -> Poly:
    return f * g


def _check_vars(rep: Representation, f: Poly) -> None:
    if f.nvars != rep.nvars:
        raise ValueError(f"representation acts on {rep.nvars} variables, polynomial has {f.nvars}")


def eigenvalue(rep: Representation, xi: LieElement, f: Poly):
    """Return lambda with rho(xi) f = lambda f, or None."""
    if f.is_zero():
        return None
    g = act_lie(rep, xi, f)
    e0, c0 = next(iter(f.sorted_terms()))
    num = g.coefficient(e0)
    lam = Fraction(num, c0) if isinstance(num, int) and isinstance(c0, int) else num / c0
    return lam if g == f * lam else None


# -- built-ins --------------------------------------------------------------


def derivation_representation(spec: LieAlgebraSpec) -> Representation:
    """Abelian algebra acting by constant vector fields: e_k -> d/dz_k."""
    if not spec.is_abelian:
        raise ValueError("constant vector fields represent abelian algebras only")
    d = spec.dim
    ops = [[OpTerm(1, (0,) * d, k)] for k in range(d)]
    return Representation(spec, d, ops)


def axb_representation(spec: LieAlgebraSpec | None = None) -> Representation:
    """E -> d/dz, H -> -z d/dz on polynomials in one variable."""
    spec = spec or builtin_spec("axb")
    ops = [None, None]
    ops[spec.index("E")] = [OpTerm(1, (0,), 0)]
    ops[spec.index("H")] = [OpTerm(-1, (1,), 0)]
    return Representation(spec, 1, ops)


def matrix_representation(spec: LieAlgebraSpec) -> Representation:
    """A matrix B acts as sum_{a,b} B_ab z_a d/dz_b; E_ab -> z_a d/dz_b."""
    if spec.embedding is None:
        raise ValueError("spec has no matrix embedding")
    size = len(spec.embedding[0])
    ops = []
    for m in spec.embedding:
        terms = []
        for a in range(size):
            for b in range(size):
                if m[a][b]:
                    alpha = tuple(1 if k == a else 0 for k in range(size))
                    terms.append(OpTerm(m[a][b], alpha, b))
        ops.append(terms)
    return Representation(spec, size, ops)


def representation_for(spec: LieAlgebraSpec) -> Representation:
    """The shipped representation for ``spec``; one shared instance per spec object."""
    cached = spec.__dict__.get("_default_rep")
    if cached is not None:
        return cached
    if spec.name == "axb":
        rep = axb_representation(spec)
    elif spec.is_abelian and spec.embedding is None:
        rep = derivation_representation(spec)
    else:
        rep = matrix_representation(spec)
    spec.__dict__["_default_rep"] = rep
    return rep


# -- checks -----------------------------------------------------------------


def check_homomorphism(rep: Representation, probe_degree: int = 4) -> bool:
    """[rho(e_i), rho(e_j)] = rho([e_i, e_j]) on all monomials up to ``probe_degree``."""
    spec = rep.spec
    for e in monomials_up_to(rep.nvars, probe_degree):
        f = Poly.monomial(e)
        images = [act_generator(rep, i, f) for i in range(spec.dim)]
        for i in range(spec.dim):
            for j in range(i + 1, spec.dim):
                lhs = act_generator(rep, i, images[j]) - act_generator(rep, j, images[i])
                rhs = Poly._raw(rep.nvars, {})
                for k, c in spec.bracket_basis(i, j).items():
                    rhs = rhs + images[k] * c
                if lhs != rhs:
                    return False
    return True


@dataclass
class MalleabilityReport:
    representation: str
    probe_degree: int
    leibniz_checks: int
    shuffle_checks: int

    def to_json(self) -> dict:
        return {
            "representation": self.representation,
            "probe_degree": self.probe_degree,
            "leibniz_checks": self.leibniz_checks,
            "shuffle_checks": self.shuffle_checks,
            "pass": True,
        }


def shuffle_rhs(rep: Representation, word: Sequence[LieElement], f: Poly, g: Poly) -> Poly:
    """Sum over shuffles of (left word ▷ f) * (right word ▷ g)."""
    out = Poly._raw(f.nvars, {})
    for (left, right), mult in leibniz_shuffle_expand(list(word)).items():
        out = out + act_word(rep, left, f) * act_word(rep, right, g) * mult
    return out


def check_malleability(
    rep: Representation, probe_degree: int = 3, n_max: int = 4, samples: int = 6, seed: int = 0
) -> MalleabilityReport:
    """Leibniz rule for every basis vector and its n-fold shuffle form for n <= n_max.

    Words of length <= 2 are enumerated; longer words are seeded samples.
    Raises MalleabilityViolation with a witness on the first failure.
    """
    spec = rep.spec
    monos = [Poly.monomial(e) for e in monomials_up_to(rep.nvars, probe_degree)]
    leib = 0
    for i in range(spec.dim):
        for f in monos:
            for g in monos:
                lhs = act_generator(rep, i, f * g)
                rhs = act_generator(rep, i, f) * g + f * act_generator(rep, i, g)
                leib += 1
                if lhs != rhs:
                    raise MalleabilityViolation({"generator": spec.labels[i], "f": str(f), "g": str(g)})
    rng = np.random.Generator(np.random.Philox(seed))
    small = monos[: min(len(monos), 6)] + monos[-2:]
    shuf = 0
    for n in range(n_max + 1):
        if n <= 2:
            words = list(itertools.product(range(spec.dim), repeat=n))
        else:
            words = [tuple(int(x) for x in rng.integers(0, spec.dim, n)) for _ in range(samples)]
        for w in words:
            word = [spec.basis(i) for i in w]
            for f in small:
                for g in small:
                    shuf += 1
                    if act_word(rep, word, f * g) != shuffle_rhs(rep, word, f, g):
                        raise MalleabilityViolation(
                            {"word": [spec.labels[i] for i in w], "f": str(f), "g": str(g)}
                        )
    return MalleabilityReport(rep.name, probe_degree, leib, shuf)
