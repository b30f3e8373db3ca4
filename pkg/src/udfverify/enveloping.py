"""Exact arithmetic in U(g) and its tensor powers.

A Lie algebra is given by rational structure constants ``[e_i, e_j] = sum_k c^k_ij e_k``
over an ordered basis. Elements of U(g) are stored in the PBW basis
``e_1^a_1 ... e_d^a_d`` (exponent tuples, declared basis order) as sparse dicts.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from udfverify.errors import (
    AntisymmetryViolation,
    ClosureFailure,
    DegreeCapExceeded,
    EmbeddingMismatch,
    JacobiViolation,
)
from udfverify.scalars import format_scalar, parse_scalar

MAX_NORM = "max"
FROBENIUS = "frobenius"
DEFAULT_DEGREE_CAP = 24

Mono = tuple  # exponent vector


# ---------------------------------------------------------------------------
# small exact linear algebra


def _matmul(a, b):
    n = len(a)
    m = len(b[0])
    inner = len(b)
    return [[sum(a[i][t] * b[t][j] for t in range(inner)) for j in range(m)] for i in range(n)]


def _commutator(a, b):
    ab = _matmul(a, b)
    ba = _matmul(b, a)
    return [[ab[i][j] - ba[i][j] for j in range(len(ab[0]))] for i in range(len(ab))]


def _flatten(m):
    return [x for row in m for x in row]


def solve_in_span(vectors: Sequence[Sequence], target: Sequence):
    """Exact coordinates ``x`` with ``sum x_k vectors[k] == target``, or ``None``.

    ``vectors`` must be linearly independent.
    """
    k = len(vectors)
    n = len(target)
    # augmented system: n equations, k unknowns
    rows = [[Fraction(vectors[c][r]) for c in range(k)] + [Fraction(target[r])] for r in range(n)]
    pivots = []
    row = 0
    for col in range(k):
        piv = next((r for r in range(row, n) if rows[r][col] != 0), None)
        if piv is None:
            raise ValueError("basis vectors are linearly dependent")
        rows[row], rows[piv] = rows[piv], rows[row]
        p = rows[row][col]
        rows[row] = [x / p for x in rows[row]]
        for r in range(n):
            if r != row and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[row])]
        pivots.append(col)
        row += 1
    if any(rows[r][k] != 0 for r in range(row, n)):
        return None
    return [rows[i][k] for i in range(k)]


# ---------------------------------------------------------------------------
# Lie algebra data


class LieAlgebraSpec:
    """A finite-dimensional Lie algebra over an ordered basis.

    ``brackets`` is an iterable of ``(i, j, k, c)`` meaning ``c^k_ij = c``.
    Orientations that are not listed are filled in by antisymmetry. The
    instance is validated on construction and treated as immutable.
    """

    def __init__(
        self,
        labels: Sequence[str],
        brackets: Iterable = (),
        norm: str = MAX_NORM,
        embedding=None,
        degree_cap: int = DEFAULT_DEGREE_CAP,
        name: str | None = None,
    ):
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        if self.dim < 1:
            raise ValueError("a Lie algebra needs at least one basis vector")
        if norm not in (MAX_NORM, FROBENIUS):
            raise ValueError(f"unknown norm model {norm!r}")
        if norm == FROBENIUS and embedding is None:
            raise ValueError("the Frobenius norm model requires a matrix embedding")
        self.norm = norm
        self.degree_cap = degree_cap
        self.name = name or "custom"
        self.embedding = None
        if embedding is not None:
            if len(embedding) != self.dim:
                raise ValueError("embedding must list one matrix per basis vector")
            self.embedding = tuple(tuple(tuple(Fraction(x) for x in row) for row in m) for m in embedding)
        self.table = _complete_brackets(self.dim, brackets)
        self.is_abelian = not any(self.table.values())
        _check_jacobi(self)
        if self.embedding is not None:
            _check_embedding(self)
        self._left_cache: dict = {}
        self._prod_cache: dict = {}

    def structure_constant(self, i: int, j: int, k: int):
        return self.table.get((i, j), {}).get(k, 0)

    def bracket_basis(self, i: int, j: int) -> dict:
        return self.table.get((i, j), {})

    def __repr__(self):
        return f"LieAlgebraSpec({self.name!r}, dim={self.dim})"

    # -- elements -----------------------------------------------------------

    def basis(self, i: int) -> LieElement:
        return LieElement(tuple(1 if k == i else 0 for k in range(self.dim)))

    def element(self, coords: Sequence) -> LieElement:
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
        return LieElement(tuple(coords))

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def matrix_of(self, xi: LieElement):
        if self.embedding is None:
            raise ValueError("no matrix embedding")
        size = len(self.embedding[0])
        out = [[0] * size for _ in range(size)]
        for c, m in zip(xi.coords, self.embedding):
            if c:
                for a in range(size):
                    for b in range(size):
                        if m[a][b]:
                            out[a][b] = out[a][b] + c * m[a][b]
        return out

    def coordinates_of_matrix(self, matrix) -> LieElement:
        """Express a matrix in the embedded basis; raises ClosureFailure if outside the span."""
        coords = solve_in_span([_flatten(m) for m in self.embedding], _flatten(matrix))
        if coords is None:
            raise ClosureFailure("matrix is not in the span of the embedded basis")
        return LieElement(tuple(coords))

    def norm_of(self, xi: LieElement) -> float:
        if self.norm == MAX_NORM:
            return max(abs(complex(c)) for c in xi.coords)
        m = self.matrix_of(xi)
        return math.sqrt(sum(abs(complex(x)) ** 2 for row in m for x in row))

    def gram(self):
        """Gram matrix ``tr(B_k^T B_l)`` of the embedded basis (Frobenius model)."""
        if self.embedding is None:
            raise ValueError("no matrix embedding")
        flat = [_flatten(m) for m in self.embedding]
        return [[sum(x * y for x, y in zip(a, b)) for b in flat] for a in flat]


def _complete_brackets(dim: int, brackets) -> dict:
    given: dict = {}
    for entry in brackets:
        i, j, k, c = entry
        i, j, k = int(i), int(j), int(k)
        if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
            raise ValueError(f"bracket index out of range: {entry!r}")
        c = Fraction(parse_scalar(c)) if isinstance(c, str) else Fraction(c)
        given[(i, j, k)] = given.get((i, j, k), 0) + c
    full: dict = {}
    for (i, j, k), c in given.items():
        if i == j and c != 0:
            raise AntisymmetryViolation((i, j, k))
        if (j, i, k) in given and given[(j, i, k)] != -c:
            raise AntisymmetryViolation((i, j, k))
        for key, val in (((i, j, k), c), ((j, i, k), -c)):
            if val != 0:
                full[key] = val
    table: dict = {}
    for (i, j, k), c in sorted(full.items()):
        table.setdefault((i, j), {})[k] = c
    return table


def _check_jacobi(spec: LieAlgebraSpec) -> None:
    d = spec.dim
    if spec.is_abelian:
        return
    for i, j, k in itertools.combinations(range(d), 3):
        total: dict = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for m, cm in spec.bracket_basis(b, c).items():
                for n, cn in spec.bracket_basis(a, m).items():
                    total[n] = total.get(n, 0) + cm * cn
        if any(v != 0 for v in total.values()):
            raise JacobiViolation((i, j, k))


def _check_embedding(spec: LieAlgebraSpec) -> None:
    emb = spec.embedding
    size = len(emb[0])
    for i in range(spec.dim):
        for j in range(i + 1, spec.dim):
            comm = _commutator(emb[i], emb[j])
            expect = [[0] * size for _ in range(size)]
            for k, c in spec.bracket_basis(i, j).items():
                for a in range(size):
                    for b in range(size):
                        expect[a][b] += c * emb[k][a][b]
            if comm != expect:
                raise EmbeddingMismatch((i, j))


def validate_spec(spec: LieAlgebraSpec) -> LieAlgebraSpec:
    """Re-run the construction checks; returns ``spec`` or raises the first violation."""
    table = _complete_brackets(
        spec.dim, [(i, j, k, c) for (i, j), row in spec.table.items() for k, c in row.items()]
    )
    if table != spec.table:
        raise AntisymmetryViolation(next(iter(set(table) ^ set(spec.table)), None))
    _check_jacobi(spec)
    if spec.embedding is not None:
        _check_embedding(spec)
    return spec


def spec_from_matrices(labels, matrices, norm=FROBENIUS, name=None, degree_cap=DEFAULT_DEGREE_CAP):
    """Build a spec whose brackets are the commutators of ``matrices``.

    Raises ClosureFailure if some commutator leaves the span.
    """
    mats = [[[Fraction(x) for x in row] for row in m] for m in matrices]
    flat = [_flatten(m) for m in mats]
    brackets = []
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            coords = solve_in_span(flat, _flatten(_commutator(mats[i], mats[j])))
            if coords is None:
                raise ClosureFailure(f"[{labels[i]}, {labels[j]}] leaves the span")
            brackets.extend((i, j, k, c) for k, c in enumerate(coords) if c != 0)
    return LieAlgebraSpec(labels, brackets, norm=norm, embedding=mats, name=name, degree_cap=degree_cap)


def spec_from_json(data: dict) -> LieAlgebraSpec:
    labels = data.get("basis") or [f"e{k + 1}" for k in range(int(data["dim"]))]
    if "dim" in data and int(data["dim"]) != len(labels):
        raise ValueError("'dim' disagrees with the basis length")
    return LieAlgebraSpec(
        labels,
        data.get("brackets", []),
        norm=data.get("norm", MAX_NORM),
        embedding=data.get("embedding"),
        name=data.get("name"),
    )


def spec_to_json(spec: LieAlgebraSpec) -> dict:
    out = {
        "dim": spec.dim,
        "basis": list(spec.labels),
        "brackets": [
            [i, j, k, str(c)] for (i, j), row in sorted(spec.table.items()) if i < j for k, c in sorted(row.items())
        ],
        "norm": spec.norm,
    }
    if spec.embedding is not None:
        out["embedding"] = [[[str(x) for x in row] for row in m] for m in spec.embedding]
    return out


# ---------------------------------------------------------------------------
# built-in algebras


def _unit(size, a, b):
    m = [[0] * size for _ in range(size)]
    m[a][b] = 1
    return m


def _label(a, b, size):
    return f"E{a}{b}" if size < 10 else f"E{a},{b}"


def abelian_spec(d: int) -> LieAlgebraSpec:
    return LieAlgebraSpec([f"e{k + 1}" for k in range(d)], [], name=f"abelian:{d}")


def axb_spec() -> LieAlgebraSpec:
    """ax+b algebra, basis order (E, H), with ``[H, E] = E``."""
    return LieAlgebraSpec(["E", "H"], [(1, 0, 0, 1)], name="axb")


def _diag_h(size, n):
    m = [[0] * size for _ in range(size)]
    m[n - 1][n - 1] = 1
    m[n][n] = -1
    return m


def heis_sl_spec(d: int) -> LieAlgebraSpec:
    """Subalgebra of sl_d spanned by E_1s (2<=s<=d), E_sd (2<=s<=d-1) and H_1..H_{d-1}."""
    if d < 2:
        raise ValueError("need d >= 2")
    labels, mats = [], []
    for s in range(2, d + 1):
        labels.append(_label(1, s, d))
        mats.append(_unit(d, 0, s - 1))
    for s in range(2, d):
        labels.append(_label(s, d, d))
        mats.append(_unit(d, s - 1, d - 1))
    for n in range(1, d):
        labels.append(f"H{n}")
        mats.append(_diag_h(d, n))
    return spec_from_matrices(labels, mats, name=f"heis-sl:{d}")


def sl_spec(d: int) -> LieAlgebraSpec:
    labels, mats = [], []
    for a in range(1, d + 1):
        for b in range(1, d + 1):
            if a != b:
                labels.append(_label(a, b, d))
                mats.append(_unit(d, a - 1, b - 1))
    for n in range(1, d):
        labels.append(f"H{n}")
        mats.append(_diag_h(d, n))
    return spec_from_matrices(labels, mats, name=f"sl:{d}")


def gl_spec(d: int) -> LieAlgebraSpec:
    labels, mats = [], []
    for a in range(1, d + 1):
        for b in range(1, d + 1):
            labels.append(_label(a, b, d))
            mats.append(_unit(d, a - 1, b - 1))
    return spec_from_matrices(labels, mats, name=f"gl:{d}")


_BUILTIN = re.compile(r"^(abelian|heis-sl|sl|gl):(\d+)$")


@lru_cache(maxsize=None)
def builtin_spec(name: str) -> LieAlgebraSpec:
    """``abelian:d``, ``axb``, ``heis-sl:d``, ``sl:d`` or ``gl:d``."""
    if name == "axb":
        return axb_spec()
    m = _BUILTIN.match(name)
    if not m:
        raise ValueError(f"unknown built-in Lie algebra {name!r}")
    kind, d = m.group(1), int(m.group(2))
    return {"abelian": abelian_spec, "heis-sl": heis_sl_spec, "sl": sl_spec, "gl": gl_spec}[kind](d)


# ---------------------------------------------------------------------------
# Lie elements


@dataclass(frozen=True)
class LieElement:
    coords: tuple

    def __add__(self, other: LieElement) -> LieElement:
        return LieElement(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: LieElement) -> LieElement:
        return LieElement(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> LieElement:
        return LieElement(tuple(-a for a in self.coords))

    def __mul__(self, c) -> LieElement:
        return LieElement(tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def __len__(self):
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)


def bracket(spec: LieAlgebraSpec, xi: LieElement, eta: LieElement) -> LieElement:
    if len(xi) != spec.dim or len(eta) != spec.dim:
        raise ValueError("element dimension does not match the Lie algebra")
    out = [0] * spec.dim
    for (i, j), row in spec.table.items():
        a, b = xi.coords[i], eta.coords[j]
        if a and b:
            for k, c in row.items():
                out[k] = out[k] + a * b * c
    return LieElement(tuple(out))


def embedded_bracket(spec: LieAlgebraSpec, xi: LieElement, eta: LieElement) -> LieElement:
    """The matrix commutator of the embedded elements, read back in the basis."""
    return spec.coordinates_of_matrix(_commutator(spec.matrix_of(xi), spec.matrix_of(eta)))


# ---------------------------------------------------------------------------
# PBW monomial arithmetic


def _add_term(acc: dict, key, c) -> None:
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def _left_mul_generator(spec: LieAlgebraSpec, j: int, mono: Mono) -> dict:
    """``e_j * e^mono`` in PBW form."""
    key = (j, mono)
    hit = spec._left_cache.get(key)
    if hit is not None:
        return hit
    first = next((i for i, a in enumerate(mono) if a), None)
    if first is None or j <= first or spec.is_abelian:
        m = list(mono)
        m[j] += 1
        out = {tuple(m): 1}
    else:
        # e_j e_i M' = e_i (e_j M') + [e_j, e_i] M'
        rest = list(mono)
        rest[first] -= 1
        rest = tuple(rest)
        out: dict = {}
        for m2, c2 in _left_mul_generator(spec, j, rest).items():
            for m3, c3 in _left_mul_generator(spec, first, m2).items():
                _add_term(out, m3, c2 * c3)
        for k, c in spec.bracket_basis(j, first).items():
            for m3, c3 in _left_mul_generator(spec, k, rest).items():
                _add_term(out, m3, c * c3)
    spec._left_cache[key] = out
    return out


def mono_product(spec: LieAlgebraSpec, a: Mono, b: Mono) -> dict:
    """``e^a * e^b`` in PBW form, as a dict ``mono -> coefficient``."""
    deg = sum(a) + sum(b)
    if deg > spec.degree_cap:
        raise DegreeCapExceeded(deg, spec.degree_cap)
    if not any(a):
        return {b: 1}
    if not any(b):
        return {a: 1}
    if spec.is_abelian:
        return {tuple(x + y for x, y in zip(a, b)): 1}
    key = (a, b)
    hit = spec._prod_cache.get(key)
    if hit is not None:
        return hit
    last = max(i for i, x in enumerate(a) if x)
    if all(x == 0 for x in b[:last]):
        # already ordered: concatenation
        out = {tuple(x + y for x, y in zip(a, b)): 1}
    else:
        head = list(a)
        head[last] -= 1
        head = tuple(head)
        out = {}
        for m, c in _left_mul_generator(spec, last, b).items():
            for m2, c2 in mono_product(spec, head, m).items():
                _add_term(out, m2, c * c2)
    spec._prod_cache[key] = out
    return out


def grlex_key(mono: Mono):
    return (sum(mono), tuple(-x for x in mono))


def format_mono(spec: LieAlgebraSpec, mono: Mono) -> str:
    parts = []
    for lab, e in zip(spec.labels, mono):
        if e == 1:
            parts.append(lab)
        elif e > 1:
            parts.append(f"{lab}^{e}")
    return "*".join(parts) or "1"


# ---------------------------------------------------------------------------
# U(g) elements


class UEAElement:
    """Sparse element of U(g) in PBW form."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: LieAlgebraSpec, terms: dict | None = None):
        self.spec = spec
        self.terms = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != spec.dim:
                raise ValueError("monomial length does not match the Lie algebra")
            if c:
                self.terms[m] = c

    @classmethod
    def one(cls, spec: LieAlgebraSpec) -> UEAElement:
        return cls(spec, {(0,) * spec.dim: 1})

    @classmethod
    def zero(cls, spec: LieAlgebraSpec) -> UEAElement:
        return cls(spec)

    @classmethod
    def scalar(cls, spec: LieAlgebraSpec, c) -> UEAElement:
        return cls(spec, {(0,) * spec.dim: c})

    @classmethod
    def generator(cls, spec: LieAlgebraSpec, i: int) -> UEAElement:
        return cls(spec, {tuple(1 if k == i else 0 for k in range(spec.dim)): 1})

    @classmethod
    def monomial(cls, spec: LieAlgebraSpec, exps, coeff=1) -> UEAElement:
        return cls(spec, {tuple(exps): coeff})

    @classmethod
    def from_lie(cls, spec: LieAlgebraSpec, xi: LieElement) -> UEAElement:
        out = {}
        for i, c in enumerate(xi.coords):
            if c:
                out[tuple(1 if k == i else 0 for k in range(spec.dim))] = c
        return cls(spec, out)

    @classmethod
    def word(cls, spec: LieAlgebraSpec, xis: Sequence[LieElement]) -> UEAElement:
        """The product ``xi_1 * ... * xi_n`` in U(g)."""
        out = cls.one(spec)
        for xi in xis:
            out = out * cls.from_lie(spec, xi)
        return out

    def _wrap(self, terms: dict) -> UEAElement:
        out = UEAElement.__new__(UEAElement)
        out.spec = self.spec
        out.terms = terms
        return out

    def _check(self, other: UEAElement) -> None:
        if other.spec is not self.spec:
            raise ValueError("elements belong to different Lie algebra specs")

    def __add__(self, other):
        if not isinstance(other, UEAElement):
            other = UEAElement.scalar(self.spec, other)
        self._check(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            _add_term(acc, m, c)
        return self._wrap(acc)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, UEAElement):
            other = UEAElement.scalar(self.spec, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, UEAElement):
            self._check(other)
            acc: dict = {}
            for a, ca in self.terms.items():
                for b, cb in other.terms.items():
                    for m, c in mono_product(self.spec, a, b).items():
                        _add_term(acc, m, ca * cb * c)
            return self._wrap(acc)
        if not other:
            return self._wrap({})
        return self._wrap({m: c * other for m, c in self.terms.items() if c * other})

    def __rmul__(self, other):
        if not other:
            return self._wrap({})
        return self._wrap({m: other * c for m, c in self.terms.items() if other * c})

    def __pow__(self, n: int):
        out = UEAElement.one(self.spec)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, UEAElement):
            return self.spec is other.spec and self.terms == other.terms
        if not isinstance(other, (int, Fraction)) and not hasattr(other, "re"):
            return NotImplemented
        return self.terms == UEAElement.scalar(self.spec, other).terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def coefficient(self, mono) -> object:
        return self.terms.get(tuple(mono), 0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    def __repr__(self):
        return f"UEAElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = format_mono(self.spec, m)
            cs = format_scalar(c)
            if mono == "1":
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}" if ("+" in cs[1:] or "-" in cs[1:] or "i" in cs) else f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def pbw_product(a: UEAElement, b: UEAElement) -> UEAElement:
    return a * b


def counit(a: UEAElement):
    return a.terms.get((0,) * a.spec.dim, 0)


def _binom_split(mono: Mono):
    """Yield ``(j, a - j, prod_k C(a_k, j_k))`` for all ``j <= a``."""
    for j in itertools.product(*(range(x + 1) for x in mono)):
        c = 1
        for x, y in zip(mono, j):
            c *= math.comb(x, y)
        yield j, tuple(x - y for x, y in zip(mono, j)), c


def coproduct(a: UEAElement) -> TensorElement:
    acc: dict = {}
    for m, c in a.terms.items():
        for j, rest, b in _binom_split(m):
            _add_term(acc, (j, rest), c * b)
    return TensorElement(a.spec, 2, acc, _trusted=True)


@lru_cache(maxsize=None)
def stirling_first(k: int, j: int) -> int:
    """Unsigned Stirling number of the first kind."""
    if k < 0 or j < 0:
        raise ValueError("negative argument")
    if k == 0:
        return 1 if j == 0 else 0
    if j == 0 or j > k:
        return 0
    return stirling_first(k - 1, j - 1) + (k - 1) * stirling_first(k - 1, j)


def pochhammer_rising(h: UEAElement, shift, k: int) -> UEAElement:
    """``prod_{j<k} (h + shift + j)`` computed in U(g)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = UEAElement.one(h.spec)
    for j in range(k):
        out = out * (h + (shift + j))
    return out


# ---------------------------------------------------------------------------
# tensor powers


class TensorElement:
    """Sparse element of U(g)^{tensor k}; keys are k-tuples of PBW exponent tuples."""

    __slots__ = ("spec", "arity", "terms")

    def __init__(self, spec: LieAlgebraSpec, arity: int, terms: dict | None = None, _trusted=False):
        self.spec = spec
        self.arity = arity
        if _trusted:
            self.terms = terms
            return
        self.terms = {}
        for key, c in (terms or {}).items():
            key = tuple(tuple(m) for m in key)
            if len(key) != arity:
                raise ValueError("tensor key has the wrong number of legs")
            if c:
                _add_term(self.terms, key, c)

    @classmethod
    def one(cls, spec: LieAlgebraSpec, arity: int = 2) -> TensorElement:
        return cls(spec, arity, {((0,) * spec.dim,) * arity: 1}, _trusted=True)

    @classmethod
    def zero(cls, spec: LieAlgebraSpec, arity: int = 2) -> TensorElement:
        return cls(spec, arity, {}, _trusted=True)

    def _wrap(self, terms, arity=None):
        return TensorElement(self.spec, self.arity if arity is None else arity, terms, _trusted=True)

    def __add__(self, other: TensorElement):
        if other.arity != self.arity:
            raise ValueError("tensor arities differ")
        acc = dict(self.terms)
        for k, c in other.terms.items():
            _add_term(acc, k, c)
        return self._wrap(acc)

    def __neg__(self):
        return self._wrap({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: TensorElement):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            if other.arity != self.arity or other.spec is not self.spec:
                raise ValueError("incompatible tensor factors")
            spec = self.spec
            acc: dict = {}
            for ka, ca in self.terms.items():
                for kb, cb in other.terms.items():
                    legs = [mono_product(spec, x, y) for x, y in zip(ka, kb)]
                    base = ca * cb
                    for combo in itertools.product(*(leg.items() for leg in legs)):
                        c = base
                        for _, lc in combo:
                            if lc != 1:
                                c = c * lc
                        _add_term(acc, tuple(m for m, _ in combo), c)
            return self._wrap(acc)
        if not other:
            return self._wrap({})
        return self._wrap({k: c * other for k, c in self.terms.items()})

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: tuple(grlex_key(m) for m in t[0]))

    def leg_degrees(self):
        return {tuple(sum(m) for m in k) for k in self.terms}

    def __repr__(self):
        return f"TensorElement<{self.arity}>({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.sorted_terms():
            legs = " ⊗ ".join(format_mono(self.spec, m) for m in k)
            parts.append(f"{format_scalar(c)}*({legs})")
        return " + ".join(parts)

    # -- structural maps ---------------------------------------------------

    def _apply_coproduct_on_leg(self, leg: int) -> TensorElement:
        acc: dict = {}
        for key, c in self.terms.items():
            for j, rest, b in _binom_split(key[leg]):
                _add_term(acc, key[:leg] + (j, rest) + key[leg + 1:], c * b)
        return self._wrap(acc, self.arity + 1)

    def delta_id(self) -> TensorElement:
        """``(Delta ⊗ id)`` applied to the first leg."""
        return self._apply_coproduct_on_leg(0)

    def id_delta(self) -> TensorElement:
        """``(id ⊗ Delta)`` applied to the last leg."""
        return self._apply_coproduct_on_leg(self.arity - 1)

    def with_unit_right(self) -> TensorElement:
        """``T ⊗ 1``."""
        one = (0,) * self.spec.dim
        return self._wrap({k + (one,): c for k, c in self.terms.items()}, self.arity + 1)

    def with_unit_left(self) -> TensorElement:
        """``1 ⊗ T``."""
        one = (0,) * self.spec.dim
        return self._wrap({(one,) + k: c for k, c in self.terms.items()}, self.arity + 1)

    def counit_leg(self, leg: int):
        """Apply the counit to one leg; returns a UEAElement when the arity drops to one."""
        zero = (0,) * self.spec.dim
        acc: dict = {}
        for key, c in self.terms.items():
            if key[leg] == zero:
                _add_term(acc, key[:leg] + key[leg + 1:], c)
        if self.arity == 2:
            return UEAElement(self.spec, {k[0]: c for k, c in acc.items()})
        return self._wrap(acc, self.arity - 1)

    def counit_left(self):
        return self.counit_leg(0)

    def counit_right(self):
        return self.counit_leg(self.arity - 1)

    def flip(self) -> TensorElement:
        if self.arity != 2:
            raise ValueError("flip is defined on two legs")
        return self._wrap({(k[1], k[0]): c for k, c in self.terms.items()})


def tensor_product(*elems: UEAElement) -> TensorElement:
    spec = elems[0].spec
    acc: dict = {}
    for combo in itertools.product(*(e.terms.items() for e in elems)):
        c = 1
        for _, x in combo:
            c = c * x
        _add_term(acc, tuple(m for m, _ in combo), c)
    return TensorElement(spec, len(elems), acc, _trusted=True)


def leibniz_shuffle_expand(xi_list: Sequence, split_arity: int = 2) -> Counter:
    """All ways of distributing a word over two factors, order preserved in each.

    Returns a Counter mapping ``(left_word, right_word)`` to its multiplicity;
    the multiplicities add up to ``2**n``.
    """
    if split_arity != 2:
        raise ValueError("only two-fold splittings are supported")
    n = len(xi_list)
    out: Counter = Counter()
    for mask in range(1 << n):
        left = tuple(xi_list[i] for i in range(n) if mask >> i & 1)
        right = tuple(xi_list[i] for i in range(n) if not mask >> i & 1)
        out[(left, right)] += 1
    return out
