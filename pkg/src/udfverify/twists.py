"""Truncated twist series and exact checks of the twist axioms.

A twist is stored as its components ``F_0, ..., F_N`` with
``F_hbar = sum_n hbar^n / n! * F_n``; the ``1/n!`` weights are applied only
when components are combined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from udfverify.enveloping import (
    LieAlgebraSpec,
    LieElement,
    TensorElement,
    UEAElement,
    axb_spec,
    builtin_spec,
    format_mono,
    grlex_key,
    pochhammer_rising,
    tensor_product,
)
from udfverify.scalars import format_scalar, parse_scalar

ABELIAN = "abelian"
AXB = "axb"
SL_HEIS = "heis-sl"
FAMILIES = (ABELIAN, AXB, SL_HEIS)


@dataclass(frozen=True)
class AbelianConfig:
    """``r = sum_k r_k ⊗ s_k`` over an abelian spec."""

    spec: LieAlgebraSpec
    pairs: tuple  # of (LieElement, LieElement)

    def __post_init__(self):
        if not self.spec.is_abelian:
            raise ValueError("the abelian twist needs an abelian Lie algebra")
        object.__setattr__(self, "pairs", tuple((a, b) for a, b in self.pairs))

    @property
    def n_terms(self) -> int:
        return len(self.pairs)

    @property
    def c(self) -> float:
        if not self.pairs:
            return 0.0
        return max(self.spec.norm_of(a) for a, _ in self.pairs) + max(self.spec.norm_of(b) for _, b in self.pairs)

    def r(self) -> TensorElement:
        out = TensorElement.zero(self.spec)
        for a, b in self.pairs:
            out = out + tensor_product(UEAElement.from_lie(self.spec, a), UEAElement.from_lie(self.spec, b))
        return out

    @classmethod
    def from_triples(cls, d: int, triples) -> AbelianConfig:
        """``triples`` of ``(coeff, i, j)`` with 0-based basis indices, meaning ``coeff * e_i ⊗ e_j``."""
        spec = builtin_spec(f"abelian:{d}")
        pairs = [(spec.basis(i) * c, spec.basis(j)) for c, i, j in triples]
        return cls(spec, tuple(pairs))


def parse_r(text: str, d: int) -> AbelianConfig:
    """Parse ``"1:1:2, 2:2:1"`` (``coeff:i:j``, 1-based) into an abelian config."""
    triples = []
    for chunk in text.replace(";", ",").split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected coeff:i:j, got {chunk!r}")
        c, i, j = parse_scalar(parts[0]), int(parts[1]) - 1, int(parts[2]) - 1
        if not (0 <= i < d and 0 <= j < d):
            raise ValueError(f"basis index out of range in {chunk!r}")
        triples.append((c, i, j))
    return AbelianConfig.from_triples(d, triples)


@dataclass(frozen=True)
class SlHeisConfig:
    """Dimension ``d`` and coefficients ``c_s`` with ``H = 1/2 sum_s c_s H_s``."""

    d: int
    c: tuple = ()

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("need d >= 2")
        c = tuple(self.c) if self.c else (1,) * (self.d - 1)
        if len(c) != self.d - 1:
            raise ValueError(f"expected {self.d - 1} coefficients c_s")
        object.__setattr__(self, "c", c)

    @property
    def spec(self) -> LieAlgebraSpec:
        return builtin_spec(f"heis-sl:{self.d}")

    def h_element(self) -> LieElement:
        spec = self.spec
        coords = [0] * spec.dim
        for s, cs in enumerate(self.c, start=1):
            coords[spec.index(f"H{s}")] = Fraction(1, 2) * cs
        return LieElement(tuple(coords))


@dataclass
class TwistSeries:
    family: str
    spec: LieAlgebraSpec
    components: list
    config: object = None
    _lift_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.components) - 1

    def __getitem__(self, n: int) -> TensorElement:
        return self.components[n]

    def replace(self, n: int, component: TensorElement) -> TwistSeries:
        comps = list(self.components)
        comps[n] = component
        return TwistSeries(self.family, self.spec, comps, self.config)

    def truncate(self, n: int) -> TwistSeries:
        return TwistSeries(self.family, self.spec, list(self.components[: n + 1]), self.config)

    def extended(self, N: int) -> TwistSeries:
        """The same twist regenerated (and cached) up to order ``N``."""
        if N <= self.order:
            return self
        hit = self._lift_cache.get(("ext", N))
        if hit is None:
            if self.family == ABELIAN:
                hit = abelian_twist(self.config, N)
            elif self.family == AXB:
                hit = axb_twist(N, self.spec)
            elif self.family == SL_HEIS:
                hit = sl_twist(self.config, N)
            else:
                raise ValueError(f"cannot extend a twist of family {self.family!r}")
            self._lift_cache[("ext", N)] = hit
        return hit

    def lifts(self, n: int):
        """``(F_n ⊗ 1, (Delta ⊗ id)F_n, 1 ⊗ F_n, (id ⊗ Delta)F_n)``, cached."""
        hit = self._lift_cache.get(n)
        if hit is None:
            f = self.components[n]
            hit = (f.with_unit_right(), f.delta_id(), f.with_unit_left(), f.id_delta())
            self._lift_cache[n] = hit
        return hit


def _power_series(x: TensorElement, n_max: int) -> list:
    out = [TensorElement.one(x.spec)]
    for _ in range(n_max):
        out.append(out[-1] * x)
    return out


def abelian_twist(cfg: AbelianConfig, N: int) -> TwistSeries:
    return TwistSeries(ABELIAN, cfg.spec, _power_series(cfg.r(), N), cfg)


def axb_twist(N: int, spec: LieAlgebraSpec | None = None) -> TwistSeries:
    spec = spec or builtin_spec("axb")
    E = UEAElement.generator(spec, spec.index("E"))
    H = UEAElement.generator(spec, spec.index("H"))
    poch = [pochhammer_rising(H, 0, k) for k in range(N + 1)]
    comps = []
    for n in range(N + 1):
        f = TensorElement.zero(spec)
        for k in range(n + 1):
            coeff = (-1) ** k * math.comb(n, k)
            f = f + tensor_product(E ** (n - k) * poch[k], E**k * poch[n - k]) * coeff
        comps.append(f)
    return TwistSeries(AXB, spec, comps, None)


def sl_twist(cfg: SlHeisConfig, N: int) -> TwistSeries:
    spec = cfg.spec
    d = cfg.d
    H = UEAElement.from_lie(spec, cfg.h_element())
    E1d = UEAElement.generator(spec, spec.index(f"E1{d}" if d < 10 else f"E1,{d}"))
    X = TensorElement.zero(spec)
    for s in range(2, d):
        a = spec.index(f"E1{s}" if d < 10 else f"E1,{s}")
        b = spec.index(f"E{s}{d}" if d < 10 else f"E{s},{d}")
        X = X + tensor_product(UEAElement.generator(spec, a), UEAElement.generator(spec, b))
    xpow = _power_series(X, N)
    comps = []
    for n in range(N + 1):
        f = TensorElement.zero(spec)
        for m in range(n + 1):
            right = tensor_product(pochhammer_rising(H, m, n - m), E1d ** (n - m))
            f = f + (xpow[m] * right) * math.comb(n, m)
        comps.append(f)
    return TwistSeries(SL_HEIS, spec, comps, cfg)


def build_twist(family: str, N: int, *, d: int = 3, abelian: AbelianConfig | None = None, c=()) -> TwistSeries:
    """Build one of the shipped families. Abelian defaults to ``r = e1 ⊗ e2`` on two generators."""
    if family == ABELIAN:
        return abelian_twist(abelian or AbelianConfig.from_triples(2, [(1, 0, 1)]), N)
    if family == AXB:
        return axb_twist(N)
    if family == SL_HEIS:
        return sl_twist(SlHeisConfig(d, tuple(c)), N)
    raise ValueError(f"unknown twist family {family!r}")


# ---------------------------------------------------------------------------
# axioms


UDF_ORDER = "udf"
PRINTED_ORDER = "printed"


def cocycle_residual(F: TwistSeries, n: int, convention: str = UDF_ORDER) -> TensorElement:
    """hbar^n coefficient of the 2-cocycle defect, with the 1/k! weights folded in.

    ``convention="udf"`` (default) checks
    ``(Delta⊗id)(F) (F⊗1) - (id⊗Delta)(F) (1⊗F)``, the factor order under which
    ``a ⋆ b = mu(F ▷ (a⊗b))`` is associative for a left action.
    ``convention="printed"`` checks ``(F⊗1)(Delta⊗id)(F) - (1⊗F)(id⊗Delta)(F)``,
    the condition satisfied by the inverse twist.
    """
    if n > F.order:
        raise ValueError(f"order {n} exceeds the series order {F.order}")
    if convention not in (UDF_ORDER, PRINTED_ORDER):
        raise ValueError(f"unknown convention {convention!r}")
    out = TensorElement.zero(F.spec, 3)
    for p in range(n + 1):
        q = n - p
        w = Fraction(1, math.factorial(p) * math.factorial(q))
        fp_1, _, one_fp, _ = F.lifts(p)
        _, dq, _, qd = F.lifts(q)
        if convention == UDF_ORDER:
            # the hbar^p part of F⊗1 sits to the right of the hbar^q part of (Delta⊗id)F
            out = out + (dq * fp_1 - qd * one_fp) * w
        else:
            out = out + (fp_1 * dq - one_fp * qd) * w
    return out


def counit_residual(F: TwistSeries, n: int, side: str = "left") -> UEAElement:
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    comp = F.components[n]
    return comp.counit_left() if side == "left" else comp.counit_right()


@dataclass
class AxiomReport:
    family: str
    order: int
    cocycle_zero: list
    counit_ok: list
    normalized: bool

    @property
    def passed(self) -> bool:
        return self.normalized and all(self.cocycle_zero) and all(self.counit_ok)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "order": self.order,
            "normalized": self.normalized,
            "cocycle_zero": self.cocycle_zero,
            "counit_ok": self.counit_ok,
            "pass": self.passed,
        }


def verify_axioms(F: TwistSeries, n_max: int | None = None, convention: str = UDF_ORDER) -> AxiomReport:
    n_max = F.order if n_max is None else min(n_max, F.order)
    one = TensorElement.one(F.spec)
    cocycle = [cocycle_residual(F, n, convention).is_zero() for n in range(n_max + 1)]
    counit = []
    for n in range(n_max + 1):
        expect = UEAElement.one(F.spec) if n == 0 else UEAElement.zero(F.spec)
        counit.append(counit_residual(F, n, "left") == expect and counit_residual(F, n, "right") == expect)
    return AxiomReport(F.family, n_max, cocycle, counit, F.components[0] == one)


# ---------------------------------------------------------------------------
# serialization


def twist_to_json(F: TwistSeries) -> dict:
    terms = []
    for n, comp in enumerate(F.components):
        for (left, right), c in comp.sorted_terms():
            terms.append({"n": n, "left": [list(left), format_scalar(c)], "right": [list(right), "1"]})
    return {
        "family": F.family,
        "order": F.order,
        "basis": list(F.spec.labels),
        "terms": terms,
    }


def twist_from_json(data: dict, spec: LieAlgebraSpec) -> TwistSeries:
    N = int(data["order"])
    comps = [dict() for _ in range(N + 1)]
    for t in data["terms"]:
        c = parse_scalar(t["left"][1]) * parse_scalar(t["right"][1])
        key = (tuple(t["left"][0]), tuple(t["right"][0]))
        comps[int(t["n"])][key] = comps[int(t["n"])].get(key, 0) + c
    return TwistSeries(data.get("family", "custom"), spec, [TensorElement(spec, 2, c) for c in comps])


def format_component(F: TwistSeries, n: int) -> str:
    comp = F.components[n]
    if comp.is_zero():
        return "0"
    parts = []
    for (l, r), c in sorted(comp.terms.items(), key=lambda t: (grlex_key(t[0][0]), grlex_key(t[0][1]))):
        parts.append(f"{format_scalar(c)}*({format_mono(F.spec, l)} ⊗ {format_mono(F.spec, r)})")
    return " + ".join(parts)


def family_spec(family: str, d: int = 3) -> LieAlgebraSpec:
    if family == AXB:
        return axb_spec()
    if family == SL_HEIS:
        return builtin_spec(f"heis-sl:{d}")
    return builtin_spec(f"abelian:{d}")


def lie_words(spec: LieAlgebraSpec, indices: Sequence[int]) -> list:
    return [spec.basis(i) for i in indices]
