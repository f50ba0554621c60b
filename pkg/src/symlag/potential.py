"""Bulk-deformed superpotential of the symmetric-product Lagrangian.

Coordinates are ``(x1, x2, y1, y2)``: the ``x`` variables belong to the
fibre ``L'`` and the ``y`` variables to ``L''``.  Every disc class is an
integer combination of the six basis classes

    b11, b12, b21, b22, d1, d2

with areas ``(B, a, B, a, C, 0)``.
"""
from __future__ import annotations

import random
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .laurent import LaurentPoly
from .novikov import (
    AdmissibilityFilter,
    ExponentMonoid,
    NovikovError,
    NovikovScalar,
    as_fraction,
    format_fraction,
    monoid_elements,
    nv_exp,
)

BASIS = ("b11", "b12", "b21", "b22", "d1", "d2")

# boundary monomial of each basis class, as exponents of (x1, x2, y1, y2)
BASIS_MONOMIALS = (
    (1, 0, 0, 0),
    (0, -1, 0, 0),
    (0, 0, 1, 0),
    (0, 0, 0, -1),
    (-1, 0, -1, 0),
    (0, 1, 0, 1),
)
# intersection with the small-sphere pair divisor D_{S1}
BASIS_DS1 = (1, 0, 1, 0, 0, 0)
# intersection with the whole toric boundary (Maslov index is twice this)
BASIS_TORIC = (1, 1, 1, 1, 0, 0)


class DomainError(ValueError):
    """Input outside the mathematical domain of a computation."""


class HypothesisError(DomainError):
    """A standing inequality on (B, C, a) fails."""

    def __init__(self, inequality: str, detail: str):
        super().__init__(f"violates {inequality}: {detail}")
        self.inequality = inequality


@dataclass(frozen=True)
class ModelParams:
    B: Fraction
    C: Fraction
    a: Fraction
    sign_annulus: int = 1

    def __post_init__(self):
        for name in ("B", "C", "a"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.sign_annulus not in (1, -1):
            raise DomainError("sign_annulus must be +1 or -1")

    def validate(self) -> "ModelParams":
        """Raise :class:`HypothesisError` naming the first failed inequality."""
        B, C, a = self.B, self.C, self.a
        if B <= 0 or C <= 0:
            raise HypothesisError("B > 0 and C > 0", f"B={B}, C={C}")
        if a <= 0:
            raise HypothesisError("0 < a < B - C", f"a={a} is not positive")
        if not a < B - C:
            raise HypothesisError("0 < a < B - C",
                                  f"a={a} >= B - C = {B - C} (equivalently B - a - C = {B - a - C} <= 0)")
        if not B - a - C > 0:
            raise HypothesisError("B - a - C > 0", f"B - a - C = {B - a - C}")
        return self

    @property
    def bulk_gap(self) -> Fraction:
        """``B - a - C``: the exponent of ``b_orb**2 / 2``."""
        return self.B - self.a - self.C

    @property
    def area_vector(self) -> tuple[Fraction, ...]:
        return (self.B, self.a, self.B, self.a, self.C, Fraction(0))

    def monoid(self) -> ExponentMonoid:
        return ExponentMonoid([self.bulk_gap, self.C])

    def tail_filter(self) -> AdmissibilityFilter:
        return AdmissibilityFilter(self.monoid(), (self.a, self.B))

    def bulk_filter(self) -> AdmissibilityFilter:
        return AdmissibilityFilter(self.monoid(), (Fraction(0),))

    def to_json(self) -> dict:
        return {"B": format_fraction(self.B), "C": format_fraction(self.C),
                "a": format_fraction(self.a), "sign_annulus": self.sign_annulus}


@dataclass(frozen=True)
class DiscClass:
    coords: tuple[int, ...]
    area: Fraction
    boundary_monomial: tuple[int, ...]
    ds1_intersection: int

    @classmethod
    def from_coords(cls, coords: Sequence[int], params: ModelParams) -> "DiscClass":
        coords = tuple(int(c) for c in coords)
        if len(coords) != 6:
            raise ValueError("disc classes have six coordinates")
        area = sum((c * w for c, w in zip(coords, params.area_vector)), Fraction(0))
        mono = tuple(sum(c * m[i] for c, m in zip(coords, BASIS_MONOMIALS)) for i in range(4))
        ds1 = sum(c * d for c, d in zip(coords, BASIS_DS1))
        return cls(coords, area, mono, ds1)

    @property
    def maslov_index(self) -> int:
        return 2 * sum(c * t for c, t in zip(self.coords, BASIS_TORIC))

    def label(self) -> str:
        parts = []
        for c, name in zip(self.coords, BASIS):
            if c:
                parts.append(name if c == 1 else f"{c}*{name}")
        return " + ".join(parts) or "0"


def basis_class(name: str, params: ModelParams, **extra: int) -> DiscClass:
    coords = [0] * 6
    coords[BASIS.index(name)] = 1
    for k, v in extra.items():
        coords[BASIS.index(k)] += v
    return DiscClass.from_coords(coords, params)


def standard_registry(params: ModelParams) -> list[DiscClass]:
    """The eight Maslov-2 smooth disc classes (one disc plus a constant)."""
    return list(_registry(params))


@lru_cache(maxsize=256)
def _registry(params: ModelParams) -> tuple[DiscClass, ...]:
    return (
        basis_class("b11", params),
        basis_class("b12", params),
        basis_class("b21", params),
        basis_class("b22", params),
        basis_class("b21", params, d1=1),
        basis_class("b22", params, d2=1),
        basis_class("b11", params, d1=1),
        basis_class("b12", params, d2=1),
    )


@dataclass(frozen=True)
class BulkParams:
    b1: NovikovScalar
    b_orb_squared_half: NovikovScalar

    def __post_init__(self):
        if not self.b1.is_zero() and self.b1.valuation() <= 0:
            raise DomainError("b1 must have positive valuation")

    @classmethod
    def default(cls, params: ModelParams, cutoff, b1: NovikovScalar | None = None) -> "BulkParams":
        cutoff = as_fraction(cutoff)
        if b1 is None:
            b1 = NovikovScalar.zero(cutoff)
        return cls(b1, NovikovScalar.monomial(params.bulk_gap, cutoff))


def _check_cutoff(cutoff) -> Fraction:
    cutoff = as_fraction(cutoff)
    if cutoff <= 0:
        raise DomainError("cutoff must be positive")
    return cutoff


def build_w_smooth(params: ModelParams, cutoff) -> LaurentPoly:
    """Contributions of the eight smooth disc families, modulo ``T**cutoff``."""
    params.validate()
    cutoff = _check_cutoff(cutoff)
    terms = [(cls.boundary_monomial, NovikovScalar.monomial(cls.area, cutoff))
             for cls in standard_registry(params)]
    return LaurentPoly(terms, cutoff)


def _exp_powers(b1: NovikovScalar, cutoff: Fraction) -> dict[int, NovikovScalar]:
    if not b1.is_zero() and b1.valuation() <= 0:
        raise DomainError("b1 must have positive valuation")
    if b1.cutoff != cutoff:
        raise NovikovError(f"b1 cutoff {b1.cutoff} does not match polynomial cutoff {cutoff}")
    return {1: nv_exp(b1)}


def _ds1_lookup(registry: Sequence[DiscClass]) -> dict[tuple, int]:
    return {cls.boundary_monomial: cls.ds1_intersection for cls in registry}


def apply_smooth_bulk(W: LaurentPoly, b1: NovikovScalar, registry: Sequence[DiscClass]) -> LaurentPoly:
    """Multiply each term by ``exp(b1) ** (D_{S1} . class)``."""
    exps = _exp_powers(b1, W.cutoff)
    lookup = _ds1_lookup(registry)
    out = []
    for mono, coef in W:
        if mono not in lookup:
            raise DomainError(f"no registered disc class with boundary monomial {mono}")
        k = lookup[mono]
        if k:
            if k not in exps:
                exps[k] = exps[1] ** k
            coef = coef * exps[k]
        out.append((mono, coef))
    return LaurentPoly(out, W.cutoff)


def bulk_derivative(W: LaurentPoly, b1: NovikovScalar, registry: Sequence[DiscClass]) -> LaurentPoly:
    """``d/db1`` of :func:`apply_smooth_bulk` at ``b1``."""
    exps = _exp_powers(b1, W.cutoff)
    lookup = _ds1_lookup(registry)
    out = []
    for mono, coef in W:
        k = lookup[mono]
        if k:
            if k not in exps:
                exps[k] = exps[1] ** k
            out.append((mono, (coef * exps[k]).scale(k)))
    return LaurentPoly(out, W.cutoff)


def annulus_term(params: ModelParams, bulk: BulkParams, cutoff=None) -> LaurentPoly:
    """Lowest-order annulus contribution ``+- (b_orb^2/2) T^(a+C) (x1 y1)^-1 (x2 + y2)``."""
    params.validate()
    if cutoff is None:
        cutoff = bulk.b_orb_squared_half.cutoff
    cutoff = _check_cutoff(cutoff)
    coef = bulk.b_orb_squared_half.shift(params.a + params.C)
    if coef.cutoff < cutoff:
        raise NovikovError("b_orb^2/2 is not known to enough precision")
    coef = coef.truncate(cutoff).scale(params.sign_annulus)
    return LaurentPoly([((-1, 1, -1, 0), coef), ((-1, 0, -1, 1), coef)], cutoff)


def uncomputed_families(params: ModelParams, max_genus: int = 2, max_eta1: int = 3):
    """Valuations of the higher-genus / higher-winding annulus contributions.

    Yields ``(genus, eta1, base, valuation)`` where ``base`` is ``"b.1"`` or
    ``"b.2"``.  The family (genus 0, eta1 = 1, base b.2) is left out: with
    eta2 = 1 it is the computed annulus term and with eta2 > 1 it is empty.
    """
    half_gap = params.bulk_gap / 2
    for g in range(max_genus + 1):
        for eta1 in range(1, max_eta1 + 1):
            for base, area in (("b.1", params.B), ("b.2", params.a)):
                if g == 0 and eta1 == 1 and base == "b.2":
                    continue
                yield g, eta1, base, (2 * g + 2) * half_gap + area + eta1 * params.C


def safe_cutoff(params: ModelParams) -> Fraction:
    """Lowest T-order at which an uncomputed contribution may appear."""
    params.validate()
    # valuations grow with genus and eta1, so small ranges reach the minimum
    return min(v for *_, v in uncomputed_families(params))


def admissible_exponents(params: ModelParams, lo, hi) -> list[Fraction]:
    """Exponents in ``(a + G) & (B + G)`` lying in ``[lo, hi)``."""
    lo, hi = as_fraction(lo), as_fraction(hi)
    if hi <= params.B:
        return []
    filt = params.tail_filter()
    out = []
    for g in monoid_elements(params.monoid(), hi - params.B):
        lam = params.B + g
        if lam >= lo and filt.admits(lam):
            out.append(lam)
    return out


@dataclass(frozen=True)
class TailShape:
    max_eta1: int = 3
    max_eta2: int = 3
    max_monomials: int = 8
    max_terms_per_coefficient: int = 3


def _highg_monomial(base: str, eta1: int, eta2: int) -> tuple[int, ...]:
    f = {"x1": (1, 0, 0, 0), "x2inv": (0, -1, 0, 0)}[base]
    return (f[0] - eta1, f[1] + eta2, -eta1, eta2)


def sample_admissible_tail(params: ModelParams, cutoff, seed: int,
                           shape: TailShape = TailShape()) -> LaurentPoly:
    """Random swap-symmetric stand-in for the uncomputed contributions.

    Monomials have the shape ``(x2 y2)^eta2 (x1 y1)^-eta1 f`` and every
    coefficient exponent lies in ``(a + G) & (B + G)`` at or above
    :func:`safe_cutoff`.  Deterministic in ``seed``.
    """
    cutoff = _check_cutoff(cutoff)
    floor = safe_cutoff(params)
    if cutoff < floor:
        raise DomainError(f"cutoff {cutoff} is below the safe cutoff {floor}")
    rng = random.Random(seed)
    exps = admissible_exponents(params, floor, cutoff)
    if not exps:
        return LaurentPoly.zero(cutoff)
    shapes = [(base, e1, e2) for base in ("x1", "x2inv")
              for e1 in range(1, shape.max_eta1 + 1)
              for e2 in range(1, shape.max_eta2 + 1)]
    npairs = rng.randint(0, shape.max_monomials // 2)
    chosen = rng.sample(shapes, npairs)
    terms = []
    for base, e1, e2 in chosen:
        k = rng.randint(1, min(shape.max_terms_per_coefficient, len(exps)))
        coef = {lam: complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for lam in rng.sample(exps, k)}
        c = NovikovScalar(coef, cutoff)
        mono = _highg_monomial(base, e1, e2)
        terms.append((mono, c))
        terms.append(((mono[2], mono[3], mono[0], mono[1]), c))
    return LaurentPoly(terms, cutoff)


def assemble(params: ModelParams, bulk: BulkParams, tail: LaurentPoly | None, cutoff) -> LaurentPoly:
    """``W = W_smooth^b + annulus term + tail`` modulo ``T**cutoff``."""
    params.validate()
    cutoff = _check_cutoff(cutoff)
    floor = safe_cutoff(params)
    if cutoff < floor:
        raise DomainError(f"cutoff {cutoff} is below the safe cutoff {floor}")
    if not params.bulk_filter().passes(bulk.b1):
        raise DomainError("b1 has exponents outside the monoid G")
    b1 = bulk.b1
    if b1.cutoff != cutoff:
        raise NovikovError(f"b1 cutoff {b1.cutoff} does not match {cutoff}")
    W = apply_smooth_bulk(build_w_smooth(params, cutoff), b1, standard_registry(params))
    W = W + annulus_term(params, bulk, cutoff)
    if tail is not None:
        if tail.cutoff < cutoff:
            raise NovikovError(f"tail known only modulo T^{tail.cutoff}, need T^{cutoff}")
        W = W + tail.truncate(cutoff)
    return W
