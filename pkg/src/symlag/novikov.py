"""Truncated Novikov-ring scalars and the exponent monoid.

A :class:`NovikovScalar` is a finite sum ``sum_i c_i T**l_i`` taken modulo
``T**cutoff``.  Exponents are exact rationals, coefficients are complex
doubles.  Internally the exponents live on a grid ``k / den`` so that the
convolution in a product only adds machine integers; the public surface
always speaks :class:`fractions.Fraction`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

PRUNE_TOL = 1e-12


class NovikovError(ValueError):
    """Raised on precision mismatches and non-invertible inputs."""


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact Fraction.

    Floats are rejected: every exponent in this package is exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_fraction(value: Fraction) -> str:
    value = as_fraction(value)
    return f"{value.numerator}/{value.denominator}"


@lru_cache(maxsize=4096)
def _ceil_grid(cutoff: Fraction, den: int) -> int:
    # exponent k/den survives iff k < ceil(cutoff * den)
    x = cutoff * den
    return -((-x.numerator) // x.denominator)


class NovikovScalar:
    """An immutable element of the Novikov ring modulo ``T**cutoff``."""

    __slots__ = ("_den", "_num", "_cut", "_kmax", "tol")

    def __init__(self, terms: Mapping | None = None, cutoff=1, tol: float = PRUNE_TOL):
        cut = as_fraction(cutoff)
        if cut <= 0:
            raise NovikovError("cutoff must be positive")
        acc: dict[Fraction, complex] = {}
        for exp, coef in (terms or {}).items():
            e = as_fraction(exp)
            if e < 0:
                raise NovikovError(f"negative exponent {e}")
            if e >= cut:
                continue
            acc[e] = acc.get(e, 0j) + complex(coef)
        den = 1
        for e in acc:
            den = den * e.denominator // math.gcd(den, e.denominator)
        num = {int(e * den): c for e, c in acc.items()}
        self._set(den, num, cut, tol)

    @classmethod
    def _raw(cls, den: int, num: dict[int, complex], cut: Fraction, tol: float) -> "NovikovScalar":
        obj = cls.__new__(cls)
        obj._set(den, num, cut, tol)
        return obj

    def _set(self, den, num, cut, tol):
        kmax = _ceil_grid(cut, den)
        kept = {k: c for k, c in num.items() if k < kmax and abs(c) >= tol}
        # reduce the grid to the coarsest one holding every exponent
        g = den
        for k in kept:
            g = math.gcd(g, k)
            if g == 1:
                break
        if g > 1:
            den //= g
            kept = {k // g: c for k, c in kept.items()}
            kmax = _ceil_grid(cut, den)
        if not kept:
            den, kmax = 1, _ceil_grid(cut, 1)
        self._den = den
        self._num = dict(sorted(kept.items()))
        self._cut = cut
        self._kmax = kmax
        self.tol = tol

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, cutoff) -> "NovikovScalar":
        return cls({}, cutoff)

    @classmethod
    def constant(cls, value: complex, cutoff) -> "NovikovScalar":
        return cls({0: value}, cutoff)

    @classmethod
    def monomial(cls, exponent, cutoff, coefficient: complex = 1.0) -> "NovikovScalar":
        """``coefficient * T**exponent``."""
        return cls({as_fraction(exponent): coefficient}, cutoff)

    # -- inspection -------------------------------------------------------

    @property
    def cutoff(self) -> Fraction:
        return self._cut

    @property
    def terms(self) -> dict[Fraction, complex]:
        """Exponent -> coefficient, in increasing exponent order."""
        return {Fraction(k, self._den): c for k, c in self._num.items()}

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self._num)

    def is_zero(self) -> bool:
        return not self._num

    def coefficient(self, exponent) -> complex:
        e = as_fraction(exponent) * self._den
        if e.denominator != 1:
            return 0j
        return self._num.get(e.numerator, 0j)

    def valuation(self, tol: float | None = None) -> Fraction:
        """Smallest surviving exponent; the cutoff for the zero element.

        With ``tol`` given, coefficients of magnitude below ``tol`` are
        ignored as well.
        """
        for k, c in self._num.items():
            if tol is None or abs(c) >= tol:
                return Fraction(k, self._den)
        return self._cut

    def leading_coefficient(self) -> complex:
        for c in self._num.values():
            return c
        return 0j

    def constant_term(self) -> complex:
        return self._num.get(0, 0j)

    def max_abs(self) -> float:
        return max((abs(c) for c in self._num.values()), default=0.0)

    # -- precision management ---------------------------------------------

    def truncate(self, cutoff) -> "NovikovScalar":
        """Reduce modulo a lower power of T."""
        cut = as_fraction(cutoff)
        if cut > self._cut:
            raise NovikovError(f"cannot truncate from {self._cut} up to {cut}")
        return NovikovScalar._raw(self._den, self._num, cut, self.tol)

    def with_cutoff(self, cutoff) -> "NovikovScalar":
        """Reinterpret the stored finite sum modulo a different power of T.

        Raising the cutoff asserts the stored sum is exact; use it only for
        values chosen as finite sums (lifted coordinates, bulk parameters).
        """
        return NovikovScalar._raw(self._den, self._num, as_fraction(cutoff), self.tol)

    def shift(self, amount) -> "NovikovScalar":
        """Multiply by ``T**amount``; the cutoff moves with the exponents."""
        s = as_fraction(amount)
        new_cut = self._cut + s
        if new_cut <= 0:
            raise NovikovError("shift leaves no precision")
        den = self._den * s.denominator // math.gcd(self._den, s.denominator)
        f = den // self._den
        off = int(s * den)
        num = {k * f + off: c for k, c in self._num.items()}
        if num and min(num) < 0:
            raise NovikovError(f"shift by {s} produces a negative exponent")
        return NovikovScalar._raw(den, num, new_cut, self.tol)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "NovikovScalar") -> None:
        if not isinstance(other, NovikovScalar):
            raise TypeError(f"expected NovikovScalar, got {type(other).__name__}")
        if other._cut != self._cut:
            raise NovikovError(f"mismatched cutoffs {self._cut} and {other._cut}")

    def _common(self, other: "NovikovScalar"):
        if self._den == other._den:
            return self._den, self._num, other._num
        den = self._den * other._den // math.gcd(self._den, other._den)
        fa, fb = den // self._den, den // other._den
        return (den, {k * fa: c for k, c in self._num.items()},
                {k * fb: c for k, c in other._num.items()})

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = NovikovScalar.constant(other, self._cut)
        self._check(other)
        den, a, b = self._common(other)
        out = dict(a)
        for k, c in b.items():
            out[k] = out.get(k, 0j) + c
        return NovikovScalar._raw(den, out, self._cut, self.tol)

    __radd__ = __add__

    def __neg__(self):
        return NovikovScalar._raw(self._den, {k: -c for k, c in self._num.items()}, self._cut, self.tol)

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = NovikovScalar.constant(other, self._cut)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor: complex) -> "NovikovScalar":
        return NovikovScalar._raw(self._den, {k: c * factor for k, c in self._num.items()},
                                  self._cut, self.tol)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        self._check(other)
        den, a, b = self._common(other)
        kmax = _ceil_grid(self._cut, den)
        if len(a) > len(b):
            a, b = b, a
        out: dict[int, complex] = {}
        get = out.get
        for i, ci in a.items():
            lim = kmax - i
            for j, cj in b.items():
                if j >= lim:
                    break
                k = i + j
                out[k] = get(k, 0j) + ci * cj
        return NovikovScalar._raw(den, out, self._cut, self.tol)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "NovikovScalar":
        if not isinstance(n, int):
            raise TypeError("integer powers only")
        if n < 0:
            return nv_inv(self) ** (-n)
        result = NovikovScalar.constant(1.0, self._cut)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison and display -------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, NovikovScalar):
            return NotImplemented
        return self._cut == other._cut and self._den == other._den and self._num == other._num

    def __hash__(self):
        return hash((self._cut, self._den, tuple(self._num.items())))

    def isclose(self, other: "NovikovScalar", tol: float = 1e-9) -> bool:
        """Coefficientwise agreement within ``tol`` (cutoffs must match)."""
        return (self - other).max_abs() < tol

    def __repr__(self):
        if not self._num:
            return f"NovikovScalar(0 mod T^{self._cut})"
        parts = []
        for e, c in self.terms.items():
            coef = f"{c.real:.6g}" if c.imag == 0 else f"({c.real:.6g}{c.imag:+.6g}j)"
            parts.append(coef if e == 0 else f"{coef}*T^{e}")
        return f"NovikovScalar({' + '.join(parts)} mod T^{self._cut})"

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "cutoff": format_fraction(self._cut),
            "terms": [{"exp": format_fraction(e), "re": c.real, "im": c.imag}
                      for e, c in self.terms.items()],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "NovikovScalar":
        terms: dict[Fraction, complex] = {}
        for rec in doc["terms"]:
            e = as_fraction(rec["exp"])
            terms[e] = terms.get(e, 0j) + complex(float(rec["re"]), float(rec["im"]))
        return cls(terms, as_fraction(doc["cutoff"]))


# -- functional operation names --------------------------------------------

def nv_add(x: NovikovScalar, y: NovikovScalar) -> NovikovScalar:
    return x + y


def nv_mul(x: NovikovScalar, y: NovikovScalar) -> NovikovScalar:
    return x * y


def valuation(x: NovikovScalar) -> Fraction:
    return x.valuation()


def nv_inv(u: NovikovScalar, tol: float = 1e-12) -> NovikovScalar:
    """Inverse of a unit via the geometric series ``1/(c0(1+y))``."""
    c0 = u.constant_term()
    if u.valuation() != 0 or abs(c0) <= tol:
        raise NovikovError(f"not a unit: valuation {u.valuation()}, leading {c0!r}")
    y = u.scale(1 / c0) - 1
    if y.is_zero():
        return NovikovScalar.constant(1 / c0, u.cutoff)
    # y has positive valuation, so (-y)**k vanishes once k * v(y) >= cutoff
    total = NovikovScalar.constant(1.0, u.cutoff)
    power = total
    neg_y = -y
    while True:
        power = power * neg_y
        if power.is_zero():
            break
        total = total + power
    return total.scale(1 / c0)


def nv_exp(x: NovikovScalar) -> NovikovScalar:
    """``exp(x)`` for ``x`` in the maximal ideal (or zero)."""
    if abs(x.constant_term()) > 0:
        raise NovikovError("exp is only defined on positive-valuation elements")
    total = NovikovScalar.constant(1.0, x.cutoff)
    term = total
    k = 0
    while True:
        k += 1
        term = (term * x).scale(1.0 / k)
        if term.is_zero():
            break
        total = total + term
    return total


# -- exponent monoid --------------------------------------------------------

@dataclass(frozen=True)
class ExponentMonoid:
    """Additive submonoid of the nonnegative rationals with given generators."""

    generators: tuple[Fraction, ...]

    def __init__(self, generators: Iterable):
        gens = tuple(sorted({as_fraction(g) for g in generators}))
        if not gens:
            raise ValueError("a monoid needs at least one generator")
        if any(g <= 0 for g in gens):
            raise ValueError("monoid generators must be strictly positive")
        object.__setattr__(self, "generators", gens)

    def elements(self, bound) -> list[Fraction]:
        return monoid_elements(self, bound)

    def contains(self, value) -> bool:
        return _member(as_fraction(value), self.generators)


@lru_cache(maxsize=65536)
def _member(x: Fraction, gens: tuple[Fraction, ...]) -> bool:
    if x == 0:
        return True
    if x < 0:
        return False
    # peel off the largest generator first; every representation is reached
    # by choosing how many copies of gens[-1] to use
    if len(gens) == 1:
        q = x / gens[0]
        return q.denominator == 1
    g = gens[-1]
    rest = gens[:-1]
    n = 0
    while n * g <= x:
        if _member(x - n * g, rest):
            return True
        n += 1
    return False


def monoid_elements(m: ExponentMonoid, bound) -> list[Fraction]:
    """All monoid elements in ``[0, bound)``, ascending."""
    bound = as_fraction(bound)
    if bound <= 0:
        raise ValueError("bound must be positive")
    found = {Fraction(0)}
    frontier = [Fraction(0)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in m.generators:
                y = x + g
                if y < bound and y not in found:
                    found.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(found)


@dataclass(frozen=True)
class AdmissibilityFilter:
    """Membership in the intersection of the shifted monoids ``s + G``."""

    monoid: ExponentMonoid
    shifts: tuple[Fraction, ...] = field(default=(Fraction(0),))

    def __post_init__(self):
        object.__setattr__(self, "shifts", tuple(as_fraction(s) for s in self.shifts))

    def admits(self, exponent) -> bool:
        e = as_fraction(exponent)
        return all(self.monoid.contains(e - s) for s in self.shifts)

    def passes(self, x: NovikovScalar) -> bool:
        return all(self.admits(e) for e in x.terms)
