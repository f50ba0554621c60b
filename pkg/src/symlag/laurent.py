"""Sparse Laurent polynomials in ``(x1, x2, y1, y2)`` over Novikov scalars."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .novikov import NovikovError, NovikovScalar, as_fraction, nv_inv

VARIABLES = ("x1", "x2", "y1", "y2")
NVARS = 4

Monomial = tuple  # 4-tuple of ints


def monomial(x1: int = 0, x2: int = 0, y1: int = 0, y2: int = 0) -> Monomial:
    return (x1, x2, y1, y2)


def _var_index(v) -> int:
    if isinstance(v, str):
        return VARIABLES.index(v)
    if not 0 <= v < NVARS:
        raise IndexError(f"variable index {v} out of range")
    return v


def _swap_mono(m: Monomial) -> Monomial:
    return (m[2], m[3], m[0], m[1])


class LaurentPoly:
    """Immutable map Monomial -> NovikovScalar sharing one cutoff.

    Terms iterate in lexicographic monomial order so that serialization is
    deterministic.
    """

    __slots__ = ("_terms", "_cut")

    def __init__(self, terms: Mapping | Iterable = (), cutoff=1):
        self._cut = as_fraction(cutoff)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, NovikovScalar] = {}
        for mono, coef in items:
            mono = tuple(int(e) for e in mono)
            if len(mono) != NVARS:
                raise ValueError(f"monomial needs {NVARS} exponents, got {mono}")
            if not isinstance(coef, NovikovScalar):
                coef = NovikovScalar.constant(coef, self._cut)
            if coef.cutoff != self._cut:
                raise NovikovError(f"coefficient cutoff {coef.cutoff} != polynomial cutoff {self._cut}")
            acc[mono] = acc[mono] + coef if mono in acc else coef
        self._terms = {m: c for m, c in sorted(acc.items()) if not c.is_zero()}

    @classmethod
    def _raw(cls, terms: dict, cut: Fraction) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._cut = cut
        obj._terms = {m: c for m, c in sorted(terms.items()) if not c.is_zero()}
        return obj

    @classmethod
    def zero(cls, cutoff) -> "LaurentPoly":
        return cls({}, cutoff)

    @classmethod
    def term(cls, mono: Sequence[int], coef: NovikovScalar) -> "LaurentPoly":
        return cls({tuple(mono): coef}, coef.cutoff)

    @property
    def cutoff(self) -> Fraction:
        return self._cut

    @property
    def terms(self) -> dict[Monomial, NovikovScalar]:
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def coefficient(self, mono) -> NovikovScalar:
        return self._terms.get(tuple(mono), NovikovScalar.zero(self._cut))

    def is_zero(self) -> bool:
        return not self._terms

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "LaurentPoly"):
        if other._cut != self._cut:
            raise NovikovError(f"mismatched cutoffs {self._cut} and {other._cut}")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out[m] + c if m in out else c
        return LaurentPoly._raw(out, self._cut)

    def __neg__(self):
        return LaurentPoly._raw({m: -c for m, c in self._terms.items()}, self._cut)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, NovikovScalar):
            return LaurentPoly._raw({m: c * other for m, c in self._terms.items()}, self._cut)
        if isinstance(other, (int, float, complex)):
            return LaurentPoly._raw({m: c.scale(other) for m, c in self._terms.items()}, self._cut)
        self._check(other)
        out: dict[Monomial, NovikovScalar] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = (ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3])
                c = ca * cb
                out[m] = out[m] + c if m in out else c
        return LaurentPoly._raw(out, self._cut)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._cut == other._cut and self._terms == other._terms

    def __hash__(self):
        return hash((self._cut, tuple(self._terms.items())))

    def isclose(self, other: "LaurentPoly", tol: float = 1e-9) -> bool:
        return all(c.max_abs() < tol for _, c in (self - other))

    # -- structure --------------------------------------------------------

    def partial(self, v) -> "LaurentPoly":
        i = _var_index(v)
        out = {}
        for m, c in self._terms.items():
            n = m[i]
            if n == 0:
                continue
            mm = list(m)
            mm[i] -= 1
            out[tuple(mm)] = c.scale(n)
        return LaurentPoly._raw(out, self._cut)

    def swap_xy(self) -> "LaurentPoly":
        return LaurentPoly._raw({_swap_mono(m): c for m, c in self._terms.items()}, self._cut)

    def is_swap_symmetric(self) -> bool:
        return self.swap_xy() == self

    def diagonal(self) -> "LaurentPoly":
        """Substitute ``y1 := x1, y2 := x2``."""
        out: dict[Monomial, NovikovScalar] = {}
        for m, c in self._terms.items():
            k = (m[0] + m[2], m[1] + m[3], 0, 0)
            out[k] = out[k] + c if k in out else c
        return LaurentPoly._raw(out, self._cut)

    def truncate(self, cutoff) -> "LaurentPoly":
        cut = as_fraction(cutoff)
        return LaurentPoly._raw({m: c.truncate(cut) for m, c in self._terms.items()}, cut)

    def shift(self, amount) -> "LaurentPoly":
        """Multiply every coefficient by ``T**amount`` (negative divides)."""
        s = as_fraction(amount)
        return LaurentPoly._raw({m: c.shift(s) for m, c in self._terms.items()}, self._cut + s)

    def min_valuation(self) -> Fraction:
        return min((c.valuation() for c in self._terms.values()), default=self._cut)

    # -- evaluation -------------------------------------------------------

    def evaluate(self, point: Sequence[NovikovScalar]) -> NovikovScalar:
        """Substitution homomorphism at a point whose coordinates are units."""
        if len(point) != NVARS:
            raise ValueError(f"point needs {NVARS} coordinates")
        for i, p in enumerate(point):
            if p.cutoff != self._cut:
                raise NovikovError(f"coordinate {VARIABLES[i]} has cutoff {p.cutoff}, expected {self._cut}")
            if p.valuation() != 0:
                raise NovikovError(f"coordinate {VARIABLES[i]} is not a unit")
        # each negative power goes through a single inversion per coordinate
        cache: list[dict[int, NovikovScalar]] = [{} for _ in range(NVARS)]
        inverses: list[NovikovScalar | None] = [None] * NVARS
        one = NovikovScalar.constant(1.0, self._cut)

        def power(i: int, n: int) -> NovikovScalar:
            if n == 0:
                return one
            got = cache[i].get(n)
            if got is not None:
                return got
            if n < 0:
                if inverses[i] is None:
                    inverses[i] = nv_inv(point[i])
                base, k = inverses[i], -n
            else:
                base, k = point[i], n
            step = 1 if n > 0 else -1
            prev = cache[i].get(n - step)
            val = prev * base if prev is not None else base ** k
            cache[i][n] = val
            return val

        total = NovikovScalar.zero(self._cut)
        for m, c in self._terms.items():
            acc = c
            for i, n in enumerate(m):
                if n:
                    # walk powers outward from zero so the cache chains
                    step = 1 if n > 0 else -1
                    for j in range(step, n + step, step):
                        power(i, j)
                    acc = acc * power(i, n)
            total = total + acc
        return total

    # -- serialization ----------------------------------------------------

    def to_json(self) -> list:
        return [{"exponents": list(m), "coefficient": c.to_json()} for m, c in self._terms.items()]

    @classmethod
    def from_json(cls, doc: list, cutoff=None) -> "LaurentPoly":
        terms = [(tuple(rec["exponents"]), NovikovScalar.from_json(rec["coefficient"])) for rec in doc]
        if cutoff is None:
            if not terms:
                raise ValueError("cutoff required for an empty polynomial")
            cutoff = terms[0][1].cutoff
        return cls(terms, cutoff)

    def __repr__(self):
        if not self._terms:
            return f"LaurentPoly(0 mod T^{self._cut})"
        parts = []
        for m, c in self._terms.items():
            mono = "*".join(f"{v}^{e}" if e != 1 else v for v, e in zip(VARIABLES, m) if e) or "1"
            parts.append(f"[{c!r}]*{mono}")
        return "LaurentPoly(" + " + ".join(parts) + ")"


def lp_mul(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f * g


def lp_partial(f: LaurentPoly, v) -> LaurentPoly:
    return f.partial(v)


def lp_eval(f: LaurentPoly, point: Sequence[NovikovScalar]) -> NovikovScalar:
    return f.evaluate(point)


def lp_swap_xy(f: LaurentPoly) -> LaurentPoly:
    return f.swap_xy()
