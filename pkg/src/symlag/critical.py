"""Critical points of the bulk-deformed potential on the diagonal ``x = y``.

The symmetric ansatz ``y1 = x1, y2 = x2`` reduces the four critical-point
equations to two:

    E1 = T^-a  d/dx2 W |_(y=x)
    E2 = T^-B  d/dx1 W |_(y=x)

whose order-zero parts are ``1 - x2^-2`` and ``1 - 2 s x1^-3 x2`` (``s`` the
annulus sign).  Solutions are lifted along the exponent monoid ``G`` with
``x1`` frozen at its leading value, solving for the corrections to ``x2``
and to the bulk parameter ``b1``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .laurent import LaurentPoly
from .novikov import NovikovScalar, as_fraction, format_fraction, monoid_elements, nv_exp
from .potential import (
    BulkParams,
    DomainError,
    HypothesisError,
    ModelParams,
    annulus_term,
    build_w_smooth,
    safe_cutoff,
    standard_registry,
)

RESIDUAL_TOL = 1e-9
DISTINCT_TOL = 1e-6


class LiftError(RuntimeError):
    """The order-by-order lift could not proceed."""


@dataclass(frozen=True)
class ReducedSystem:
    E1: LaurentPoly
    E2: LaurentPoly
    normalizers: tuple[Fraction, Fraction]
    b1: NovikovScalar

    @property
    def cutoff(self) -> Fraction:
        return self.E1.cutoff

    def evaluate(self, x1: NovikovScalar, x2: NovikovScalar) -> tuple[NovikovScalar, NovikovScalar]:
        one = NovikovScalar.constant(1.0, x1.cutoff)
        point = (x1, x2, one, one)
        return self.E1.evaluate(point), self.E2.evaluate(point)


def reduce_symmetric(W: LaurentPoly, params: ModelParams, b1: NovikovScalar) -> ReducedSystem:
    """Restrict the x-partials of a swap-symmetric ``W`` to the diagonal."""
    if not W.is_swap_symmetric():
        raise DomainError("W is not symmetric under x <-> y")
    cutoff = W.cutoff - params.B
    if cutoff <= 0:
        raise DomainError(f"W modulo T^{W.cutoff} carries no information after dividing by T^{params.B}")
    E1 = W.partial("x2").diagonal().shift(-params.a).truncate(cutoff)
    E2 = W.partial("x1").diagonal().shift(-params.B)
    return ReducedSystem(E1, E2, (params.a, params.B), b1)


def solve_leading(params: ModelParams) -> list[tuple[complex, complex]]:
    """The six roots ``(x1, x2)`` of ``x2**2 = 1, x1**3 = 2 s x2``.

    Ordered by ``x2`` and then by the argument of ``x1``.
    """
    roots = []
    for x2 in (-1.0, 1.0):
        rhs = 2.0 * params.sign_annulus * x2
        r = abs(rhs) ** (1.0 / 3.0)
        phi = 0.0 if rhs > 0 else math.pi
        for k in range(3):
            x1 = cmath.rect(r, (phi + 2 * math.pi * k) / 3)
            roots.append((x1, complex(x2)))
    roots.sort(key=lambda p: (p[1].real, cmath.phase(p[0])))
    for x1, x2 in roots:
        res = max(abs(1 - x2 ** -2), abs(1 - 2 * params.sign_annulus * x2 / x1 ** 3))
        if res >= 1e-10:
            raise LiftError(f"leading root ({x1}, {x2}) has residual {res}")
    return roots


@dataclass(frozen=True)
class CriticalSolution:
    x1: NovikovScalar
    x2: NovikovScalar
    b1: NovikovScalar
    residual_valuation: Fraction
    lifted_to: Fraction
    equation_valuations: tuple[Fraction, Fraction] = field(default=(Fraction(0), Fraction(0)))

    @classmethod
    def unlifted(cls, start: tuple[complex, complex], cutoff) -> "CriticalSolution":
        cutoff = as_fraction(cutoff)
        return cls(NovikovScalar.constant(start[0], cutoff), NovikovScalar.constant(start[1], cutoff),
                   NovikovScalar.zero(cutoff), Fraction(0), Fraction(0))

    @property
    def leading(self) -> tuple[complex, complex]:
        return self.x1.constant_term(), self.x2.constant_term()

    def has_unit_coordinates(self) -> bool:
        return self.x1.valuation() == 0 and self.x2.valuation() == 0

    def to_json(self) -> dict:
        return {
            "x1": self.x1.to_json(),
            "x2": self.x2.to_json(),
            "b1": self.b1.to_json(),
            "residual_valuation": format_fraction(self.residual_valuation),
            "lifted_to": format_fraction(self.lifted_to),
            "equation_valuations": [format_fraction(v) for v in self.equation_valuations],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CriticalSolution":
        return cls(
            NovikovScalar.from_json(doc["x1"]),
            NovikovScalar.from_json(doc["x2"]),
            NovikovScalar.from_json(doc["b1"]),
            as_fraction(doc["residual_valuation"]),
            as_fraction(doc["lifted_to"]),
            tuple(as_fraction(v) for v in doc["equation_valuations"]),
        )


def _leading_value(E: LaurentPoly, x1: complex, x2: complex) -> complex:
    total = 0j
    for (e1, e2, _, _), c in E:
        c0 = c.constant_term()
        if c0:
            total += c0 * x1 ** e1 * x2 ** e2
    return total


class _Lifter:
    """Holds the fixed data of one lift; one instance per starting root.

    Reduction is linear in ``W``, so the smooth part is split by its
    ``D_{S1}`` intersection ``k`` and reduced once; each step then only
    rescales the pieces by ``exp(k * b1)``.
    """

    def __init__(self, params: ModelParams, tail: LaurentPoly | None, cutoff: Fraction):
        self.params = params
        self.cutoff = cutoff
        work = max(cutoff + params.B, safe_cutoff(params))
        if tail is not None:
            if not tail.is_swap_symmetric():
                raise DomainError("tail is not symmetric under x <-> y")
            if tail.cutoff < work:
                raise DomainError(f"tail known modulo T^{tail.cutoff}; lifting to T^{cutoff} "
                                  f"needs T^{work}")
            tail = tail.truncate(work)
        registry = standard_registry(params)
        ds1 = {c.boundary_monomial: c.ds1_intersection for c in registry}
        smooth = build_w_smooth(params, work)
        pieces: dict[int, list] = {}
        for mono, coef in smooth:
            pieces.setdefault(ds1[mono], []).append((mono, coef))
        static = LaurentPoly(pieces.pop(0, []), work)
        static = static + annulus_term(params, BulkParams.default(params, work), work)
        if tail is not None:
            static = static + tail
        zero = NovikovScalar.zero(cutoff)
        self.static = self._reduce(static, zero)
        self.weighted = {k: self._reduce(LaurentPoly(v, work), zero) for k, v in sorted(pieces.items())}

    def _reduce(self, W: LaurentPoly, b1: NovikovScalar) -> tuple[LaurentPoly, LaurentPoly]:
        red = reduce_symmetric(W, self.params, b1)
        return red.E1.truncate(self.cutoff), red.E2.truncate(self.cutoff)

    def system(self, b1: NovikovScalar) -> ReducedSystem:
        E1, E2 = self.static
        e = nv_exp(b1)
        for k, (F1, F2) in self.weighted.items():
            ek = e ** k
            E1, E2 = E1 + F1 * ek, E2 + F2 * ek
        return ReducedSystem(E1, E2, (self.params.a, self.params.B), b1)

    def jacobian(self, x1: complex, x2: complex) -> np.ndarray:
        """Order-zero Jacobian of (E1, E2) in the unknowns (x2, b1)."""
        red = self.system(NovikovScalar.zero(self.cutoff))
        db1 = [sum(k * _leading_value(F[i], x1, x2) for k, F in self.weighted.items()) for i in (0, 1)]
        return np.array([
            [_leading_value(red.E1.partial("x2"), x1, x2), db1[0]],
            [_leading_value(red.E2.partial("x2"), x1, x2), db1[1]],
        ])

    def residuals(self, x1, x2, b1):
        return self.system(b1).evaluate(x1, x2)

    def run(self, start: tuple[complex, complex]) -> CriticalSolution:
        cutoff = self.cutoff
        x1 = NovikovScalar.constant(start[0], cutoff)
        x2 = NovikovScalar.constant(start[1], cutoff)
        b1 = NovikovScalar.zero(cutoff)
        J = self.jacobian(*start)
        if abs(np.linalg.det(J)) < 1e-12:
            raise LiftError(f"singular leading Jacobian at {start}: {J.tolist()}")
        steps = [g for g in monoid_elements(self.params.monoid(), cutoff) if g > 0]
        for g in steps:
            r1, r2 = self.residuals(x1, x2, b1)
            for name, r in (("E1", r1), ("E2", r2)):
                v = r.valuation(RESIDUAL_TOL)
                if v < g:
                    raise LiftError(f"{name} residual at T^{v} below step T^{g}")
            rhs = -np.array([r1.coefficient(g), r2.coefficient(g)])
            dx2, db1 = np.linalg.solve(J, rhs)
            x2 = x2 + NovikovScalar.monomial(g, cutoff, complex(dx2))
            b1 = b1 + NovikovScalar.monomial(g, cutoff, complex(db1))
        r1, r2 = self.residuals(x1, x2, b1)
        v1, v2 = r1.valuation(RESIDUAL_TOL), r2.valuation(RESIDUAL_TOL)
        res = min(v1, v2)
        if res < cutoff:
            raise LiftError(f"residual valuation {res} below target {cutoff}")
        return CriticalSolution(x1, x2, b1, res, cutoff, (v1, v2))


def lift(start: tuple[complex, complex], params: ModelParams, tail: LaurentPoly | None,
         cutoff) -> CriticalSolution:
    """Lift a leading-order root until both reduced equations vanish mod ``T**cutoff``.

    ``cutoff`` refers to the normalized equations; ``W`` is assembled
    internally modulo ``T**(cutoff + B)``.  A zero cutoff returns the start
    point unchanged.
    """
    params.validate()
    cutoff = as_fraction(cutoff)
    if cutoff < 0:
        raise DomainError("cutoff must be nonnegative")
    if cutoff == 0:
        return CriticalSolution.unlifted(start, 1)
    return _Lifter(params, tail, cutoff).run(start)


def verify_critical(W: LaurentPoly, sol: CriticalSolution, params: ModelParams) -> Fraction:
    """Minimum normalized valuation of the four partials of ``W`` at ``(x, x)``.

    Each partial is divided by its normalizer (``T^B`` for ``x1, y1`` and
    ``T^a`` for ``x2, y2``) and evaluated modulo the precision that leaves.
    """
    if not sol.has_unit_coordinates():
        raise DomainError("critical-point coordinates must be units")
    norms = {"x1": params.B, "x2": params.a, "y1": params.B, "y2": params.a}
    worst = None
    for v, n in norms.items():
        P = W.partial(v).shift(-n)
        level = P.cutoff
        x1, x2 = sol.x1.with_cutoff(level), sol.x2.with_cutoff(level)
        val = P.evaluate((x1, x2, x1, x2)).valuation(RESIDUAL_TOL)
        worst = val if worst is None else min(worst, val)
    return worst


def distinct_count(solutions: Sequence[CriticalSolution], tol: float = DISTINCT_TOL) -> int:
    reps: list[tuple[complex, complex]] = []
    for s in solutions:
        p = s.leading
        if all(math.hypot(abs(p[0] - q[0]), abs(p[1] - q[1])) > tol for q in reps):
            reps.append(p)
    return len(reps)


HYPOTHESES = ("0 < a < B - C", "B - a - C > 0")


@dataclass
class Verdict:
    certificate: bool
    distinct_count: int
    level: Fraction
    hypotheses: tuple[str, ...]
    diagnostics: list[str]

    def to_json(self) -> dict:
        return {
            "certificate": self.certificate,
            "verdict": "non-displaceability certificate" if self.certificate else "no certificate",
            "distinct_count": self.distinct_count,
            "level": format_fraction(self.level),
            "hypotheses_checked": list(self.hypotheses),
            "diagnostics": list(self.diagnostics),
        }


def verdict(solutions: Sequence[CriticalSolution], params: ModelParams, level=None) -> Verdict:
    """Certificate iff some solution has unit coordinates and residual >= level."""
    diagnostics: list[str] = []
    if level is None:
        level = max((s.lifted_to for s in solutions), default=Fraction(0))
    level = as_fraction(level)
    try:
        params.validate()
    except HypothesisError as exc:
        return Verdict(False, 0, level, HYPOTHESES, [str(exc)])
    good = []
    for i, s in enumerate(solutions):
        if not s.has_unit_coordinates():
            diagnostics.append(f"solution {i}: coordinates are not units")
        elif s.residual_valuation < level:
            names = ("E1", "E2")
            j = min(range(2), key=lambda k: s.equation_valuations[k])
            diagnostics.append(f"solution {i}: residual valuation {s.residual_valuation} < {level}; "
                               f"worst equation {names[j]} at T^{s.equation_valuations[j]}")
        else:
            good.append(s)
    if not solutions:
        diagnostics.append("no solutions supplied")
    return Verdict(bool(good), distinct_count(good), level, HYPOTHESES, diagnostics)
