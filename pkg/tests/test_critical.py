import cmath
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from oracles import leading_roots
from symlag.critical import (
    CriticalSolution,
    LiftError,
    distinct_count,
    lift,
    reduce_symmetric,
    solve_leading,
    verdict,
    verify_critical,
)
from symlag.laurent import LaurentPoly
from symlag.novikov import NovikovScalar
from symlag.potential import (
    BulkParams,
    DomainError,
    HypothesisError,
    ModelParams,
    assemble,
    sample_admissible_tail,
)

P = ModelParams(5, 1, 2)
P2 = ModelParams(F(7, 2), F(1, 2), 1)


def ns(terms, cutoff):
    return NovikovScalar(terms, cutoff)


def assembled(params, sol, tail, level):
    bulk = BulkParams.default(params, level, b1=sol.b1.with_cutoff(level))
    return assemble(params, bulk, tail, level)


@pytest.fixture(scope="module")
def lifted():
    return [lift(r, P, None, 6) for r in solve_leading(P)]


class TestReduce:
    def test_example_system(self):
        W = assemble(P, BulkParams.default(P, 11), None, 11)
        red = reduce_symmetric(W, P, NovikovScalar.zero(6))
        E1 = LaurentPoly([((0, -2, 0, 0), ns({0: -1}, 6)), ((0, 0, 0, 0), ns({0: 1}, 6)),
                          ((-2, 0, 0, 0), ns({3: 1}, 6))], 6)
        E2 = LaurentPoly([((0, 0, 0, 0), ns({0: 1}, 6)), ((-2, 0, 0, 0), ns({1: -1}, 6)),
                          ((-3, 1, 0, 0), ns({0: -2}, 6))], 6)
        assert red.E1 == E1
        assert red.E2 == E2
        assert red.normalizers == (2, 5)

    def test_leading_parts(self):
        W = assemble(P, BulkParams.default(P, 11), None, 11)
        red = reduce_symmetric(W, P, NovikovScalar.zero(6))
        lead1 = {m: c.constant_term() for m, c in red.E1 if c.constant_term()}
        lead2 = {m: c.constant_term() for m, c in red.E2 if c.constant_term()}
        assert lead1 == {(0, -2, 0, 0): -1, (0, 0, 0, 0): 1}
        assert lead2 == {(0, 0, 0, 0): 1, (-3, 1, 0, 0): -2}

    def test_asymmetric_rejected(self):
        W = LaurentPoly([((1, 0, 0, 0), ns({0: 1}, 8))], 8)
        with pytest.raises(DomainError):
            reduce_symmetric(W, P, NovikovScalar.zero(3))


class TestLeading:
    def test_six_roots(self):
        roots = solve_leading(P)
        assert len(roots) == 6
        for x1, x2 in roots:
            assert x2 in (1, -1)
            assert abs(abs(x1 ** -3) - 0.5) < 1e-12
            assert abs(1 - x2 ** -2) < 1e-10 and abs(1 - 2 * x2 / x1 ** 3) < 1e-10

    def test_real_cube_root(self):
        assert any(abs(x1 - 2 ** (1 / 3)) < 1e-12 and x2 == 1 for x1, x2 in solve_leading(P))

    def test_order(self):
        roots = solve_leading(P)
        keys = [(x2.real, cmath.phase(x1)) for x1, x2 in roots]
        assert keys == sorted(keys)

    @pytest.mark.parametrize("sign", [1, -1])
    def test_matches_companion_matrix_roots(self, sign):
        got = solve_leading(ModelParams(5, 1, 2, sign))
        want = leading_roots(sign)
        assert len(want) == 6
        for w in want:
            assert min(abs(w[0] - g[0]) + abs(w[1] - g[1]) for g in got) < 1e-12


class TestLift:
    def test_example_root(self, lifted):
        start = (complex(2 ** (1 / 3)), 1 + 0j)
        sol = lift(start, P, None, 6)
        assert sol.residual_valuation >= 6
        assert not sol.b1.is_zero() and sol.b1.valuation() == 1
        assert sol.lifted_to == 6

    def test_zero_cutoff_is_identity(self):
        start = solve_leading(P)[0]
        sol = lift(start, P, None, 0)
        assert sol.leading == start
        assert sol.residual_valuation == 0
        assert sol.b1.is_zero()

    def test_all_roots_verify(self, lifted):
        for sol in lifted:
            W = assembled(P, sol, None, 11)
            assert verify_critical(W, sol, P) >= 6
            assert sol.has_unit_coordinates()
            assert P.bulk_filter().passes(sol.b1)
            assert sol.x1.terms == {0: sol.leading[0]}

    def test_corrections_live_in_the_monoid(self, lifted):
        G = P2.monoid()
        tail = sample_admissible_tail(P2, 10, 5)
        for r in solve_leading(P2):
            sol = lift(r, P2, tail, F(13, 2))
            for e in list(sol.x2.terms) + list(sol.b1.terms):
                assert G.contains(e)

    def test_residuals_agree_with_fresh_substitution(self, lifted):
        # reduced equations of a freshly assembled W versus the partials of W itself
        tail = sample_admissible_tail(P2, 10, 11)
        for r in solve_leading(P2):
            sol = lift(r, P2, tail, F(13, 2))
            W = assembled(P2, sol, tail, 10)
            red = reduce_symmetric(W, P2, sol.b1)
            x1, x2 = sol.x1.with_cutoff(red.cutoff), sol.x2.with_cutoff(red.cutoff)
            R1, R2 = red.evaluate(x1, x2)
            pt = (sol.x1.with_cutoff(8), sol.x2.with_cutoff(8)) * 2
            D1 = W.partial("x2").shift(-P2.a).truncate(8).evaluate(pt).truncate(red.cutoff)
            D2 = W.partial("x1").shift(-P2.B).evaluate(
                (sol.x1.with_cutoff(F(13, 2)), sol.x2.with_cutoff(F(13, 2))) * 2)
            assert R1.isclose(D1) and R2.isclose(D2)
            assert R1.valuation(1e-9) >= F(13, 2) and R2.valuation(1e-9) >= F(13, 2)

    def test_unlifted_start_verifies_to_one(self):
        sol = CriticalSolution.unlifted(solve_leading(P)[3], 6)
        W = assemble(P, BulkParams.default(P, 11), None, 11)
        assert verify_critical(W, sol, P) == 1

    def test_perturbed_start_verifies_to_zero(self):
        x1, x2 = solve_leading(P)[3]
        sol = CriticalSolution.unlifted((x1, x2 + 0.1), 6)
        W = assemble(P, BulkParams.default(P, 11), None, 11)
        assert verify_critical(W, sol, P) == 0

    def test_hypothesis_gating(self):
        with pytest.raises(HypothesisError) as info:
            lift(solve_leading(P)[0], ModelParams(5, 1, 4), None, 6)
        assert info.value.inequality == "0 < a < B - C"

    def test_short_tail_rejected(self):
        tail = sample_admissible_tail(P2, 6, 1)
        with pytest.raises(DomainError):
            lift(solve_leading(P2)[0], P2, tail, F(13, 2))

    def test_non_root_start_fails(self):
        with pytest.raises(LiftError):
            lift((1.0 + 0j, 1.0 + 0j), P, None, 6)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(0, 5))
    def test_random_tails_lift(self, seed, k):
        tail = sample_admissible_tail(P2, 10, seed)
        sol = lift(solve_leading(P2)[k], P2, tail, F(13, 2))
        assert sol.residual_valuation >= F(13, 2)
        assert P2.bulk_filter().passes(sol.b1)

    def test_negative_sign(self):
        p = ModelParams(5, 1, 2, -1)
        sols = [lift(r, p, None, 6) for r in solve_leading(p)]
        assert distinct_count(sols) == 6
        assert all(verify_critical(assembled(p, s, None, 11), s, p) >= 6 for s in sols)

    def test_serialization(self, lifted):
        s = lifted[2]
        assert CriticalSolution.from_json(s.to_json()) == s


class TestVerdict:
    def test_certificate(self, lifted):
        v = verdict(lifted, P, 6)
        assert v.certificate and v.distinct_count == 6
        assert v.to_json()["verdict"] == "non-displaceability certificate"

    def test_empty(self):
        v = verdict([], P, 6)
        assert not v.certificate

    def test_level_too_high(self, lifted):
        v = verdict(lifted, P, 7)
        assert not v.certificate
        assert any("worst equation" in d for d in v.diagnostics)

    def test_invalid_params_never_certify(self, lifted):
        v = verdict(lifted, ModelParams(5, 1, 4), 6)
        assert not v.certificate
        assert "0 < a < B - C" in v.diagnostics[0]

    def test_distinctness_tolerance(self, lifted):
        assert distinct_count(lifted + lifted) == 6
