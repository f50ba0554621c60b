import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import fourier_green, fourier_slit_extent
from symlag.conformal import (
    AnnulusConfig,
    beta_from_point,
    greens_eval,
    greens_period,
    harmonic_measures,
    nonexistence_margin,
    slit_length,
    slit_radius,
)
from symlag.potential import DomainError

CFG = AnnulusConfig(0.25, 0.5, 0.6)
TOL = 1e-10


@st.composite
def annuli(draw, max_r1=0.9):
    r1 = draw(st.floats(0.05, max_r1))
    t = draw(st.floats(0.02, 0.98))
    phase = draw(st.floats(-math.pi, math.pi))
    return AnnulusConfig(r1, cmath.rect(r1 + t * (1 - r1), phase))


class TestMeasures:
    def test_boundaries(self):
        assert harmonic_measures(CFG, 0.25) == (1.0, 0.0)
        assert harmonic_measures(CFG, 1j) == (0.0, 1.0)

    def test_midpoint(self):
        w0, w1 = harmonic_measures(CFG, 0.5)
        assert abs(w0 - 0.5) < 1e-15 and abs(w1 - 0.5) < 1e-15

    def test_outside(self):
        with pytest.raises(DomainError):
            harmonic_measures(CFG, 0.1)

    def test_beta(self):
        assert abs(beta_from_point(CFG) - math.pi) < 1e-14
        near_outer = AnnulusConfig(0.25, 0.999999)
        assert 2 * math.pi - beta_from_point(near_outer) < 1e-4

    def test_slit_radius_example(self):
        c, radius = slit_radius(CFG)
        assert abs(c - math.log(0.5)) < 1e-14 and abs(radius - 0.5) < 1e-14

    def test_slit_radius_at_r0(self):
        cfg = AnnulusConfig(0.3, 0.7, 0.7)
        c, radius = slit_radius(cfg)
        assert abs(c - math.log(cfg.r0)) < 1e-14

    @settings(max_examples=200, deadline=None)
    @given(annuli(max_r1=0.99))
    def test_radius_is_abs_a(self, cfg):
        beta = beta_from_point(cfg)
        assert 0 < beta < 2 * math.pi
        c, radius = slit_radius(cfg)
        assert math.log(cfg.r1) < c < 0
        assert abs(radius - abs(cfg.a_point)) < 1e-12

    def test_config_validation(self):
        with pytest.raises(DomainError):
            AnnulusConfig(0.5, 0.4)
        with pytest.raises(DomainError):
            AnnulusConfig(0.5, 0.7, 0.3)


class TestGreens:
    def test_boundary_vanishing(self):
        theta = np.linspace(0, 2 * np.pi, 256, endpoint=False)
        for cfg in (CFG, AnnulusConfig(0.9, 0.95j), AnnulusConfig(0.05, -0.06)):
            assert np.abs(greens_eval(cfg, np.exp(1j * theta), TOL)).max() < TOL
            assert np.abs(greens_eval(cfg, cfg.r1 * np.exp(1j * theta), TOL)).max() < TOL

    def test_pole(self):
        with pytest.raises(DomainError):
            greens_eval(CFG, CFG.a_point)

    def test_r1_limit(self):
        with pytest.raises(DomainError):
            greens_eval(AnnulusConfig(0.96, 0.98), 0.97j)

    @settings(max_examples=40, deadline=None)
    @given(annuli(), st.floats(0.1, 0.9), st.floats(-math.pi, math.pi))
    def test_symmetry(self, cfg, t, phase):
        z = cmath.rect(cfg.r1 + t * (1 - cfg.r1), phase)
        if abs(z - cfg.a_point) < 1e-3:
            return
        assert abs(greens_eval(cfg, z, TOL) - greens_eval(cfg, cfg.a_point, TOL, a=z)) < 1e-9

    @settings(max_examples=40, deadline=None)
    @given(annuli(), st.floats(0.15, 0.85), st.floats(-math.pi, math.pi))
    def test_regular_part_mean_value(self, cfg, t, phase):
        z = cmath.rect(cfg.r1 + t * (1 - cfg.r1), phase)
        gap = min(abs(z) - cfg.r1, 1 - abs(z))
        rad = 0.5 * gap
        theta = np.linspace(0, 2 * np.pi, 64, endpoint=False)
        ring = z + rad * np.exp(1j * theta)
        a = cfg.a_point

        def h(w):
            return greens_eval(cfg, w, TOL) + np.log(np.abs(w - a))

        if np.min(np.abs(ring - a)) < 1e-6 or abs(z - a) < 1e-6:
            return
        assert abs(np.mean(h(ring)) - h(z)) < 1e-8

    @settings(max_examples=40, deadline=None)
    @given(annuli(), st.floats(0.05, 0.95), st.floats(-math.pi, math.pi))
    def test_matches_fourier_modes(self, cfg, t, phase):
        z = cmath.rect(cfg.r1 + t * (1 - cfg.r1), phase)
        # the mode sum converges slowly near |z| = |a|
        if abs(abs(z) - abs(cfg.a_point)) < 0.05 * (1 - cfg.r1):
            return
        assert abs(greens_eval(cfg, z, TOL) - fourier_green(z, cfg.a_point, cfg.r1)) < 1e-8


class TestPeriods:
    def test_example(self):
        assert abs(greens_period(CFG) - math.pi) < 1e-6

    def test_both_boundaries(self):
        cfg = AnnulusConfig(0.4, 0.6 * cmath.exp(2j))
        outer, inner = greens_period(cfg), greens_period(cfg, boundary=0)
        assert abs(outer + inner - 2 * math.pi) < 1e-6
        assert abs(inner - 2 * math.pi * harmonic_measures(cfg, cfg.a_point)[0]) < 1e-6

    @settings(max_examples=25, deadline=None)
    @given(annuli())
    def test_matches_beta(self, cfg):
        assert abs(greens_period(cfg) - beta_from_point(cfg)) < 1e-6


class TestMargin:
    def test_example(self):
        m = nonexistence_margin(0.1, 0.5, math.pi)
        assert abs(m / math.pi - (3 - 2 * math.log(0.5) / math.log(0.1))) < 1e-12
        assert abs(m / math.pi - 2.39794) < 1e-5

    def test_limit(self):
        assert 0 < nonexistence_margin(0.5 - 1e-9, 0.5, 2 * math.pi - 1e-9) < 1e-6

    @pytest.mark.parametrize("args", [(0.6, 0.5, 1.0), (0.1, 1.2, 1.0), (0.1, 0.5, 7.0), (0.1, 0.5, 0.0)])
    def test_preconditions(self, args):
        with pytest.raises(DomainError):
            nonexistence_margin(*args)

    @settings(max_examples=300, deadline=None)
    @given(st.floats(1e-6, 1 - 1e-6), st.floats(1e-6, 1 - 1e-6), st.floats(1e-6, 2 * math.pi - 1e-6))
    def test_positive(self, frac, r0, beta):
        r_ratio = frac * r0
        if not 0 < r_ratio < r0:
            return
        assert nonexistence_margin(r_ratio, r0, beta) > 0


class TestSlitLength:
    def test_proper_arc(self):
        length = slit_length(CFG)
        assert 0 < length < 2 * math.pi * CFG.r0

    @pytest.mark.parametrize("r1,r0", [(0.1, 0.6), (0.3, 0.6), (0.45, 0.5), (0.2, 0.8)])
    def test_matches_fourier_modes(self, r1, r0):
        got = slit_length(AnnulusConfig(r1, r0, r0)) / r0
        assert abs(got - fourier_slit_extent(r1, r0)) < 1e-6

    def test_increasing_in_r1(self):
        r0 = 0.6
        grid = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.55, 0.58]
        lengths = [slit_length(AnnulusConfig(r1, r0, r0)) for r1 in grid]
        assert all(a < b for a, b in zip(lengths, lengths[1:]))

    def test_tends_to_full_circle(self):
        r0 = 0.6
        near = slit_length(AnnulusConfig(0.599, r0, r0))
        assert 0.9 * 2 * math.pi * r0 < near < 2 * math.pi * r0

    def test_requires_r0(self):
        with pytest.raises(DomainError):
            slit_length(AnnulusConfig(0.25, 0.5))
