#!/usr/bin/env python3
"""Tests for the property checkers and the target step-count curves."""

import math

import numpy as np
import pytest

from src.checks.properties import (CALIBRATED_CHECKS, CHECKS, a3_dual_norm, check_A2,
                                   check_A3_direct, check_D, check_D_sharpness,
                                   check_d1_log_bound, check_democracy, check_disjoint_q_ineq,
                                   check_lorentz_sandwich, estimate_rho, lebesgue_phi,
                                   phi_from_properties, smoothness_to_d_constant)
from src.checks.samplers import sample_rng, sample_vector, split_disjoint
from src.errors import ParamError
from src.experiments.calibration import frozen_constant
from src.spaces.fpq_space import FpqParams
from src.spaces.lpq_space import LpqParams

PQ_GRID = [(p, q) for p in (1.25, 1.5, 2.0, 3.0) for q in (1.25, 1.5, 2.0, 3.0)]


class TestA2:
    @pytest.mark.parametrize("params", [LpqParams(3.0, 1.5), LpqParams(1.25, 4.0), FpqParams(1.5, 3.0, 2)])
    def test_restriction_never_increases_the_norm(self, params):
        report = check_A2(params, samples=60)
        assert report.passed
        assert report.max_violation_ratio <= 1.0 + 1e-10
        assert set(report.witness) >= {'sample', 'index_set', 'vector'}

    def test_reproducible(self):
        first = check_A2(LpqParams(2.0, 3.0), samples=30, seed=7).to_dict()
        second = check_A2(LpqParams(2.0, 3.0), samples=30, seed=7).to_dict()
        assert first == second

    def test_more_samples_extend_fewer(self):
        few = check_A2(LpqParams(1.5, 2.5), samples=20, seed=3)
        many = check_A2(LpqParams(1.5, 2.5), samples=40, seed=3)
        assert many.max_violation_ratio >= few.max_violation_ratio


class TestA3:
    @pytest.mark.parametrize("p,q", [(3.0, 1.5), (1.5, 3.0), (2.0, 2.0), (1.25, 1.25)])
    def test_lpq_power_bound_holds_with_V_one(self, p, q):
        report = check_A3_direct(LpqParams(p, q), samples=300)
        assert report.passed
        assert report.details['ratios']['power'] <= 1.0 + 1e-9
        assert report.details['ratios']['dual'] <= 1.0 + 1e-9

    def test_dual_norm_dominates_the_power_bound(self):
        params = LpqParams(3.0, 1.5)
        A = [(1, 1), (1, 2), (2, 1), (5, 3)]
        assert a3_dual_norm(params, A) <= len(A) ** params.r * (1 + 1e-12)

    def test_fpq_with_frozen_constant(self):
        params = FpqParams(2.0, 2.0, 1)
        c = frozen_constant('a3_fpq', params)
        report = check_A3_direct(params, samples=200, frozen_constant=c)
        assert report.passed
        assert report.details['frozen_constant'] == c
        assert report.parameters['h'] == 0.0
        assert all(float(v) > 0 for v in report.details['V_profile'].values())

    def test_fpq_calibration_mode_counts_nothing_but_the_dual_bound(self):
        report = check_A3_direct(FpqParams(1.5, 2.0, 2), samples=50, n_max=6)
        assert report.passed
        assert report.details['fitted_constant'] >= report.details['ratios']['log'] - 1e-15


class TestD:
    @pytest.mark.parametrize("params", [LpqParams(3.0, 1.5), LpqParams(1.5, 3.0), LpqParams(2.0, 2.0),
                                        FpqParams(1.5, 2.0, 1), FpqParams(3.0, 2.0, 2)])
    def test_sound_with_default_constants(self, params):
        report = check_D(params, samples=150)
        assert report.passed, report.witness

    def test_overrides_are_reported(self):
        report = check_D(LpqParams(2.0, 2.0), samples=5, s_override=3.0, c1_override=0.1)
        assert report.parameters['s'] == 3.0
        assert report.parameters['c1'] == 0.1

    def test_smoothness_constants_only_for_lpq(self):
        with pytest.raises(ParamError):
            check_D(FpqParams(2.0, 2.0, 1), samples=1, gamma=0.5)
        report = check_D(LpqParams(2.0, 2.0), samples=5, gamma=0.5)
        assert report.parameters['sigma_exponent'] == 2.0

    def test_lowered_exponent_fails(self):
        report = check_D_sharpness(LpqParams(4.0, 4.0))
        assert report.expect == 'fail'
        assert report.verdict == 'FAIL'

    def test_unshifted_exponent_passes(self):
        assert check_D_sharpness(LpqParams(4.0, 4.0), s_shift=0.0).passed

    def test_smoothness_to_d_constant(self):
        assert smoothness_to_d_constant(1.0, 2.0) == pytest.approx((2.0, 0.25))
        s, c1 = smoothness_to_d_constant(0.5, 1.5)
        assert s == pytest.approx(3.0)
        assert c1 == pytest.approx(1.0 / (3.0 * 0.75 ** 2))
        with pytest.raises(ParamError):
            smoothness_to_d_constant(0.0, 2.0)
        with pytest.raises(ParamError):
            smoothness_to_d_constant(1.0, 1.0)


class TestRho:
    def test_hilbert_modulus(self):
        report = estimate_rho(LpqParams(2.0, 2.0), samples=200)
        for t, estimate in report.details['rho']:
            exact = math.sqrt(1.0 + t * t) - 1.0
            assert estimate <= exact + 1e-12
        t, estimate = report.details['rho'][-1]
        assert estimate == pytest.approx(math.sqrt(2.0) - 1.0, abs=1e-2)

    def test_bad_grid(self):
        with pytest.raises(ParamError):
            estimate_rho(LpqParams(2.0, 2.0), t_grid=[0.0, 1.0], samples=1)


class TestAppendixInequalities:
    def test_disjoint_q_inequality(self):
        assert check_disjoint_q_ineq(FpqParams(3.0, 1.5, 1), samples=100).passed
        assert check_disjoint_q_ineq(FpqParams(2.0, 2.0, 2), samples=40).passed

    def test_disjoint_q_inequality_guards(self):
        with pytest.raises(ParamError):
            check_disjoint_q_ineq(FpqParams(1.5, 3.0, 1))
        with pytest.raises(ParamError):
            check_disjoint_q_ineq(LpqParams(3.0, 1.5))

    def test_split_is_disjoint_and_complete(self):
        params = FpqParams(2.0, 2.0, 1)
        rng = sample_rng(0, 0)
        x = sample_vector(params, rng, 'scatter', 10)
        parts = split_disjoint(x, 3, rng)
        assert sum(len(part) for part in parts) == len(x)
        assert np.allclose(sum(part.aligned(x.keys) for part in parts), x.values)

    def test_lorentz_sandwich_with_frozen_constant(self):
        params = FpqParams(3.0, 1.5, 1)
        report = check_lorentz_sandwich(params, samples=100, frozen_constant=frozen_constant('lorentz', params))
        assert report.passed
        assert report.details['ratios']['lp'] <= 1.0 + 1e-10

    def test_lorentz_guards(self):
        with pytest.raises(ParamError):
            check_lorentz_sandwich(FpqParams(1.5, 3.0, 1))
        with pytest.raises(ParamError):
            check_lorentz_sandwich(FpqParams(3.0, 1.5, 2))

    @pytest.mark.parametrize("params", [FpqParams(1.5, 2.0, 1), FpqParams(1.5, 2.0, 2)])
    def test_democracy_with_frozen_constant(self, params):
        report = check_democracy(params, samples=50, frozen_constant=frozen_constant('democracy', params))
        assert report.passed

    def test_democracy_calibration_mode(self):
        params = FpqParams(3.0, 1.5, 2)
        report = check_democracy(params, samples=20, n_max=6)
        assert report.violations == 0
        assert report.details['fitted_constant'] >= 1.0 - 1e-12
        assert report.details['structured'] == len(range(2, 7))

    def test_d1_log_bound_with_frozen_constant(self):
        params = FpqParams(3.0, 1.5, 1)
        report = check_d1_log_bound(params, samples=50, frozen_constant=frozen_constant('d1_log', params))
        assert report.passed

    def test_d1_log_bound_guards(self):
        with pytest.raises(ParamError):
            check_d1_log_bound(FpqParams(2.0, 2.0, 1))


class TestTargetCurves:
    def test_lpq_curve(self):
        assert lebesgue_phi(LpqParams(3.0, 1.5), 4) == 16
        assert lebesgue_phi(LpqParams(3.0, 1.5), 3, c=0.5) == 4
        assert lebesgue_phi(LpqParams(2.0, 2.0), 7) == 7

    def test_fpq_curve(self):
        assert lebesgue_phi(FpqParams(2.0, 2.0, 1), 5) == 5
        assert lebesgue_phi(FpqParams(3.0, 1.5, 2), 3) == 9
        assert lebesgue_phi(FpqParams(1.5, 3.0, 2), 4) == math.floor((1 + math.log(4)) * 4)

    def test_curve_needs_positive_N(self):
        with pytest.raises(ParamError):
            lebesgue_phi(LpqParams(2.0, 2.0), 0)

    def test_generic_curve(self):
        assert phi_from_properties(1.0, 1.0, 0.5, 2.0, 0.5, 1.0, 4) == math.floor(2 * math.log(2.0) * 4)
        with pytest.raises(ParamError):
            phi_from_properties(0.5, 1.0, 0.5, 2.0, 0.5, 1.0, 4)


@pytest.mark.slow
class TestFullSampleCounts:
    @pytest.mark.parametrize("p,q", PQ_GRID)
    def test_lpq(self, p, q):
        params = LpqParams(p, q)
        assert check_A2(params, samples=1000).passed
        a3 = check_A3_direct(params, samples=1000)
        assert a3.passed
        assert a3.details['ratios']['power'] <= 1.0 + 1e-9
        d = check_D(params, samples=1000)
        assert d.violations == 0, d.witness
        assert d.parameters == {'s': params.s, 'c1': min(1.0 / p, 1.0 / q)}

    @pytest.mark.parametrize("p,q", PQ_GRID)
    @pytest.mark.parametrize("d", [1, 2])
    def test_fpq(self, p, q, d):
        params = FpqParams(p, q, d)
        assert check_A2(params, samples=1000).passed
        report = check_D(params, samples=1000)
        assert report.violations == 0, report.witness
        assert report.parameters == {'s': params.s, 'c1': min(1.0 / p, 1.0 / q)}


def test_registry():
    assert set(CHECKS) == {'a2', 'a3', 'd', 'rho', 'disjoint', 'lorentz', 'democracy', 'd1-log', 'd-sharpness'}
    assert set(CALIBRATED_CHECKS) <= set(CHECKS)
