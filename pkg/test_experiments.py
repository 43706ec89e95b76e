#!/usr/bin/env python3
"""Tests for the experiment harness, the five experiments and the calibration store."""

import json
import math

import pytest

from src.errors import ParamError
from src.experiments.calibration import (CALIBRATION_SET, HEADROOM, calibrate, calibration_key,
                                         frozen_constant, load_calibration)
from src.experiments.harness import (ExperimentSpec, fit_loglog, metadata_line, read_csv, render,
                                     write_result)
from src.experiments.lower_bounds import (LPQ_COLUMNS, exp_fpq_lower, exp_lpq_lower, lower_bound_holds,
                                         psi_lower_bound, wasted_steps)
from src.experiments.regimes import analytic_winner, exp_tga_vs_wcga, wcga_not_worse
from src.experiments.runner import EXPERIMENTS, run_experiment
from src.experiments.sweeps import exp_iteration_decay, exp_lebesgue_sweep
from src.spaces.fpq_space import FpqParams
from src.spaces.lpq_space import PSI_VARIANTS, LpqParams


class TestHarness:
    def test_fit_recovers_a_power_law(self):
        xs = [1, 2, 4, 8, 16]
        fit = fit_loglog(xs, [3.0 * x ** 2 for x in xs])
        assert fit.slope == pytest.approx(2.0)
        assert fit.intercept == pytest.approx(math.log(3.0))
        assert fit.r_squared == pytest.approx(1.0)
        assert [x for x, _ in fit.points] == [2.0, 4.0, 8.0, 16.0]

    def test_fit_needs_four_points(self):
        with pytest.raises(ParamError):
            fit_loglog([1, 2, 3], [1, 2, 3])
        with pytest.raises(ParamError):
            fit_loglog([1, 2, 3, 4], [1, 0, 0, 4])

    @pytest.mark.parametrize("kwargs", [dict(C=0.5), dict(workers=0), dict(fmt='xml'), dict(n_values=[0, 4])])
    def test_spec_validation(self, kwargs):
        with pytest.raises(ParamError):
            ExperimentSpec('lpq-lower', LpqParams(2.0, 2.0), **kwargs)

    def test_metadata_line(self):
        assert metadata_line({'experiment': 'x', 'grid': [1, 2], 'C': 1.5}) == '# experiment=x grid=[1,2] C=1.5'

    def test_unknown_experiment(self):
        with pytest.raises(ParamError):
            run_experiment(ExperimentSpec('nope'))
        assert set(EXPERIMENTS) == {'lpq-lower', 'fpq-lower', 'tga-vs-wcga', 'lebesgue', 'iteration-decay'}


class TestLpqLower:
    def test_hilbert_exponent(self):
        result = exp_lpq_lower(ExperimentSpec('lpq-lower', LpqParams(2.0, 2.0), n_values=list(range(4, 13))))
        assert result.spec.variant == PSI_VARIANTS[0]
        assert list(result.table.columns) == LPQ_COLUMNS
        assert result.passed
        assert (result.table['psi'] >= result.table['N']).all()
        assert 0.85 <= result.fit.slope <= 1.15

    def test_second_variant_compares_against_m(self):
        result = exp_lpq_lower(ExperimentSpec('lpq-lower', LpqParams(4.0, 4.0 / 3.0), n_values=[4, 8, 16]))
        assert result.spec.variant == PSI_VARIANTS[1]
        assert (result.table['N'] == result.table['m']).all()
        assert (result.table['psi_bound'] == result.table['n']).all()
        assert (result.table['psi'] > result.table['n']).all()
        assert result.table['lower_bound_ok'].all()
        assert result.fit is None

    def test_second_variant_exponent_on_the_default_grid(self):
        params = LpqParams(4.0, 4.0 / 3.0)
        result = exp_lpq_lower(ExperimentSpec('lpq-lower', params))
        assert list(result.table['n']) == list(range(4, 25))
        assert result.passed
        # B is stripped down to n entries before the greedy first touches A
        assert (result.table['wasted_steps'] == result.table['n'] + 1).all()
        assert result.fit.slope == pytest.approx(params.beta, rel=0.15)

    def test_first_variant_wastes_all_of_A(self):
        params = LpqParams(2.0, 3.0)
        result = exp_lpq_lower(ExperimentSpec('lpq-lower', params, n_values=list(range(4, 13))))
        assert result.spec.variant == PSI_VARIANTS[0]
        assert (result.table['wasted_steps'] == result.table['m']).all()
        assert (result.table['m'] >= result.table['psi_bound']).all()
        assert result.passed

    def test_psi_lower_bound(self):
        assert psi_lower_bound(LpqParams(4.0 / 3.0, 4.0), 8, PSI_VARIANTS[0]) == pytest.approx(512.0)
        assert psi_lower_bound(LpqParams(4.0, 4.0 / 3.0), 8, PSI_VARIANTS[1]) == 8.0
        with pytest.raises(ParamError):
            psi_lower_bound(LpqParams(2.0, 2.0), 8, 'C')

    def test_short_recovery_fails_the_row_check(self):
        bound = psi_lower_bound(LpqParams(4.0, 4.0 / 3.0), 8, PSI_VARIANTS[1])
        assert lower_bound_holds(8, bound)
        assert not lower_bound_holds(7, bound)
        assert not lower_bound_holds(None, bound)

    def test_wasted_steps_stop_at_the_first_switch(self):
        blocks = {(1, 1): 'A', (2, 1): 'A', (3, 1): 'B', (3, 2): 'B'}
        assert wasted_steps([(3, 1), (3, 2), (1, 1)], blocks, 'B') == 2
        assert wasted_steps([(1, 1), (3, 1), (2, 1)], blocks, 'A') == 1
        assert wasted_steps([], blocks, 'A') == 0

    def test_rejects_fpq(self):
        with pytest.raises(ParamError):
            exp_lpq_lower(ExperimentSpec('lpq-lower', FpqParams(2.0, 2.0, 1)))

    def test_unknown_variant(self):
        with pytest.raises(ParamError):
            exp_lpq_lower(ExperimentSpec('lpq-lower', LpqParams(2.0, 2.0), variant='C'))


class TestFpqLower:
    def test_one_dimension_has_no_log_growth(self):
        result = exp_fpq_lower(ExperimentSpec('fpq-lower', FpqParams(1.5, 2.0, 1)))
        assert result.passed
        assert -0.1 <= result.fit.slope <= 0.1

    def test_two_dimensions(self):
        params = FpqParams(1.5, 2.0, 2)
        result = exp_fpq_lower(ExperimentSpec('fpq-lower', params))
        assert result.passed
        assert result.summary['exponent_target'] == pytest.approx(0.5)
        assert result.fit.slope == pytest.approx(0.5, abs=0.2)

    @pytest.mark.parametrize("params", [FpqParams(3.0, 1.5, 1), FpqParams(1.5, 2.0, 4)])
    def test_guards(self, params):
        with pytest.raises(ParamError):
            exp_fpq_lower(ExperimentSpec('fpq-lower', params))


class TestRegimes:
    def test_analytic_map(self):
        assert analytic_winner(LpqParams(4.0, 3.0)) == 'WCGA'
        assert analytic_winner(LpqParams(3.0, 1.2)) == 'TGA'
        assert analytic_winner(LpqParams(2.0, 2.0)) == 'tie'
        assert wcga_not_worse(LpqParams(4.0, 3.0))
        assert not wcga_not_worse(LpqParams(3.0, 1.2))
        assert wcga_not_worse(LpqParams(1.5, 1.5))

    def test_small_grid(self):
        spec = ExperimentSpec('tga-vs-wcga', pq_grid=[(4.0, 3.0), (3.0, 1.2), (2.0, 2.0)])
        result = exp_tga_vs_wcga(spec)
        assert result.passed
        assert list(result.table['winner']) == ['WCGA', 'TGA', 'tie']
        assert result.summary['N'] == 8


class TestSweeps:
    def test_exact_sparse_targets_take_N_steps(self):
        spec = ExperimentSpec('lebesgue', LpqParams(3.0, 1.5), n_values=[1, 2, 3], samples=3, epsilon=0.0)
        result = exp_lebesgue_sweep(spec)
        assert result.checks == {'exact_recovery': True}
        assert (result.table['steps'] == result.table['N']).all()

    def test_frozen_constant_bounds_the_default_sweep(self):
        result = run_experiment(ExperimentSpec('lebesgue', LpqParams(2.0, 2.0)))
        assert result.checks['within_bound']
        assert result.summary['c_fit'] > 0

    def test_negative_epsilon(self):
        with pytest.raises(ParamError):
            exp_lebesgue_sweep(ExperimentSpec('lebesgue', LpqParams(2.0, 2.0), epsilon=-0.1))

    def test_iteration_decay(self):
        result = exp_iteration_decay(ExperimentSpec('iteration-decay', LpqParams(2.0, 2.0), samples=3))
        assert result.checks['negative_slopes']
        assert math.isnan(result.table['mean_slope'].iloc[0])
        assert result.table.set_index('K').loc[8, 'mean_slope'] < 0
        assert result.fit is not None
        assert result.summary['exponent_target'] == pytest.approx(-result.summary['rs'])


class TestOutput:
    def _result(self, workers=1):
        spec = ExperimentSpec('lpq-lower', LpqParams(2.0, 2.0), n_values=[4, 5, 6, 7, 8], workers=workers)
        return exp_lpq_lower(spec)

    def test_workers_do_not_change_the_output(self):
        single = render(self._result())
        parallel = render(self._result(workers=2))
        # workers is not part of the metadata
        assert single == parallel

    def test_csv_round_trip(self, tmp_path):
        result = self._result()
        path = write_result(result, str(tmp_path / "out" / "lpq.csv"))
        meta, table = read_csv(path)
        assert meta['experiment'] == 'lpq-lower'
        assert meta['variant'] == PSI_VARIANTS[0]
        assert list(table.columns) == LPQ_COLUMNS
        assert list(table['n']) == [4, 5, 6, 7, 8]

    def test_json_render(self):
        data = json.loads(render(self._result(), 'json'))
        assert data['metadata']['experiment'] == 'lpq-lower'
        assert data['passed'] is True
        assert len(data['rows']) == 5


class TestCalibration:
    def test_keys(self):
        assert calibration_key('lorentz', FpqParams(3.0, 1.5, 1)) == 'lorentz|fpq|p=3|q=1.5|d=1'
        assert calibration_key('lebesgue', LpqParams(2.0, 2.0)) == 'lebesgue|lpq|p=2|q=2'

    def test_calibrate_writes_the_store(self, tmp_path):
        path = str(tmp_path / "calibration.json")
        constants = calibrate(path=path, names=['lorentz'])
        assert set(constants) == {calibration_key('lorentz', p) for p in CALIBRATION_SET['lorentz']}
        assert load_calibration(path) == constants
        assert json.loads((tmp_path / "calibration.json").read_text())['seed'] == 0

    def test_missing_constants_are_fitted_on_demand(self, tmp_path):
        path = tmp_path / "calibration.json"
        path.write_text(json.dumps({"seed": 0, "constants": {}}))
        params = FpqParams(2.0, 2.0, 1)
        value = frozen_constant('lorentz', params, path=str(path))
        stored = load_calibration(str(path))[calibration_key('lorentz', params)]
        assert value == pytest.approx(stored * HEADROOM)

    def test_unknown_constant(self, calibration_store):
        with pytest.raises(ParamError):
            frozen_constant('nope', LpqParams(2.0, 2.0), path=calibration_store)
