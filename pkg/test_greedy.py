#!/usr/bin/env python3
"""Tests for WCGA, TGA, the structured WCGA and the best N-term oracles."""

import math

import numpy as np
import pytest

from conftest import fpq, interval, lpq
from src.checks.samplers import make_vector, sample_kind, sample_rng, sample_support
from src.errors import ParamError, SupportTooLarge
from src.greedy.best_n_term import (decay_slope, recovery_steps, sigma_n_bruteforce,
                                    sigma_n_greedy_upper, sigma_n_symmetric_blocks,
                                    tga_recovery_steps)
from src.greedy.greedy_algorithms import (GreedyConfig, tga_run, wcga_run, wcga_structured_run)
from src.spaces.fpq_space import FpqParams, StructuredFamily, tied_b_coefficient
from src.spaces.lpq_space import (PSI_VARIANTS, LpqParams, LpqVector, build_psi_vector,
                                  psi_block_sizes, psi_blocks)

PQ_GRID = [(p, q) for p in (1.25, 1.5, 2.0, 3.0) for q in (1.25, 1.5, 2.0, 3.0)]


@pytest.fixture
def uneven():
    """Two equal entries in row 1, one in row 2; the lone entry is the better single pick."""
    return lpq(1.1, 2.0, {(1, 1): 1.0, (1, 2): 1.0, (2, 1): 1.0})


class TestConfig:
    @pytest.mark.parametrize("kwargs", [
        dict(tau=0.0),
        dict(tau=1.5),
        dict(tie_break='prefer_block_A'),
        dict(tie_break='random'),
        dict(chebyshev_mode='newton'),
        dict(max_steps=-1),
    ])
    def test_rejected(self, kwargs):
        with pytest.raises(ParamError):
            GreedyConfig(**kwargs)

    def test_preferred_block(self):
        assert GreedyConfig(tie_break='prefer_block_B', blocks={}).preferred_block == 'B'
        assert GreedyConfig().preferred_block is None


class TestWCGA:
    def test_single_coordinate(self):
        trace = wcga_run(lpq(3.0, 1.5, {(2, 3): -4.0}))
        assert trace.selected == [(2, 3)]
        assert trace.residual_norms == [pytest.approx(4.0), 0.0]
        assert trace.terminated_reason == 'zero_residual'

    def test_fpq_single_rectangle(self):
        trace = wcga_run(fpq(1.5, 2.0, {interval(3, 2): 1.0}))
        assert trace.steps == 1
        assert trace.final_norm == 0.0

    @pytest.mark.parametrize("p,q", [(3.0, 1.5), (1.5, 3.0), (2.0, 2.0)])
    def test_sparse_vector_needs_exactly_its_support(self, rng, p, q):
        keys = [(j, k) for j in range(1, 4) for k in range(1, 3)]
        f = LpqVector(LpqParams(p, q), keys, rng.uniform(0.1, 1.0, len(keys)))
        trace = wcga_run(f)
        assert trace.steps == len(keys)
        assert sorted(trace.selected) == keys
        assert all(b <= a for a, b in zip(trace.residual_norms, trace.residual_norms[1:]))
        assert all(v >= s * (1 - 1e-12) for v, s in zip(trace.functional_values, trace.functional_sups))

    def test_zero_vector(self):
        trace = wcga_run(LpqVector.zero(LpqParams(2.0, 2.0)))
        assert trace.steps == 0
        assert trace.terminated_reason == 'zero_residual'

    def test_target_already_met(self, uneven):
        trace = wcga_run(uneven, GreedyConfig(target_norm=10.0))
        assert trace.steps == 0
        assert trace.terminated_reason == 'target_met'

    def test_weakness_lets_a_smaller_coefficient_through(self):
        f = lpq(2.0, 2.0, {(1, 1): 0.8, (2, 1): 1.0})
        assert wcga_run(f).selected[0] == (2, 1)
        assert wcga_run(f, GreedyConfig(tau=0.5)).selected[0] == (1, 1)

    def test_candidates_off_the_support(self):
        f = lpq(2.0, 2.0, {(1, 1): 1.0, (1, 2): 1.0})
        trace = wcga_run(f, GreedyConfig(), candidates=[(1, 1), (9, 9)])
        assert trace.selected == [(1, 1)]
        assert trace.terminated_reason == 'candidates_exhausted'

    def test_max_steps(self, uneven):
        trace = wcga_run(uneven, GreedyConfig(max_steps=1))
        assert trace.steps == 1
        assert trace.terminated_reason == 'max_steps'

    def test_approximants(self, uneven):
        trace = wcga_run(uneven, GreedyConfig(store_approximants=True))
        assert len(trace.approximants) == trace.steps
        assert trace.approximants[0] == {(2, 1): 1.0}
        data = trace.to_dict()
        assert data['selected'][0] == [2, 1]
        assert data['approximants'][0] == [{'index': [2, 1], 'v': 1.0}]

    @pytest.mark.parametrize("p,q", [(3.0, 1.5), (1.5, 4.0)])
    def test_iterative_solver_agrees_with_lattice_projection(self, rng, p, q):
        keys = [(j, k) for j in range(1, 3) for k in range(1, 4)]
        f = LpqVector(LpqParams(p, q), keys, rng.uniform(0.2, 2.0, len(keys)))
        exact = wcga_run(f, GreedyConfig(chebyshev_mode='lattice_exact'))
        iterative = wcga_run(f, GreedyConfig(chebyshev_mode='iterative'))
        assert iterative.selected == exact.selected
        assert np.allclose(iterative.residual_norms, exact.residual_norms, atol=1e-8)


@pytest.mark.slow
class TestExactRecovery:
    @staticmethod
    def _sparse(params, index):
        rng = sample_rng(0, index)
        keys = sample_support(params, rng, sample_kind(params, index), int(rng.integers(1, 13)))
        values = rng.uniform(0.1, 1.0, len(keys)) * rng.choice([-1.0, 1.0], len(keys))
        return make_vector(params, keys, values)

    @pytest.mark.parametrize("p,q", PQ_GRID)
    @pytest.mark.parametrize("space", ['lpq', 'fpq'])
    def test_sparse_vectors_take_exactly_N_steps(self, space, p, q):
        params = LpqParams(p, q) if space == 'lpq' else FpqParams(p, q, 1)
        for index in range(200):
            f = self._sparse(params, index)
            trace = wcga_run(f)
            assert trace.steps == len(f) <= 12
            assert trace.final_norm <= 1e-10 * f.norm()
            assert trace.terminated_reason == 'zero_residual'


class TestLowerBoundVector:
    params = LpqParams(1.5, 3.0)
    n = 4

    def _vector(self):
        m, _ = psi_block_sizes(self.params, self.n, PSI_VARIANTS[0])
        return m, build_psi_vector(self.params, m, self.n, PSI_VARIANTS[0]), psi_blocks(m, self.n, PSI_VARIANTS[0])

    def test_adversarial_tie_break_picks_block_A(self):
        m, x, blocks = self._vector()
        trace = wcga_run(x, GreedyConfig(tie_break='prefer_block_A', blocks=blocks, max_steps=3))
        assert [blocks[k] for k in trace.selected] == ['A', 'A', 'A']

    def test_preferring_B_takes_the_long_row(self):
        m, x, blocks = self._vector()
        trace = wcga_run(x, GreedyConfig(tie_break='prefer_block_B', blocks=blocks, max_steps=1))
        assert trace.selected == [(m + 1, 1)]

    def test_symmetric_oracle_matches_bruteforce(self):
        params = LpqParams(1.5, 3.0)
        m, _ = psi_block_sizes(params, 2, PSI_VARIANTS[0])
        x = build_psi_vector(params, m, 2, PSI_VARIANTS[0])
        value, counts = sigma_n_symmetric_blocks(x, psi_blocks(m, 2, PSI_VARIANTS[0]), 3)
        assert value == pytest.approx(sigma_n_bruteforce(x, 3)[0], rel=1e-12)
        assert sum(counts.values()) == 3


class TestTGA:
    def test_keeps_the_largest(self):
        f = lpq(2.0, 3.0, {(1, 1): 0.1, (1, 2): -3.0, (2, 1): 2.0})
        trace = tga_run(f, 2)
        assert trace.selected == [(1, 2), (2, 1)]
        assert trace.final_norm == pytest.approx(0.1)
        assert trace.terminated_reason == 'max_steps'
        assert tga_run(f, 5).terminated_reason == 'zero_residual'

    def test_negative_N(self, uneven):
        with pytest.raises(ParamError):
            tga_run(uneven, -1)

    def test_one_entry_per_row_matches_wcga(self, rng):
        f = LpqVector(LpqParams(3.0, 1.5), [(j, 1) for j in range(1, 8)], rng.permutation(np.arange(1.0, 8.0)))
        tga = tga_run(f, len(f))
        wcga = wcga_run(f)
        assert wcga.selected == tga.selected
        assert np.allclose(wcga.residual_norms, tga.residual_norms)


class TestBestNTerm:
    def test_bruteforce_beats_thresholding(self, uneven):
        value, support = sigma_n_bruteforce(uneven, 1)
        assert value == pytest.approx(math.sqrt(2.0))
        assert support == frozenset({(2, 1)})
        assert sigma_n_greedy_upper(uneven, 1) == pytest.approx(2 ** (1 / 1.1))

    def test_trivial_levels(self, uneven):
        assert sigma_n_bruteforce(uneven, 3) == (0.0, uneven.support)
        assert sigma_n_greedy_upper(uneven, 4) == 0.0
        assert sigma_n_bruteforce(uneven, 0)[0] == pytest.approx(uneven.norm())

    def test_support_guard(self):
        f = LpqVector.indicator(LpqParams(2.0, 2.0), [(1, k) for k in range(1, 6)])
        with pytest.raises(SupportTooLarge):
            sigma_n_bruteforce(f, 2, limit=4)

    def test_wcga_recovery(self, uneven):
        measurement = recovery_steps(uneven, 1, C=1.0)
        assert measurement.sigma_N == pytest.approx(math.sqrt(2.0))
        assert measurement.steps_needed == 1
        assert measurement.recovered

    def test_tga_recovery_needs_an_extra_step(self, uneven):
        measurement = tga_recovery_steps(uneven, 1, C=1.0)
        assert measurement.steps_needed == 2
        assert measurement.algorithm == 'tga'

    def test_sigma_override(self, uneven):
        measurement = recovery_steps(uneven, 1, C=2.0, sigma=1.0, sigma_method='greedy_upper')
        assert measurement.sigma_method == 'greedy_upper'
        assert measurement.steps_needed == 1

    def test_lebesgue_constant_below_one(self, uneven):
        with pytest.raises(ParamError):
            recovery_steps(uneven, 1, C=0.5)

    def test_decay_slope(self):
        assert decay_slope([1.0, 0.5, 0.25, 0.125, 0.0]) == pytest.approx(math.log(0.5))
        assert math.isnan(decay_slope([1.0, 0.0]))


class TestStructuredRun:
    params = FpqParams(1.5, 2.0, 2)
    n = 3
    m_vec = (3, 1)

    def _family(self):
        b = tied_b_coefficient(self.params, 1.0, self.n)
        return StructuredFamily(self.params, 1.0, self.n, b, self.m_vec)

    def test_matches_the_materialised_run(self):
        family = self._family()
        target = family.remove_b(3).norm() * (1 + 1e-9)
        config = GreedyConfig(tie_break='prefer_block_B', blocks=family.blocks(), target_norm=target)
        structured = wcga_structured_run(family, config)
        full = wcga_run(family.to_vector(), config)
        assert structured.steps == full.steps == 3
        assert structured.selections == [('B', 3)]
        assert {config.blocks[k] for k in full.selected} == {'B'}
        assert structured.final_norm == pytest.approx(full.final_norm, rel=1e-10)
        assert structured.terminated_reason == 'target_met'

    def test_runs_out_of_B(self):
        family = self._family()
        config = GreedyConfig(tie_break='prefer_block_B', blocks={}, target_norm=1e-6)
        trace = wcga_structured_run(family, config)
        assert trace.steps == family.size_b
        assert trace.terminated_reason == 'structured_limit'
        assert trace.final_norm == pytest.approx(family.remove_b(family.size_b).norm())
        # the materialised run carries on into A
        full = wcga_run(family.to_vector(), GreedyConfig(target_norm=1e-6))
        assert full.steps == family.size_a + family.size_b

    def test_A_first_is_refused(self):
        config = GreedyConfig(tie_break='prefer_block_A', blocks={})
        with pytest.raises(ParamError):
            wcga_structured_run(self._family(), config)
