#!/usr/bin/env python3
"""Tests for dyadic rectangles, the refinement grid and the f_{p,q} space."""

import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import fpq, interval
from src.errors import GridBudgetExceeded, ParamError, VectorFormatError
from src.spaces.dyadic import DyadicAxisIndex, Rectangle, RefinementGrid, grid_cell_count
from src.spaces.fpq_space import (An_size, Bm_size, FpqParams, FpqVector, StructuredFamily,
                                  build_An, build_Bm, composition_count, democracy_sum,
                                  fpq_dist_to_coord_span, fpq_norm, fpq_norming_apply,
                                  fpq_norming_coeff, level_compositions, lorentz_quasinorm,
                                  structured_norm, tied_b_coefficient)


class TestDyadic:
    def test_offset_range_enforced(self):
        with pytest.raises(VectorFormatError):
            DyadicAxisIndex.interval(2, 4)
        with pytest.raises(VectorFormatError):
            DyadicAxisIndex.interval(-2, 0)

    def test_endpoints_are_exact(self):
        axis = DyadicAxisIndex.interval(3, 5)
        assert axis.start == Fraction(5, 8)
        assert axis.end == Fraction(6, 8)
        zero = DyadicAxisIndex.zero()
        assert (zero.start, zero.end) == (Fraction(0), Fraction(1))

    def test_measure(self):
        rect = Rectangle.from_levels((3, 40), (1, 7))
        assert rect.measure == 2.0 ** -43
        assert Rectangle.unit(3).measure == 1.0

    def test_containment(self):
        outer = Rectangle.from_levels((1, 1), (0, 0))
        inner = Rectangle.from_levels((3, 2), (1, 1))
        assert outer.contains(inner)
        assert outer.intersects(inner)
        assert not inner.contains(outer)
        assert not Rectangle.from_levels((1,), (0,)).intersects(Rectangle.from_levels((1,), (1,)))

    def test_refinement_grid_cells(self):
        rects = [interval(0, 0), interval(2, 1), interval(3, 7)]
        grid = RefinementGrid(rects, 1)
        assert grid.shape == (4,)
        assert grid.cell_count == grid_cell_count(rects, 1)
        assert np.sum(grid.cell_volumes()) == pytest.approx(1.0)

    def test_grid_budget(self):
        rects = [Rectangle.from_levels((10, 10), (3, 5))]
        with pytest.raises(GridBudgetExceeded):
            RefinementGrid(rects, 2, cell_limit=3)

    def test_scatter_and_box_sums_agree_with_prefix_tables(self):
        rects = [interval(j, k) for j in range(13) for k in range(1 << j)][:5000]
        grid = RefinementGrid(rects, 1)
        weights = np.linspace(0.5, 1.5, len(rects))
        cells = grid.scatter(weights)
        expected = np.zeros(grid.shape)
        for r in range(len(rects)):
            expected[grid.cells_inside(r)] += weights[r]
        assert np.allclose(cells, expected)
        sums = grid.box_sums(cells)
        assert sums[0] == pytest.approx(float(np.sum(cells)))


class TestNorm:
    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_single_rectangle(self, d):
        params = FpqParams(1.5, 3.0, d)
        rect = Rectangle.from_levels((2,) * d, (1,) * d)
        assert fpq_norm(FpqVector(params, [rect], [1.0])) == pytest.approx(1.0)

    def test_disjoint_rectangles_split_the_integral(self):
        p = 2.5
        x = fpq(p, 1.5, {interval(2, 0): 3.0, interval(1, 1): -2.0})
        assert fpq_norm(x) == pytest.approx((3.0 ** p + 2.0 ** p) ** (1 / p))

    @pytest.mark.parametrize("p,q", [(1.5, 2.0), (3.0, 1.5), (2.0, 2.0)])
    def test_nested_pair_by_hand(self, p, q):
        x = fpq(p, q, {interval(0, 0): 1.0, interval(1, 0): 1.0})
        expected = (0.5 * (1 + 2 ** (q / p)) ** (p / q) + 0.5) ** (1 / p)
        assert fpq_norm(x) == pytest.approx(expected, rel=1e-12)

    def test_rectangle_dimension_must_match(self):
        with pytest.raises(VectorFormatError):
            FpqVector(FpqParams(2.0, 2.0, 2), [interval(1, 0)], [1.0])

    def test_json_style_keys(self):
        x = FpqVector.from_entries(FpqParams(2.0, 2.0, 2), [([[1, 0], 'zero'], 2.0)])
        assert x.keys[0] == Rectangle((DyadicAxisIndex.interval(1, 0), DyadicAxisIndex.zero()))


class TestNormingFunctional:
    def test_unit_vector(self):
        x = fpq(3.0, 1.5, {interval(4, 3): 1.0})
        assert fpq_norming_coeff(x, interval(4, 3)) == pytest.approx(1.0)

    def test_disjoint_rectangles(self):
        p = 1.5
        x = fpq(p, 4.0, {interval(2, 0): 2.0, interval(2, 3): -0.5, interval(1, 0): 0.0})
        norm = x.norm()
        for rect, value in x.entries().items():
            assert fpq_norming_coeff(x, rect) == pytest.approx(abs(value) ** (p - 1) / norm ** (p - 1))

    def test_apply_to_itself(self):
        x = fpq(2.5, 1.5, {interval(0, 0): 1.0, interval(1, 0): -2.0, interval(3, 5): 0.25})
        assert fpq_norming_apply(x, x) == pytest.approx(x.norm())

    def test_spatially_disjoint_vector_is_annihilated(self):
        x = fpq(2.0, 3.0, {interval(1, 0): 1.0})
        y = fpq(2.0, 3.0, {interval(1, 1): 1.0})
        assert fpq_norming_apply(x, y) == 0.0

    def test_norm_one_on_random_pairs(self, rng):
        params = FpqParams(1.5, 3.0, 2)
        keys = sorted({Rectangle.from_levels((a, b), (int(rng.integers(0, 1 << a)), int(rng.integers(0, 1 << b))))
                       for a in range(3) for b in range(3)})
        for _ in range(50):
            x = FpqVector(params, keys, rng.standard_normal(len(keys)))
            y = FpqVector(params, keys, rng.standard_normal(len(keys)))
            assert abs(fpq_norming_apply(x, y)) <= y.norm() + 1e-10

    def test_structured_coefficients_match_the_grid(self):
        params = FpqParams(1.5, 2.0, 2)
        n, m_vec = 4, (2, 1)
        family = StructuredFamily(params, 1.3, n, 0.7, m_vec)
        x = family.to_vector()
        a_rect = build_An(params, n)[0]
        b_rect = build_Bm(params, m_vec)[0]
        assert x.norming_coeff(a_rect) == pytest.approx(family.coeff_a(), rel=1e-10)
        assert x.norming_coeff(b_rect) == pytest.approx(family.coeff_b(), rel=1e-10)


class TestDistance:
    def test_full_support(self):
        x = fpq(2.0, 3.0, {interval(1, 0): 1.0, interval(2, 3): 2.0})
        assert fpq_dist_to_coord_span(x, x.keys) == 0.0

    def test_drop_one_disjoint_rectangle(self):
        p = 3.0
        x = fpq(p, 1.5, {interval(1, 0): 1.5, interval(2, 3): 2.0})
        assert fpq_dist_to_coord_span(x, [interval(1, 0)]) == \
            pytest.approx((x.norm() ** p - 1.5 ** p) ** (1 / p))


class TestDemocracy:
    def test_single_rectangle(self):
        assert democracy_sum(FpqParams(1.5, 3.0, 2), [Rectangle.from_levels((2, 1), (3, 0))]) == pytest.approx(1.0)

    @pytest.mark.parametrize("q", [1.25, 2.0, 6.0])
    def test_disjoint_family(self, q):
        p = 2.5
        A = [interval(3, k) for k in range(8)]
        assert democracy_sum(FpqParams(p, q, 1), A) == pytest.approx(8 ** (1 / p))

    def test_structured_family_grows_with_log_factor(self):
        params = FpqParams(3.0, 1.5, 2)
        ratios = [democracy_sum(params, build_An(params, n)) / An_size(n, 2) ** (1 / params.p)
                  for n in (3, 5, 7)]
        assert ratios[0] < ratios[1] < ratios[2]


class TestStructuredSets:
    def test_compositions(self):
        assert level_compositions(4, 2) == [(1, 3), (2, 2), (3, 1)]
        assert composition_count(4, 2) == 3
        assert composition_count(1, 2) == 0

    @pytest.mark.parametrize("n", [1, 2, 3, 6])
    def test_one_dimensional_A_n(self, n):
        rects = build_An(FpqParams(2.0, 2.0, 1), n)
        assert len(rects) == 2 ** (n - 1) == An_size(n, 1)
        assert all(rect.axes[0].end <= Fraction(1, 2) for rect in rects)

    def test_two_dimensional_sizes_by_enumeration(self):
        params = FpqParams(2.0, 2.0, 2)
        assert len(build_An(params, 2)) == 1 == An_size(2, 2)
        assert len(build_An(params, 5)) == An_size(5, 2) == 4 * 8

    def test_A_n_needs_n_at_least_d(self):
        with pytest.raises(ParamError):
            build_An(FpqParams(2.0, 2.0, 3), 2)

    def test_B_m_in_upper_half(self):
        rects = build_Bm(FpqParams(2.0, 2.0, 1), (3,))
        assert len(rects) == 4 == Bm_size((3,))
        assert [rect.axes[0].start for rect in rects] == [Fraction(k, 8) for k in range(4, 8)]

    @pytest.mark.parametrize("d,n,m_vec", [(1, 5, (3,)), (2, 4, (2, 2)), (2, 6, (3, 1)), (2, 8, (1, 2))])
    def test_closed_form_matches_grid(self, d, n, m_vec):
        params = FpqParams(1.5, 2.5, d)
        family = StructuredFamily(params, 0.8, n, 1.7, m_vec)
        assert structured_norm(params, 0.8, n, 1.7, m_vec) == pytest.approx(family.to_vector().norm(), rel=1e-10)
        reduced = family.remove_b(2)
        assert reduced.norm() == pytest.approx(reduced.to_vector().norm(), rel=1e-10)

    def test_closed_form_without_B(self):
        params = FpqParams(2.0, 1.5, 2)
        n, a = 5, 1.5
        comps = composition_count(n, 2)
        mass = 2.0 ** (-2) * (comps * 2 ** (n * params.q / params.p)) ** (params.p / params.q)
        assert structured_norm(params, a, n, 0.0, (1, 1)) == pytest.approx(a * mass ** (1 / params.p))

    def test_closed_form_without_A(self):
        params = FpqParams(3.0, 2.0, 1)
        m, b = 4, 2.0
        family = StructuredFamily(params, 0.0, 2, b, (m,))
        assert family.norm() == pytest.approx(b * 2 ** (m / params.p) * 2 ** (-1 / params.p))

    def test_tied_coefficient(self):
        params = FpqParams(1.5, 2.0, 2)
        n = 6
        b = tied_b_coefficient(params, 1.0, n)
        family = StructuredFamily(params, 1.0, n, b, (3, 1))
        assert family.coeff_a() == pytest.approx(family.coeff_b(), rel=1e-12)


class TestLorentz:
    def test_single_element(self):
        assert lorentz_quasinorm([-1.0], 2.0, 1.5) == pytest.approx(1.0)

    @pytest.mark.parametrize("m", [1, 2, 5, 8, 13])
    def test_equal_entries(self, m):
        p, q = 3.0, 1.5
        expected = sum(2 ** (j * q / p) for j in range(int(math.floor(math.log2(m))) + 1)) ** (1 / q)
        assert lorentz_quasinorm(np.ones(m), p, q) == pytest.approx(expected)

    def test_empty(self):
        assert lorentz_quasinorm([], 2.0, 2.0) == 0.0
