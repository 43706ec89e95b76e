"""
Dyadic intervals, rectangles and the common refinement grid.

A dyadic axis index is either the Haar constant direction (``zero``,
covering [0, 1)) or an interval ``2^-j [k, k+1)``. Endpoints are exact
dyadic rationals; the refinement grid works on integer ticks over a common
power-of-two denominator per axis, so cell boundaries never drift.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from src.config import get_grid_cell_limit
from src.errors import GridBudgetExceeded, ParamError, VectorFormatError

logger = logging.getLogger(__name__)

ZERO_LEVEL = -1
# Above this many rectangles the grid switches to prefix-sum tables.
DIRECT_LOOP_LIMIT = 4096


@dataclass(frozen=True, order=True)
class DyadicAxisIndex:
    """``level == -1`` encodes the zero (constant) direction."""

    level: int
    offset: int

    def __post_init__(self):
        if self.level == ZERO_LEVEL:
            if self.offset != 0:
                raise VectorFormatError("the zero axis index has no offset")
            return
        if self.level < 0:
            raise VectorFormatError(f"dyadic level must be >= 0, got {self.level}")
        if not 0 <= self.offset < (1 << self.level):
            raise VectorFormatError(f"offset {self.offset} outside [0, 2^{self.level})")

    @classmethod
    def zero(cls) -> 'DyadicAxisIndex':
        return cls(ZERO_LEVEL, 0)

    @classmethod
    def interval(cls, level: int, offset: int) -> 'DyadicAxisIndex':
        return cls(int(level), int(offset))

    @property
    def is_zero(self) -> bool:
        return self.level == ZERO_LEVEL

    @property
    def depth(self) -> int:
        """Level used for lengths; the zero axis has length 1 like level 0."""
        return 0 if self.is_zero else self.level

    @property
    def length(self) -> Fraction:
        return Fraction(1, 1 << self.depth)

    @property
    def start(self) -> Fraction:
        return Fraction(0) if self.is_zero else Fraction(self.offset, 1 << self.level)

    @property
    def end(self) -> Fraction:
        return self.start + self.length

    def ticks(self, resolution: int) -> Tuple[int, int]:
        """Endpoints as integers over the denominator ``2^resolution``."""
        if self.is_zero:
            return 0, 1 << resolution
        shift = resolution - self.level
        return self.offset << shift, (self.offset + 1) << shift

    def to_json(self):
        return 'zero' if self.is_zero else {'j': self.level, 'k': self.offset}

    def __str__(self) -> str:
        return '0' if self.is_zero else f"[{self.offset}/2^{self.level})"


@dataclass(frozen=True, order=True)
class Rectangle:
    """Product of ``d`` dyadic axis indices."""

    axes: Tuple[DyadicAxisIndex, ...]

    def __post_init__(self):
        if not self.axes:
            raise VectorFormatError("a rectangle needs at least one axis")
        object.__setattr__(self, 'axes', tuple(self.axes))

    @classmethod
    def from_levels(cls, levels: Sequence[int], offsets: Sequence[int]) -> 'Rectangle':
        return cls(tuple(DyadicAxisIndex.interval(j, k) for j, k in zip(levels, offsets)))

    @classmethod
    def unit(cls, d: int) -> 'Rectangle':
        """The all-zero rectangle (Haar constant in every direction)."""
        return cls(tuple(DyadicAxisIndex.zero() for _ in range(d)))

    @property
    def d(self) -> int:
        return len(self.axes)

    @property
    def measure_exponent(self) -> int:
        return sum(axis.depth for axis in self.axes)

    @property
    def measure(self) -> float:
        return float(np.ldexp(1.0, -self.measure_exponent))

    @property
    def has_zero_axis(self) -> bool:
        return any(axis.is_zero for axis in self.axes)

    def endpoints(self) -> List[Tuple[Fraction, Fraction]]:
        return [(axis.start, axis.end) for axis in self.axes]

    def contains(self, other: 'Rectangle') -> bool:
        return all(a.start <= b.start and b.end <= a.end for a, b in zip(self.axes, other.axes))

    def intersects(self, other: 'Rectangle') -> bool:
        return all(a.start < b.end and b.start < a.end for a, b in zip(self.axes, other.axes))

    def to_json(self) -> list:
        return [axis.to_json() for axis in self.axes]

    def __str__(self) -> str:
        return ' x '.join(str(axis) for axis in self.axes)


class RefinementGrid:
    """Common refinement of a family of rectangles.

    Per axis the breakpoints are the sorted distinct endpoints (always
    including 0 and 1). Every rectangle of the family is then a box of
    whole cells, recorded as half-open cell-index ranges.
    """

    def __init__(self, rectangles: Sequence[Rectangle], d: int, cell_limit: int = None):
        self.d = d
        self.rectangles = tuple(rectangles)
        limit = cell_limit if cell_limit is not None else get_grid_cell_limit()
        self.resolution = [0] * d
        for rect in self.rectangles:
            if rect.d != d:
                raise ParamError(f"rectangle {rect} has {rect.d} axes, expected {d}")
            for i, axis in enumerate(rect.axes):
                self.resolution[i] = max(self.resolution[i], axis.depth)

        ticks_per_axis: List[List[int]] = []
        for i in range(d):
            points = {0, 1 << self.resolution[i]}
            for rect in self.rectangles:
                points.update(rect.axes[i].ticks(self.resolution[i]))
            ticks_per_axis.append(sorted(points))
        self.shape = tuple(len(t) - 1 for t in ticks_per_axis)
        self.cell_count = int(np.prod(self.shape, dtype=object))
        if self.cell_count > limit:
            raise GridBudgetExceeded(self.cell_count, limit)

        self._ticks = ticks_per_axis
        self.breakpoints = [
            [Fraction(t, 1 << self.resolution[i]) for t in ticks_per_axis[i]] for i in range(d)
        ]
        self.widths = [
            np.array([float(b - a) for a, b in zip(bp, bp[1:])]) for bp in self.breakpoints
        ]
        position = [{t: n for n, t in enumerate(ticks)} for ticks in ticks_per_axis]
        lo = np.zeros((len(self.rectangles), d), dtype=np.int64)
        hi = np.zeros((len(self.rectangles), d), dtype=np.int64)
        for r, rect in enumerate(self.rectangles):
            for i, axis in enumerate(rect.axes):
                start, end = axis.ticks(self.resolution[i])
                lo[r, i] = position[i][start]
                hi[r, i] = position[i][end]
        self.lo = lo
        self.hi = hi
        logger.debug(f"refinement grid {self.shape} for {len(self.rectangles)} rectangles")

    def cell_volumes(self) -> np.ndarray:
        vol = self.widths[0]
        for w in self.widths[1:]:
            vol = np.multiply.outer(vol, w)
        return np.asarray(vol, dtype=float).reshape(self.shape)

    def scatter(self, weights: np.ndarray) -> np.ndarray:
        """Cell array holding ``sum_r weights[r]`` over rectangles covering each cell.

        Small families are added box by box. Large ones use a d-dimensional
        difference array: each box adds its weight at the ``2^d`` corners
        with alternating sign, then prefix sums along every axis recover
        the box sums.
        """
        if len(self.rectangles) <= DIRECT_LOOP_LIMIT:
            out = np.zeros(self.shape)
            for r in np.flatnonzero(weights):
                out[self.cells_inside(r)] += weights[r]
            return out
        diff = np.zeros(tuple(n + 1 for n in self.shape))
        for corner in itertools.product((0, 1), repeat=self.d):
            idx = tuple(np.where(corner[i], self.hi[:, i], self.lo[:, i]) for i in range(self.d))
            sign = -1.0 if sum(corner) % 2 else 1.0
            np.add.at(diff, idx, sign * weights)
        for axis in range(self.d):
            diff = np.cumsum(diff, axis=axis)
        return diff[tuple(slice(0, n) for n in self.shape)]

    def box_sums(self, cell_values: np.ndarray) -> np.ndarray:
        """``sum`` of ``cell_values`` over each rectangle's cells (summed-area table)."""
        if len(self.rectangles) <= DIRECT_LOOP_LIMIT:
            return np.array([float(np.sum(cell_values[self.cells_inside(r)]))
                             for r in range(len(self.rectangles))])
        table = np.zeros(tuple(n + 1 for n in self.shape))
        inner = cell_values
        for axis in range(self.d):
            inner = np.cumsum(inner, axis=axis)
        table[tuple(slice(1, None) for _ in range(self.d))] = inner
        out = np.zeros(len(self.rectangles))
        for corner in itertools.product((0, 1), repeat=self.d):
            idx = tuple(np.where(corner[i], self.hi[:, i], self.lo[:, i]) for i in range(self.d))
            sign = 1.0 if (self.d - sum(corner)) % 2 == 0 else -1.0
            out += sign * table[idx]
        return out

    def cells_inside(self, r: int) -> Tuple[slice, ...]:
        return tuple(slice(int(self.lo[r, i]), int(self.hi[r, i])) for i in range(self.d))


def grid_cell_count(rectangles: Iterable[Rectangle], d: int) -> int:
    """Cell count of the refinement grid without building it."""
    counts = []
    rects = list(rectangles)
    for i in range(d):
        res = max([rect.axes[i].depth for rect in rects] + [0])
        points = {0, 1 << res}
        for rect in rects:
            points.update(rect.axes[i].ticks(res))
        counts.append(len(points) - 1)
    return int(np.prod(counts, dtype=object))
