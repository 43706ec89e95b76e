"""
The d-variate Haar system and its Littlewood-Paley norm.

Haar coefficients of a dyadic step function are taken against the
L^{p'}-normalised Haar functions, ``c_I(f) = <f, H_{I,p'}>``; then
``f = sum_I c_I H_{I,p}`` and the Littlewood-Paley norm of ``f`` is the
f_{p,2} norm of the coefficient vector over rectangles that may carry the
zero (constant) direction on any axis.

All transforms are separable: the one-dimensional analysis and synthesis
run along each axis in turn.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np

from src.errors import ParamError, VectorFormatError
from src.spaces.dyadic import DyadicAxisIndex, Rectangle
from src.spaces.fpq_space import FpqParams, FpqVector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DyadicStepFunction:
    """Values on the ``2^L`` x ... x ``2^L`` grid of dyadic cubes of side ``2^-L``."""

    grid_level: int
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if self.grid_level < 0:
            raise ParamError(f"grid_level must be >= 0, got {self.grid_level}")
        side = 1 << self.grid_level
        if values.ndim < 1 or any(n != side for n in values.shape):
            raise VectorFormatError(f"values of shape {values.shape} do not match grid level {self.grid_level}")
        object.__setattr__(self, 'values', values)

    @property
    def d(self) -> int:
        return self.values.ndim

    @classmethod
    def from_flat(cls, grid_level: int, flat: List[float], d: int) -> 'DyadicStepFunction':
        side = 1 << grid_level
        flat = np.asarray(flat, dtype=float)
        if flat.size != side ** d:
            raise VectorFormatError(f"expected {side ** d} cell values for d={d}, L={grid_level}, got {flat.size}")
        return cls(grid_level, flat.reshape((side,) * d))

    def lp_norm(self, p: float) -> float:
        cell = 2.0 ** (-self.grid_level * self.d)
        return float((cell * np.sum(np.abs(self.values) ** p)) ** (1.0 / p))

    def to_dict(self) -> Dict[str, Any]:
        return {'grid_level': self.grid_level, 'values': self.values.reshape(-1).tolist()}


@dataclass(frozen=True)
class HaarExpansion:
    d: int
    p: float
    coefficients: FpqVector

    def __post_init__(self):
        params = self.coefficients.params
        if params.q != 2.0 or params.d != self.d or params.p != float(self.p):
            raise ParamError(f"Haar coefficients must live in f_(p,2) with d={self.d}, got {params!r}")


def axis_indices(grid_level: int) -> List[DyadicAxisIndex]:
    """One-dimensional Haar indices in transform order: zero, then level by level."""
    out = [DyadicAxisIndex.zero()]
    for j in range(grid_level):
        out.extend(DyadicAxisIndex.interval(j, k) for k in range(1 << j))
    return out


def _axis_lengths(grid_level: int) -> np.ndarray:
    return np.array([float(axis.length) for axis in axis_indices(grid_level)])


def _integrate_against_haar(v: np.ndarray, grid_level: int, axis: int) -> np.ndarray:
    """Along ``axis``: integrals of v against ``h_0`` and every unnormalised ``h_I``."""
    v = np.moveaxis(v, axis, 0)
    side = 1 << grid_level
    cell = 1.0 / side
    rest = v.shape[1:]
    out = np.empty((side,) + rest)
    out[0] = cell * v.sum(axis=0)
    for j in range(grid_level):
        halves = v.reshape((1 << j, 2, side >> (j + 1)) + rest).sum(axis=2) * cell
        out[1 << j:1 << (j + 1)] = halves[:, 0] - halves[:, 1]
    return np.moveaxis(out, 0, axis)


def _evaluate_haar_sum(u: np.ndarray, grid_level: int, axis: int) -> np.ndarray:
    """Along ``axis``: cell values of ``sum_idx u_idx h_idx`` (unnormalised Haar functions)."""
    u = np.moveaxis(u, axis, 0)
    side = 1 << grid_level
    rest = u.shape[1:]
    out = np.repeat(u[0:1], side, axis=0)
    for j in range(grid_level):
        coeffs = u[1 << j:1 << (j + 1)]
        width = side >> (j + 1)
        signed = np.stack([coeffs, -coeffs], axis=1)
        out = out + np.repeat(signed.reshape((1 << (j + 1),) + rest), width, axis=0)
    return np.moveaxis(out, 0, axis)


def haar_coefficients(f: DyadicStepFunction, p: float) -> HaarExpansion:
    """``c_I(f) = |I|^{-1/p'} int f H_I`` for every rectangle of the grid."""
    params = FpqParams(p, 2.0, f.d)
    lengths = _axis_lengths(f.grid_level)
    coeffs = f.values
    for axis in range(f.d):
        coeffs = _integrate_against_haar(coeffs, f.grid_level, axis)
        shape = [1] * f.d
        shape[axis] = len(lengths)
        coeffs = coeffs * (lengths ** (-1.0 / params.p_conj)).reshape(shape)
    indices = axis_indices(f.grid_level)
    nz = np.nonzero(coeffs)
    keys = [Rectangle(tuple(indices[i] for i in pos)) for pos in zip(*nz)]
    vector = FpqVector(params, keys, coeffs[nz])
    logger.debug(f"Haar expansion with {len(vector)} nonzero coefficients (d={f.d}, L={f.grid_level})")
    return HaarExpansion(f.d, float(p), vector)


def _coefficient_array(expansion: HaarExpansion, grid_level: int) -> np.ndarray:
    indices = axis_indices(grid_level)
    position = {axis: n for n, axis in enumerate(indices)}
    side = 1 << grid_level
    array = np.zeros((side,) * expansion.d)
    for rect, value in zip(expansion.coefficients.keys, expansion.coefficients.values):
        try:
            array[tuple(position[axis] for axis in rect.axes)] = value
        except KeyError:
            raise ParamError(f"rectangle {rect} is finer than grid level {grid_level}")
    return array


def required_grid_level(expansion: HaarExpansion) -> int:
    """Smallest grid on which every Haar function of the expansion is a step function."""
    deepest = -1
    for rect in expansion.coefficients.keys:
        for axis in rect.axes:
            if not axis.is_zero:
                deepest = max(deepest, axis.level)
    return deepest + 1


def haar_reconstruct(expansion: HaarExpansion, grid_level: int = None) -> DyadicStepFunction:
    """Cell values of ``sum_I c_I H_{I,p}``."""
    level = required_grid_level(expansion) if grid_level is None else grid_level
    lengths = _axis_lengths(level)
    values = _coefficient_array(expansion, level)
    for axis in range(expansion.d):
        shape = [1] * expansion.d
        shape[axis] = len(lengths)
        values = values * (lengths ** (-1.0 / expansion.p)).reshape(shape)
        values = _evaluate_haar_sum(values, level, axis)
    return DyadicStepFunction(level, values)


def haar_square_function(expansion: HaarExpansion, grid_level: int = None) -> np.ndarray:
    """Cell values of ``S(f) = ( sum_I |c_I H_{I,p}|^2 )^{1/2}``."""
    level = required_grid_level(expansion) if grid_level is None else grid_level
    lengths = _axis_lengths(level)
    squares = _coefficient_array(expansion, level) ** 2
    for axis in range(expansion.d):
        shape = [1] * expansion.d
        shape[axis] = len(lengths)
        squares = squares * (lengths ** (-2.0 / expansion.p)).reshape(shape)
        # |h_I|^2 = 1_I: sum the weights of every interval containing the cell
        squares = _evaluate_indicator_sum(squares, level, axis)
    return np.sqrt(squares)


def _evaluate_indicator_sum(u: np.ndarray, grid_level: int, axis: int) -> np.ndarray:
    u = np.moveaxis(u, axis, 0)
    side = 1 << grid_level
    out = np.repeat(u[0:1], side, axis=0)
    for j in range(grid_level):
        coeffs = u[1 << j:1 << (j + 1)]
        out = out + np.repeat(coeffs, side >> j, axis=0)
    return np.moveaxis(out, 0, axis)


def haar_lp_norm(expansion: HaarExpansion) -> float:
    """Littlewood-Paley norm: the f_{p,2} norm of the coefficients."""
    return expansion.coefficients.norm()


def haar_function(d: int, p: float, rect: Rectangle) -> HaarExpansion:
    """The single L^p-normalised Haar function ``H_{I,p}`` as an expansion."""
    return HaarExpansion(d, float(p), FpqVector(FpqParams(p, 2.0, d), [rect], [1.0]))
