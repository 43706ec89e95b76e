"""
The dyadic sequence space f_{p,q} over rectangles of [0,1]^d.

For a coefficient vector ``x = (x_I)`` the norm is the L^p norm of the
square-function analogue::

    S_q x(u) = ( sum_I |x_I|^q |I|^{-q/p} 1_I(u) )^{1/q}

``S_q`` is constant on the cells of the common refinement of the support,
so norm and norming functional are evaluated exactly cell by cell.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, Iterable, List, Sequence, Tuple

import numpy as np

from src.errors import ParamError, VectorFormatError
from src.spaces.base import CoefficientVector, ExponentParams, NormKernel
from src.spaces.dyadic import DyadicAxisIndex, Rectangle, RefinementGrid

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FpqParams(ExponentParams):
    d: int = 1

    def __post_init__(self):
        super().__post_init__()
        if isinstance(self.d, bool) or not isinstance(self.d, int) or self.d < 1:
            raise ParamError(f"dimension d must be a positive integer, got {self.d!r}")

    @property
    def c_pq(self) -> float:
        return min(1.0 / self.p, 1.0 / self.q)

    @property
    def h(self) -> float:
        """Log exponent of the A3 constant, ``(d-1)(1/p - 1/q)_+``."""
        return (self.d - 1) * max(1.0 / self.p - 1.0 / self.q, 0.0)

    @property
    def alpha_pq(self) -> float:
        """Power of N in the WCGA Lebesgue bound."""
        return 1.0 if self.p <= self.q else self.q_conj / self.p_conj

    @property
    def democracy_log_exponent(self) -> float:
        """``(d-1)(1/q - 1/p)_+``: log growth of ``||1_A|| / |A|^{1/p}``."""
        return (self.d - 1) * max(1.0 / self.q - 1.0 / self.p, 0.0)

    @property
    def lower_bound_log_exponent(self) -> float:
        """``p'(d-1)(1/p - 1/q)``: log growth of ``psi(N)/N`` when ``p <= q``."""
        return self.p_conj * (self.d - 1) * (1.0 / self.p - 1.0 / self.q)

    def dual(self) -> 'FpqParams':
        return FpqParams(self.p_conj, self.q_conj, self.d)

    def with_q(self, q: float) -> 'FpqParams':
        return FpqParams(self.p, q, self.d)

    def to_dict(self) -> Dict[str, Any]:
        return {'space': 'fpq', 'p': self.p, 'q': self.q, 'd': self.d}


class FpqKernel(NormKernel):
    """Exact f_{p,q} evaluation on the refinement grid of a fixed rectangle family."""

    def __init__(self, params: FpqParams, keys: Tuple[Rectangle, ...]):
        super().__init__(params, keys)
        self.grid = RefinementGrid(keys, params.d)
        self.volumes = self.grid.cell_volumes()
        exponents = np.array([rect.measure_exponent for rect in keys], dtype=float)
        # |I|^{-q/p}
        self.weights = np.exp2(exponents * params.q / params.p)

    def square_function_q(self, u: np.ndarray) -> np.ndarray:
        """Cell values of ``(S_q u)^q``."""
        return self.grid.scatter(np.abs(u) ** self.params.q * self.weights)

    def _norm_unit(self, u: np.ndarray) -> float:
        p, q = self.params.p, self.params.q
        sq = self.square_function_q(u)
        return float(np.sum(self.volumes * sq ** (p / q)) ** (1.0 / p))

    def _norming_unit(self, u: np.ndarray) -> np.ndarray:
        p, q = self.params.p, self.params.q
        sq = self.square_function_q(u)
        norm = float(np.sum(self.volumes * sq ** (p / q)) ** (1.0 / p))
        density = np.zeros_like(sq)
        positive = sq > 0
        density[positive] = self.volumes[positive] * sq[positive] ** ((p - q) / q)
        integrals = self.grid.box_sums(density)
        mod = np.abs(u)
        nz = mod > 0
        out = np.zeros_like(u)
        out[nz] = (np.sign(u[nz]) * mod[nz] ** (q - 1.0) * self.weights[nz] * integrals[nz]
                   / norm ** (p - 1.0))
        return out


def _axis_from_json(spec: Any) -> DyadicAxisIndex:
    if spec == 'zero' or spec is None:
        return DyadicAxisIndex.zero()
    if isinstance(spec, DyadicAxisIndex):
        return spec
    if isinstance(spec, dict):
        return DyadicAxisIndex.interval(spec['j'], spec['k'])
    try:
        j, k = spec
    except (TypeError, ValueError):
        raise VectorFormatError(f"axis must be 'zero', {{'j','k'}} or (j, k), got {spec!r}")
    return DyadicAxisIndex.interval(j, k)


class FpqVector(CoefficientVector):
    """Finitely supported element of f_{p,q}; keys are :class:`Rectangle` objects."""

    space = 'fpq'

    @classmethod
    def _normalize_key(cls, key: Hashable) -> Rectangle:
        if isinstance(key, Rectangle):
            return key
        try:
            return Rectangle(tuple(_axis_from_json(axis) for axis in key))
        except TypeError:
            raise VectorFormatError(f"not a rectangle: {key!r}")

    @classmethod
    def _validate_key(cls, params, key) -> None:
        if not isinstance(key, Rectangle):
            raise VectorFormatError(f"f_{{p,q}} index must be a Rectangle, got {key!r}")
        if key.d != params.d:
            raise VectorFormatError(f"rectangle {key} has {key.d} axes, space has d={params.d}")

    def __init__(self, params: FpqParams, keys, values):
        if not isinstance(params, FpqParams):
            raise ParamError(f"FpqVector needs FpqParams, got {type(params).__name__}")
        super().__init__(params, [self._normalize_key(k) for k in keys], values)

    def _make_kernel(self, keys) -> FpqKernel:
        return FpqKernel(self.params, keys)

    def in_params(self, params: FpqParams) -> 'FpqVector':
        """Same coefficients read in another f_{p,q} (e.g. the dual space)."""
        return FpqVector(params, self.keys, self.values)


# -- module-level operations ------------------------------------------------

def fpq_norm(x: FpqVector) -> float:
    """Exact ``||S_q x||_{L^p}``.

    Raises:
        GridBudgetExceeded: if the refinement grid exceeds the cell limit.
    """
    return x.norm()


def fpq_norming_coeff(x: FpqVector, rect: Rectangle) -> float:
    return x.norming_coeff(rect)


def fpq_norming_apply(x: FpqVector, y: FpqVector) -> float:
    return x.norming_apply(y)


def fpq_dist_to_coord_span(x: FpqVector, rects: Iterable[Rectangle]) -> float:
    return x.dist_to_coord_span(rects)


def democracy_sum(params: FpqParams, rects: Iterable[Rectangle]) -> float:
    """``|| sum_{I in A} e_I ||`` in f_{p,q}."""
    rects = list(rects)
    if not rects:
        return 0.0
    return FpqVector.indicator(params, rects).norm()


def level_compositions(n: int, d: int) -> List[Tuple[int, ...]]:
    """Ordered d-tuples of positive integers summing to n."""
    if d == 1:
        return [(n,)] if n >= 1 else []
    out = []
    for first in range(1, n - d + 2):
        out.extend((first,) + rest for rest in level_compositions(n - first, d - 1))
    return out


def composition_count(n: int, d: int) -> int:
    return math.comb(n - 1, d - 1) if n >= d else 0


def build_An(params: FpqParams, n: int) -> List[Rectangle]:
    """All rectangles of measure ``2^-n`` inside ``[0, 1/2]^d``."""
    d = params.d
    if n < d:
        raise ParamError(f"A_n needs n >= d, got n={n}, d={d}")
    rects = []
    for levels in level_compositions(n, d):
        ranges = [range(1 << (j - 1)) for j in levels]
        for offsets in itertools.product(*ranges):
            rects.append(Rectangle.from_levels(levels, offsets))
    return sorted(rects)


def build_Bm(params: FpqParams, m_vec: Sequence[int]) -> List[Rectangle]:
    """All rectangles with axis lengths ``2^-m_i`` inside ``[1/2, 1]^d``."""
    if len(m_vec) != params.d:
        raise ParamError(f"m_vec needs {params.d} entries, got {len(m_vec)}")
    if any(m < 1 for m in m_vec):
        raise ParamError(f"every m_i must be >= 1, got {tuple(m_vec)}")
    ranges = [range(1 << (m - 1), 1 << m) for m in m_vec]
    return sorted(Rectangle.from_levels(m_vec, offsets) for offsets in itertools.product(*ranges))


def An_size(n: int, d: int) -> int:
    return composition_count(n, d) * (1 << (n - d))


def Bm_size(m_vec: Sequence[int]) -> int:
    return 1 << sum(m - 1 for m in m_vec)


def structured_norm(params: FpqParams, a: float, n: int, b: float, m_vec: Sequence[int]) -> float:
    """Closed-form norm of ``a 1_{A_n} + b 1_{B_m}``.

    ``(S_q)^q`` equals ``C a^q 2^{nq/p}`` on ``(0,1/2)^d`` (``C`` level
    compositions of ``n``) and ``b^q 2^{mq/p}`` on ``(1/2,1)^d``.
    """
    return StructuredFamily(params, a, n, b, tuple(m_vec)).norm()


@dataclass(frozen=True)
class StructuredFamily:
    """``a 1_{A_n} + b 1_{B_m}`` with ``removed_b`` rectangles of B zeroed.

    Norm and norming coefficients are closed-form while A is intact;
    removed B rectangles are the first ones in sorted order.
    """

    params: FpqParams
    a: float
    n: int
    b: float
    m_vec: Tuple[int, ...]
    removed_b: int = 0
    compositions: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < self.params.d:
            raise ParamError(f"A_n needs n >= d, got n={self.n}, d={self.params.d}")
        if len(self.m_vec) != self.params.d or any(m < 1 for m in self.m_vec):
            raise ParamError(f"bad m_vec {self.m_vec} for d={self.params.d}")
        if not 0 <= self.removed_b <= self.size_b:
            raise ParamError(f"removed_b={self.removed_b} outside [0, {self.size_b}]")
        object.__setattr__(self, 'compositions', composition_count(self.n, self.params.d))

    @property
    def m(self) -> int:
        return sum(self.m_vec)

    @property
    def size_a(self) -> int:
        return An_size(self.n, self.params.d)

    @property
    def size_b(self) -> int:
        return Bm_size(self.m_vec)

    @property
    def remaining_b(self) -> int:
        return self.size_b - self.removed_b

    def mass_a(self) -> float:
        """``||a 1_{A_n}||^p``."""
        p, q, d = self.params.p, self.params.q, self.params.d
        return float(np.ldexp(self.compositions ** (p / q) * abs(self.a) ** p, self.n - d))

    def mass_b_each(self) -> float:
        """Contribution ``|b|^p`` of every B rectangle to ``||x||^p``."""
        return abs(self.b) ** self.params.p

    def norm(self) -> float:
        return (self.mass_a() + self.remaining_b * self.mass_b_each()) ** (1.0 / self.params.p)

    def norm_b(self) -> float:
        return (self.remaining_b * self.mass_b_each()) ** (1.0 / self.params.p)

    def coeff_a(self) -> float:
        """``|F_x(e_I)|`` for ``I`` in A_n."""
        p, q = self.params.p, self.params.q
        if self.a == 0:
            return 0.0
        return abs(self.a) ** (p - 1) * self.compositions ** ((p - q) / q) / self.norm() ** (p - 1)

    def coeff_b(self) -> float:
        """``|F_x(e_I)|`` for a remaining ``I`` in B_m."""
        if self.b == 0 or self.remaining_b == 0:
            return 0.0
        return abs(self.b) ** (self.params.p - 1) / self.norm() ** (self.params.p - 1)

    def remove_b(self, count: int = 1) -> 'StructuredFamily':
        return StructuredFamily(self.params, self.a, self.n, self.b, self.m_vec, self.removed_b + count)

    def to_vector(self) -> FpqVector:
        """Materialise as an :class:`FpqVector` (small n only)."""
        a_rects = build_An(self.params, self.n)
        b_rects = build_Bm(self.params, self.m_vec)[self.removed_b:]
        keys = a_rects + b_rects
        values = [self.a] * len(a_rects) + [self.b] * len(b_rects)
        return FpqVector(self.params, keys, values)

    def blocks(self) -> Dict[Rectangle, str]:
        labels = {rect: 'A' for rect in build_An(self.params, self.n)}
        labels.update({rect: 'B' for rect in build_Bm(self.params, self.m_vec)})
        return labels


def tied_b_coefficient(params: FpqParams, a: float, n: int) -> float:
    """``b`` making A_n and B_m norming coefficients equal:
    ``b^{p-1} = a^{p-1} C^{(p-q)/q}``."""
    comps = composition_count(n, params.d)
    return abs(a) * comps ** ((params.p - params.q) / (params.q * (params.p - 1.0)))


def lorentz_quasinorm(coeffs: Sequence[float], p: float, q: float) -> float:
    """``( sum_j |2^{j/p} x*_{2^j}|^q )^{1/q}`` over the decreasing rearrangement."""
    mods = np.sort(np.abs(np.asarray(coeffs, dtype=float)))[::-1]
    mods = mods[mods > 0]
    if len(mods) == 0:
        return 0.0
    j = np.arange(int(math.floor(math.log2(len(mods)))) + 1)
    picks = mods[(1 << j) - 1]
    return float(np.sum((np.exp2(j / p) * picks) ** q) ** (1.0 / q))
