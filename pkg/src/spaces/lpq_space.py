"""
The mixed-norm sequence space l^p(l^q).

Indices are pairs ``(j, k)`` of positive integers: ``j`` is the row and
``k`` the position inside the row. Rows are measured in l^q and the row
norms are stacked in l^p::

    ||x|| = [ sum_j ( sum_k |x_jk|^q )^{p/q} ]^{1/p}
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Hashable, Iterable, Tuple

import numpy as np

from src.errors import ParamError, VectorFormatError
from src.spaces.base import CoefficientVector, ExponentParams, NormKernel

logger = logging.getLogger(__name__)

PSI_VARIANTS = ('p_conj_ge_q_conj', 'q_conj_ge_p_conj')


@dataclass(frozen=True)
class LpqParams(ExponentParams):
    """Exponents of l^p(l^q) and the constants derived from them."""

    @property
    def r(self) -> float:
        """A3 exponent: sums over A are dominated by ``|A|^r ||x||``."""
        return max(1.0 / self.p_conj, 1.0 / self.q_conj)

    @property
    def c1(self) -> float:
        return min(1.0 / self.p, 1.0 / self.q)

    @property
    def beta(self) -> float:
        """WCGA Lebesgue exponent."""
        return max(self.p_conj / self.q_conj, self.q_conj / self.p_conj)

    @property
    def b(self) -> float:
        """TGA Lebesgue exponent."""
        return max(self.p / self.q, self.q / self.p)

    @property
    def alpha_psi(self) -> float:
        """Exponent of the B block in the lower-bound vector."""
        return self.p_conj * (1.0 / self.q_conj - 1.0 / self.p_conj)

    @property
    def smoothness_exponent(self) -> float:
        """Power type of the modulus of smoothness, ``min(p, q, 2)``."""
        return min(self.p, self.q, 2.0)

    def dual(self) -> 'LpqParams':
        return LpqParams(self.p_conj, self.q_conj)

    def to_dict(self) -> Dict[str, Any]:
        return {'space': 'lpq', 'p': self.p, 'q': self.q}


class LpqKernel(NormKernel):
    """Vectorised l^p(l^q) norm over a fixed set of ``(j, k)`` keys."""

    def __init__(self, params: LpqParams, keys: Tuple[Tuple[int, int], ...]):
        super().__init__(params, keys)
        rows = np.array([j for j, _ in keys], dtype=np.int64)
        self.row_ids, self.row_of = np.unique(rows, return_inverse=True)
        self.row_of = self.row_of.reshape(-1)

    def _row_sums(self, u: np.ndarray) -> np.ndarray:
        return np.bincount(self.row_of, weights=np.abs(u) ** self.params.q, minlength=len(self.row_ids))

    def _norm_unit(self, u: np.ndarray) -> float:
        p, q = self.params.p, self.params.q
        return float(np.sum(self._row_sums(u) ** (p / q)) ** (1.0 / p))

    def _norming_unit(self, u: np.ndarray) -> np.ndarray:
        p, q = self.params.p, self.params.q
        row_sums = self._row_sums(u)
        norm = float(np.sum(row_sums ** (p / q)) ** (1.0 / p))
        mod = np.abs(u)
        nz = mod > 0
        out = np.zeros_like(u)
        delta = row_sums[self.row_of[nz]] ** (1.0 / q)
        out[nz] = np.sign(u[nz]) * delta ** (p - q) * mod[nz] ** (q - 1.0) / norm ** (p - 1.0)
        return out

    def row_norms(self, values: np.ndarray) -> Dict[int, float]:
        sums = np.bincount(self.row_of, weights=np.abs(values) ** self.params.q, minlength=len(self.row_ids))
        return {int(j): float(s ** (1.0 / self.params.q)) for j, s in zip(self.row_ids, sums)}


class LpqVector(CoefficientVector):
    """Finitely supported element of l^p(l^q); keys are ``(j, k)`` with j, k >= 1."""

    space = 'lpq'

    @classmethod
    def _normalize_key(cls, key: Hashable) -> Tuple[int, int]:
        try:
            j, k = key
        except (TypeError, ValueError):
            raise VectorFormatError(f"l^p(l^q) index must be a pair (j, k), got {key!r}")
        if isinstance(j, bool) or isinstance(k, bool):
            raise VectorFormatError(f"l^p(l^q) index must be integers, got {key!r}")
        return (int(j), int(k))

    @classmethod
    def _validate_key(cls, params, key) -> None:
        if not isinstance(key, tuple) or len(key) != 2:
            raise VectorFormatError(f"l^p(l^q) index must be a pair (j, k), got {key!r}")
        if key[0] < 1 or key[1] < 1:
            raise VectorFormatError(f"l^p(l^q) indices start at 1, got {key!r}")

    def __init__(self, params: LpqParams, keys, values):
        if not isinstance(params, LpqParams):
            raise ParamError(f"LpqVector needs LpqParams, got {type(params).__name__}")
        super().__init__(params, [self._normalize_key(k) for k in keys], values)

    def _make_kernel(self, keys) -> LpqKernel:
        return LpqKernel(self.params, keys)

    def row_norm(self, j: int) -> float:
        mask = np.array([key[0] == j for key in self.keys], dtype=bool)
        if not mask.any():
            return 0.0
        return float(np.sum(np.abs(self.values[mask]) ** self.params.q) ** (1.0 / self.params.q))


# -- module-level operations ------------------------------------------------

def lpq_norm(x: LpqVector) -> float:
    return x.norm()


def lpq_row_norm(x: LpqVector, j: int) -> float:
    """Row norm ``Delta_j(x)``; 0 for rows outside the support."""
    return x.row_norm(j)


def lpq_norming_coeff(x: LpqVector, j: int, k: int) -> float:
    """``|F_x(e_jk)| = Delta_j^{p-q} |x_jk|^{q-1} / ||x||^{p-1}``.

    Raises:
        ZeroVector: if ``x`` is the zero vector.
    """
    return x.norming_coeff((j, k))


def lpq_norming_apply(x: LpqVector, y: LpqVector) -> float:
    """Evaluate the norming functional of ``x`` at ``y``.

    Raises:
        ZeroVector: if ``x`` is zero.
        ParamMismatch: if ``x`` and ``y`` use different exponents.
    """
    return x.norming_apply(y)


def lpq_restrict(x: LpqVector, index_set: Iterable[Tuple[int, int]]) -> LpqVector:
    return x.restrict(index_set)


def lpq_dist_to_coord_span(x: LpqVector, index_set: Iterable[Tuple[int, int]]) -> float:
    """Distance from ``x`` to the span of ``{e_i : i in S}``.

    The norm is absolute and monotone in every coordinate, so the best
    approximation from a coordinate span copies ``x`` on ``S``.
    """
    return x.dist_to_coord_span(index_set)


def psi_block_sizes(params: LpqParams, n: int, variant: str) -> Tuple[int, int]:
    """Smallest ``m`` (rows of A) and ``|B|`` for which the A-first greedy
    order cannot recover ``x`` within ``sigma_n`` before exhausting A.

    ``p_conj_ge_q_conj``: ``|B| = n`` and ``m = ceil(n^{p'/q'})``, so that
    ``||1_A|| = m^{1/p} >= ||n^alpha 1_B||``.
    ``q_conj_ge_p_conj``: ``|B| = 2n`` and ``m = floor(2^{p/q} n^{p'/q'}) + 1``,
    so that removing ``n`` entries of B leaves more than ``||1_A||``.
    """
    if n < 1:
        raise ParamError(f"n must be >= 1, got {n}")
    ratio = params.p_conj / params.q_conj
    if variant == PSI_VARIANTS[0]:
        return _ceil_power(n, ratio), n
    if variant == PSI_VARIANTS[1]:
        return int(math.floor(2.0 ** (params.p / params.q) * n ** ratio)) + 1, 2 * n
    raise ParamError(f"unknown variant {variant!r}, expected one of {PSI_VARIANTS}")


def _ceil_power(n: int, exponent: float) -> int:
    value = n ** exponent
    m = int(math.ceil(value - 1e-9 * value))
    # integer comparison m >= n^{exponent} must hold exactly
    while m < value * (1 - 1e-12):
        m += 1
    return max(m, 1)


def build_psi_vector(params: LpqParams, m: int, n: int, variant: str) -> LpqVector:
    """Lower-bound vector ``1_A + n^alpha 1_B``.

    A holds one entry in each of rows ``1..m``; B sits in row ``m+1`` with
    ``n`` (or ``2n`` for the ``q_conj_ge_p_conj`` variant) entries. Every
    coordinate of A and B has the same norming coefficient.
    """
    if m < 1 or n < 1:
        raise ParamError(f"m and n must be >= 1, got m={m}, n={n}")
    if variant not in PSI_VARIANTS:
        raise ParamError(f"unknown variant {variant!r}, expected one of {PSI_VARIANTS}")
    size_b = n if variant == PSI_VARIANTS[0] else 2 * n
    height = float(n) ** params.alpha_psi
    keys = [(j, 1) for j in range(1, m + 1)] + [(m + 1, k) for k in range(1, size_b + 1)]
    values = np.concatenate([np.ones(m), np.full(size_b, height)])
    return LpqVector(params, keys, values)


def psi_blocks(m: int, n: int, variant: str) -> Dict[Tuple[int, int], str]:
    """Block labels ('A'/'B') of :func:`build_psi_vector`'s support."""
    size_b = n if variant == PSI_VARIANTS[0] else 2 * n
    blocks = {(j, 1): 'A' for j in range(1, m + 1)}
    blocks.update({(m + 1, k): 'B' for k in range(1, size_b + 1)})
    return blocks


def dual_indicator_norm(params: LpqParams, index_set: Iterable[Tuple[int, int]]) -> float:
    """Closed form of ``||1_A||`` in the dual space l^{p'}(l^{q'})."""
    counts: Dict[int, int] = {}
    for j, _ in {LpqVector._normalize_key(k) for k in index_set}:
        counts[j] = counts.get(j, 0) + 1
    if not counts:
        return 0.0
    dual = params.dual()
    return float(sum(c ** (dual.p / dual.q) for c in counts.values()) ** (1.0 / dual.p))
