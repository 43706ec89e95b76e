"""
Shared machinery for the two coefficient spaces.

A vector is a sorted tuple of hashable index keys plus an aligned float64
array of nonzero coefficients. Norm evaluation goes through a *kernel*: an
object bound to a fixed key tuple that evaluates the norm and the norming
functional for any value array aligned with those keys (zeros allowed). The
greedy drivers and the Chebyshev solver keep one kernel per run and only
swap value arrays.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import ParamError, ParamMismatch, VectorFormatError, ZeroVector

logger = logging.getLogger(__name__)

# Coefficients below this modulus are structural zeros (keeps |x|^{q-2} finite).
ZERO_THRESHOLD = 1e-300
CONJUGATE_TOL = 1e-12


def conjugate_exponent(p: float) -> float:
    return p / (p - 1.0)


@dataclass(frozen=True)
class ExponentParams:
    """Exponents ``1 < p, q < inf`` with their conjugates."""

    p: float
    q: float
    p_conj: float = field(init=False, repr=False, compare=False)
    q_conj: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ('p', 'q'):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 1.0:
                raise ParamError(f"{name} must be a finite real in (1, inf), got {value!r}")
        object.__setattr__(self, 'p', float(self.p))
        object.__setattr__(self, 'q', float(self.q))
        object.__setattr__(self, 'p_conj', conjugate_exponent(self.p))
        object.__setattr__(self, 'q_conj', conjugate_exponent(self.q))
        if abs(1.0 / self.p + 1.0 / self.p_conj - 1.0) > CONJUGATE_TOL or \
                abs(1.0 / self.q + 1.0 / self.q_conj - 1.0) > CONJUGATE_TOL:
            raise ParamError(f"conjugate exponents of p={self.p}, q={self.q} are not representable")

    @property
    def s(self) -> float:
        return max(self.p_conj, self.q_conj)

    def to_dict(self) -> Dict[str, Any]:
        return {'p': self.p, 'q': self.q}


class NormKernel:
    """Norm and norming functional on a fixed key tuple.

    Subclasses implement ``_norm_unit`` and ``_norming_unit`` for inputs
    scaled so that ``max |values| == 1``; scaling is handled here, which
    keeps large and tiny coefficients away from overflow in ``|x|^q``.
    """

    def __init__(self, params: ExponentParams, keys: Tuple[Hashable, ...]):
        self.params = params
        self.keys = keys

    def __len__(self) -> int:
        return len(self.keys)

    def norm(self, values: np.ndarray) -> float:
        scale = float(np.max(np.abs(values))) if len(values) else 0.0
        if scale == 0.0:
            return 0.0
        return scale * self._norm_unit(values / scale)

    def norming(self, values: np.ndarray) -> np.ndarray:
        """Signed ``F_x(e_i)`` for every key; 0 where ``x_i`` is 0."""
        scale = float(np.max(np.abs(values))) if len(values) else 0.0
        if scale == 0.0:
            raise ZeroVector("norming functional of the zero vector is undefined")
        return self._norming_unit(values / scale)

    def _norm_unit(self, u: np.ndarray) -> float:
        raise NotImplementedError

    def _norming_unit(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class CoefficientVector:
    """Immutable, finitely supported coefficient vector."""

    space: str = ''

    def __init__(self, params: ExponentParams, keys: Sequence[Hashable], values: Sequence[float]):
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or len(values) != len(keys):
            raise VectorFormatError(f"{len(keys)} keys but {values.shape} values")
        for key in keys:
            self._validate_key(params, key)
        order = sorted(range(len(keys)), key=lambda i: keys[i])
        sorted_keys = [keys[i] for i in order]
        for a, b in zip(sorted_keys, sorted_keys[1:]):
            if a == b:
                raise VectorFormatError(f"duplicate index {a!r}")
        sorted_values = values[order] if len(order) else values
        if not np.all(np.isfinite(sorted_values)):
            raise VectorFormatError("coefficients must be finite")
        keep = np.abs(sorted_values) >= ZERO_THRESHOLD
        self._params = params
        self._keys: Tuple[Hashable, ...] = tuple(k for k, flag in zip(sorted_keys, keep) if flag)
        self._values = sorted_values[keep].copy()
        self._values.flags.writeable = False
        self._index: Optional[Dict[Hashable, int]] = None
        self._kernel: Optional[NormKernel] = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_entries(cls, params: ExponentParams, entries: Any) -> 'CoefficientVector':
        """Build from a mapping ``{key: value}`` or an iterable of ``(key, value)`` pairs."""
        pairs = list(entries.items()) if isinstance(entries, dict) else list(entries)
        keys = [cls._normalize_key(k) for k, _ in pairs]
        return cls(params, keys, [float(v) for _, v in pairs])

    @classmethod
    def indicator(cls, params: ExponentParams, keys: Iterable[Hashable], value: float = 1.0):
        keys = [cls._normalize_key(k) for k in keys]
        return cls(params, keys, np.full(len(keys), float(value)))

    @classmethod
    def zero(cls, params: ExponentParams):
        return cls(params, [], [])

    @classmethod
    def _normalize_key(cls, key: Hashable) -> Hashable:
        return key

    @classmethod
    def _validate_key(cls, params: ExponentParams, key: Hashable) -> None:
        pass

    def _make_kernel(self, keys: Tuple[Hashable, ...]) -> NormKernel:
        raise NotImplementedError

    def kernel_for(self, keys: Tuple[Hashable, ...]) -> NormKernel:
        """A kernel of this space bound to an arbitrary sorted key tuple."""
        return self._make_kernel(tuple(keys))

    # -- accessors --------------------------------------------------------

    @property
    def params(self) -> ExponentParams:
        return self._params

    @property
    def keys(self) -> Tuple[Hashable, ...]:
        return self._keys

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def support(self) -> frozenset:
        return frozenset(self._keys)

    def index(self) -> Dict[Hashable, int]:
        if self._index is None:
            self._index = {k: i for i, k in enumerate(self._keys)}
        return self._index

    def kernel(self) -> NormKernel:
        if self._kernel is None:
            self._kernel = self._make_kernel(self._keys)
        return self._kernel

    def get(self, key: Hashable) -> float:
        pos = self.index().get(self._normalize_key(key))
        return 0.0 if pos is None else float(self._values[pos])

    def entries(self) -> Dict[Hashable, float]:
        return {k: float(v) for k, v in zip(self._keys, self._values)}

    def is_zero(self) -> bool:
        return len(self._keys) == 0

    def __len__(self) -> int:
        return len(self._keys)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoefficientVector) or type(self) is not type(other):
            return NotImplemented
        return self._params == other._params and self._keys == other._keys and \
            bool(np.array_equal(self._values, other._values))

    def __hash__(self):
        return hash((type(self).__name__, self._params, self._keys, self._values.tobytes()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self._params!r}, support={len(self)})"

    # -- derived vectors --------------------------------------------------

    def with_values(self, values: Sequence[float]):
        """Same keys, new coefficients (zeros are dropped)."""
        return type(self)(self._params, self._keys, values)

    def _like(self, keys: Sequence[Hashable], values: Sequence[float]):
        return type(self)(self._params, list(keys), values)

    def restrict(self, index_set: Iterable[Hashable]):
        wanted = {self._normalize_key(k) for k in index_set}
        mask = np.array([k in wanted for k in self._keys], dtype=bool)
        return self.with_values(np.where(mask, self._values, 0.0))

    def zero_out(self, index_set: Iterable[Hashable]):
        wanted = {self._normalize_key(k) for k in index_set}
        mask = np.array([k in wanted for k in self._keys], dtype=bool)
        return self.with_values(np.where(mask, 0.0, self._values))

    def scaled(self, factor: float):
        return self.with_values(self._values * float(factor))

    def basis_vector(self, key: Hashable):
        return self._like([self._normalize_key(key)], [1.0])

    def aligned(self, keys: Sequence[Hashable]) -> np.ndarray:
        """Coefficients of this vector at ``keys`` (0 where absent)."""
        index = self.index()
        return np.array([self._values[index[k]] if k in index else 0.0 for k in keys], dtype=float)

    # -- norm and functional ----------------------------------------------

    def check_same_space(self, other: 'CoefficientVector') -> None:
        if type(self) is not type(other) or self._params != other._params:
            raise ParamMismatch(f"{self!r} and {other!r} live in different spaces")

    def norm(self) -> float:
        return self.kernel().norm(self._values)

    def norming_coefficients(self) -> np.ndarray:
        """Signed ``F_x(e_i)`` aligned with ``keys``."""
        return self.kernel().norming(self._values)

    def norming_coeff(self, key: Hashable) -> float:
        """``|F_x(e_key)|``; 0 off the support."""
        coeffs = self.norming_coefficients()
        pos = self.index().get(self._normalize_key(key))
        return 0.0 if pos is None else abs(float(coeffs[pos]))

    def norming_apply(self, other: 'CoefficientVector') -> float:
        """``F_x(y)``; the functional only sees ``y`` on ``supp(x)``."""
        self.check_same_space(other)
        coeffs = self.norming_coefficients()
        return float(np.dot(coeffs, other.aligned(self._keys)))

    def dist_to_coord_span(self, index_set: Iterable[Hashable]) -> float:
        return self.zero_out(index_set).norm()


def linear_combination(template: CoefficientVector, keys: Tuple[Hashable, ...],
                       vectors: List[CoefficientVector]) -> np.ndarray:
    """Matrix whose row ``i`` holds ``vectors[i]`` aligned on ``keys``."""
    if not vectors:
        return np.zeros((0, len(keys)))
    for vec in vectors:
        template.check_same_space(vec)
    return np.vstack([vec.aligned(keys) for vec in vectors])


def union_keys(vectors: Iterable[CoefficientVector]) -> Tuple[Hashable, ...]:
    keys = set()
    for vec in vectors:
        keys.update(vec.keys)
    return tuple(sorted(keys))
