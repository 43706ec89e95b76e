"""
Random vectors and index sets for the property checkers.

Every sample owns its generator, keyed by ``(seed, sample index)`` on a
counter-based Philox stream, so a sample can be regenerated alone and a
run with more samples extends a run with fewer. Supports come from
structured generators in equal proportion; magnitudes are log-uniform.
"""

import logging
from typing import List, Sequence, Tuple, Union

import numpy as np

from src.errors import ParamError
from src.spaces.dyadic import Rectangle
from src.spaces.fpq_space import FpqParams, FpqVector
from src.spaces.lpq_space import LpqParams, LpqVector

logger = logging.getLogger(__name__)

MAGNITUDE_RANGE = (1e-3, 1e3)
SAMPLER_KINDS = {
    'lpq': ('rows', 'columns', 'scatter'),
    'fpq': ('level', 'stacks', 'scatter'),
}
# Index box for l^p(l^q) scatter supports.
LPQ_BOX = 8
# Finest level per axis for f_{p,q} supports, by dimension.
FPQ_MAX_LEVEL = {1: 10, 2: 5, 3: 3}

SpaceParams = Union[LpqParams, FpqParams]


def sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(index)])))


def space_of(params: SpaceParams) -> str:
    if isinstance(params, LpqParams):
        return 'lpq'
    if isinstance(params, FpqParams):
        return 'fpq'
    raise ParamError(f"no sampler for {type(params).__name__}")


def sample_kind(params: SpaceParams, index: int) -> str:
    kinds = SAMPLER_KINDS[space_of(params)]
    return kinds[index % len(kinds)]


def signed_log_uniform(rng: np.random.Generator, size: int,
                       low: float = MAGNITUDE_RANGE[0], high: float = MAGNITUDE_RANGE[1]) -> np.ndarray:
    magnitudes = np.exp(rng.uniform(np.log(low), np.log(high), size))
    return magnitudes * rng.choice((-1.0, 1.0), size)


def fpq_max_level(d: int) -> int:
    return FPQ_MAX_LEVEL.get(d, 2)


def lpq_support(rng: np.random.Generator, kind: str, size: int) -> List[Tuple[int, int]]:
    """``rows``: few long rows; ``columns``: one entry per row; ``scatter``: random box."""
    if kind == 'rows':
        n_rows = int(rng.integers(1, min(3, size) + 1))
        cells = [(j, k) for j in range(1, n_rows + 1) for k in range(1, size + 1)]
    elif kind == 'columns':
        cells = [(j, int(rng.integers(1, 4))) for j in range(1, 2 * size + 1)]
    elif kind == 'scatter':
        size = min(size, LPQ_BOX * LPQ_BOX)
        cells = [(j, k) for j in range(1, LPQ_BOX + 1) for k in range(1, LPQ_BOX + 1)]
    else:
        raise ParamError(f"unknown l^p(l^q) sampler kind {kind!r}")
    picks = rng.choice(len(cells), size=min(size, len(cells)), replace=False)
    return [cells[i] for i in sorted(picks)]


def _random_rectangle(rng: np.random.Generator, levels: Sequence[int]) -> Rectangle:
    offsets = [int(rng.integers(0, 1 << j)) for j in levels]
    return Rectangle.from_levels(levels, offsets)


def fpq_support(rng: np.random.Generator, kind: str, size: int, d: int) -> List[Rectangle]:
    """``level``: one shape, distinct positions; ``stacks``: rectangles
    sharing a common point (nested in every axis order); ``scatter``: mixed
    shapes and positions."""
    top = fpq_max_level(d)
    rects = set()
    if kind == 'level':
        levels = [int(j) for j in rng.integers(0, top + 1, d)]
        capacity = 1 << sum(levels)
        while len(rects) < min(size, capacity):
            rects.add(_random_rectangle(rng, levels))
    elif kind == 'stacks':
        point = [int(t) for t in rng.integers(0, 1 << top, d)]
        capacity = (top + 1) ** d
        while len(rects) < min(size, capacity):
            levels = [int(j) for j in rng.integers(0, top + 1, d)]
            rects.add(Rectangle.from_levels(levels, [t >> (top - j) for t, j in zip(point, levels)]))
    elif kind == 'scatter':
        attempts = 0
        while len(rects) < size and attempts < 50 * size:
            attempts += 1
            levels = [int(j) for j in rng.integers(0, top + 1, d)]
            rects.add(_random_rectangle(rng, levels))
    else:
        raise ParamError(f"unknown f_(p,q) sampler kind {kind!r}")
    return sorted(rects)


def sample_support(params: SpaceParams, rng: np.random.Generator, kind: str, size: int) -> list:
    if isinstance(params, LpqParams):
        return lpq_support(rng, kind, size)
    return fpq_support(rng, kind, size, params.d)


def make_vector(params: SpaceParams, keys: Sequence, values: Sequence[float]):
    cls = LpqVector if isinstance(params, LpqParams) else FpqVector
    return cls(params, list(keys), values)


def sample_vector(params: SpaceParams, rng: np.random.Generator, kind: str, size: int):
    keys = sample_support(params, rng, kind, size)
    return make_vector(params, keys, signed_log_uniform(rng, len(keys)))


def sample_nested_pair(params: SpaceParams, rng: np.random.Generator, kind: str,
                       max_a: int, max_b: int):
    """``(A, x)`` with ``x`` supported on ``B`` and ``A`` a nonempty subset of ``B``."""
    size_b = int(rng.integers(1, max_b + 1))
    x = sample_vector(params, rng, kind, size_b)
    size_a = int(rng.integers(1, min(max_a, len(x)) + 1))
    picks = rng.choice(len(x), size=size_a, replace=False)
    return [x.keys[i] for i in sorted(picks)], x


def split_disjoint(x, parts: int, rng: np.random.Generator) -> list:
    """Split ``x`` into ``parts`` vectors with pairwise disjoint index sets."""
    labels = rng.integers(0, parts, len(x))
    out = []
    for part in range(parts):
        mask = labels == part
        out.append(x.with_values(np.where(mask, x.values, 0.0)))
    return out
