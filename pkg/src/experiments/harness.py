"""
Shared plumbing for the experiments: run specification, log-log fits,
ordered parallel grids and self-describing CSV/JSON output.
"""

import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src import __version__
from src.errors import ParamError
from src.greedy.greedy_algorithms import GreedyConfig
from src.spaces.fpq_space import FpqParams
from src.spaces.lpq_space import LpqParams

logger = logging.getLogger(__name__)

FORMATS = ('csv', 'json')
# Share of the log-x range treated as transient and left out of fits.
FIT_DROP_FRACTION = 0.25
MIN_FIT_POINTS = 4
FLOAT_FORMAT = '%.12g'

SpaceParams = Union[LpqParams, FpqParams]


@dataclass
class ExperimentSpec:
    """One experiment run.

    ``n_values`` is the size grid (n for the lower bounds, N for the
    sweeps); ``pq_grid`` is the exponent grid of the regime map. Empty
    grids fall back to the experiment's defaults.
    """

    experiment: str
    params: Optional[SpaceParams] = None
    n_values: List[int] = field(default_factory=list)
    pq_grid: List[Tuple[float, float]] = field(default_factory=list)
    config: GreedyConfig = field(default_factory=GreedyConfig)
    C: float = 1.0
    seed: int = 0
    samples: int = 5
    epsilon: float = 0.01
    variant: Optional[str] = None
    workers: int = 1
    output: Optional[str] = None
    fmt: str = 'csv'

    def __post_init__(self):
        if self.C < 1.0:
            raise ParamError(f"C must be >= 1, got {self.C}")
        if self.workers < 1:
            raise ParamError(f"workers must be >= 1, got {self.workers}")
        if self.fmt not in FORMATS:
            raise ParamError(f"unknown format {self.fmt!r}, expected one of {FORMATS}")
        if any(n < 1 for n in self.n_values):
            raise ParamError(f"grid values must be >= 1, got {self.n_values}")

    def metadata(self) -> Dict[str, Any]:
        meta = {'experiment': self.experiment, 'version': __version__}
        if self.params is not None:
            meta.update(self.params.to_dict())
        meta.update({
            'C': self.C,
            'seed': self.seed,
            'samples': self.samples,
            'epsilon': self.epsilon,
            'tau': self.config.tau,
            'tol': self.config.tol,
            'tie_break': self.config.tie_break,
        })
        if self.variant is not None:
            meta['variant'] = self.variant
        if self.n_values:
            meta['grid'] = list(self.n_values)
        if self.pq_grid:
            meta['pq_grid'] = [list(pq) for pq in self.pq_grid]
        return meta


@dataclass
class FitResult:
    """Least-squares line through ``(log x, log y)``."""

    slope: float
    intercept: float
    r_squared: float
    points: List[Tuple[float, float]]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def fit_loglog(xs: Sequence[float], ys: Sequence[float],
               drop_fraction: float = FIT_DROP_FRACTION) -> FitResult:
    """Fit ``log y = slope * log x + intercept``.

    Points in the lowest ``drop_fraction`` of the ``log x`` range are left
    out. ``points`` holds the raw ``(x, y)`` pairs that entered the fit.

    Raises:
        ParamError: with fewer than four usable points.
    """
    pairs = [(float(x), float(y)) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if len(pairs) < MIN_FIT_POINTS:
        raise ParamError(f"a fit needs at least {MIN_FIT_POINTS} positive points, got {len(pairs)}")
    lx = np.log([x for x, _ in pairs])
    cutoff = lx.min() + drop_fraction * (lx.max() - lx.min())
    kept = [pair for pair, value in zip(pairs, lx) if value >= cutoff - 1e-12]
    if len(kept) < MIN_FIT_POINTS:
        kept = sorted(pairs)[-MIN_FIT_POINTS:]
    x = np.log([px for px, _ in kept])
    y = np.log([py for _, py in kept])
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    spread = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - float(np.sum(residual ** 2)) / spread if spread > 0 else 1.0
    return FitResult(float(slope), float(intercept), r_squared, kept)


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    table: pd.DataFrame
    fit: Optional[FitResult] = None
    checks: Dict[str, bool] = field(default_factory=dict)
    summary: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'metadata': self.spec.metadata(),
            'rows': json.loads(self.table.to_json(orient='records')),
            'fit': self.fit.to_dict() if self.fit else None,
            'checks': self.checks,
            'summary': self.summary,
            'passed': self.passed,
        }


def run_grid(func: Callable[[int, Any], Dict[str, Any]], items: Iterable[Any], workers: int = 1) -> List[Dict[str, Any]]:
    """Evaluate ``func(grid_index, item)`` for every item, rows returned in grid order."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(index, item) for index, item in enumerate(items)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, range(len(items)), items))


def grid_rng(seed: int, grid_index: int, sample: int = 0) -> np.random.Generator:
    """Counter-based stream keyed by ``(seed, grid index, sample)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(grid_index), int(sample)])))


def _meta_value(value: Any) -> str:
    if isinstance(value, str):
        return value
    return json.dumps(value, separators=(',', ':'))


def metadata_line(meta: Dict[str, Any]) -> str:
    return '# ' + ' '.join(f"{key}={_meta_value(value)}" for key, value in meta.items())


def render_csv(result: ExperimentResult) -> str:
    body = result.table.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    return metadata_line(result.spec.metadata()) + '\n' + body


def render(result: ExperimentResult, fmt: str = 'csv') -> str:
    if fmt == 'json':
        return json.dumps(result.to_dict(), indent=2, default=_json_default)
    return render_csv(result)


def _json_default(value: Any):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return None if math.isnan(value) else float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    raise TypeError(f"{type(value).__name__} is not JSON serialisable")


def write_result(result: ExperimentResult, path: str, fmt: str = 'csv') -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as fh:
        fh.write(render(result, fmt))
    logger.info(f"wrote {result.spec.experiment} results ({len(result.table)} rows) to {path}")
    return path


def read_csv(path: str) -> Tuple[Dict[str, str], pd.DataFrame]:
    """Parse a file written by :func:`write_result`: metadata and table."""
    with open(path, 'r', encoding='utf-8') as fh:
        first = fh.readline().rstrip('\n')
    meta = {}
    if first.startswith('# '):
        for token in first[2:].split(' '):
            key, _, value = token.partition('=')
            meta[key] = value
    return meta, pd.read_csv(path, skiprows=1)
