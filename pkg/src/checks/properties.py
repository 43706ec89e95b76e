"""
Checkers for the geometric properties that drive greedy Lebesgue bounds.

Each checker evaluates one or more inequalities ``lhs <= rhs`` on random
samples (keyed by ``(seed, sample index)``) plus a seed-independent
structured corpus of known extremal configurations, and returns a
:class:`PropertyReport` with the largest ratio ``lhs / rhs`` and the input
that achieved it.

Inequalities whose constant is existential are checked against a frozen
calibrated constant. Without one, the checker runs in calibration mode:
the inequality is evaluated with constant 1, the largest ratio is reported
as ``details['fitted_constant']`` and no violation is counted.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from src.checks.samplers import (SpaceParams, make_vector, sample_kind, sample_nested_pair,
                                 sample_rng, sample_support, sample_vector,
                                 signed_log_uniform, split_disjoint)
from src.errors import ParamError
from src.greedy.greedy_algorithms import key_to_json
from src.spaces.base import union_keys
from src.spaces.dyadic import Rectangle
from src.spaces.fpq_space import (FpqParams, FpqVector, build_An, democracy_sum,
                                  lorentz_quasinorm)
from src.spaces.lpq_space import LpqParams, dual_indicator_norm
from src.spaces.vector_io import vector_to_dict

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 1000
A2_TOL = 1e-10
A3_TOL = 1e-9
D_TOL = 1e-10
LATTICE_TOL = 1e-10
# Largest A_n family level per dimension in the structured corpora.
STRUCTURED_LEVEL = {1: 12, 2: 10, 3: 8}
# Finest interval level for the d = 1 log-bound corpus (|A| <= 2^12).
D1_LOG_LEVEL = 11


class Bound(NamedTuple):
    """One evaluated inequality ``lhs <= rhs * (1 + tol) + slack``."""

    label: str
    lhs: float
    rhs: float
    slack: float = 0.0
    counted: bool = True

    @property
    def ratio(self) -> float:
        if self.rhs > 0.0:
            return self.lhs / self.rhs
        return 0.0 if self.lhs <= self.slack else math.inf

    def violated(self, tol: float) -> bool:
        return self.counted and self.lhs > self.rhs * (1.0 + tol) + self.slack


Evaluation = Tuple[List[Bound], Callable[[], Dict[str, Any]]]


@dataclass
class PropertyReport:
    name: str
    parameters: Dict[str, Any]
    max_violation_ratio: float
    witness: Optional[Dict[str, Any]]
    samples: int
    seed: int
    tolerance: float
    violations: int = 0
    expect: str = 'pass'
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    @property
    def verdict(self) -> str:
        return 'PASS' if self.passed else 'FAIL'

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['passed'] = self.passed
        data['verdict'] = self.verdict
        return data


def _run(name: str, params: SpaceParams, parameters: Dict[str, Any], samples: int, seed: int,
         tolerance: float, evaluate: Optional[Callable[[np.random.Generator, int], Evaluation]],
         structured: Sequence[Callable[[], Evaluation]] = ()) -> PropertyReport:
    """Evaluate every sample, then the structured corpus, in index order.

    The reported ratio is the largest over counted bounds, or over all
    bounds when none is counted. Ties keep the lowest index.
    """
    if samples < 0:
        raise ParamError(f"samples must be >= 0, got {samples}")
    violations = 0
    label_max: Dict[str, float] = {}
    counted = _Best()
    overall = _Best()
    total = samples + len(structured)
    for index in range(total):
        if index < samples:
            bounds, describe = evaluate(sample_rng(seed, index), index)
        else:
            bounds, describe = structured[index - samples]()
        for bound in bounds:
            ratio = bound.ratio
            label_max[bound.label] = max(label_max.get(bound.label, -math.inf), ratio)
            if bound.violated(tolerance):
                violations += 1
            if bound.counted:
                counted.offer(ratio, describe, index)
            overall.offer(ratio, describe, index)
    best = counted if counted.describe is not None else overall
    witness = None
    if best.describe is not None:
        witness = {'sample': best.index, 'structured': best.index >= samples}
        witness.update(best.describe())
    max_ratio = best.ratio if best.ratio > -math.inf else 0.0
    report = PropertyReport(name, {**params.to_dict(), **parameters}, float(max_ratio), witness,
                            samples, seed, tolerance, violations,
                            details={'ratios': label_max, 'structured': len(structured)})
    logger.info(f"{name} {params!r}: max ratio {report.max_violation_ratio:.6f}, "
                f"{violations} violations over {total} inputs")
    return report


class _Best:
    def __init__(self):
        self.ratio, self.describe, self.index = -math.inf, None, None

    def offer(self, ratio: float, describe, index: int) -> None:
        if ratio > self.ratio:
            self.ratio, self.describe, self.index = ratio, describe, index


def _describe_pair(A: Sequence, x) -> Callable[[], Dict[str, Any]]:
    return lambda: {'index_set': [key_to_json(k) for k in A], 'vector': vector_to_dict(x)}


def _describe_vector(x, **extra) -> Callable[[], Dict[str, Any]]:
    return lambda: {'vector': vector_to_dict(x), **extra}


def _calibration_details(report: PropertyReport, label: str, frozen_constant: Optional[float]):
    if frozen_constant is None:
        report.details['fitted_constant'] = report.details['ratios'].get(label, 0.0)
    else:
        report.details['frozen_constant'] = frozen_constant


# -- A2 ---------------------------------------------------------------------

def check_A2(params: SpaceParams, N: int = 8, samples: int = 200, seed: int = 0,
             extra: int = 8) -> PropertyReport:
    """``||x restricted to A|| <= U ||x||`` with ``U = 1`` for ``|A| <= N``."""
    if N < 1:
        raise ParamError(f"N must be >= 1, got {N}")

    def evaluate(rng, index):
        A, x = sample_nested_pair(params, rng, sample_kind(params, index), N, N + extra)
        return [Bound('A2', x.restrict(A).norm(), x.norm())], _describe_pair(A, x)

    return _run('A2', params, {'U': 1.0, 'N': N}, samples, seed, A2_TOL, evaluate)


# -- A3 ---------------------------------------------------------------------

def a3_dual_norm(params: SpaceParams, index_set: Sequence) -> float:
    """``||sum_{i in A} e*_i||`` in the dual space."""
    if isinstance(params, LpqParams):
        return dual_indicator_norm(params, index_set)
    if isinstance(params, FpqParams):
        return democracy_sum(params.dual(), index_set)
    raise ParamError(f"no dual norm for {type(params).__name__}")


def a3_exponent(params: SpaceParams) -> float:
    if isinstance(params, LpqParams):
        return params.r
    return 1.0 / params.p_conj


def _structured_levels(d: int, n_max: Optional[int]) -> range:
    return range(d, (STRUCTURED_LEVEL.get(d, d + 4) if n_max is None else n_max) + 1)


def check_A3_direct(params: SpaceParams, N: int = 8, samples: int = DEFAULT_SAMPLES, seed: int = 0,
                    frozen_constant: Optional[float] = None, extra: int = 8,
                    n_max: Optional[int] = None) -> PropertyReport:
    """``sum_A |x_i| <= V |A|^r ||x||`` for ``|A| <= N``.

    Every sample is also checked against the exact dual bound
    ``sum_A |x_i| <= ||1_A||_* ||x||``. For l^p(l^q) the power bound holds
    with ``V = 1``; for f_{p,q} the largest observed ``V`` per ``|A|`` is
    reported as ``details['V_profile']`` and, given a frozen constant, the
    bound ``c (1 + log|A|)^h |A|^{1/p'}`` is asserted.
    """
    r = a3_exponent(params)
    lattice = isinstance(params, LpqParams)
    profile: Dict[int, float] = {}

    def bounds_for(A, x) -> List[Bound]:
        total = float(sum(abs(x.get(k)) for k in A))
        norm = x.norm()
        size = len(A)
        base = size ** r * norm
        profile[size] = max(profile.get(size, 0.0), total / base)
        out = [Bound('dual', total, a3_dual_norm(params, A) * norm),
               Bound('power', total, base, counted=lattice)]
        if not lattice:
            c = 1.0 if frozen_constant is None else frozen_constant
            log_base = c * (1.0 + math.log(size)) ** params.h * base
            out.append(Bound('log', total, log_base, counted=frozen_constant is not None))
        return out

    def evaluate(rng, index):
        A, x = sample_nested_pair(params, rng, sample_kind(params, index), N, N + extra)
        return bounds_for(A, x), _describe_pair(A, x)

    structured = []
    if not lattice:
        for n in _structured_levels(params.d, n_max):
            def family(n=n):
                A = build_An(params, n)
                x = FpqVector.indicator(params, A)
                return bounds_for(A, x), _describe_pair(A, x)
            structured.append(family)

    parameters = {'r': r, 'V': 1.0 if lattice else None, 'N': N}
    report = _run('A3', params, parameters, samples, seed, A3_TOL, evaluate, structured)
    report.details['V_profile'] = {str(k): v for k, v in sorted(profile.items())}
    if not lattice:
        report.parameters['h'] = params.h
        _calibration_details(report, 'log', frozen_constant)
    return report


# -- D(s, c1) and smoothness -----------------------------------------------

def smoothness_to_d_constant(gamma: float, sigma: float) -> Tuple[float, float]:
    """``(s, c1)`` of property D implied by ``rho(t) <= gamma t^sigma``."""
    if gamma <= 0:
        raise ParamError(f"gamma must be positive, got {gamma}")
    if not 1.0 < sigma <= 2.0:
        raise ParamError(f"sigma must lie in (1, 2], got {sigma}")
    s = sigma / (sigma - 1.0)
    return s, 1.0 / (s * (gamma * sigma) ** (s - 1.0))


def d_constants(params: SpaceParams, s_override: Optional[float] = None,
                c1_override: Optional[float] = None,
                gamma: Optional[float] = None) -> Tuple[float, float]:
    if gamma is not None:
        if not isinstance(params, LpqParams):
            raise ParamError("smoothness-derived D constants are only available for l^p(l^q)")
        s, c1 = smoothness_to_d_constant(gamma, params.smoothness_exponent)
    else:
        s = params.s
        c1 = params.c1 if isinstance(params, LpqParams) else params.c_pq
    if s_override is not None:
        s = float(s_override)
    if c1_override is not None:
        c1 = float(c1_override)
    return s, c1


def _d_bound(x, key, s: float, c1: float) -> Bound:
    norm = x.norm()
    dist = x.dist_to_coord_span([key])
    functional = x.norming_coeff(key)
    return Bound('D', dist, norm * (1.0 - c1 * functional ** s), slack=D_TOL * max(1.0, norm))


def check_D(params: SpaceParams, samples: int = DEFAULT_SAMPLES, seed: int = 0,
            s_override: Optional[float] = None, c1_override: Optional[float] = None,
            gamma: Optional[float] = None, max_size: int = 10) -> PropertyReport:
    """``dist(x, [e_i]) <= ||x|| (1 - c1 |F_x(e_i)|^s)`` at a sampled index of ``supp(x)``."""
    s, c1 = d_constants(params, s_override, c1_override, gamma)

    def evaluate(rng, index):
        size = int(rng.integers(1, max_size + 1))
        x = sample_vector(params, rng, sample_kind(params, index), size)
        key = x.keys[int(rng.integers(0, len(x)))]
        return [_d_bound(x, key, s, c1)], _describe_vector(x, index=key_to_json(key))

    def unit():
        key = (1, 1) if isinstance(params, LpqParams) else Rectangle.from_levels((0,) * params.d, (0,) * params.d)
        x = make_vector(params, [key], [1.0])
        return [_d_bound(x, x.keys[0], s, c1)], _describe_vector(x, index=key_to_json(x.keys[0]))

    parameters = {'s': s, 'c1': c1}
    if gamma is not None:
        parameters.update(gamma=gamma, sigma_exponent=params.smoothness_exponent)
    return _run('D', params, parameters, samples, seed, 0.0, evaluate, [unit])


def _two_term_vector(params: SpaceParams, t: float):
    """``e_I + t e_J`` with ``I, J`` in one row (l^p(l^q)) or spatially disjoint halves (f_{p,q})."""
    if isinstance(params, LpqParams):
        return make_vector(params, [(1, 1), (1, 2)], [1.0, t])
    levels = (1,) + (0,) * (params.d - 1)
    keys = [Rectangle.from_levels(levels, (0,) * params.d),
            Rectangle.from_levels(levels, (1,) + (0,) * (params.d - 1))]
    return make_vector(params, keys, [1.0, t])


def check_D_sharpness(params: SpaceParams, s_shift: float = 0.25,
                      t_grid: Optional[Sequence[float]] = None) -> PropertyReport:
    """Property D with ``s`` lowered by ``s_shift`` on two-term vectors.

    A FAIL is the expected outcome: the exponent cannot be lowered.
    """
    s, c1 = d_constants(params)
    shifted = s - s_shift
    grid = np.geomspace(1e-3, 0.5, 40) if t_grid is None else np.asarray(t_grid, dtype=float)
    structured = []
    for t in grid:
        def two_term(t=float(t)):
            x = _two_term_vector(params, t)
            bounds = [_d_bound(x, key, shifted, c1) for key in x.keys]
            return bounds, _describe_vector(x, t=t)
        structured.append(two_term)
    report = _run('D_sharpness', params, {'s': shifted, 'c1': c1, 's_shift': s_shift},
                  0, 0, 0.0, None, structured)
    report.expect = 'fail'
    return report


def _pair_norms(f, g, t: float) -> Tuple[float, float]:
    keys = union_keys([f, g])
    kernel = f.kernel_for(keys)
    a, b = f.aligned(keys), g.aligned(keys)
    return kernel.norm(a + t * b), kernel.norm(a - t * b)


def estimate_rho(params: SpaceParams, t_grid: Sequence[float] = (1e-3, 1e-2, 0.1, 0.5, 1.0),
                 samples: int = DEFAULT_SAMPLES, seed: int = 0, max_size: int = 8) -> PropertyReport:
    """Monte Carlo lower estimate of the modulus of smoothness.

    ``rho(t) >= (||f + tg|| + ||f - tg||)/2 - 1`` for every sampled pair of
    unit vectors. The reported ``gamma`` is the largest
    ``estimate(t) / t^sigma`` with ``sigma = min(p, q, 2)``.
    """
    ts = [float(t) for t in t_grid]
    if not ts or any(t <= 0 for t in ts):
        raise ParamError(f"t values must be positive, got {list(t_grid)}")
    sigma = min(params.p, params.q, 2.0)
    estimates = [-math.inf] * len(ts)
    best = {'gamma': -math.inf, 'index': None, 't': None, 'pair': None}

    for index in range(samples):
        rng = sample_rng(seed, index)
        kind = sample_kind(params, index)
        f = sample_vector(params, rng, kind, int(rng.integers(1, max_size + 1)))
        g = sample_vector(params, rng, kind, int(rng.integers(1, max_size + 1)))
        f, g = f.scaled(1.0 / f.norm()), g.scaled(1.0 / g.norm())
        for n, t in enumerate(ts):
            plus, minus = _pair_norms(f, g, t)
            value = 0.5 * (plus + minus) - 1.0
            estimates[n] = max(estimates[n], value)
            ratio = value / t ** sigma
            if ratio > best['gamma']:
                best.update(gamma=ratio, index=index, t=t, pair=(f, g))

    witness = None
    if best['pair'] is not None:
        f, g = best['pair']
        witness = {'sample': best['index'], 't': best['t'],
                   'f': vector_to_dict(f), 'g': vector_to_dict(g)}
    gamma = best['gamma'] if best['gamma'] > -math.inf else 0.0
    report = PropertyReport('rho', {**params.to_dict(), 'sigma_exponent': sigma, 'gamma': gamma},
                            float(gamma), witness, samples, seed, 0.0,
                            details={'rho': [[t, e] for t, e in zip(ts, estimates)]})
    logger.info(f"rho {params!r}: gamma >= {gamma:.6f} over {samples} pairs")
    return report


# -- f_{p,q} appendix inequalities -----------------------------------------

def _require_fpq(params: SpaceParams, name: str) -> FpqParams:
    if not isinstance(params, FpqParams):
        raise ParamError(f"{name} is an f_(p,q) property, got {type(params).__name__}")
    return params


def check_disjoint_q_ineq(params: FpqParams, samples: int = 200, seed: int = 0,
                          max_parts: int = 6, max_size: int = 12) -> PropertyReport:
    """``||sum x_n|| <= (sum ||x_n||^q)^{1/q}`` for index-disjoint ``x_n`` when ``p >= q``."""
    params = _require_fpq(params, 'disjoint q-inequality')
    if params.p < params.q:
        raise ParamError(f"the disjoint q-inequality needs p >= q, got p={params.p}, q={params.q}")

    def evaluate(rng, index):
        x = sample_vector(params, rng, sample_kind(params, index), int(rng.integers(1, max_size + 1)))
        parts = [part for part in split_disjoint(x, int(rng.integers(1, max_parts + 1)), rng)
                 if not part.is_zero()]
        rhs = float(sum(part.norm() ** params.q for part in parts)) ** (1.0 / params.q)
        return [Bound('disjoint', x.norm(), rhs)], _describe_vector(x, parts=len(parts))

    return _run('disjoint_q', params, {}, samples, seed, LATTICE_TOL, evaluate)


def _lp_norm(x, p: float) -> float:
    return float(np.sum(np.abs(x.values) ** p) ** (1.0 / p))


def _interval(level: int, offset: int) -> Rectangle:
    return Rectangle.from_levels((level,), (offset,))


def check_lorentz_sandwich(params: FpqParams, samples: int = 200, seed: int = 0,
                           frozen_constant: Optional[float] = None) -> PropertyReport:
    """``||x||_{l^p} <= ||x||_{f_{p,q}} <= c ||x||_{l^{p,q}}`` for ``d = 1``, ``q <= p``."""
    params = _require_fpq(params, 'Lorentz sandwich')
    if params.d != 1 or params.q > params.p:
        raise ParamError(f"the Lorentz sandwich needs d = 1 and q <= p, got {params!r}")
    c = 1.0 if frozen_constant is None else frozen_constant

    def bounds_for(x) -> List[Bound]:
        norm = x.norm()
        return [Bound('lp', _lp_norm(x, params.p), norm),
                Bound('lorentz', norm, c * lorentz_quasinorm(x.values, params.p, params.q),
                      counted=frozen_constant is not None)]

    def evaluate(rng, index):
        x = sample_vector(params, rng, sample_kind(params, index), int(rng.integers(1, 17)))
        return bounds_for(x), _describe_vector(x)

    structured = []
    for top in range(D1_LOG_LEVEL + 1):
        chain = [_interval(j, 0) for j in range(top + 1)]
        for weight in (0.0, 1.0):
            def stack(chain=chain, weight=weight):
                values = [2.0 ** (-weight * rect.axes[0].level / params.p) for rect in chain]
                x = FpqVector(params, chain, values)
                return bounds_for(x), _describe_vector(x)
            structured.append(stack)

        def spread(top=top):
            x = FpqVector.indicator(params, [_interval(top, k) for k in range(1 << top)])
            return bounds_for(x), _describe_vector(x)
        structured.append(spread)

    report = _run('lorentz', params, {}, samples, seed, LATTICE_TOL, evaluate, structured)
    _calibration_details(report, 'lorentz', frozen_constant)
    return report


def check_democracy(params: FpqParams, samples: int = 100, seed: int = 0,
                    frozen_constant: Optional[float] = None, max_size: int = 16,
                    n_max: Optional[int] = None) -> PropertyReport:
    """``||1_A|| <= c |A|^{1/p} (1 + log|A|)^{(d-1)(1/q - 1/p)_+}``."""
    params = _require_fpq(params, 'democracy')
    c = 1.0 if frozen_constant is None else frozen_constant
    exponent = params.democracy_log_exponent

    def bound_for(A) -> Bound:
        size = len(A)
        rhs = c * size ** (1.0 / params.p) * (1.0 + math.log(size)) ** exponent
        return Bound('democracy', democracy_sum(params, A), rhs, counted=frozen_constant is not None)

    def evaluate(rng, index):
        A = sample_support(params, rng, sample_kind(params, index), int(rng.integers(1, max_size + 1)))
        return [bound_for(A)], lambda: {'index_set': [key_to_json(k) for k in A]}

    structured = []
    for n in _structured_levels(params.d, n_max):
        def family(n=n):
            A = build_An(params, n)
            return [bound_for(A)], lambda: {'family': 'A_n', 'n': n, 'size': len(A)}
        structured.append(family)

    report = _run('democracy', params, {'log_exponent': exponent}, samples, seed,
                  LATTICE_TOL, evaluate, structured)
    _calibration_details(report, 'democracy', frozen_constant)
    return report


def _d1_subset(rng: np.random.Generator, params: FpqParams) -> List[Rectangle]:
    top = int(rng.integers(0, D1_LOG_LEVEL + 1))
    tree = [_interval(j, k) for j in range(top + 1) for k in range(1 << j)]
    size = int(round(math.exp(rng.uniform(0.0, math.log(len(tree))))))
    picks = rng.choice(len(tree), size=max(1, min(size, len(tree))), replace=False)
    return [tree[i] for i in sorted(picks)]


def check_d1_log_bound(params: FpqParams, samples: int = 100, seed: int = 0,
                       frozen_constant: Optional[float] = None) -> PropertyReport:
    """``||x||_{f_{p,q}} <= c (1 + log|A|)^{1/q - 1/p} ||x||_{l^p}`` for ``d = 1``, ``q < p``."""
    params = _require_fpq(params, 'd = 1 log bound')
    if params.d != 1 or params.q >= params.p:
        raise ParamError(f"the d = 1 log bound needs d = 1 and q < p, got {params!r}")
    c = 1.0 if frozen_constant is None else frozen_constant
    exponent = 1.0 / params.q - 1.0 / params.p

    def bound_for(x) -> Bound:
        rhs = c * (1.0 + math.log(len(x))) ** exponent * _lp_norm(x, params.p)
        return Bound('d1_log', x.norm(), rhs, counted=frozen_constant is not None)

    def evaluate(rng, index):
        keys = _d1_subset(rng, params)
        x = FpqVector(params, keys, signed_log_uniform(rng, len(keys)))
        return [bound_for(x)], _describe_vector(x)

    structured = []
    for top in range(D1_LOG_LEVEL + 1):
        tree = [_interval(j, k) for j in range(top + 1) for k in range(1 << j)]
        for weight in (0.0, 1.0):
            def full_tree(tree=tree, weight=weight):
                values = [2.0 ** (-weight * rect.axes[0].level / params.p) for rect in tree]
                x = FpqVector(params, tree, values)
                return [bound_for(x)], lambda: {'family': 'full_tree', 'size': len(tree),
                                                'weighted': bool(weight)}
            structured.append(full_tree)

    report = _run('d1_log', params, {'log_exponent': exponent}, samples, seed,
                  LATTICE_TOL, evaluate, structured)
    _calibration_details(report, 'd1_log', frozen_constant)
    return report


# -- target curves ------------------------------------------------------------

def lebesgue_phi(params: SpaceParams, N: int, c: float = 1.0) -> int:
    """Step-count curve of the WCGA Lebesgue inequality."""
    if N < 1:
        raise ParamError(f"N must be >= 1, got {N}")
    if isinstance(params, LpqParams):
        return int(math.floor(c * N ** params.beta))
    log_power = params.p_conj * params.h
    return int(math.floor(c * (1.0 + math.log(N)) ** log_power * N ** params.alpha_pq))


def phi_from_properties(U: float, V: float, r: float, s: float, c1: float, tau: float,
                        N: int, C2: float = 1.0) -> int:
    """Generic step count driven by the A2, A3 and D parameters."""
    if U < 1 or c1 <= 0 or not 0 < tau <= 1:
        raise ParamError(f"need U >= 1, c1 > 0, 0 < tau <= 1; got U={U}, c1={c1}, tau={tau}")
    return int(math.floor(C2 / c1 * tau ** (-s) * math.log(U + 1.0) * V ** s * N ** (r * s)))


CHECKS = {
    'a2': check_A2,
    'a3': check_A3_direct,
    'd': check_D,
    'rho': estimate_rho,
    'disjoint': check_disjoint_q_ineq,
    'lorentz': check_lorentz_sandwich,
    'democracy': check_democracy,
    'd1-log': check_d1_log_bound,
    'd-sharpness': check_D_sharpness,
}
# Checks whose inequality constant comes from the calibration store.
CALIBRATED_CHECKS = {'a3': 'a3_fpq', 'lorentz': 'lorentz', 'democracy': 'democracy', 'd1-log': 'd1_log'}
