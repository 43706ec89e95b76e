"""
Command-line front end.

    greedy-lab norm --input x.json
    greedy-lab wcga --input x.json --tau 0.9
    greedy-lab check a3 --space lpq --p 3 --q 1.5 --samples 1000
    greedy-lab exp lpq-lower --p 4 --q 1.3333333333 --output out.csv

Exit codes: 0 success, 1 property check or experiment check FAIL,
2 usage or guard error. Messages go to standard error.
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from src import __version__
from src.checks.properties import CHECKS
from src.config import setup_logging
from src.errors import GreedyLabError
from src.experiments.harness import FORMATS
from src.experiments.runner import EXPERIMENTS
from src.greedy.greedy_algorithms import CHEBYSHEV_MODES, TIE_BREAKS
from src.spaces.vector_io import load_json
from src.tools.greedy_tools import (SIGMA_TOOL_METHODS, SPACES, calibrate_constants, compute_norm,
                                    compute_norming_functional, compute_sigma, run_experiment_tool,
                                    run_property_check, run_tga, run_wcga)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

GUARD_ERRORS = {'ParamError', 'VectorFormatError', 'GridBudgetExceeded', 'SupportTooLarge',
                'ParamMismatch', 'ZeroVector'}


class UsageError(Exception):
    pass


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--space', choices=SPACES, help='default lpq')
    parser.add_argument('--p', type=float)
    parser.add_argument('--q', type=float)
    parser.add_argument('--d', type=int, help='default 1')
    parser.add_argument('--tau', type=float, default=1.0)
    parser.add_argument('--tol', type=float, default=1e-10)
    parser.add_argument('--max-steps', type=int)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--samples', type=int)
    parser.add_argument('--tie-break', choices=TIE_BREAKS, default='lexicographic')
    parser.add_argument('--c', type=float, default=1.0, help='Lebesgue constant C')
    parser.add_argument('--input', help='vector or step-function JSON')
    parser.add_argument('--output', help='write the result here instead of stdout')
    parser.add_argument('--format', choices=FORMATS, default=None)
    parser.add_argument('--N', type=int)
    parser.add_argument('--log-level', help='overrides GREEDY_LOG_LEVEL')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='greedy-lab',
        description='Greedy approximation in l^p(l^q) and f_(p,q) sequence spaces',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)

    _common(sub.add_parser('norm', help='norm of a vector, or Littlewood-Paley norm of a step function'))

    functional = sub.add_parser('functional', help='norming functional coefficients')
    _common(functional)
    functional.add_argument('--other', help='vector JSON to apply the functional to')

    wcga = sub.add_parser('wcga', help='run the Weak Chebyshev Greedy Algorithm')
    _common(wcga)
    wcga.add_argument('--solver', choices=CHEBYSHEV_MODES, default='lattice_exact')
    wcga.add_argument('--target-norm', type=float)
    wcga.add_argument('--store-approximants', action='store_true')

    _common(sub.add_parser('tga', help='run the Thresholding Greedy Algorithm'))

    sigma = sub.add_parser('sigma', help='best N-term approximation error')
    _common(sigma)
    sigma.add_argument('--method', choices=SIGMA_TOOL_METHODS, default='bruteforce')

    check = sub.add_parser('check', help='property checker')
    check.add_argument('kind', choices=sorted(CHECKS))
    _common(check)
    check.add_argument('--t-grid', type=float, nargs='+')
    check.add_argument('--s-override', type=float)
    check.add_argument('--c1-override', type=float)
    check.add_argument('--gamma', type=float)
    check.add_argument('--fit', action='store_true', help='report the fitted constant instead of the frozen one')

    exp = sub.add_parser('exp', help='experiment harness')
    exp.add_argument('name', choices=sorted(EXPERIMENTS))
    _common(exp)
    exp.add_argument('--variant')
    exp.add_argument('--n-min', type=int)
    exp.add_argument('--n-max', type=int)
    exp.add_argument('--epsilon', type=float, default=0.01)
    exp.add_argument('--workers', type=int, default=1)
    exp.add_argument('--p-values', type=float, nargs='+', help='p grid of tga-vs-wcga')
    exp.add_argument('--q-values', type=float, nargs='+', help='q grid of tga-vs-wcga')

    calibrate = sub.add_parser('calibrate', help='fit and store the frozen constants')
    calibrate.add_argument('--seed', type=int, default=0)
    calibrate.add_argument('--output', help='calibration file (default GREEDY_CALIBRATION_PATH)')
    calibrate.add_argument('--log-level')
    return parser


def _read_input(path: Optional[str], what: str = '--input') -> Dict[str, Any]:
    if not path:
        raise UsageError(f"{what} is required")
    try:
        return load_json(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}")


def _need(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{name}" for name in names if getattr(args, name) is None]
    if missing:
        raise UsageError(f"missing {', '.join(missing)}")


def _space(args: argparse.Namespace) -> str:
    return args.space or 'lpq'


def _dim(args: argparse.Namespace) -> int:
    return 1 if args.d is None else args.d


def _space_args(args: argparse.Namespace) -> Dict[str, Any]:
    _need(args, 'p')
    if _space(args) != 'haar':
        _need(args, 'q')
    return {'space': _space(args), 'p': args.p, 'q': args.q, 'd': _dim(args)}


def _check_vector_flags(args: argparse.Namespace, vector: Dict[str, Any]) -> None:
    """Reject --space, --p, --q or --d that contradict the input's own parameters."""
    if not isinstance(vector, dict):
        return
    if 'grid_level' in vector:
        if args.space not in (None, 'haar'):
            raise UsageError(f"--space {args.space} does not match a step-function input")
        if args.q is not None:
            raise UsageError("--q does not apply to a step-function input")
        return
    space = vector.get('space')
    if args.space is not None and args.space != space:
        raise UsageError(f"--space {args.space} conflicts with the input's space {space!r}")
    stated = {'p': vector.get('p'), 'q': vector.get('q'), 'd': vector.get('d') if space == 'fpq' else None}
    for name, value in stated.items():
        given = getattr(args, name)
        if given is None:
            continue
        if value is None:
            raise UsageError(f"--{name} does not apply to a {space} vector")
        try:
            same = float(value) == float(given)
        except (TypeError, ValueError):
            continue
        if not same:
            raise UsageError(f"--{name} {given:g} conflicts with the input's {name}={value}")


def _n_values(args: argparse.Namespace) -> List[int]:
    if args.n_min is None and args.n_max is None:
        return [args.N] if args.N is not None else []
    if args.n_min is None or args.n_max is None or args.n_min > args.n_max:
        raise UsageError("--n-min and --n-max must be given together with n-min <= n-max")
    return list(range(args.n_min, args.n_max + 1))


def _pq_grid(args: argparse.Namespace) -> List[List[float]]:
    if not args.p_values and not args.q_values:
        return []
    if not (args.p_values and args.q_values):
        raise UsageError("--p-values and --q-values must be given together")
    return [[p, q] for p in args.p_values for q in args.q_values]


def _emit(args: argparse.Namespace, text: str) -> None:
    if getattr(args, 'output', None):
        with open(args.output, 'w', encoding='utf-8') as fh:
            fh.write(text if text.endswith('\n') else text + '\n')
        logger.info(f"wrote {args.output}")
    else:
        print(text)


def _payload(result: Dict[str, Any]) -> str:
    return json.dumps({k: v for k, v in result.items() if k != 'status'}, indent=2, default=str)


def _norm(args):
    vector = _read_input(args.input)
    _check_vector_flags(args, vector)
    result = compute_norm(vector, args.p, _dim(args))
    if result['status'] == 'success':
        text = _payload(result) if args.format == 'json' else f"{result['norm']:.12g}"
        _emit(args, text)
    return result, EXIT_OK


def _functional(args):
    vector = _read_input(args.input)
    other = _read_input(args.other, '--other') if args.other else None
    for item in (vector, other):
        if item is not None:
            _check_vector_flags(args, item)
    result = compute_norming_functional(vector, other, args.p, _dim(args))
    if result['status'] == 'success':
        _emit(args, _payload(result))
    return result, EXIT_OK


def _wcga(args):
    vector = _read_input(args.input)
    result = run_wcga(vector, tau=args.tau, tol=args.tol, max_steps=args.max_steps, tie_break=args.tie_break,
                      chebyshev_mode=args.solver, blocks=vector.get('blocks'), target_norm=args.target_norm,
                      store_approximants=args.store_approximants)
    if result['status'] == 'success':
        _emit(args, _payload(result))
    return result, EXIT_OK


def _tga(args):
    _need(args, 'N')
    result = run_tga(_read_input(args.input), args.N)
    if result['status'] == 'success':
        _emit(args, _payload(result))
    return result, EXIT_OK


def _sigma(args):
    _need(args, 'N')
    result = compute_sigma(_read_input(args.input), args.N, args.method)
    if result['status'] == 'success':
        _emit(args, _payload(result))
    return result, EXIT_OK


def _check(args):
    result = run_property_check(args.kind, N=args.N, samples=args.samples, seed=args.seed, t_grid=args.t_grid,
                                s_override=args.s_override, c1_override=args.c1_override, gamma=args.gamma,
                                frozen=not args.fit, **_space_args(args))
    if result['status'] != 'success':
        return result, EXIT_OK
    expected = result['expect'] == 'pass'
    if args.format == 'json':
        _emit(args, _payload(result))
    else:
        note = '' if expected else ' (expected FAIL)'
        _emit(args, f"{args.kind} {result['verdict']}{note}: max ratio {result['max_violation_ratio']:.6g}, "
                    f"{result['violations']} violation(s) in {result['samples']} samples")
    return result, EXIT_OK if result['passed'] == expected else EXIT_FAIL


def _exp_space(args) -> Optional[str]:
    """Space of the experiment; the lower bounds fix their own."""
    if args.name == 'tga-vs-wcga':
        return None
    if args.name == 'lpq-lower':
        return 'lpq'
    if args.name == 'fpq-lower' and _space(args) == 'lpq':
        return 'fpq'
    return _space(args)


def _exp(args):
    space = _exp_space(args)
    if space is not None:
        _need(args, 'p')
        if space != 'haar':
            _need(args, 'q')
    fmt = args.format or 'csv'
    result = run_experiment_tool(
        args.name, space=space, p=args.p, q=args.q, d=_dim(args), n_values=_n_values(args), pq_grid=_pq_grid(args),
        C=args.c, seed=args.seed, samples=args.samples if args.samples is not None else 5, epsilon=args.epsilon,
        variant=args.variant, tau=args.tau, tol=args.tol, tie_break=args.tie_break, workers=args.workers,
        output=args.output, fmt=fmt,
    )
    if result['status'] != 'success':
        return result, EXIT_OK
    if args.output:
        print(f"{args.name}: {'PASS' if result['passed'] else 'FAIL'} -> {args.output}", file=sys.stderr)
    else:
        print(result['rendered'], end='')
    return result, EXIT_OK if result['passed'] else EXIT_FAIL


def _calibrate(args):
    result = calibrate_constants(args.seed, args.output)
    if result['status'] == 'success':
        print(json.dumps(result['constants'], indent=2, sort_keys=True))
    return result, EXIT_OK


COMMANDS = {
    'norm': _norm,
    'functional': _functional,
    'wcga': _wcga,
    'tga': _tga,
    'sigma': _sigma,
    'check': _check,
    'exp': _exp,
    'calibrate': _calibrate,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    level = getattr(logging, args.log_level.upper(), None) if args.log_level else None
    setup_logging(level, stream=sys.stderr)

    try:
        result, code = COMMANDS[args.command](args)
    except UsageError as e:
        print(f"greedy-lab {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, GreedyLabError) as e:
        print(f"greedy-lab {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if result.get('status') == 'error':
        print(f"greedy-lab {args.command}: error: {result['error']}", file=sys.stderr)
        return EXIT_USAGE if result.get('error_type') in GUARD_ERRORS else EXIT_FAIL
    return code


if __name__ == '__main__':
    sys.exit(main())
