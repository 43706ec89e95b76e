"""
Runtime configuration.

Settings come from ``config/.env`` (relative to the project root) with the
current directory as fallback, and are read through ``os.environ``.
"""

import logging
import os
from typing import Any, Dict

from dotenv import load_dotenv

PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))

config_path = os.path.join(PROJECT_ROOT, 'config/.env')
load_dotenv(config_path)

# Fallbacks
load_dotenv()
load_dotenv(dotenv_path='.env')
load_dotenv(dotenv_path='config/.env')

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def get_log_level() -> int:
    name = os.environ.get('GREEDY_LOG_LEVEL', 'INFO').upper()
    return getattr(logging, name, logging.INFO)


def get_grid_cell_limit() -> int:
    """Largest refinement grid (in cells) the exact integrator will build."""
    return int(os.environ.get('GREEDY_GRID_CELL_LIMIT', '10000000'))


def get_sigma_support_limit() -> int:
    """Largest support the brute-force best N-term oracle accepts."""
    return int(os.environ.get('GREEDY_SIGMA_SUPPORT_LIMIT', '22'))


def get_chebyshev_tol() -> float:
    return float(os.environ.get('GREEDY_CHEBYSHEV_TOL', '1e-10'))


def get_chebyshev_max_iter() -> int:
    return int(os.environ.get('GREEDY_CHEBYSHEV_MAX_ITER', '20000'))


def get_calibration_path() -> str:
    path = os.environ.get('GREEDY_CALIBRATION_PATH', 'fixtures/calibration.json')
    if not os.path.isabs(path):
        path = os.path.join(PROJECT_ROOT, path)
    return path


def get_output_dir() -> str:
    return os.environ.get('GREEDY_OUTPUT_DIR', 'outputs')


def setup_logging(level: int = None, stream=None) -> None:
    """Configure the root logger the same way for every entry point."""
    logging.basicConfig(
        level=level if level is not None else get_log_level(),
        format=LOG_FORMAT,
        stream=stream,
    )


def describe() -> Dict[str, Any]:
    return {
        'config_path': config_path,
        'config_file_exists': os.path.exists(config_path),
        'log_level': logging.getLevelName(get_log_level()),
        'grid_cell_limit': get_grid_cell_limit(),
        'sigma_support_limit': get_sigma_support_limit(),
        'chebyshev_tol': get_chebyshev_tol(),
        'chebyshev_max_iter': get_chebyshev_max_iter(),
        'calibration_path': get_calibration_path(),
        'output_dir': get_output_dir(),
    }
