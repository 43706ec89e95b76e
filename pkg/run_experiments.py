#!/usr/bin/env python3
"""
Quick start script: runs the experiment suite into the output directory
"""

import os
import sys

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.config import describe, get_output_dir, setup_logging
from src.tools.greedy_tools import run_experiment_tool

SUITE = [
    ('lpq-lower', dict(space='lpq', p=2.0, q=2.0)),
    ('lpq-lower', dict(space='lpq', p=4.0, q=4.0 / 3.0)),
    ('fpq-lower', dict(space='fpq', p=1.5, q=2.0, d=1)),
    ('fpq-lower', dict(space='fpq', p=1.5, q=2.0, d=2)),
    ('tga-vs-wcga', dict()),
    ('lebesgue', dict(space='lpq', p=2.0, q=2.0)),
    ('lebesgue', dict(space='lpq', p=3.0, q=1.5)),
    ('iteration-decay', dict(space='lpq', p=2.0, q=2.0)),
]


def _file_name(name, kwargs):
    parts = [name] + [f"{key}{kwargs[key]:g}" for key in ('p', 'q', 'd') if key in kwargs]
    return '_'.join(parts).replace('.', '_') + '.csv'


def main():
    setup_logging(stream=sys.stderr)
    print("Greedy approximation experiment suite")
    print("=" * 50)

    settings = describe()
    output_dir = get_output_dir()
    os.makedirs(output_dir, exist_ok=True)
    print(f"Calibration: {settings['calibration_path']}")
    print(f"Output dir:  {os.path.abspath(output_dir)}")
    print()

    failed = []
    for name, kwargs in SUITE:
        path = os.path.join(output_dir, _file_name(name, kwargs))
        result = run_experiment_tool(name, output=path, **kwargs)
        if result.get('status') != 'success':
            print(f"ERROR {name}: {result.get('error', 'Unknown error')}")
            failed.append(name)
            continue
        fit = result.get('fit')
        slope = f", slope {fit['slope']:.3f}" if fit else ''
        verdict = 'PASS' if result['passed'] else 'FAIL'
        print(f"{verdict:5} {name:16} {result['rows']:4} rows{slope} -> {path}")
        if not result['passed']:
            failed.append(name)

    print("-" * 50)
    print("All experiments passed" if not failed else f"Failed: {', '.join(failed)}")
    return 0 if not failed else 1


if __name__ == "__main__":
    sys.exit(main())
