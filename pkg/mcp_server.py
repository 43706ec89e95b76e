#!/usr/bin/env python3
"""MCP server exposing the greedy approximation toolkit.

MCP clients pass vectors in the shared JSON vector schema; every tool
returns the tool layer's status dict. Logs go to stderr so the stdio
transport stays clean.
"""

import os
import sys
from typing import Any, Dict, List, Optional

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from mcp.server.fastmcp import FastMCP
from src.config import setup_logging
from src.tools.greedy_tools import (calibrate_constants, compute_norm, compute_norming_functional,
                                    compute_sigma, run_experiment_tool, run_property_check, run_tga,
                                    run_wcga)

mcp = FastMCP("greedy-lab")


@mcp.tool()
def norm_tool(vector: Dict[str, Any], p: Optional[float] = None, d: int = 1) -> Dict[str, Any]:
    """Norm of a coefficient vector in l^p(l^q) or f_(p,q).

    Args:
        vector: {"space": "lpq", "p": 2, "q": 2, "entries": [{"j": 1, "k": 1, "v": 3.0}]}
                or a dyadic step function {"grid_level": L, "values": [...]}, whose
                Littlewood-Paley norm and L^p norm are both returned.
        p: exponent for step functions.
        d: dimension for step functions.
    """
    return compute_norm(vector, p, d)


@mcp.tool()
def norming_functional_tool(vector: Dict[str, Any], other: Optional[Dict[str, Any]] = None,
                            p: Optional[float] = None, d: int = 1) -> Dict[str, Any]:
    """Coefficients F_x(e_i) of the norming functional of ``vector``, and F_x(other) if given."""
    return compute_norming_functional(vector, other, p, d)


@mcp.tool()
def wcga_tool(vector: Dict[str, Any], tau: float = 1.0, tol: float = 1e-10, max_steps: Optional[int] = None,
              tie_break: str = 'lexicographic', chebyshev_mode: str = 'lattice_exact',
              blocks: Optional[List[Dict[str, Any]]] = None) -> Dict[str, Any]:
    """Run the Weak Chebyshev Greedy Algorithm over the canonical basis.

    Args:
        tau: weakness parameter in (0, 1].
        tie_break: lexicographic, prefer_block_A or prefer_block_B.
        blocks: [{"index": [j, k], "block": "A"}, ...] for the block tie-breaks.
    """
    return run_wcga(vector, tau=tau, tol=tol, max_steps=max_steps, tie_break=tie_break,
                    chebyshev_mode=chebyshev_mode, blocks=blocks)


@mcp.tool()
def tga_tool(vector: Dict[str, Any], N: int) -> Dict[str, Any]:
    """Keep the N largest coefficients, one step at a time."""
    return run_tga(vector, N)


@mcp.tool()
def sigma_tool(vector: Dict[str, Any], N: int, method: str = 'bruteforce') -> Dict[str, Any]:
    """Best N-term approximation error (bruteforce) or its TGA upper bound (greedy_upper)."""
    return compute_sigma(vector, N, method)


@mcp.tool()
def property_check_tool(kind: str, space: str, p: float, q: Optional[float] = None, d: int = 1,
                        samples: Optional[int] = None, seed: int = 0) -> Dict[str, Any]:
    """Run a property checker.

    Args:
        kind: a2, a3, d, rho, disjoint, lorentz, democracy, d1-log or d-sharpness.
        space: lpq, fpq or haar.
    """
    return run_property_check(kind, space, p, q, d, samples=samples, seed=seed)


@mcp.tool()
def experiment_tool(name: str, space: Optional[str] = None, p: Optional[float] = None,
                    q: Optional[float] = None, d: int = 1, n_values: Optional[List[int]] = None,
                    C: float = 1.0, seed: int = 0, samples: int = 5, epsilon: float = 0.01,
                    variant: Optional[str] = None, fmt: str = 'csv') -> Dict[str, Any]:
    """Run an experiment (lpq-lower, fpq-lower, tga-vs-wcga, lebesgue, iteration-decay).

    The CSV or JSON table is returned under ``rendered``.
    """
    return run_experiment_tool(name, space=space, p=p, q=q, d=d, n_values=n_values, C=C, seed=seed,
                               samples=samples, epsilon=epsilon, variant=variant, fmt=fmt)


@mcp.tool()
def calibrate_tool(seed: int = 0) -> Dict[str, Any]:
    """Refit the frozen constants used by the calibrated checks."""
    return calibrate_constants(seed)


def main():
    setup_logging(stream=sys.stderr)
    mcp.run(transport="stdio")


if __name__ == "__main__":
    main()
