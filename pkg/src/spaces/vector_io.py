"""
JSON codec for vectors, step functions and Haar expansions.

Schemas::

    {"space": "lpq", "p": 3, "q": 1.5, "entries": [{"j": 1, "k": 2, "v": 0.5}, ...]}
    {"space": "fpq", "p": 2, "q": 2, "d": 2,
     "entries": [{"rect": [{"j": 3, "k": 5}, "zero"], "v": 1.0}, ...]}
    {"grid_level": 2, "values": [...row-major cell values...]}
"""

import json
import logging
from typing import Any, Dict, Union

from src.errors import VectorFormatError
from src.spaces.fpq_space import FpqParams, FpqVector
from src.spaces.haar import DyadicStepFunction
from src.spaces.lpq_space import LpqParams, LpqVector

logger = logging.getLogger(__name__)

SpaceVector = Union[LpqVector, FpqVector]


def vector_to_dict(x: SpaceVector) -> Dict[str, Any]:
    data = x.params.to_dict()
    if isinstance(x, LpqVector):
        data['entries'] = [{'j': j, 'k': k, 'v': float(v)} for (j, k), v in zip(x.keys, x.values)]
    else:
        data['entries'] = [{'rect': rect.to_json(), 'v': float(v)} for rect, v in zip(x.keys, x.values)]
    return data


def vector_from_dict(data: Dict[str, Any]) -> SpaceVector:
    """Parse the vector schema; duplicate indices are rejected."""
    if not isinstance(data, dict):
        raise VectorFormatError(f"vector JSON must be an object, got {type(data).__name__}")
    space = data.get('space')
    try:
        entries = data['entries']
        if space == 'lpq':
            params = LpqParams(float(data['p']), float(data['q']))
            keys = [(int(e['j']), int(e['k'])) for e in entries]
            return LpqVector(params, keys, [float(e['v']) for e in entries])
        if space == 'fpq':
            params = FpqParams(float(data['p']), float(data['q']), int(data['d']))
            keys = [FpqVector._normalize_key(e['rect']) for e in entries]
            return FpqVector(params, keys, [float(e['v']) for e in entries])
    except (KeyError, TypeError) as e:
        raise VectorFormatError(f"malformed {space} vector: missing or bad field {e}")
    raise VectorFormatError(f"unknown space {space!r}, expected 'lpq' or 'fpq'")


def step_function_from_dict(data: Dict[str, Any], d: int) -> DyadicStepFunction:
    try:
        return DyadicStepFunction.from_flat(int(data['grid_level']), data['values'], d)
    except (KeyError, TypeError) as e:
        raise VectorFormatError(f"malformed step function: {e}")


def load_json(path: str) -> Dict[str, Any]:
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise VectorFormatError(f"{path} is not valid JSON: {e}")


def load_vector(path: str) -> SpaceVector:
    vector = vector_from_dict(load_json(path))
    logger.debug(f"loaded {vector!r} from {path}")
    return vector


def dump_vector(x: SpaceVector, path: str) -> None:
    with open(path, 'w', encoding='utf-8') as fh:
        json.dump(vector_to_dict(x), fh, indent=2)
