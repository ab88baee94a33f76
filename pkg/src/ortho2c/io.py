"""JSON records for polynomials, bases, weights and cubature rules.

Floats are written with ``repr`` precision by :mod:`json`, so every record
round-trips bit-exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .basis import BasisLevel
from .bridge import RealLevel
from .polycore import CPoly, RPoly, poly_from_json
from .weights import WeightSpec


def _pairs(mat: np.ndarray) -> list:
    return [[float(np.real(v)), float(np.imag(v))] for v in np.asarray(mat).ravel()]


def _matrix(pairs, size: int) -> np.ndarray:
    flat = np.array([complex(re, im) for re, im in pairs], dtype=complex)
    if flat.size != size * size:
        raise ValueError(f"gram has {flat.size} entries, expected {size * size}")
    return flat.reshape(size, size)


def level_to_json(level) -> dict:
    """``{"n", "polys", "gram"}`` with the Gram matrix flattened row-major as ``[re, im]`` pairs."""
    if isinstance(level, RealLevel):
        polys = [p.to_json() for p in level.polys]
    else:
        polys = [p.to_json() for p in level.polys]
    return {"n": level.n, "polys": polys, "gram": _pairs(level.gram)}


def level_from_json(record: dict, normalization: str = "custom"):
    n = int(record["n"])
    polys = [poly_from_json(p) for p in record["polys"]]
    if len(polys) != n + 1:
        raise ValueError(f"level {n} lists {len(polys)} polynomials")
    gram = _matrix(record["gram"], n + 1)
    if all(isinstance(p, RPoly) for p in polys):
        rows = np.array([p.to_complex().to_vector(n) for p in polys], dtype=complex)
        return RealLevel(n, rows, gram.real.copy())
    if not all(isinstance(p, CPoly) for p in polys):
        raise ValueError("a level must not mix cpoly and rpoly records")
    return BasisLevel.from_polys(polys, gram, normalization)


def basis_to_json(w: WeightSpec | None, levels, normalization: str) -> dict:
    return {
        "weight": None if w is None else w.to_json(),
        "normalization": normalization,
        "levels": [level_to_json(lv) for lv in levels],
    }


def basis_from_json(record: dict):
    """Returns ``(weight or None, normalization, levels)``."""
    w = None if record.get("weight") is None else WeightSpec.from_json(record["weight"])
    norm = record["normalization"]
    levels = [level_from_json(lv, norm) for lv in record["levels"]]
    return w, norm, levels


def moments_to_json(w: WeightSpec, max_degree: int, values: np.ndarray) -> dict:
    """Custom moment table layout, ``k >= j`` and ``k + j <= max_degree``."""
    rows = []
    for k in range(max_degree + 1):
        for j in range(min(k, max_degree - k) + 1):
            v = complex(values[k, j])
            rows.append([k, j, v.real, v.imag])
    return {"weight": w.to_json(), "max_degree": max_degree, "moments": rows}


def dumps(record, indent: int | None = None) -> str:
    return json.dumps(record, indent=indent)


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())


def write_text(path, text: str) -> None:
    Path(path).write_text(text)
