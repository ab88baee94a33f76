"""Seeded evaluation points on the natural domain of a weight."""

from __future__ import annotations

import numpy as np

from .weights import WeightSpec, deltoid_polynomial

DEFAULT_SEED = 42


def sample_points(w: WeightSpec, count: int, seed: int | np.random.Generator = DEFAULT_SEED) -> np.ndarray:
    """Random complex points: Gaussian for hermite, uniform inside the disk or deltoid.

    Custom weights use the unit disk.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if w.kind == "hermite":
        return rng.normal(scale=np.sqrt(0.5), size=count) + 1j * rng.normal(scale=np.sqrt(0.5), size=count)
    if w.is_deltoid:
        out = []
        while len(out) < count:
            # bounding box of the cusps 1, exp(+-2 pi i / 3)
            x = rng.uniform(-0.5, 1, size=2 * count)
            y = rng.uniform(-np.sqrt(3) / 2, np.sqrt(3) / 2, size=2 * count)
            keep = deltoid_polynomial(x, y) > 0
            out.extend((x[keep] + 1j * y[keep]).tolist())
        return np.array(out[:count])
    r = np.sqrt(rng.uniform(size=count))
    t = rng.uniform(0, 2 * np.pi, size=count)
    return r * np.exp(1j * t)


def sample_pairs(w: WeightSpec, count: int, seed: int = DEFAULT_SEED) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    return sample_points(w, count, rng), sample_points(w, count, rng)
