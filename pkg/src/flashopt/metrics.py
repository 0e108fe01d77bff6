"""Quality indicators against a reference front.

The reference front is the non-dominated subset of every solution found by
any optimizer for one problem; it stands in for the true Pareto frontier.
Both indicators first min-max normalize objective values by the reference
front's own per-objective bounds, then average nearest-neighbor Euclidean
distances. Smaller is better for both:

* gd:  mean distance from each obtained point to its nearest reference point
* igd: mean distance from each reference point to its nearest obtained point
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import ObjectiveSchema
from .dominance import nondominated_mask, oriented_matrix, _values


@dataclass(frozen=True)
class ReferenceFront:
    points: tuple[tuple[float, ...], ...]
    lo: tuple[float, ...]
    hi: tuple[float, ...]


def reference_front(
    all_solutions: Sequence, schema: ObjectiveSchema
) -> ReferenceFront:
    """Non-dominated subset of the pooled solutions, duplicates collapsed.

    Points keep first-appearance order; the per-objective bounds of the
    surviving points travel with the front for normalization.
    """
    if len(all_solutions) == 0:
        raise ValueError("cannot build a reference front from nothing")
    distinct: dict[tuple[float, ...], None] = {}
    for v in all_solutions:
        distinct.setdefault(_values(v), None)
    keys = list(distinct.keys())
    mask = nondominated_mask(oriented_matrix(keys, schema))
    points = tuple(k for k, keep in zip(keys, mask) if keep)
    arr = np.array(points, dtype=float)
    return ReferenceFront(
        points=points,
        lo=tuple(float(v) for v in arr.min(axis=0)),
        hi=tuple(float(v) for v in arr.max(axis=0)),
    )


def _normalize(vectors: Sequence, ref: ReferenceFront, schema: ObjectiveSchema) -> np.ndarray:
    arr = np.array([_values(v) for v in vectors], dtype=float)
    if arr.shape[1] != len(schema):
        raise ValueError("objective length mismatch against schema")
    lo = np.array(ref.lo)
    span = np.array(ref.hi) - lo
    out = np.zeros_like(arr)
    nz = span > 0
    # Zero-range axes carry no information and contribute nothing.
    out[:, nz] = (arr[:, nz] - lo[nz]) / span[nz]
    return out


def _mean_nearest(a: np.ndarray, b: np.ndarray) -> float:
    """Mean over rows of a of the Euclidean distance to the nearest row of b."""
    total = 0.0
    chunk = max(1, int(2_000_000 / max(1, b.shape[0])))
    for start in range(0, a.shape[0], chunk):
        part = a[start : start + chunk]
        d2 = ((part[:, None, :] - b[None, :, :]) ** 2).sum(axis=2)
        total += np.sqrt(d2.min(axis=1)).sum()
    return float(total / a.shape[0])


def gd(obtained: Sequence, ref: ReferenceFront, schema: ObjectiveSchema) -> float:
    """Mean distance from obtained solutions to the reference front."""
    if len(obtained) == 0 or len(ref.points) == 0:
        raise ValueError("gd needs nonempty obtained solutions and reference front")
    a = _normalize(obtained, ref, schema)
    b = _normalize(ref.points, ref, schema)
    return _mean_nearest(a, b)


def igd(obtained: Sequence, ref: ReferenceFront, schema: ObjectiveSchema) -> float:
    """Mean distance from the reference front to the obtained solutions."""
    if len(obtained) == 0 or len(ref.points) == 0:
        raise ValueError("igd needs nonempty obtained solutions and reference front")
    a = _normalize(ref.points, ref, schema)
    b = _normalize(obtained, ref, schema)
    return _mean_nearest(a, b)
