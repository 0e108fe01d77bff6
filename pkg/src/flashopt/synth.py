"""Built-in synthetic tabular problems, so experiments need no external data.

All three generators are deterministic functions of (name, size):

* line:    one decision x on a uniform grid; cost = x (minimize) and
           value = 1 - x (maximize) improve together, giving the
           gradient-consistent case where recursive bisection always has
           a winning half.
* sphere2: two decisions on a grid; two offset quadratic bowls, both
           minimized, with a genuine trade-off front between the centers.
* step:    the same two-bowl geometry with piecewise-constant objectives,
           one quantized into coarse tiers and one into fine steps, which
           exercises plateaus and duplicate objective values.
"""

from __future__ import annotations

import math

from .core import ObjectiveSchema, Problem, Sense


def make_line(n: int) -> Problem:
    if n < 2:
        raise ValueError("line needs at least 2 points")
    xs = [i / (n - 1) for i in range(n)]
    schema = ObjectiveSchema(("cost", "value"), (Sense.MIN, Sense.MAX))
    rows = [(x,) for x in xs]
    objectives = [(x, 1.0 - x) for x in xs]
    return Problem.tabular("line", ("x",), schema, rows, objectives)


def make_sphere2(n: int) -> Problem:
    if n < 4:
        raise ValueError("sphere2 needs at least 4 points")
    rows = _grid2(n)
    schema = ObjectiveSchema(("near_a", "near_b"), (Sense.MIN, Sense.MIN))
    objectives = [
        ((x - 0.25) ** 2 + (y - 0.25) ** 2, (x - 0.75) ** 2 + (y - 0.75) ** 2)
        for x, y in rows
    ]
    return Problem.tabular("sphere2", ("x", "y"), schema, rows, objectives)


def _grid2(n: int) -> list[tuple[float, float]]:
    k = math.ceil(math.sqrt(n))
    grid = [i / (k - 1) for i in range(k)]
    rows = []
    for x in grid:
        for y in grid:
            rows.append((x, y))
            if len(rows) == n:
                return rows
    return rows


def make_step(n: int) -> Problem:
    if n < 4:
        raise ValueError("step needs at least 4 points")
    rows = _grid2(n)
    schema = ObjectiveSchema(("tier", "residual"), (Sense.MIN, Sense.MIN))
    objectives = [
        (
            math.floor(8 * ((x - 0.25) ** 2 + (y - 0.25) ** 2)) / 8.0,
            math.floor(1000 * ((x - 0.75) ** 2 + (y - 0.75) ** 2)) / 1000.0,
        )
        for x, y in rows
    ]
    return Problem.tabular("step", ("x", "y"), schema, rows, objectives)


SYNTHETICS = {
    "line": make_line,
    "sphere2": make_sphere2,
    "step": make_step,
}


def make_synthetic(name: str, n: int) -> Problem:
    try:
        factory = SYNTHETICS[name]
    except KeyError:
        raise ValueError(
            f"unknown synthetic '{name}' (choose from {sorted(SYNTHETICS)})"
        ) from None
    return factory(n)
