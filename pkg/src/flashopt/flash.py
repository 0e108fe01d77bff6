"""The tree-surrogate sequential optimizer.

The loop evaluates a small random sample, then repeatedly: fits one
regression tree per objective on everything evaluated so far, predicts all
unevaluated candidates, picks the most promising one (front of the
predictions, then indicator-best within it), evaluates it for real, and
loses a life whenever the non-dominated set fails to grow. Lives only ever
decrease; the run stops when they hit zero or the candidate pool is
exhausted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import cart
from .core import (
    DecisionPoint,
    IterationRecord,
    ObjectiveSchema,
    Problem,
    RunResult,
)
from .dominance import front0, nondominated_mask, _class_wins


@dataclass(frozen=True)
class FlashConfig:
    size0: int = 20
    lives: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.size0 < 1:
            raise ValueError("size0 must be at least 1")
        if self.lives < 1:
            raise ValueError("lives must be at least 1")


def run_flash(problem: Problem, pool: Sequence[DecisionPoint], config: FlashConfig) -> RunResult:
    """Optimize over a finite candidate pool.

    Stagnation is judged by id-set equality of the non-dominated front
    before and after each new evaluation; a new point that joins or
    reshapes the front costs no life.
    """
    pool = list(pool)
    if config.size0 > len(pool):
        raise ValueError(f"size0={config.size0} exceeds pool of {len(pool)}")
    schema = problem.schema
    rng = random.Random(config.seed)

    initial = rng.sample(pool, config.size0)
    evaluated = [problem.evaluate(p) for p in initial]
    taken = {p.id for p in initial}

    remaining = [p for p in pool if p.id not in taken]
    cand_matrix = np.array([p.decisions for p in remaining], dtype=float).reshape(
        len(remaining), problem.decision_arity
    )
    cand_ids = [p.id for p in remaining]

    best = front0(evaluated, schema)
    lives = config.lives
    trace: list[IterationRecord] = []

    while lives > 0 and remaining:
        x_train = np.array([ev.point.decisions for ev in evaluated], dtype=float)
        models = [
            cart.fit_arrays(
                x_train,
                np.array([ev.objectives.values[j] for ev in evaluated], dtype=float),
            )
            for j in range(len(schema))
        ]
        pick = _pick_next(cand_matrix, cand_ids, models, schema)
        chosen = remaining[pick]
        ev = problem.evaluate(chosen)
        evaluated.append(ev)
        del remaining[pick]
        del cand_ids[pick]
        cand_matrix = np.delete(cand_matrix, pick, axis=0)

        tmp = front0(best + [ev], schema)
        if {e.point.id for e in tmp} == {e.point.id for e in best}:
            lives -= 1
        else:
            best = tmp
        trace.append(IterationRecord(chosen.id, lives, len(best)))

    return RunResult(evaluated=evaluated, best=best, evals=len(evaluated), trace=trace)


def what_to_evaluate_next(
    candidates: Sequence[DecisionPoint],
    models: Sequence[cart.RegressionTree],
    schema: ObjectiveSchema,
) -> DecisionPoint:
    """Choose the unevaluated candidate whose predicted objectives win.

    Predictions from one tree per objective form pseudo-points; the
    candidate returned is the indicator-best member of their non-dominated
    front, ties broken by the lowest candidate id.
    """
    candidates = list(candidates)
    if not candidates:
        raise ValueError("no candidates to choose from")
    if len(models) != len(schema):
        raise ValueError("need exactly one model per objective")
    matrix = np.array([c.decisions for c in candidates], dtype=float)
    ids = [c.id for c in candidates]
    return candidates[_pick_next(matrix, ids, models, schema)]


def _pick_next(
    cand_matrix: np.ndarray,
    cand_ids: Sequence[int],
    models: Sequence[cart.RegressionTree],
    schema: ObjectiveSchema,
) -> int:
    """Index of the winning candidate row.

    Works on distinct predicted vectors: duplicates share front membership
    and domination score, so scoring once per class is exact.
    """
    preds = np.column_stack([cart.predict_many(m, cand_matrix) for m in models])
    classes, inverse = np.unique(preds, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)  # numpy 2.0 returns a column here
    weights = np.array(schema.weights, dtype=float)
    front_mask = nondominated_mask(classes * -weights)

    front_classes = np.nonzero(front_mask)[0]
    keys = [tuple(classes[ci]) for ci in front_classes]
    counts = np.bincount(inverse, minlength=classes.shape[0])[front_classes]
    wins = _class_wins(keys, schema)
    scores = (wins * counts[None, :]).sum(axis=1)

    best_score = scores.max()
    winning = set(front_classes[np.nonzero(scores == best_score)[0]].tolist())
    best_row = None
    best_id = None
    for row, cls in enumerate(inverse.tolist()):
        if cls in winning and (best_id is None or cand_ids[row] < best_id):
            best_id = cand_ids[row]
            best_row = row
    return best_row
