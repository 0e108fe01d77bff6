"""Domination trees: a human-readable summary of an optimizer's search.

Every evaluated example is scored by how many other evaluated examples it
indicator-dominates; a regression tree fitted over the decision columns
with those scores as targets then describes which decisions lead to
strong regions. The rendering is an indented text listing with the branch
to the highest-scoring leaf highlighted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import cart
from .core import EvaluatedPoint, ObjectiveSchema
from .dominance import domination_scores


@dataclass(frozen=True)
class PathStep:
    feature: int
    direction: str  # "<=" or ">"
    threshold: float


@dataclass
class DominationTree:
    tree: cart.RegressionTree
    decision_names: tuple[str, ...]
    best_path: tuple[PathStep, ...]


def build_domination_tree(
    evaluated: Sequence[EvaluatedPoint],
    schema: ObjectiveSchema,
    names: Sequence[str],
) -> DominationTree:
    """Fit the score-summarizing tree over the evaluated examples."""
    evaluated = list(evaluated)
    if len(evaluated) < 2:
        raise ValueError("need at least 2 evaluated points")
    if len(names) != len(evaluated[0].point.decisions):
        raise ValueError("one name per decision column required")
    scores = domination_scores(evaluated, schema)
    x = np.array([ev.point.decisions for ev in evaluated], dtype=float)
    y = np.array(scores, dtype=float)
    tree = cart.fit_arrays(x, y)
    return DominationTree(
        tree=tree, decision_names=tuple(names), best_path=_best_path(tree)
    )


def _best_path(tree: cart.RegressionTree) -> tuple[PathStep, ...]:
    """Path to the leaf with the highest mean score; ties stay leftmost."""
    best_pred = None
    best: tuple[PathStep, ...] = ()
    stack: list[tuple[cart.TreeNode, tuple[PathStep, ...]]] = [(tree.root, ())]
    # DFS visiting left before right, so the first maximum is the leftmost.
    ordered: list[tuple[tuple[PathStep, ...], float]] = []
    while stack:
        node, path = stack.pop()
        if node.is_leaf:
            ordered.append((path, node.prediction))
            continue
        stack.append(
            (node.right, path + (PathStep(node.feature, ">", node.threshold),))
        )
        stack.append(
            (node.left, path + (PathStep(node.feature, "<=", node.threshold),))
        )
    for path, pred in ordered:
        if best_pred is None or pred > best_pred:
            best_pred = pred
            best = path
    return best


def _fmt_score(v: float) -> str:
    if float(v).is_integer():
        return str(int(v))
    return f"{v:.1f}"


def render(dt: DominationTree) -> str:
    """Indented text tree; best-path lines are wrapped in ** markers.

    Internal nodes print one line per side ("name<=t" / "name>t"), each
    followed by that side's subtree one level deeper; leaves print their
    mean score in parentheses.
    """
    lines: list[str] = []

    def mark(text: str, on_path: bool) -> str:
        return f"**{text}**" if on_path else text

    # Explicit stack; deep unbalanced trees would blow Python's recursion limit.
    stack: list[tuple] = [("visit", dt.tree.root, 0, dt.best_path, True)]
    while stack:
        item = stack.pop()
        if item[0] == "line":
            lines.append(item[1])
            continue
        _, node, depth, remaining, on_path = item
        prefix = "|    " * depth
        if node.is_leaf:
            lines.append(prefix + mark(f"({_fmt_score(node.prediction)})", on_path))
            continue
        step = remaining[0] if (on_path and remaining) else None
        name = dt.decision_names[node.feature]
        for direction, child in ((">", node.right), ("<=", node.left)):
            child_on_path = step is not None and step.direction == direction
            stack.append(
                (
                    "visit",
                    child,
                    depth + 1,
                    remaining[1:] if child_on_path else (),
                    child_on_path,
                )
            )
            stack.append(
                ("line", prefix + mark(f"{name}{direction}{node.threshold:g}", child_on_path))
            )
    return "\n".join(lines)


def tree_stats(dt: DominationTree) -> tuple[int, int]:
    """(nodes, leaves) of the fitted tree."""
    return cart.tree_size(dt.tree)
