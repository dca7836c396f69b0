"""Showcase sequences contrasting monotone and backtracking alignment.

Two small fixtures, one symbolic and one of English words, on which the
constrained engines produce a clean monotone alignment while the
unconstrained best-first search walks back into already-consumed
columns and pairs them a second time.  The parameters below make both
outcomes the unique optimum of their search, so the contrast is stable;
the benchmark command prints both for inspection and the regression
suite pins them.
"""

from __future__ import annotations

import numpy as np

from .align import Alignment, GapSource, GapTarget, Match, MiningConfig

SYMBOL_SOURCE = ("a", "d", "c", "d", "e")
SYMBOL_TARGET = ("a", "d", "e", "g", "f")

WORD_SOURCE = ("tablets", "make", "people", "spoil", "children")
WORD_TARGET = ("tablets", "make", "children", "very", "addicted")

# Gap cheaper than two mismatches, mismatch cheaper than one gap: the
# monotone optimum gaps unmatched items instead of pairing them, while
# the backtracking search prefers re-pairing old columns over gaps.
DEMO_CONFIG = MiningConfig(
    threshold=0.5, gap_penalty=5.0, match_bonus=9.0, mismatch_cost=-4.0
)

GAP_MARK = "-"


def exact_match_matrix(source: tuple[str, ...], target: tuple[str, ...]) -> np.ndarray:
    """Binary similarity: 1.0 where items are equal, else 0.0."""
    matrix = np.zeros((len(source), len(target)), dtype=np.float64)
    for i, s in enumerate(source):
        for j, t in enumerate(target):
            if s == t:
                matrix[i, j] = 1.0
    return matrix


def render_alignment(
    alignment: Alignment, source: tuple[str, ...], target: tuple[str, ...]
) -> tuple[str, str]:
    """Two comma-separated lines: source side and target side."""
    source_line = []
    target_line = []
    for step in alignment.steps:
        if isinstance(step, Match):
            source_line.append(source[step.i])
            target_line.append(target[step.j])
        elif isinstance(step, GapSource):
            source_line.append(source[step.i])
            target_line.append(GAP_MARK)
        elif isinstance(step, GapTarget):
            source_line.append(GAP_MARK)
            target_line.append(target[step.j])
    return ", ".join(source_line), ", ".join(target_line)
