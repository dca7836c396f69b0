"""Threshold and gap-penalty tuning against human-aligned samples.

Agreement between a machine alignment and a human reference is itself
measured by sequence alignment: the two index-pair lists are aligned
with exact-equality scoring and the share of reference pairs matched
becomes a percentage.  Tuning then draws random (threshold, penalty)
candidates from a seeded generator -- always evaluating the configured
defaults first, so the result can never fall below them -- and keeps
the candidate with the best mean agreement.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .align import Match, MiningConfig, filter_by_threshold, nw_align, build_score_matrix, run_engine
from .classifier import SimilarityModel
from .corpus import DocumentPair
from .lexicon import Lexicon

GAP_PENALTY_RANGE = (0.0, 5.0)

# Exact-equality scoring used when comparing two index-pair lists.
_AGREEMENT_CONFIG = MiningConfig(threshold=0.0, gap_penalty=1.0, match_bonus=1.0, mismatch_cost=-1.0)


@dataclass(frozen=True)
class TuningSample:
    """A document pair together with human-judged parallel indices."""

    pair: DocumentPair
    reference: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        previous = (-1, -1)
        for i, j in self.reference:
            if not (0 <= i < len(self.pair.source.sentences)):
                raise ValueError(f"{self.pair.topic_id}: reference source index {i} out of range")
            if not (0 <= j < len(self.pair.target.sentences)):
                raise ValueError(f"{self.pair.topic_id}: reference target index {j} out of range")
            if i <= previous[0] or j <= previous[1]:
                raise ValueError(f"{self.pair.topic_id}: reference pairs must be monotone")
            previous = (i, j)


@dataclass(frozen=True)
class TuningResult:
    threshold: float
    gap_penalty: float
    agreement: float
    trials: int
    per_sample: tuple[float, ...]
    default_agreement: float  # trial 1 evaluates the defaults, recorded here


def alignment_agreement(
    candidate: Sequence[tuple[int, int]], reference: Sequence[tuple[int, int]]
) -> float:
    """Percentage of reference pairs matched by the candidate.

    The two lists are aligned as item sequences (match +1, mismatch -1,
    gap 1); only matches joining equal pairs count.  An empty candidate
    agrees fully with an empty reference and not at all otherwise.
    """
    if not reference:
        return 100.0 if not candidate else 0.0
    if not candidate:
        return 0.0
    sim = np.zeros((len(candidate), len(reference)), dtype=np.float64)
    for i, c in enumerate(candidate):
        for j, r in enumerate(reference):
            if tuple(c) == tuple(r):
                sim[i, j] = 1.0
    alignment = nw_align(sim, _AGREEMENT_CONFIG)
    matched = sum(
        1 for step in alignment.steps if isinstance(step, Match) and sim[step.i, step.j] == 1.0
    )
    return 100.0 * matched / len(reference)


def _candidate_indices(
    scores: np.ndarray, config: MiningConfig, engine: str
) -> list[tuple[int, int]]:
    alignment = run_engine(scores, config, engine)
    return [(i, j) for _, i, j in filter_by_threshold(scores, alignment, config.threshold)]


def tune(
    model: SimilarityModel,
    lexicon: Lexicon,
    samples: Sequence[TuningSample],
    budget: int,
    seed: int,
    engine: str = "nw_wavefront",
    base_config: MiningConfig | None = None,
) -> TuningResult:
    """Seeded random search over (threshold, gap_penalty).

    Trial 1 always evaluates ``base_config`` unchanged; the remaining
    ``budget - 1`` trials draw threshold uniformly from [0, 1] and the
    gap penalty uniformly from [0, 5].  The best mean agreement wins,
    earliest trial on ties, so a longer budget with the same seed can
    never return a worse result.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if not samples:
        raise ValueError("no tuning samples")
    config = base_config if base_config is not None else MiningConfig()

    # The similarity matrix of a sample does not depend on the searched
    # parameters, so score each sample once and realign per trial.
    matrices = [
        build_score_matrix(model, lexicon, s.pair.source.sentences, s.pair.target.sentences)
        for s in samples
    ]

    rng = np.random.default_rng(seed)
    best: tuple[float, int, float, float, tuple[float, ...]] | None = None
    default_agreement = 0.0
    for trial in range(budget):
        if trial == 0:
            threshold, gap_penalty = config.threshold, config.gap_penalty
        else:
            threshold = float(rng.uniform(0.0, 1.0))
            gap_penalty = float(rng.uniform(*GAP_PENALTY_RANGE))
        trial_config = replace(config, threshold=threshold, gap_penalty=gap_penalty)
        agreements = tuple(
            alignment_agreement(
                _candidate_indices(matrix, trial_config, engine), sample.reference
            )
            for matrix, sample in zip(matrices, samples)
        )
        mean_agreement = sum(agreements) / len(agreements)
        if trial == 0:
            default_agreement = mean_agreement
        if best is None or mean_agreement > best[0]:
            best = (mean_agreement, trial, threshold, gap_penalty, agreements)

    assert best is not None
    mean_agreement, _, threshold, gap_penalty, agreements = best
    return TuningResult(
        threshold=threshold,
        gap_penalty=gap_penalty,
        agreement=mean_agreement,
        trials=budget,
        per_sample=agreements,
        default_agreement=default_agreement,
    )


def read_reference(path: str | os.PathLike) -> dict[str, list[tuple[int, int]]]:
    """Read ``topic_id<TAB>source_index<TAB>target_index`` rows."""
    reference: dict[str, list[tuple[int, int]]] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ValueError(
                    f"{path}: line {lineno}: expected 3 tab-separated fields, got {len(fields)}"
                )
            reference.setdefault(fields[0], []).append((int(fields[1]), int(fields[2])))
    return reference
