"""Choosing the edge-elimination threshold zeta.

Either the user fixes zeta, or it is learned from pairs with known
same/different-peptide labels. With a single feature (the pair weight) and
a decision rule ``weight >= zeta``, a hard-margin linear SVM puts the cut
halfway between the largest negative and the smallest positive weight. When
the classes overlap, the cut is chosen among midpoints of consecutive
distinct weights: fewest misclassified pairs, then widest gap, then
smallest zeta.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .evaluation import MissingTruthError, same_peptide
from .spectra_io import GroundTruth

Pair = tuple[str, str]


class ThresholdError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class LabeledPair:
    id_x: str
    id_y: str
    weight: int
    label: bool

    def __post_init__(self):
        if self.id_x == self.id_y:
            raise ValueError(f"pair of a spectrum with itself: {self.id_x!r}")


def fixed_threshold(zeta: float) -> float:
    if not zeta > 0:
        raise ThresholdError(f"threshold must be positive, got {zeta}")
    return zeta


def label_pairs(weights: Mapping[Pair, int], truth: GroundTruth) -> list[LabeledPair]:
    missing = {sid for pair in weights for sid in pair if sid not in truth}
    if missing:
        raise MissingTruthError(missing)
    return [LabeledPair(a, b, w, same_peptide(truth[a], truth[b])) for (a, b), w in weights.items()]


def svm_threshold(pairs: Iterable[LabeledPair]) -> float:
    neg: Counter = Counter()
    pos: Counter = Counter()
    for p in pairs:
        (pos if p.label else neg)[p.weight] += 1
    return max_margin_cut(neg, pos)


def max_margin_cut(neg: Mapping[float, int], pos: Mapping[float, int]) -> float:
    """Best cut given weight -> count histograms of negative and positive pairs."""
    n_neg = sum(neg.values())
    n_pos = sum(pos.values())
    if n_neg == 0 or n_pos == 0:
        raise ThresholdError(
            "training pairs must include both same-peptide and different-peptide pairs; "
            "use a fixed threshold instead")
    values = sorted(set(neg) | set(pos))
    if len(values) < 2:
        raise ThresholdError(f"all training pairs have weight {values[0]}; no cut separates them")

    best = None
    neg_at_or_below = 0
    pos_at_or_below = 0
    for lo, hi in zip(values, values[1:]):
        neg_at_or_below += neg.get(lo, 0)
        pos_at_or_below += pos.get(lo, 0)
        # cut in (lo, hi): weights <= lo are called negative, >= hi positive
        errors = (n_neg - neg_at_or_below) + pos_at_or_below
        zeta = (lo + hi) / 2
        key = (errors, -(hi - lo), zeta)
        if best is None or key < best:
            best = key
    return best[2]


def _group_sizes(ids: Sequence[str], truth: GroundTruth) -> Counter:
    return Counter(truth[sid] for sid in ids)


def pair_histograms(weights: Mapping[Pair, int], ids: Sequence[str], truth: GroundTruth,
                    fraction: float = 1.0, seed: int = 0) -> tuple[Counter, Counter]:
    """Weight histograms ``(negatives, positives)`` over a sample of *all* pairs.

    Every unordered pair of labelled spectra in ``ids`` is a candidate,
    including the ones absent from ``weights`` (weight 0). Each pair is
    kept independently with probability ``fraction``. Zero-weight pairs are
    never materialized: their class counts follow from the peptide group
    sizes, so this stays cheap for large N.
    """
    if not 0 < fraction <= 1:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    labelled = [sid for sid in ids if sid in truth]
    labelled_set = set(labelled)
    rng = np.random.default_rng(seed)

    neg: Counter = Counter()
    pos: Counter = Counter()
    items = [(pair, w) for pair, w in weights.items()
             if pair[0] in labelled_set and pair[1] in labelled_set]
    keep = rng.random(len(items)) < fraction if fraction < 1 else np.ones(len(items), bool)
    weighted_pos = weighted_neg = 0
    for ((a, b), w), k in zip(items, keep):
        same = same_peptide(truth[a], truth[b])
        if same:
            weighted_pos += 1
        else:
            weighted_neg += 1
        if k:
            (pos if same else neg)[w] += 1

    n = len(labelled)
    total_pos = sum(g * (g - 1) // 2 for g in _group_sizes(labelled, truth).values())
    total_neg = n * (n - 1) // 2 - total_pos
    zero_pos = total_pos - weighted_pos
    zero_neg = total_neg - weighted_neg
    if fraction < 1:
        zero_pos = int(rng.binomial(zero_pos, fraction))
        zero_neg = int(rng.binomial(zero_neg, fraction))
    if zero_pos:
        pos[0] += zero_pos
    if zero_neg:
        neg[0] += zero_neg
    return neg, pos


def learn_threshold(weights: Mapping[Pair, int], ids: Sequence[str], truth: GroundTruth,
                    fraction: float = 1.0, seed: int = 0) -> float:
    neg, pos = pair_histograms(weights, ids, truth, fraction, seed)
    return max_margin_cut(neg, pos)
