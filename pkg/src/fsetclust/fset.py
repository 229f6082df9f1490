"""Consecutive-peak window ("F-set") similarity between spectra.

A spectrum is reduced to a strictly ascending list of integer m/z bins.
Its F-sets are the sliding windows of ``f`` consecutive bins, and the
similarity of two spectra is the number of windows they have in common.
Because bins are strictly ascending, windows within one spectrum are all
distinct, so the count is the size of a set intersection.

All-pairs similarity goes through an inverted index (window -> spectrum
ids): only spectra that co-occur in some posting list are ever compared,
which keeps the cost proportional to the number of shared windows instead
of N^2.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .spectra_io import Spectrum

Gram = tuple[int, ...]
Pair = tuple[str, str]

DEFAULT_FSET_SIZE = 7


@dataclass(frozen=True)
class PreprocessConfig:
    bin_width: float = 0.5
    top_k: int = 50
    min_mz: float = 0.0

    def __post_init__(self):
        if not self.bin_width > 0:
            raise ValueError(f"bin_width must be positive, got {self.bin_width}")
        if self.top_k < 1:
            raise ValueError(f"top_k must be >= 1, got {self.top_k}")


@dataclass(frozen=True)
class BinnedSpectrum:
    id: str
    bins: tuple[int, ...]


@dataclass(frozen=True)
class FsetVector:
    id: str
    f: int
    grams: tuple[Gram, ...]


@dataclass
class FsetIndex:
    f: int | None = None
    postings: dict[Gram, list[str]] = field(default_factory=dict)


def preprocess(spectrum: Spectrum, config: PreprocessConfig = PreprocessConfig()) -> BinnedSpectrum:
    """Keep the ``top_k`` most intense peaks at or above ``min_mz`` and bin them.

    Intensity ties go to the lower m/z. Bins are ``floor(mz / bin_width)``,
    sorted, with duplicates collapsed.
    """
    eligible = [p for p in spectrum.peaks if p.mz >= config.min_mz]
    if len(eligible) > config.top_k:
        eligible = heapq.nsmallest(config.top_k, eligible, key=lambda p: (-p.intensity, p.mz))
    width = config.bin_width
    bins = sorted({math.floor(p.mz / width) for p in eligible})
    return BinnedSpectrum(spectrum.id, tuple(bins))


def enumerate_fsets(binned: BinnedSpectrum, f: int = DEFAULT_FSET_SIZE) -> FsetVector:
    if f < 2:
        raise ValueError(f"F-set size must be >= 2, got {f}")
    b = binned.bins
    grams = tuple(b[i:i + f] for i in range(len(b) - f + 1))
    return FsetVector(binned.id, f, grams)


def fset_weight(x: FsetVector, y: FsetVector) -> int:
    """Number of windows shared by ``x`` and ``y``."""
    if x.f != y.f:
        raise ValueError(f"F-set sizes differ: {x.f} vs {y.f}")
    small, large = (x.grams, y.grams) if len(x.grams) <= len(y.grams) else (y.grams, x.grams)
    other = set(large)
    return sum(1 for g in small if g in other)


def build_index(vectors: Iterable[FsetVector]) -> FsetIndex:
    index = FsetIndex()
    postings = index.postings
    for v in vectors:
        if index.f is None:
            index.f = v.f
        elif v.f != index.f:
            raise ValueError(f"mixed F-set sizes in index: {index.f} and {v.f}")
        for g in v.grams:
            lst = postings.get(g)
            if lst is None:
                postings[g] = [v.id]
            else:
                lst.append(v.id)
    return index


def _count_pairs(lists: Sequence[Sequence[str]]) -> Counter:
    counts: Counter = Counter()
    for ids in lists:
        for a, b in combinations(sorted(ids), 2):
            counts[(a, b)] += 1
    return counts


def all_pair_weights(index: FsetIndex, workers: int = 1, min_parallel: int = 5000) -> dict[Pair, int]:
    """Weights for every unordered pair sharing at least one window.

    Keys are ``(a, b)`` with ``a < b``; the dict is ordered by key so the
    result does not depend on ``workers``. Posting lists are split across a
    process pool only when at least ``min_parallel`` of them are shared.
    """
    shared = [ids for ids in index.postings.values() if len(ids) > 1]
    if workers > 1 and len(shared) >= min_parallel:
        size = -(-len(shared) // (4 * workers))
        chunks = [shared[i:i + size] for i in range(0, len(shared), size)]
        counts: Counter = Counter()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_count_pairs, chunks):
                counts.update(part)
    else:
        counts = _count_pairs(shared)
    return {pair: counts[pair] for pair in sorted(counts)}


def filter_by_precursor(weights: Mapping[Pair, int], precursor_mz: Mapping[str, float],
                        tolerance: float) -> dict[Pair, int]:
    """Drop pairs whose precursor m/z differ by more than ``tolerance`` Th."""
    return {
        (a, b): w for (a, b), w in weights.items()
        if abs(precursor_mz[a] - precursor_mz[b]) <= tolerance
    }


def spectra_to_vectors(spectra: Iterable[Spectrum], f: int = DEFAULT_FSET_SIZE,
                       config: PreprocessConfig = PreprocessConfig()) -> list[FsetVector]:
    return [enumerate_fsets(preprocess(s, config), f) for s in spectra]
