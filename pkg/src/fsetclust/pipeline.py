"""End-to-end clustering: windows, index, pair weights, threshold, components."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Sequence

from .fset import (
    DEFAULT_FSET_SIZE,
    PreprocessConfig,
    all_pair_weights,
    build_index,
    filter_by_precursor,
    spectra_to_vectors,
)
from .graph import Clustering, apply_threshold, build_graph, connected_components
from .spectra_io import GroundTruth, Spectrum
from .threshold import fixed_threshold, learn_threshold


@dataclass(frozen=True)
class PipelineConfig:
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)
    fset_size: int = DEFAULT_FSET_SIZE
    precursor_tol: float | None = None
    workers: int = 1

    def __post_init__(self):
        if self.fset_size < 2:
            raise ValueError(f"F-set size must be >= 2, got {self.fset_size}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.precursor_tol is not None and self.precursor_tol < 0:
            raise ValueError("precursor tolerance must be non-negative")


@dataclass
class PipelineResult:
    clustering: Clustering
    zeta: float
    num_edges: int
    num_kept_edges: int
    timings: dict[str, float]


class PhaseTimer:
    def __init__(self, timings: dict[str, float] | None = None):
        self.timings = {} if timings is None else timings

    @contextmanager
    def phase(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = self.timings.get(name, 0.0) + time.perf_counter() - t0


def run_pipeline(
    spectra: Sequence[Spectrum],
    config: PipelineConfig = PipelineConfig(),
    *,
    zeta: float | None = None,
    truth: GroundTruth | None = None,
    train_fraction: float = 1.0,
    seed: int = 0,
    timer: PhaseTimer | None = None,
) -> PipelineResult:
    """Cluster ``spectra``; pass exactly one of ``zeta`` or ``truth``.

    With ``truth``, zeta is learned from a ``train_fraction`` sample of all
    pairs among the labelled spectra.
    """
    if (zeta is None) == (truth is None):
        raise ValueError("give exactly one of a fixed zeta or training labels")
    timer = timer or PhaseTimer()
    ids = [s.id for s in spectra]

    with timer.phase("gram"):
        vectors = spectra_to_vectors(spectra, config.fset_size, config.preprocess)
    with timer.phase("index"):
        index = build_index(vectors)
    with timer.phase("weights"):
        weights = all_pair_weights(index, workers=config.workers)
        if config.precursor_tol is not None:
            weights = filter_by_precursor(
                weights, {s.id: s.precursor_mz for s in spectra}, config.precursor_tol)
    with timer.phase("threshold"):
        if zeta is not None:
            z = fixed_threshold(zeta)
        else:
            z = learn_threshold(weights, ids, truth, fraction=train_fraction, seed=seed)
    with timer.phase("components"):
        graph = build_graph(weights, ids)
        kept = apply_threshold(graph, z)
        clustering = connected_components(kept)

    return PipelineResult(clustering, z, graph.num_edges, kept.num_edges, dict(timer.timings))
