"""Synthetic spectra with known peptide labels, and the two desk-scale studies.

Each synthetic peptide gets a template of uniformly placed peaks. Replicates
of a template lose a fraction of peaks (dropout), have another fraction
swapped for uniformly random m/z values (noise), and see normal jitter on
the m/z of what survives. Labels are random amino-acid strings, one per
template.

``sweep_fset_size`` scores the pipeline across window sizes;
``bench_scaling`` times it across dataset sizes.
"""

from __future__ import annotations

import csv
import os
import tempfile
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .evaluation import awa
from .pipeline import PhaseTimer, PipelineConfig, run_pipeline
from .spectra_io import GroundTruth, Peak, Spectrum, merge_peaks, parse_mgf, write_mgf

AMINO_ACIDS = "ACDEFGHIKLMNPQRSTVWY"


@dataclass(frozen=True)
class SynthConfig:
    num_peptides: int = 100
    replicates_per_peptide: int = 20
    peaks_per_spectrum: int = 50
    mz_range: tuple[float, float] = (100.0, 2000.0)
    noise_peak_fraction: float = 0.2
    dropout_fraction: float = 0.1
    jitter_sd: float = 0.05
    seed: int = 0
    precursor_range: tuple[float, float] = (400.0, 1200.0)

    def __post_init__(self):
        if self.num_peptides < 1 or self.replicates_per_peptide < 1 or self.peaks_per_spectrum < 1:
            raise ValueError("peptide, replicate and peak counts must all be >= 1")
        lo, hi = self.mz_range
        if not 0 < lo < hi:
            raise ValueError(f"mz_range must satisfy 0 < low < high, got {self.mz_range}")
        for name in ("noise_peak_fraction", "dropout_fraction"):
            v = getattr(self, name)
            if not 0 <= v < 1:
                raise ValueError(f"{name} must be in [0, 1), got {v}")
        if self.jitter_sd < 0:
            raise ValueError("jitter_sd must be non-negative")
        if self.surviving_peaks < 1:
            raise ValueError(
                f"dropout of {self.dropout_fraction} leaves no peaks out of {self.peaks_per_spectrum}")

    @property
    def num_dropped(self) -> int:
        return int(round(self.dropout_fraction * self.peaks_per_spectrum))

    @property
    def surviving_peaks(self) -> int:
        return self.peaks_per_spectrum - self.num_dropped

    @property
    def num_noise(self) -> int:
        return int(round(self.noise_peak_fraction * self.surviving_peaks))


def _peptide_labels(rng: np.random.Generator, count: int) -> list[str]:
    labels: list[str] = []
    seen: set[str] = set()
    while len(labels) < count:
        length = int(rng.integers(8, 21))
        pep = "".join(AMINO_ACIDS[i] for i in rng.integers(0, len(AMINO_ACIDS), length))
        if pep not in seen:
            seen.add(pep)
            labels.append(pep)
    return labels


def _replicates(cfg: SynthConfig, rng: np.random.Generator) -> list[tuple[float, list[Peak]]]:
    lo, hi = cfg.mz_range
    k = cfg.peaks_per_spectrum
    t_mz = np.sort(rng.uniform(lo, hi, k))
    t_int = rng.uniform(50.0, 10000.0, k)
    precursor = float(rng.uniform(*cfg.precursor_range))

    out = []
    for _ in range(cfg.replicates_per_peptide):
        keep = np.sort(rng.choice(k, cfg.surviving_peaks, replace=False))
        mz, inten = t_mz[keep], t_int[keep]
        if cfg.num_noise:
            swap = rng.choice(len(mz), cfg.num_noise, replace=False)
            mz, inten = np.delete(mz, swap), np.delete(inten, swap)
        if cfg.jitter_sd > 0:
            mz = mz + rng.normal(0.0, cfg.jitter_sd, len(mz))
        noise_mz = rng.uniform(lo, hi, cfg.num_noise)
        noise_int = rng.uniform(50.0, 10000.0, cfg.num_noise)
        mz = np.clip(np.concatenate([mz, noise_mz]), 1e-6, None)
        inten = np.concatenate([inten, noise_int])
        prec = precursor + (float(rng.normal(0.0, cfg.jitter_sd)) if cfg.jitter_sd > 0 else 0.0)
        out.append((prec, list(merge_peaks(zip(mz.tolist(), inten.tolist())))))
    return out


def generate_dataset(cfg: SynthConfig) -> tuple[list[Spectrum], GroundTruth]:
    """Deterministic in ``cfg.seed``; each template draws from its own child seed."""
    root = np.random.SeedSequence(cfg.seed)
    children = root.spawn(cfg.num_peptides + 1)
    meta_rng = np.random.default_rng(children[-1])
    peptides = _peptide_labels(meta_rng, cfg.num_peptides)

    records = []
    for p, child in enumerate(children[:-1]):
        for prec, peaks in _replicates(cfg, np.random.default_rng(child)):
            records.append((p, prec, peaks))

    order = meta_rng.permutation(len(records))
    spectra = []
    assignments = {}
    width = max(6, len(str(len(records))))
    for idx, r in enumerate(order):
        p, prec, peaks = records[r]
        sid = f"syn{idx:0{width}d}"
        spectra.append(Spectrum(sid, prec, 2, tuple(peaks)))
        assignments[sid] = peptides[p]
    return spectra, GroundTruth(assignments)


class SweepPoint(NamedTuple):
    f: int
    awa: float
    zeta: float
    num_clusters: int
    num_singletons: int


def sweep_fset_size(spectra: Sequence[Spectrum], truth: GroundTruth, f_values: Sequence[int],
                    config: PipelineConfig = PipelineConfig(), train_fraction: float = 0.2,
                    seed: int = 0) -> list[SweepPoint]:
    """AWA of the full pipeline at each window size.

    zeta is learned per window size from a ``train_fraction`` sample of all
    labelled pairs (same sample seed for every size); AWA is measured on the
    whole dataset.
    """
    if not f_values:
        raise ValueError("no F-set sizes given")
    if any(f < 2 for f in f_values):
        raise ValueError("F-set sizes must be >= 2")
    points = []
    for f in f_values:
        result = run_pipeline(spectra, replace(config, fset_size=f), truth=truth,
                              train_fraction=train_fraction, seed=seed)
        report = awa(result.clustering, truth)
        points.append(SweepPoint(f, report.awa, result.zeta, report.num_clusters, report.num_singletons))
    return points


PHASES = ("parse", "gram", "index", "weights", "threshold", "components")


@dataclass
class TimingRecord:
    n_spectra: int
    fset_size: int
    wall_seconds: float
    phase_breakdown: dict[str, float] = field(default_factory=dict)


def bench_scaling(sizes: Sequence[int], f: int = 7, config: PipelineConfig = PipelineConfig(),
                  synth: SynthConfig = SynthConfig(), replicates: int = 10, zeta: float = 1.0,
                  workdir: str | os.PathLike | None = None) -> list[TimingRecord]:
    """Time the pipeline (MGF parse included) on synthetic sets of each size.

    Each set has ``size // replicates`` templates with ``replicates`` copies.
    Dataset generation is not timed.
    """
    if list(sizes) != sorted(sizes):
        raise ValueError("sizes must be ascending")
    config = replace(config, fset_size=f)
    records = []
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        for n in sizes:
            cfg = replace(synth, num_peptides=max(1, n // replicates), replicates_per_peptide=replicates)
            spectra, _ = generate_dataset(cfg)
            path = Path(tmp) / f"bench_{n}.mgf"
            write_mgf(spectra, path)
            del spectra

            timer = PhaseTimer()
            t0 = time.perf_counter()
            with timer.phase("parse"):
                parsed = parse_mgf(path)
            run_pipeline(parsed, config, zeta=zeta, timer=timer)
            wall = time.perf_counter() - t0
            records.append(TimingRecord(len(parsed), f, wall, dict(timer.timings)))
    return records


def write_sweep_csv(points: Sequence[SweepPoint], path: str | os.PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["f", "awa", "zeta", "num_clusters", "num_singletons"])
        for p in points:
            w.writerow([p.f, repr(p.awa), repr(p.zeta), p.num_clusters, p.num_singletons])


def write_timing_csv(records: Sequence[TimingRecord], path: str | os.PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "f", "seconds", *PHASES])
        for r in records:
            w.writerow([r.n_spectra, r.fset_size, f"{r.wall_seconds:.6f}",
                        *(f"{r.phase_breakdown.get(ph, 0.0):.6f}" for ph in PHASES)])
