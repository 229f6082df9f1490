"""Clustering of MS/MS spectra by shared windows of consecutive peaks."""

from .evaluation import EvalReport, awa, cluster_accuracy, levenshtein
from .fset import (
    BinnedSpectrum,
    FsetIndex,
    FsetVector,
    PreprocessConfig,
    all_pair_weights,
    build_index,
    enumerate_fsets,
    fset_weight,
    preprocess,
)
from .graph import Clustering, SpectrumGraph, apply_threshold, build_graph, connected_components
from .pipeline import PipelineConfig, run_pipeline
from .spectra_io import (
    GroundTruth,
    Peak,
    Spectrum,
    parse_dta_dir,
    parse_ground_truth,
    parse_mgf,
    read_clusters,
    write_clusters,
)
from .threshold import LabeledPair, fixed_threshold, label_pairs, svm_threshold

__all__ = [
    "BinnedSpectrum", "Clustering", "EvalReport", "FsetIndex", "FsetVector", "GroundTruth",
    "LabeledPair", "Peak", "PipelineConfig", "PreprocessConfig", "Spectrum", "SpectrumGraph",
    "all_pair_weights", "apply_threshold", "awa", "build_graph", "build_index", "cluster_accuracy",
    "connected_components", "enumerate_fsets", "fixed_threshold", "fset_weight", "label_pairs",
    "levenshtein", "parse_dta_dir", "parse_ground_truth", "parse_mgf", "preprocess",
    "read_clusters", "run_pipeline", "svm_threshold", "write_clusters",
]
__version__ = "0.1.0"
