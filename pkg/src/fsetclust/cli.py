"""Command-line interface: ``fsetclust {cluster,eval,gen,sweep,bench}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from .evaluation import MissingTruthError, awa
from .fset import PreprocessConfig
from .pipeline import PhaseTimer, PipelineConfig, run_pipeline
from .spectra_io import (
    SpectraParseError,
    parse_dta_dir,
    parse_ground_truth,
    parse_mgf,
    read_clusters,
    write_clusters,
    write_ground_truth,
    write_mgf,
)
from .synth import (
    SynthConfig,
    bench_scaling,
    generate_dataset,
    sweep_fset_size,
    write_sweep_csv,
    write_timing_csv,
)
from .threshold import ThresholdError

log = logging.getLogger("fsetclust")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers or LO..HI, got {text!r}")


def _add_pipeline_flags(p: argparse.ArgumentParser, workers_default: int) -> None:
    g = p.add_argument_group("pipeline")
    g.add_argument("--fset-size", type=int, default=7, help="consecutive peaks per F-set (default 7)")
    g.add_argument("--bin-width", type=float, default=0.5, help="m/z bin width in Th (default 0.5)")
    g.add_argument("--top-k", type=int, default=50, help="most intense peaks kept per spectrum (default 50)")
    g.add_argument("--min-mz", type=float, default=0.0, help="drop peaks below this m/z (default 0)")
    g.add_argument("--precursor-tol", type=float, default=None,
                   help="only pair spectra whose precursor m/z differ by at most this many Th")
    g.add_argument("--workers", type=int, default=workers_default,
                   help=f"processes for pair weighting (default {workers_default})")


def _add_synth_flags(p: argparse.ArgumentParser) -> None:
    d = SynthConfig()
    g = p.add_argument_group("synthetic data")
    g.add_argument("--num-peptides", type=int, default=d.num_peptides)
    g.add_argument("--replicates", type=int, default=d.replicates_per_peptide)
    g.add_argument("--peaks", type=int, default=d.peaks_per_spectrum)
    g.add_argument("--mz-low", type=float, default=d.mz_range[0])
    g.add_argument("--mz-high", type=float, default=d.mz_range[1])
    g.add_argument("--noise", type=float, default=d.noise_peak_fraction, help="noise peak fraction")
    g.add_argument("--dropout", type=float, default=d.dropout_fraction, help="dropped peak fraction")
    g.add_argument("--jitter", type=float, default=d.jitter_sd, help="m/z jitter sd in Th")


def _pipeline_config(args) -> PipelineConfig:
    if args.fset_size < 2:
        raise UsageError("--fset-size must be >= 2")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    try:
        pre = PreprocessConfig(bin_width=args.bin_width, top_k=args.top_k, min_mz=args.min_mz)
        return PipelineConfig(pre, args.fset_size, args.precursor_tol, args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _synth_config(args) -> SynthConfig:
    try:
        return SynthConfig(
            num_peptides=args.num_peptides,
            replicates_per_peptide=args.replicates,
            peaks_per_spectrum=args.peaks,
            mz_range=(args.mz_low, args.mz_high),
            noise_peak_fraction=args.noise,
            dropout_fraction=args.dropout,
            jitter_sd=args.jitter,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read_spectra(paths: list[str], fmt: str | None):
    spectra = []
    for path in paths:
        kind = fmt or ("dta-dir" if os.path.isdir(path) else "mgf")
        if kind == "dta-dir":
            spectra.extend(parse_dta_dir(path))
        else:
            spectra.extend(parse_mgf(path))
    seen = set()
    dupes = [s.id for s in spectra if s.id in seen or seen.add(s.id)]
    if dupes:
        raise DataError(f"duplicate spectrum ids: {', '.join(dupes[:10])}")
    return spectra


def cmd_cluster(args) -> int:
    config = _pipeline_config(args)
    timer = PhaseTimer()
    t0 = time.perf_counter()
    with timer.phase("parse"):
        spectra = _read_spectra(args.input, args.format)
        truth = parse_ground_truth(args.train_labels) if args.train_labels else None
    if not spectra:
        raise DataError("no spectra parsed")
    if truth is not None and not any(s.id in truth for s in spectra):
        raise DataError("training labels share no spectrum ids with the input")

    result = run_pipeline(spectra, config, zeta=args.zeta, truth=truth,
                          train_fraction=args.train_fraction, seed=args.seed, timer=timer)
    with timer.phase("write"):
        write_clusters(result.clustering, args.output)
    wall = time.perf_counter() - t0

    c = result.clustering
    print(f"spectra      {len(spectra)}")
    print(f"clusters     {len(c)}")
    print(f"singletons   {c.num_singletons}")
    print(f"zeta         {result.zeta:g}")
    print(f"edges        {result.num_edges} weighted, {result.num_kept_edges} kept")
    for name, secs in timer.timings.items():
        print(f"time {name:<10} {secs:.3f}s")
    print(f"time {'total':<10} {sum(timer.timings.values()):.3f}s (wall {wall:.3f}s)")
    print(f"wrote {args.output}")
    return EXIT_OK


def cmd_eval(args) -> int:
    clusters = read_clusters(args.clusters)
    truth = parse_ground_truth(args.truth)
    report = awa(clusters, truth)
    text = report.to_json()
    print(text)
    print(report.table())
    if args.json:
        Path(args.json).write_text(text + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_gen(args) -> int:
    cfg = _synth_config(args)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    spectra, truth = generate_dataset(cfg)
    write_mgf(spectra, out / "dataset.mgf")
    write_ground_truth(truth, out / "truth.tsv")
    print(f"wrote {len(spectra)} spectra of {cfg.num_peptides} peptides to {out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = _pipeline_config(args)
    if bool(args.input) != bool(args.truth):
        raise UsageError("--input and --truth go together")
    if args.input:
        spectra = _read_spectra(args.input, args.format)
        truth = parse_ground_truth(args.truth)
    else:
        spectra, truth = generate_dataset(_synth_config(args))
    if not spectra:
        raise DataError("no spectra parsed")
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    points = sweep_fset_size(spectra, truth, args.f_values, config,
                             train_fraction=args.train_fraction, seed=args.seed)
    write_sweep_csv(points, out / "sweep.csv")
    print(f"{'f':>3} {'awa':>8} {'zeta':>6} {'clusters':>9} {'singletons':>10}")
    for p in points:
        print(f"{p.f:>3} {p.awa:>8.4f} {p.zeta:>6g} {p.num_clusters:>9} {p.num_singletons:>10}")
    print(f"wrote {out / 'sweep.csv'}")
    return EXIT_OK


def cmd_bench(args) -> int:
    config = _pipeline_config(args)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    records = bench_scaling(args.sizes, args.fset_size, config, _synth_config(args),
                            replicates=args.replicates, zeta=args.zeta)
    write_timing_csv(records, out / "timing.csv")
    for r in records:
        print(f"n={r.n_spectra:<8} f={r.fset_size}  {r.wall_seconds:.3f}s")
    print(f"wrote {out / 'timing.csv'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    workers_default = os.cpu_count() or 1
    parser = _Parser(prog="fsetclust", description="Cluster MS/MS spectra by shared consecutive-peak windows.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cluster", help="cluster spectra and write a cluster TSV")
    p.add_argument("--input", nargs="+", required=True, help="MGF file(s) or .dta directories")
    p.add_argument("--format", choices=["mgf", "dta-dir"], default=None,
                   help="input format (default: dta-dir for directories, else mgf)")
    p.add_argument("--output", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--train-fraction", type=float, default=1.0,
                   help="share of labelled pairs used to learn zeta (default 1.0)")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--zeta", type=float, help="fixed edge-weight threshold")
    mode.add_argument("--train-labels", help="TSV of spectrum_id, peptide used to learn zeta")
    _add_pipeline_flags(p, workers_default)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("eval", help="score a cluster TSV against peptide labels")
    p.add_argument("--clusters", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--json", help="also write the JSON report here")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen", help="write a synthetic MGF and its labels")
    p.add_argument("--outdir", required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_synth_flags(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("sweep", help="AWA across F-set sizes")
    p.add_argument("--outdir", required=True)
    p.add_argument("--input", nargs="+", help="dataset (default: generate a synthetic one)")
    p.add_argument("--format", choices=["mgf", "dta-dir"], default=None)
    p.add_argument("--truth")
    p.add_argument("--f-values", type=_int_list, default=list(range(2, 10)), help="e.g. 2..9 or 2,5,7")
    p.add_argument("--train-fraction", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    _add_pipeline_flags(p, workers_default)
    _add_synth_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="pipeline runtime across dataset sizes")
    p.add_argument("--outdir", required=True)
    p.add_argument("--sizes", type=_int_list, required=True, help="e.g. 5000,10000,20000")
    p.add_argument("--zeta", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    _add_pipeline_flags(p, 1)
    _add_synth_flags(p)
    p.set_defaults(func=cmd_bench, replicates=10)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fsetclust: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, SpectraParseError, MissingTruthError, ThresholdError,
            FileNotFoundError, IsADirectoryError, PermissionError, ValueError) as exc:
        print(f"fsetclust: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"fsetclust: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
