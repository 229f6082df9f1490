"""Exit criteria. Each test carries an ``acceptance`` marker; the terminal
summary prints one PASS/FAIL line per criterion.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import random
import time
from itertools import combinations

import numpy as np
import pytest

from conftest import random_bins, vec
from fsetclust import fset
from fsetclust.cli import main
from fsetclust.evaluation import awa, levenshtein
from fsetclust.fset import all_pair_weights, build_index
from fsetclust.graph import apply_threshold, connected_components
from fsetclust.pipeline import PipelineConfig, run_pipeline
from fsetclust.spectra_io import GroundTruth, write_ground_truth, write_mgf
from fsetclust.synth import SynthConfig, bench_scaling, generate_dataset, sweep_fset_size
from fsetclust.threshold import LabeledPair, svm_threshold
from test_graph import random_weighted_graph, transitive_closure_clusters


@pytest.fixture(scope="module")
def default_dataset():
    return generate_dataset(SynthConfig(num_peptides=100, replicates_per_peptide=20, seed=0))


@pytest.fixture(scope="module")
def default_sweep(default_dataset):
    spectra, truth = default_dataset
    t0 = time.perf_counter()
    points = sweep_fset_size(spectra, truth, [2, 3, 4, 5, 6, 7], PipelineConfig(), train_fraction=0.2, seed=0)
    return points, time.perf_counter() - t0


def double_sum_all_pairs(vectors):
    """Every (i, j) window pair of every spectrum pair compared element-wise, then summed."""
    out = {}
    arrays = [np.array(v.grams, dtype=np.int64).reshape(len(v.grams), v.f) for v in vectors]
    for (x, ax), (y, ay) in combinations(zip(vectors, arrays), 2):
        if not len(ax) or not len(ay):
            continue
        phi = (ax[:, None, :] == ay[None, :, :]).all(axis=2)
        w = int(phi.sum())
        if w:
            out[tuple(sorted((x.id, y.id)))] = w
    return out


@pytest.mark.acceptance("Window-weight oracle: indexed all-pairs == brute-force double sum on 50 instances, < 30 s")
def test_weight_oracle_equivalence():
    rng = random.Random(2024)
    t0 = time.perf_counter()
    for trial in range(50):
        f = (2, 3, 7)[trial % 3]
        n = rng.randint(2, 200)
        vectors = [vec(f"s{i:03d}", b, f) for i, b in enumerate(random_bins(rng, n, max_peaks=60))]
        assert all(len(v.grams) <= 60 for v in vectors)
        assert all_pair_weights(build_index(vectors)) == double_sum_all_pairs(vectors), f"trial {trial}"
    assert time.perf_counter() - t0 < 30


@pytest.mark.acceptance("Connected components == transitive closure on 100 random graphs (N <= 50)")
def test_components_oracle():
    rng = random.Random(99)
    for _ in range(100):
        g = random_weighted_graph(rng, rng.randint(1, 50), rng.choice([0.01, 0.03, 0.06, 0.15]))
        assert set(connected_components(g)) == transitive_closure_clusters(list(g.vertices), g.edges)


@pytest.mark.acceptance("AWA hand cases: {A,A,B},{C} -> 0.75; all-pure -> 1.0")
def test_awa_hand_cases():
    truth = GroundTruth({"1": "A", "2": "A", "3": "B", "4": "C"})
    assert awa([{"1", "2", "3"}, {"4"}], truth).awa == 0.75
    assert awa([{"1", "2"}, {"3"}, {"4"}], truth).awa == 1.0


@pytest.mark.acceptance("Levenshtein metric properties on 1,000 random pairs; kitten/sitting -> 3")
def test_levenshtein_properties():
    rng = random.Random(5)
    alphabet = "ACDEFGHIK"

    def word():
        return "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))

    for _ in range(1000):
        a, b, c = word(), word(), word()
        dab = levenshtein(a, b)
        assert dab >= 0
        assert (dab == 0) == (a == b)
        assert dab == levenshtein(b, a)
        assert levenshtein(a, c) <= dab + levenshtein(b, c)
    assert levenshtein("kitten", "sitting") == 3


@pytest.mark.acceptance("AWA vs F-set size trend on 100x20 synthetic set (f=2..7), < 5 min")
def test_fset_size_trend(default_sweep):
    points, seconds = default_sweep
    curve = [p.awa for p in points]
    print("AWA by f:", {p.f: round(p.awa, 4) for p in points})
    drops = [a - b for a, b in zip(curve, curve[1:]) if b < a]
    assert len(drops) <= 1 and all(d <= 0.01 for d in drops)
    assert curve[-1] >= 0.99
    assert curve[0] <= curve[-1] - 0.10
    assert seconds < 300


@pytest.mark.acceptance("f=7 with SVM-learned zeta: AWA >= 0.97 on the default synthetic set")
def test_awa_floor_at_f7(default_dataset):
    spectra, truth = default_dataset
    result = run_pipeline(spectra, PipelineConfig(fset_size=7), truth=truth, train_fraction=0.2, seed=0)
    report = awa(result.clustering, truth)
    print(f"f=7 zeta={result.zeta} AWA={report.awa:.4f} clusters={report.num_clusters} "
          f"singletons={report.num_singletons}")
    assert report.awa >= 0.97


@pytest.mark.acceptance("Runtime scaling N=5k/10k/20k: time(2N)/time(N) < 3.5, < 15 min")
def test_runtime_scaling():
    t0 = time.perf_counter()
    records = bench_scaling([5000, 10000, 20000], f=7, config=PipelineConfig(workers=1))
    times = [r.wall_seconds for r in records]
    ratios = [b / a for a, b in zip(times, times[1:])]
    print("seconds:", [round(t, 3) for t in times], "ratios:", [round(r, 2) for r in ratios])
    assert all(r < 3.5 for r in ratios)
    assert time.perf_counter() - t0 < 900


@pytest.mark.acceptance("svm_threshold: {2,3,4}/{10,12,14} -> 7; separable sets classified perfectly")
def test_svm_closed_form():
    pairs = [LabeledPair(f"n{w}", f"m{w}", w, False) for w in (2, 3, 4)]
    pairs += [LabeledPair(f"p{w}", f"q{w}", w, True) for w in (10, 12, 14)]
    assert svm_threshold(pairs) == 7
    rng = random.Random(3)
    for _ in range(200):
        cut = rng.randint(1, 40)
        neg = [rng.randint(0, cut - 1) for _ in range(rng.randint(1, 20))]
        pos = [rng.randint(cut, 80) for _ in range(rng.randint(1, 20))]
        ps = [LabeledPair(f"a{i}", f"b{i}", w, False) for i, w in enumerate(neg)]
        ps += [LabeledPair(f"c{i}", f"d{i}", w, True) for i, w in enumerate(pos)]
        z = svm_threshold(ps)
        assert all((p.weight >= z) == p.label for p in ps)


@pytest.mark.acceptance("Threshold refinement on 20 random weighted graphs")
def test_threshold_refinement():
    rng = random.Random(17)
    for _ in range(20):
        g = random_weighted_graph(rng, rng.randint(5, 60), rng.choice([0.05, 0.1, 0.3]), max_w=12)
        z1 = rng.uniform(0, 10)
        z2 = z1 + rng.uniform(0.5, 6)
        coarse = connected_components(apply_threshold(g, z1))
        fine = connected_components(apply_threshold(g, z2))
        assert all(any(c <= big for big in coarse) for c in fine)


@pytest.mark.acceptance("cmd_cluster byte-identical across runs and workers {1, 4}")
def test_end_to_end_determinism(tmp_path, default_dataset, monkeypatch):
    spectra, truth = default_dataset
    write_mgf(spectra, tmp_path / "d.mgf")
    write_ground_truth(truth, tmp_path / "t.tsv")

    pools = []
    real_pool = fset.ProcessPoolExecutor

    def spy(*args, **kwargs):
        pools.append(kwargs.get("max_workers"))
        return real_pool(*args, **kwargs)

    monkeypatch.setattr(fset, "ProcessPoolExecutor", spy)
    outputs = []
    for workers in ("1", "1", "4", "4"):
        out = tmp_path / f"c{len(outputs)}.tsv"
        rc = main(["cluster", "--input", str(tmp_path / "d.mgf"), "--train-labels", str(tmp_path / "t.tsv"),
                   "--train-fraction", "0.2", "--fset-size", "3", "--seed", "11",
                   "--workers", workers, "--output", str(out)])
        assert rc == 0
        outputs.append(out.read_bytes())
    assert pools == [4, 4]
    assert len(set(outputs)) == 1
