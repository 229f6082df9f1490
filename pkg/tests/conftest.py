import random

import pytest

from fsetclust.fset import BinnedSpectrum, enumerate_fsets
from fsetclust.spectra_io import Peak, Spectrum

_acceptance = []


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = dict(report.user_properties).get("acceptance")
    if name:
        _acceptance.append((name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")


@pytest.fixture(autouse=True)
def _tag_acceptance(request, record_property):
    marker = request.node.get_closest_marker("acceptance")
    if marker:
        record_property("acceptance", marker.args[0])


def make_spectrum(sid, mzs, intensities=None, precursor=500.0, charge=2):
    intensities = intensities or [100.0] * len(mzs)
    peaks = tuple(Peak(m, i) for m, i in sorted(zip(mzs, intensities)))
    return Spectrum(sid, precursor, charge, peaks)


def vec(sid, bins, f):
    return enumerate_fsets(BinnedSpectrum(sid, tuple(bins)), f)


def random_bins(rng: random.Random, n, max_peaks=60, universe=400, families=8):
    """Bin lists drawn as noisy copies of a few base lists, so windows collide at every f."""
    bases = [sorted(rng.sample(range(universe), rng.randint(1, max_peaks))) for _ in range(families)]
    out = []
    for _ in range(n):
        base = rng.choice(bases)
        kept = {b for b in base if rng.random() > 0.1}
        kept.update(rng.sample(range(universe), rng.randint(0, 5)))
        bins = sorted(kept)
        if len(bins) > max_peaks:
            bins = sorted(rng.sample(bins, max_peaks))
        out.append(bins)
    return out


def random_vectors(rng: random.Random, n, f, **kw):
    return [vec(f"s{i:03d}", bins, f) for i, bins in enumerate(random_bins(rng, n, **kw))]
