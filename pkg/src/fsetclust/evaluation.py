"""Cluster purity against known peptide assignments.

Two spectra belong together exactly when their peptides have edit distance
zero. A cluster's accuracy is the share of its members carrying the
cluster's most common peptide; the dataset score (AWA) weights each
cluster's accuracy by its size.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Iterable

from .spectra_io import GroundTruth, ordered_clusters


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance (insert, delete, substitute)."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (ca != cb),
            ))
        previous = current
    return previous[-1]


def same_peptide(p: str, q: str) -> bool:
    """True when the peptides are at edit distance zero.

    Distance zero holds exactly for equal strings, so this skips the DP.
    """
    return p == q


class MissingTruthError(KeyError):
    def __init__(self, ids):
        self.ids = sorted(ids)
        shown = ", ".join(self.ids[:10])
        more = f" (+{len(self.ids) - 10} more)" if len(self.ids) > 10 else ""
        super().__init__(f"no ground-truth peptide for {len(self.ids)} spectrum id(s): {shown}{more}")

    def __str__(self):
        return self.args[0]


@dataclass(frozen=True)
class ClusterScore:
    cluster_id: int
    size: int
    majority_count: int
    accuracy: float
    majority_peptide: str


@dataclass(frozen=True)
class EvalReport:
    per_cluster: tuple[ClusterScore, ...]
    awa: float
    num_clusters: int
    num_spectra: int
    num_singletons: int

    def to_dict(self) -> dict:
        return {
            "awa": self.awa,
            "num_clusters": self.num_clusters,
            "num_spectra": self.num_spectra,
            "num_singletons": self.num_singletons,
            "per_cluster": [asdict(row) for row in self.per_cluster],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def table(self, max_rows: int = 20) -> str:
        lines = [
            f"AWA {self.awa:.4f}  clusters {self.num_clusters}  spectra {self.num_spectra}  "
            f"singletons {self.num_singletons}",
            f"{'cluster':>8} {'n':>6} {'x':>6} {'accuracy':>9}  peptide",
        ]
        for row in self.per_cluster[:max_rows]:
            lines.append(f"{row.cluster_id:>8} {row.size:>6} {row.majority_count:>6} "
                         f"{row.accuracy:>9.4f}  {row.majority_peptide}")
        hidden = len(self.per_cluster) - max_rows
        if hidden > 0:
            lines.append(f"... {hidden} more cluster(s)")
        return "\n".join(lines)


def _check_truth(ids: Iterable[str], truth: GroundTruth) -> None:
    missing = [sid for sid in ids if sid not in truth]
    if missing:
        raise MissingTruthError(missing)


def cluster_accuracy(cluster: Iterable[str], truth: GroundTruth) -> tuple[int, int, float]:
    """Return ``(x, n, a)``: majority-peptide count, cluster size, and x / n."""
    x, n, _ = _majority(list(cluster), truth)
    return x, n, x / n


def _majority(members: list[str], truth: GroundTruth) -> tuple[int, int, str]:
    if not members:
        raise ValueError("empty cluster")
    _check_truth(members, truth)
    counts = Counter(truth[sid] for sid in members)
    peptide, x = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return x, len(members), peptide


def awa(clustering, truth: GroundTruth) -> EvalReport:
    """Score every cluster, singletons included, and the size-weighted mean."""
    clusters = ordered_clusters(getattr(clustering, "clusters", clustering))
    if not clusters:
        raise ValueError("AWA is undefined for an empty clustering")
    _check_truth((sid for c in clusters for sid in c), truth)

    rows = []
    # a_i * n_i == x_i, so accumulate integers and divide once
    weighted = 0
    total = 0
    for cid, members in enumerate(clusters):
        x, n, peptide = _majority(list(members), truth)
        a = x / n
        rows.append(ClusterScore(cid, n, x, a, peptide))
        weighted += x
        total += n
    return EvalReport(
        per_cluster=tuple(rows),
        awa=weighted / total,
        num_clusters=len(rows),
        num_spectra=total,
        num_singletons=sum(1 for r in rows if r.size == 1),
    )
