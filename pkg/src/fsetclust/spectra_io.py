"""Reading spectra and peptide labels, writing cluster assignments.

Supported inputs are MGF files (many spectra per file), directories of
``.dta`` files (one spectrum per file) and a two-column TSV mapping spectrum
ids to peptide strings. Clusterings are written as a TSV with a
``cluster_id\\tspectrum_id`` header.
"""

from __future__ import annotations

import logging
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

log = logging.getLogger(__name__)

PROTON_MASS = 1.00728
CLUSTER_HEADER = "cluster_id\tspectrum_id"


class SpectraParseError(ValueError):
    """Raised for malformed spectrum, label, or cluster files."""


class Peak(NamedTuple):
    mz: float
    intensity: float


@dataclass(frozen=True)
class Spectrum:
    id: str
    precursor_mz: float
    charge: int | None
    peaks: tuple[Peak, ...]

    def __post_init__(self):
        if not self.peaks:
            raise ValueError(f"spectrum {self.id!r} has no peaks")
        if self.precursor_mz <= 0:
            raise ValueError(f"spectrum {self.id!r}: precursor m/z must be positive")
        prev = 0.0
        for p in self.peaks:
            if p.mz <= prev:
                raise ValueError(f"spectrum {self.id!r}: peaks must be positive and strictly ascending in m/z")
            if p.intensity < 0:
                raise ValueError(f"spectrum {self.id!r}: negative intensity at m/z {p.mz}")
            prev = p.mz


class SpectrumList(list):
    """A plain list of spectra that also carries parse bookkeeping.

    ``skipped`` counts blocks or files that were dropped (empty peak lists,
    unreadable dta headers).
    """

    def __init__(self, items: Iterable[Spectrum] = (), skipped: int = 0):
        super().__init__(items)
        self.skipped = skipped


@dataclass(frozen=True)
class GroundTruth:
    assignments: dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.assignments)

    def __contains__(self, spectrum_id: object) -> bool:
        return spectrum_id in self.assignments

    def __getitem__(self, spectrum_id: str) -> str:
        return self.assignments[spectrum_id]

    def get(self, spectrum_id: str, default=None):
        return self.assignments.get(spectrum_id, default)


def merge_peaks(raw: Iterable[tuple[float, float]]) -> tuple[Peak, ...]:
    """Sort peaks by m/z, summing the intensities of exact duplicate m/z values."""
    merged: dict[float, float] = {}
    for mz, intensity in raw:
        merged[mz] = merged.get(mz, 0.0) + intensity
    return tuple(Peak(mz, merged[mz]) for mz in sorted(merged))


def _parse_peak_line(text: str, where: str) -> tuple[float, float]:
    parts = text.split()
    if len(parts) < 2:
        raise SpectraParseError(f"{where}: expected 'mz intensity', got {text!r}")
    try:
        mz, intensity = float(parts[0]), float(parts[1])
    except ValueError:
        raise SpectraParseError(f"{where}: non-numeric peak line {text!r}") from None
    if mz <= 0 or intensity < 0:
        raise SpectraParseError(f"{where}: peak out of range {text!r}")
    return mz, intensity


def parse_mgf(path: str | os.PathLike) -> SpectrumList:
    """Parse every ``BEGIN IONS``/``END IONS`` block of an MGF file.

    The TITLE header becomes the spectrum id (``<file>:<ordinal>`` when
    absent), the first PEPMASS token the precursor m/z. Blocks without peaks
    are skipped and counted in ``skipped`` on the returned list.
    """
    path = Path(path)
    spectra = SpectrumList()
    in_block = False
    block_start = 0
    ordinal = 0
    headers: dict[str, str] = {}
    raw: list[tuple[float, float]] = []

    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text[0] in "#;!/":
                continue
            where = f"{path.name}:{lineno}"
            upper = text.upper()
            if upper == "BEGIN IONS":
                if in_block:
                    raise SpectraParseError(f"{where}: BEGIN IONS inside an open block (missing END IONS for block at line {block_start})")
                in_block, block_start = True, lineno
                headers, raw = {}, []
                continue
            if upper == "END IONS":
                if not in_block:
                    raise SpectraParseError(f"{where}: END IONS without BEGIN IONS")
                in_block = False
                ordinal += 1
                spectrum = _mgf_block(path, ordinal, block_start, headers, raw)
                if spectrum is None:
                    spectra.skipped += 1
                else:
                    spectra.append(spectrum)
                continue
            if not in_block:
                # file-level parameters outside blocks are legal and ignored
                continue
            if "=" in text and not text[0].isdigit():
                key, _, value = text.partition("=")
                headers[key.strip().upper()] = value.strip()
                continue
            raw.append(_parse_peak_line(text, where))

    if in_block:
        raise SpectraParseError(f"{path.name}:{block_start}: block is missing END IONS")
    if spectra.skipped:
        log.warning("%s: skipped %d block(s) with no peaks", path.name, spectra.skipped)
    return spectra


def _mgf_block(path: Path, ordinal: int, lineno: int, headers: dict[str, str],
               raw: list[tuple[float, float]]) -> Spectrum | None:
    if not raw:
        return None
    where = f"{path.name}:{lineno}"
    if "PEPMASS" not in headers:
        raise SpectraParseError(f"{where}: block has no PEPMASS")
    try:
        precursor = float(headers["PEPMASS"].split()[0])
    except (ValueError, IndexError):
        raise SpectraParseError(f"{where}: bad PEPMASS {headers['PEPMASS']!r}") from None
    charge = None
    if headers.get("CHARGE"):
        charge = _parse_charge(headers["CHARGE"], where)
    title = headers.get("TITLE") or f"{path.name}:{ordinal}"
    return Spectrum(title, precursor, charge, merge_peaks(raw))


def _parse_charge(value: str, where: str) -> int:
    # "2+", "3", "2+ and 3+": the first listed state wins
    token = value.split()[0].split(",")[0].strip().rstrip("+")
    try:
        charge = abs(int(token.rstrip("-")))
    except ValueError:
        raise SpectraParseError(f"{where}: bad CHARGE {value!r}") from None
    return charge or None


def parse_dta(path: str | os.PathLike) -> Spectrum:
    path = Path(path)
    lines = [ln.strip() for ln in path.read_text(encoding="utf-8").splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise SpectraParseError(f"{path.name}: empty file")
    head = lines[0].split()
    try:
        mh, charge = float(head[0]), int(float(head[1]))
    except (ValueError, IndexError):
        raise SpectraParseError(f"{path.name}:1: expected 'M+H charge', got {lines[0]!r}") from None
    if charge < 1 or mh <= 0:
        raise SpectraParseError(f"{path.name}:1: header out of range {lines[0]!r}")
    raw = [_parse_peak_line(ln, f"{path.name}:{i}") for i, ln in enumerate(lines[1:], start=2)]
    if not raw:
        raise SpectraParseError(f"{path.name}: no peaks")
    precursor = (mh + (charge - 1) * PROTON_MASS) / charge
    return Spectrum(path.name, precursor, charge, merge_peaks(raw))


def parse_dta_dir(path: str | os.PathLike) -> SpectrumList:
    """One spectrum per ``*.dta`` file in ``path``, ordered by file name.

    Files that cannot be parsed are skipped with a warning.
    """
    path = Path(path)
    if not path.is_dir():
        raise FileNotFoundError(f"not a directory: {path}")
    spectra = SpectrumList()
    for fp in sorted(p for p in path.iterdir() if p.suffix.lower() == ".dta" and p.is_file()):
        try:
            spectra.append(parse_dta(fp))
        except SpectraParseError as exc:
            log.warning("skipping %s", exc)
            spectra.skipped += 1
    return spectra


def parse_ground_truth(path: str | os.PathLike) -> GroundTruth:
    path = Path(path)
    assignments: dict[str, str] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) < 2 or not parts[0].strip() or not parts[1].strip():
                raise SpectraParseError(f"{path.name}:{lineno}: expected 'spectrum_id<TAB>peptide'")
            sid, peptide = parts[0].strip(), parts[1].strip()
            if sid in assignments:
                raise SpectraParseError(f"{path.name}:{lineno}: duplicate spectrum id {sid!r}")
            assignments[sid] = peptide
    return GroundTruth(assignments)


def write_ground_truth(truth: GroundTruth, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for sid, peptide in truth.assignments.items():
            fh.write(f"{sid}\t{peptide}\n")


def write_mgf(spectra: Sequence[Spectrum], path: str | os.PathLike) -> None:
    # repr() keeps floats round-trippable so re-parsing is exact
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for s in spectra:
            fh.write("BEGIN IONS\n")
            fh.write(f"TITLE={s.id}\n")
            fh.write(f"PEPMASS={s.precursor_mz!r}\n")
            if s.charge:
                fh.write(f"CHARGE={s.charge}+\n")
            for p in s.peaks:
                fh.write(f"{p.mz!r} {p.intensity!r}\n")
            fh.write("END IONS\n\n")


def ordered_clusters(clusters: Iterable[Iterable[str]]) -> list[tuple[str, ...]]:
    """Clusters as sorted tuples, largest first, ties by smallest member id."""
    members = [tuple(sorted(c)) for c in clusters]
    return sorted(members, key=lambda m: (-len(m), m[0] if m else ""))


def write_clusters(clustering, path: str | os.PathLike) -> None:
    """Write ``clustering`` as a TSV, atomically (temp file + rename).

    ``clustering`` may be a :class:`~fsetclust.graph.Clustering` or any
    iterable of id collections.
    """
    clusters = getattr(clustering, "clusters", clustering)
    path = Path(path)
    lines = [CLUSTER_HEADER]
    for cid, members in enumerate(ordered_clusters(clusters)):
        lines.extend(f"{cid}\t{sid}" for sid in members)
    payload = "\n".join(lines) + "\n"

    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_clusters(path: str | os.PathLike) -> list[frozenset[str]]:
    path = Path(path)
    groups: dict[str, set[str]] = {}
    seen: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().rstrip("\r\n")
        if header != CLUSTER_HEADER:
            raise SpectraParseError(f"{path.name}:1: expected header {CLUSTER_HEADER!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\r\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise SpectraParseError(f"{path.name}:{lineno}: expected two columns")
            cid, sid = parts
            if sid in seen:
                raise SpectraParseError(f"{path.name}:{lineno}: spectrum {sid!r} listed twice")
            seen.add(sid)
            groups.setdefault(cid, set()).add(sid)
    return [frozenset(g) for g in groups.values()]
