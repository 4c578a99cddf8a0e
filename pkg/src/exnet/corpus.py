"""Corpus ingestion, top-decile flagging, edge aggregation and thresholding.

Turns raw paper rows (or pre-aggregated dyad rows) plus an institution
catalog into one filtered dataset per subject area.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import IO, Iterable, Iterator, Mapping

from .io import SCHEMA_VERSION, read_json, write_json

DEFAULT_MIN_REF_PAPERS = 500
DEFAULT_MIN_JOINT = 10
DEFAULT_MIN_REFS = 50
DEFAULT_ERROR_BUDGET = 100


class IngestError(Exception):
    """Fatal ingestion failure (duplicate ids, exhausted error budget, bad source)."""


@dataclass(frozen=True)
class RowError:
    line: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


@dataclass(frozen=True)
class PaperRecord:
    paper_id: str
    subject: str
    year: int
    citations: int
    journal_prestige: float
    institutions: frozenset[str]

    def __post_init__(self) -> None:
        if self.citations < 0:
            raise ValueError(f"citations must be >= 0, got {self.citations}")
        if self.journal_prestige < 0:
            raise ValueError("journal_prestige must be >= 0")
        if not self.institutions:
            raise ValueError("institutions must be non-empty")


@dataclass(frozen=True)
class Institution:
    inst_id: str
    name: str
    country: str
    lat: float | None = None
    lon: float | None = None
    is_reference: bool = False
    total_papers: int = 0

    def __post_init__(self) -> None:
        if self.lat is not None and not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"lat out of range: {self.lat}")
        if self.lon is not None and not -180.0 < self.lon <= 180.0:
            raise ValueError(f"lon out of range: {self.lon}")


@dataclass(frozen=True)
class CollabEdge:
    """Aggregated dyad: joint paper count and highly-cited joint count."""

    ref_id: str
    net_id: str
    n_papers: int
    n_top: int

    def __post_init__(self) -> None:
        if self.ref_id == self.net_id:
            raise ValueError(f"self-edge not allowed: {self.ref_id}")
        if self.n_papers < 1:
            raise ValueError("n_papers must be >= 1")
        if not 0 <= self.n_top <= self.n_papers:
            raise ValueError(f"n_top must be in [0, n_papers], got {self.n_top}/{self.n_papers}")


def observed_rate(edge: CollabEdge) -> float:
    """Raw proportion of highly cited joint papers, n_top / n_papers."""
    return edge.n_top / edge.n_papers


@dataclass(frozen=True)
class Thresholds:
    min_ref_papers: int = DEFAULT_MIN_REF_PAPERS
    min_joint: int = DEFAULT_MIN_JOINT
    min_refs: int = DEFAULT_MIN_REFS


@dataclass(frozen=True)
class ThresholdRejection:
    """Returned instead of a dataset when a subject fails a filter."""

    subject: str
    failed: str  # name of the threshold that failed
    detail: str


@dataclass
class SubjectAreaDataset:
    subject: str
    edges: list[CollabEdge]
    institutions: dict[str, Institution]
    thresholds_applied: Thresholds

    @property
    def reference_ids(self) -> list[str]:
        return sorted({e.ref_id for e in self.edges})

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "subject": self.subject,
            "thresholds": {
                "min_ref_papers": self.thresholds_applied.min_ref_papers,
                "min_joint": self.thresholds_applied.min_joint,
                "min_refs": self.thresholds_applied.min_refs,
            },
            "institutions": [
                {
                    "inst_id": inst.inst_id,
                    "name": inst.name,
                    "country": inst.country,
                    "lat": inst.lat,
                    "lon": inst.lon,
                    "is_reference": inst.is_reference,
                    "total_papers": inst.total_papers,
                }
                for _, inst in sorted(self.institutions.items())
            ],
            "edges": [
                {"ref_id": e.ref_id, "net_id": e.net_id, "n_papers": e.n_papers, "n_top": e.n_top}
                for e in sorted(self.edges, key=lambda e: (e.ref_id, e.net_id))
            ],
        }

    def save(self, path: str | Path) -> Path:
        return write_json(self.to_dict(), path)

    @classmethod
    def from_dict(cls, d: dict) -> "SubjectAreaDataset":
        th = d["thresholds"]
        return cls(
            subject=d["subject"],
            edges=[CollabEdge(e["ref_id"], e["net_id"], e["n_papers"], e["n_top"]) for e in d["edges"]],
            institutions={
                i["inst_id"]: Institution(
                    inst_id=i["inst_id"],
                    name=i["name"],
                    country=i["country"],
                    lat=i["lat"],
                    lon=i["lon"],
                    is_reference=i["is_reference"],
                    total_papers=i["total_papers"],
                )
                for i in d["institutions"]
            },
            thresholds_applied=Thresholds(th["min_ref_papers"], th["min_joint"], th["min_refs"]),
        )

    @classmethod
    def load(cls, path: str | Path) -> "SubjectAreaDataset":
        return cls.from_dict(read_json(path))


# ---------------------------------------------------------------------------
# institution catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    inst_id: str
    name: str
    country: str
    lat: float | None
    lon: float | None
    totals: Mapping[str, int]  # subject -> total paper count


class InstitutionCatalog:
    """Institution identities plus per-subject total paper counts."""

    def __init__(self, entries: Iterable[CatalogEntry]):
        self.entries: dict[str, CatalogEntry] = {}
        for e in entries:
            if e.inst_id in self.entries:
                raise IngestError(f"duplicate inst_id in catalog: {e.inst_id}")
            self.entries[e.inst_id] = e

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, inst_id: str) -> bool:
        return inst_id in self.entries

    def total_papers(self, inst_id: str, subject: str) -> int:
        entry = self.entries.get(inst_id)
        if entry is None:
            return 0
        return int(entry.totals.get(subject, 0))

    def institution(self, inst_id: str, subject: str, is_reference: bool) -> Institution:
        entry = self.entries.get(inst_id)
        if entry is None:
            return Institution(inst_id=inst_id, name=inst_id, country="???",
                               is_reference=is_reference)
        return Institution(
            inst_id=entry.inst_id,
            name=entry.name,
            country=entry.country,
            lat=entry.lat,
            lon=entry.lon,
            is_reference=is_reference,
            total_papers=self.total_papers(inst_id, subject),
        )

    @classmethod
    def load(cls, source: str | Path | IO[str]) -> "InstitutionCatalog":
        raw = read_json(source)
        if isinstance(raw, dict) and "institutions" in raw:
            raw = raw["institutions"]
        if not isinstance(raw, list):
            raise IngestError("institution catalog must be a JSON list")
        entries = []
        for rec in raw:
            entries.append(
                CatalogEntry(
                    inst_id=str(rec["inst_id"]),
                    name=str(rec.get("name", rec["inst_id"])),
                    country=str(rec.get("country", "???")),
                    lat=None if rec.get("lat") is None else float(rec["lat"]),
                    lon=None if rec.get("lon") is None else float(rec["lon"]),
                    totals={str(k): int(v) for k, v in rec.get("total_papers_by_subject", {}).items()},
                )
            )
        return cls(entries)


# ---------------------------------------------------------------------------
# ingestion
# ---------------------------------------------------------------------------

@dataclass
class IngestResult:
    papers: list[PaperRecord] = field(default_factory=list)
    edges: list[tuple[str, CollabEdge]] = field(default_factory=list)  # (subject, edge)
    rejected: list[RowError] = field(default_factory=list)


def _iter_lines(source) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            yield from fh
        return
    for line in source:
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        yield line


def _parse_paper_json(obj: dict) -> PaperRecord:
    insts = obj["institutions"]
    if isinstance(insts, str):
        insts = [p for p in insts.split(";") if p.strip()]
    return PaperRecord(
        paper_id=str(obj["paper_id"]),
        subject=str(obj["subject"]),
        year=int(obj["year"]),
        citations=int(obj["citations"]),
        journal_prestige=float(obj["journal_prestige"]),
        institutions=frozenset(str(i).strip() for i in insts),
    )


def _parse_paper_delimited(fields: list[str]) -> PaperRecord:
    if len(fields) != 6:
        raise ValueError(f"expected 6 fields, got {len(fields)}")
    insts = frozenset(p.strip() for p in fields[5].split(";") if p.strip())
    return PaperRecord(
        paper_id=fields[0].strip(),
        subject=fields[1].strip(),
        year=int(fields[2]),
        citations=int(fields[3]),
        journal_prestige=float(fields[4]),
        institutions=insts,
    )


def _parse_edge_json(obj: dict) -> tuple[str, CollabEdge]:
    return str(obj["subject"]), CollabEdge(
        ref_id=str(obj["ref_id"]),
        net_id=str(obj["net_id"]),
        n_papers=int(obj["n_papers"]),
        n_top=int(obj["n_top"]),
    )


def _parse_edge_delimited(fields: list[str]) -> tuple[str, CollabEdge]:
    if len(fields) != 5:
        raise ValueError(f"expected 5 fields, got {len(fields)}")
    return fields[0].strip(), CollabEdge(
        ref_id=fields[1].strip(),
        net_id=fields[2].strip(),
        n_papers=int(fields[3]),
        n_top=int(fields[4]),
    )


def ingest(source, format: str, error_budget: int = DEFAULT_ERROR_BUDGET) -> IngestResult:
    """Parse paper-rows or edge-rows into an in-memory corpus.

    Malformed rows are reported with their line number and skipped until
    `error_budget` rejections accumulate, after which ingestion aborts.
    A duplicate paper_id is always fatal.
    """
    if format not in ("papers", "edges", "paper-rows", "edge-rows"):
        raise ValueError(f"unknown format: {format!r}")
    paper_mode = format in ("papers", "paper-rows")

    result = IngestResult()
    seen_ids: set[str] = set()
    for line_no, line in enumerate(_iter_lines(source), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            if stripped.startswith("{"):
                obj = json.loads(stripped)
                parsed = _parse_paper_json(obj) if paper_mode else _parse_edge_json(obj)
            else:
                fields = stripped.split(",")
                parsed = _parse_paper_delimited(fields) if paper_mode else _parse_edge_delimited(fields)
        except (ValueError, KeyError, TypeError) as exc:
            result.rejected.append(RowError(line_no, str(exc)))
            if len(result.rejected) > error_budget:
                raise IngestError(
                    f"error budget exhausted: {len(result.rejected)} malformed rows "
                    f"(last: line {line_no}: {exc})"
                )
            continue
        if paper_mode:
            if parsed.paper_id in seen_ids:
                raise IngestError(f"duplicate paper_id at line {line_no}: {parsed.paper_id}")
            seen_ids.add(parsed.paper_id)
            result.papers.append(parsed)
        else:
            result.edges.append(parsed)
    return result


# ---------------------------------------------------------------------------
# top-decile flagging
# ---------------------------------------------------------------------------

def top_decile_count(n: int, share: float = 0.10) -> int:
    """Half-up rounding of share*n; the number of papers to flag."""
    if n < 0:
        raise ValueError("n must be >= 0")
    import math
    return int(math.floor(share * n + 0.5))


def assign_top_decile(papers: Iterable[PaperRecord], subject: str, year: int) -> set[str]:
    """Flag the top round(10%·N) papers of one (subject, year) group.

    Total order: citations descending, then journal_prestige descending
    (the SJR-style secondary key for ties at the threshold), then paper_id
    ascending as a deterministic fallback.
    """
    group = [p for p in papers]
    for p in group:
        if p.subject != subject or p.year != year:
            raise ValueError(f"paper {p.paper_id} not in group ({subject}, {year})")
    k = top_decile_count(len(group))
    if k == 0:
        return set()
    ranked = sorted(group, key=lambda p: (-p.citations, -p.journal_prestige, p.paper_id))
    return {p.paper_id for p in ranked[:k]}


def flag_corpus(papers: Iterable[PaperRecord]) -> set[str]:
    """Flag every (subject, year) group of a mixed corpus independently."""
    groups: dict[tuple[str, int], list[PaperRecord]] = {}
    for p in papers:
        groups.setdefault((p.subject, p.year), []).append(p)
    flagged: set[str] = set()
    for (subject, year), group in groups.items():
        flagged |= assign_top_decile(group, subject, year)
    return flagged


# ---------------------------------------------------------------------------
# aggregation and thresholds
# ---------------------------------------------------------------------------

def aggregate_edges(
    papers: Iterable[PaperRecord],
    flags: set[str],
    references: set[str],
) -> list[CollabEdge]:
    """Aggregate per-dyad joint and highly-cited joint paper counts.

    A paper listing m institutions contributes to every (ref, net) pair it
    spans, in both directions when both ends are references; there is no
    fractional counting.
    """
    counts: dict[tuple[str, str], list[int]] = {}
    for p in papers:
        insts = sorted(p.institutions)
        top = 1 if p.paper_id in flags else 0
        for ref in insts:
            if ref not in references:
                continue
            for net in insts:
                if net == ref:
                    continue
                c = counts.setdefault((ref, net), [0, 0])
                c[0] += 1
                c[1] += top
    return [
        CollabEdge(ref_id=ref, net_id=net, n_papers=c[0], n_top=c[1])
        for (ref, net), c in sorted(counts.items())
    ]


def merge_edge_rows(rows: Iterable[CollabEdge]) -> list[CollabEdge]:
    """Sum duplicate (ref, net) dyads; pre-aggregated inputs may arrive in parts."""
    counts: dict[tuple[str, str], list[int]] = {}
    for e in rows:
        c = counts.setdefault((e.ref_id, e.net_id), [0, 0])
        c[0] += e.n_papers
        c[1] += e.n_top
    return [CollabEdge(r, n, c[0], c[1]) for (r, n), c in sorted(counts.items())]


def apply_thresholds(
    edges: Iterable[CollabEdge],
    ref_totals: Mapping[str, int],
    subject: str = "",
    thresholds: Thresholds = Thresholds(),
    institutions: Mapping[str, Institution] | None = None,
) -> SubjectAreaDataset | ThresholdRejection:
    """Apply the three inclusion filters and assemble the dataset.

    Drops edges whose reference has fewer than min_ref_papers total papers,
    then edges with fewer than min_joint joint papers; rejects the subject
    if fewer than min_refs distinct references survive.
    """
    kept = [
        e
        for e in edges
        if ref_totals.get(e.ref_id, 0) >= thresholds.min_ref_papers
        and e.n_papers >= thresholds.min_joint
    ]
    refs = {e.ref_id for e in kept}
    if len(refs) < thresholds.min_refs:
        return ThresholdRejection(
            subject=subject,
            failed="min_refs",
            detail=f"{len(refs)} surviving reference institutions < min_refs={thresholds.min_refs}",
        )
    inst_ids = {e.ref_id for e in kept} | {e.net_id for e in kept}
    catalog = institutions or {}
    out: dict[str, Institution] = {}
    for iid in sorted(inst_ids):
        base = catalog.get(iid)
        if base is None:
            base = Institution(inst_id=iid, name=iid, country="???")
        out[iid] = replace(base, is_reference=iid in refs)
    return SubjectAreaDataset(
        subject=subject,
        edges=sorted(kept, key=lambda e: (e.ref_id, e.net_id)),
        institutions=out,
        thresholds_applied=thresholds,
    )


def build_subject_dataset(
    ingested: IngestResult,
    catalog: InstitutionCatalog,
    subject: str,
    thresholds: Thresholds = Thresholds(),
) -> SubjectAreaDataset | ThresholdRejection:
    """Full corpus-to-dataset path for one subject area.

    Paper rows are flagged per (subject, year) group and aggregated; edge
    rows are merged directly. Reference status comes from the catalog's
    per-subject totals; with paper rows and no catalog totals, totals fall
    back to in-corpus counts.
    """
    if ingested.papers:
        papers = [p for p in ingested.papers if p.subject == subject]
        flags = flag_corpus(papers)
        totals: dict[str, int] = {}
        for p in papers:
            for iid in p.institutions:
                totals[iid] = totals.get(iid, 0) + 1
        for iid in list(totals):
            cat_total = catalog.total_papers(iid, subject)
            if cat_total:
                totals[iid] = cat_total
        references = {iid for iid, t in totals.items() if t >= thresholds.min_ref_papers}
        edges = aggregate_edges(papers, flags, references)
    else:
        edges = merge_edge_rows(e for subj, e in ingested.edges if subj == subject)
        totals = {
            e.ref_id: catalog.total_papers(e.ref_id, subject) for e in edges
        }
    institutions = {
        iid: catalog.institution(iid, subject, False)
        for iid in {e.ref_id for e in edges} | {e.net_id for e in edges}
    }
    return apply_thresholds(edges, totals, subject=subject, thresholds=thresholds,
                            institutions=institutions)


def subjects_in(ingested: IngestResult) -> list[str]:
    if ingested.papers:
        return sorted({p.subject for p in ingested.papers})
    return sorted({subj for subj, _ in ingested.edges})
