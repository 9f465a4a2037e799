"""Corpus data model and flat-file ingestion.

A corpus is a set of publications, a directed citation-edge list between
them, and a three-level cluster hierarchy (micro -> meso -> macro). All
three are read from tab-separated files with mandatory headers:

    publications:  pub_id  year  doc_type  micro_id  meso_id  macro_id  unit_ids
    edges:         citing_id  cited_id
    hierarchy:     micro_id  meso_id  macro_id

``doc_type`` is one of ``article``, ``review``, ``other``; ``unit_ids`` is a
semicolon-separated list of analysis-unit tags and may be empty (a line may
also simply end after ``macro_id``).

Ingestion rejects self-citations, deduplicates repeated edges, and drops
edges whose endpoints are not in the publication file; each category is
tallied in an :class:`IngestReport` rather than silently discarded. The
loaded :class:`Corpus` is immutable and safe to share across workers.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

PUB_HEADER = ["pub_id", "year", "doc_type", "micro_id", "meso_id", "macro_id", "unit_ids"]
EDGE_HEADER = ["citing_id", "cited_id"]
HIERARCHY_HEADER = ["micro_id", "meso_id", "macro_id"]

_INT_RE = r"-?\d+"


class CorpusError(Exception):
    """Base class for ingestion and validation failures."""


class FormatError(CorpusError):
    """Malformed input: bad header, wrong column count, unparsable field."""


class ConsistencyError(CorpusError):
    """Structurally valid input that violates a corpus invariant."""


class DocType(str, Enum):
    ARTICLE = "article"
    REVIEW = "review"
    OTHER = "other"


# integer codes used in the columnar store
_DOC_CODE = {DocType.ARTICLE: 0, DocType.REVIEW: 1, DocType.OTHER: 2}
_CODE_DOC = {v: k for k, v in _DOC_CODE.items()}
ARTICLE, REVIEW, OTHER = 0, 1, 2


@dataclass(frozen=True)
class PublicationRecord:
    """One paper with its cluster assignments and optional unit tags."""

    pub_id: str
    year: int
    doc_type: DocType
    micro_id: int
    meso_id: int
    macro_id: int
    unit_ids: frozenset[str] = frozenset()


class CitationEdge(NamedTuple):
    citing_id: str
    cited_id: str


@dataclass(frozen=True)
class ClusterHierarchy:
    """Micro -> meso -> macro field mappings (each level maps upward uniquely)."""

    micro_to_meso: dict[int, int]
    meso_to_macro: dict[int, int]

    @property
    def n_micro(self) -> int:
        return len(self.micro_to_meso)

    @property
    def n_meso(self) -> int:
        return len(self.meso_to_macro)

    @property
    def n_macro(self) -> int:
        return len(set(self.meso_to_macro.values()))

    def lookup(self, micro_id: int) -> tuple[int, int]:
        """Return (meso_id, macro_id) for a micro-field id."""
        meso = self.micro_to_meso[micro_id]
        return meso, self.meso_to_macro[meso]

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[int, int, int]]) -> "ClusterHierarchy":
        """Build from (micro, meso, macro) rows, rejecting conflicting mappings."""
        micro_to_meso: dict[int, int] = {}
        meso_to_macro: dict[int, int] = {}
        for micro, meso, macro in rows:
            if micro in micro_to_meso:
                raise ConsistencyError(f"micro-field {micro} mapped more than once in hierarchy")
            micro_to_meso[micro] = meso
            prev = meso_to_macro.get(meso)
            if prev is not None and prev != macro:
                raise ConsistencyError(
                    f"meso-field {meso} mapped to macro-fields {prev} and {macro}"
                )
            meso_to_macro[meso] = macro
        return cls(micro_to_meso, meso_to_macro)


@dataclass(frozen=True)
class IngestReport:
    """Tallies from one ingestion pass."""

    publications: int
    edges_accepted: int
    edges_self: int
    edges_duplicate: int
    edges_dangling: int

    def to_dict(self) -> dict[str, int]:
        return {
            "publications": self.publications,
            "edges_accepted": self.edges_accepted,
            "edges_self": self.edges_self,
            "edges_duplicate": self.edges_duplicate,
            "edges_dangling": self.edges_dangling,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


class Corpus:
    """Immutable columnar store of publications, edges, and hierarchy.

    Publications live at positions 0..n-1; edges are stored as two parallel
    index arrays ``citing`` / ``cited`` in canonical (citing, cited) order.
    Record- and id-oriented accessors are provided for convenience; the
    arrays themselves are the fast path for batch analytics.
    """

    def __init__(
        self,
        pub_ids: Sequence[str],
        years: np.ndarray,
        doc_codes: np.ndarray,
        micro_ids: np.ndarray,
        meso_ids: np.ndarray,
        macro_ids: np.ndarray,
        units: Sequence[tuple[str, ...]],
        citing: np.ndarray,
        cited: np.ndarray,
        hierarchy: ClusterHierarchy,
        year_min: int,
        year_max: int,
        ingest: IngestReport,
    ):
        self.pub_ids = list(pub_ids)
        self.years = years
        self.doc_codes = doc_codes
        self.micro_ids = micro_ids
        self.meso_ids = meso_ids
        self.macro_ids = macro_ids
        self.units = list(units)
        # canonical (citing, cited) order is a structural invariant: batch
        # operations binary-search the combined edge keys
        if citing.size:
            keys = citing * max(len(self.pub_ids), 1) + cited
            if np.any(np.diff(keys) < 0):
                order = np.argsort(keys, kind="stable")
                citing = citing[order]
                cited = cited[order]
        self.citing = citing
        self.cited = cited
        self.hierarchy = hierarchy
        self.year_min = int(year_min)
        self.year_max = int(year_max)
        self.ingest = ingest
        self._index = {pid: i for i, pid in enumerate(self.pub_ids)}
        self._in_csr: tuple[np.ndarray, np.ndarray] | None = None
        self._unit_index: dict[str, np.ndarray] | None = None

    def __len__(self) -> int:
        return len(self.pub_ids)

    @property
    def n_edges(self) -> int:
        return int(self.citing.size)

    def __contains__(self, pub_id: str) -> bool:
        return pub_id in self._index

    def index_of(self, pub_id: str) -> int:
        return self._index[pub_id]

    def publication(self, pub_id: str) -> PublicationRecord:
        i = self._index[pub_id]
        return PublicationRecord(
            pub_id=pub_id,
            year=int(self.years[i]),
            doc_type=_CODE_DOC[int(self.doc_codes[i])],
            micro_id=int(self.micro_ids[i]),
            meso_id=int(self.meso_ids[i]),
            macro_id=int(self.macro_ids[i]),
            unit_ids=frozenset(self.units[i]),
        )

    def publications(self) -> Iterator[PublicationRecord]:
        for pid in self.pub_ids:
            yield self.publication(pid)

    def edges(self) -> Iterator[CitationEdge]:
        for c, d in zip(self.citing.tolist(), self.cited.tolist()):
            yield CitationEdge(self.pub_ids[c], self.pub_ids[d])

    def in_degrees(self) -> np.ndarray:
        """Citation count per publication position (in-corpus edges only)."""
        return np.bincount(self.cited, minlength=len(self)).astype(np.int64)

    def citers_of(self, idx: int) -> np.ndarray:
        """Positions of publications citing the publication at ``idx``."""
        order, indptr = self._in_adjacency()
        return self.citing[order[indptr[idx] : indptr[idx + 1]]]

    def _in_adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        if self._in_csr is None:
            order = np.argsort(self.cited, kind="stable")
            counts = np.bincount(self.cited, minlength=len(self))
            indptr = np.zeros(len(self) + 1, dtype=np.int64)
            np.cumsum(counts, out=indptr[1:])
            self._in_csr = (order, indptr)
        return self._in_csr

    def unit_members(self, unit_id: str) -> np.ndarray:
        """Positions of publications tagged with ``unit_id`` (may be empty)."""
        if self._unit_index is None:
            acc: dict[str, list[int]] = {}
            for i, tags in enumerate(self.units):
                for u in tags:
                    acc.setdefault(u, []).append(i)
            self._unit_index = {u: np.asarray(v, dtype=np.int64) for u, v in acc.items()}
        return self._unit_index.get(unit_id, np.empty(0, dtype=np.int64))

    def all_units(self) -> list[str]:
        self.unit_members("")  # force index build
        assert self._unit_index is not None
        return sorted(self._unit_index)

    def __eq__(self, other: object) -> bool:
        # ingest tallies are provenance, not data: a reloaded corpus may have
        # different tallies (e.g. duplicates already removed) yet equal data
        if not isinstance(other, Corpus):
            return NotImplemented
        return (
            self.pub_ids == other.pub_ids
            and np.array_equal(self.years, other.years)
            and np.array_equal(self.doc_codes, other.doc_codes)
            and np.array_equal(self.micro_ids, other.micro_ids)
            and np.array_equal(self.meso_ids, other.meso_ids)
            and np.array_equal(self.macro_ids, other.macro_ids)
            and self.units == other.units
            and np.array_equal(self.citing, other.citing)
            and np.array_equal(self.cited, other.cited)
            and self.hierarchy == other.hierarchy
            and self.year_min == other.year_min
            and self.year_max == other.year_max
        )


def _check_header(path: str | Path, expected: list[str]) -> None:
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n").rstrip("\r")
    if first.split("\t") != expected:
        raise FormatError(
            f"{path}: missing or wrong header; expected {chr(9).join(expected)!r}, got {first!r}"
        )


def _read_tsv(path: str | Path, names: list[str]) -> pd.DataFrame:
    _check_header(path, names)
    try:
        return pd.read_csv(
            path,
            sep="\t",
            header=None,
            skiprows=1,
            names=names,
            dtype=str,
            keep_default_na=False,
            quoting=3,  # csv.QUOTE_NONE: tabs are the only structure
            encoding="utf-8",
        )
    except pd.errors.ParserError as exc:
        # the C parser reports the 1-based file line in its message
        raise FormatError(f"{path}: {exc}") from exc


def _require_int(df: pd.DataFrame, col: str, path: str | Path) -> np.ndarray:
    bad = ~df[col].str.fullmatch(_INT_RE)
    if bad.any():
        line = int(np.flatnonzero(bad.to_numpy())[0]) + 2
        raise FormatError(f"{path}:{line}: non-integer {col} {df[col].iloc[line - 2]!r}")
    return df[col].to_numpy(dtype=np.int64)


def _first_line(mask: np.ndarray) -> int:
    return int(np.flatnonzero(mask)[0]) + 2  # +1 header, +1 one-based


def load_corpus(
    pub_path: str | Path,
    edge_path: str | Path,
    hierarchy_path: str | Path,
    year_min: int | None = None,
    year_max: int | None = None,
) -> Corpus:
    """Load and validate a corpus from its three TSV files.

    Raises :class:`FormatError` on malformed lines (with the offending line
    number) and :class:`ConsistencyError` when a record contradicts the
    hierarchy or duplicates a key (naming the publication). The ingest
    tallies are available as ``corpus.ingest``.

    ``year_min``/``year_max`` declare the admissible year range; when omitted
    they are taken from the data, so every publication in the file
    contributes to the analyses regardless of year.
    """
    hdf = _read_tsv(hierarchy_path, HIERARCHY_HEADER)
    h_micro = _require_int(hdf, "micro_id", hierarchy_path)
    h_meso = _require_int(hdf, "meso_id", hierarchy_path)
    h_macro = _require_int(hdf, "macro_id", hierarchy_path)
    hierarchy = ClusterHierarchy.from_rows(zip(h_micro.tolist(), h_meso.tolist(), h_macro.tolist()))

    pdf = _read_tsv(pub_path, PUB_HEADER)
    empty_id = (pdf["pub_id"] == "").to_numpy()
    if empty_id.any():
        raise FormatError(f"{pub_path}:{_first_line(empty_id)}: empty pub_id")
    years = _require_int(pdf, "year", pub_path)
    micro = _require_int(pdf, "micro_id", pub_path)
    meso = _require_int(pdf, "meso_id", pub_path)
    macro = _require_int(pdf, "macro_id", pub_path)

    doc_map = {d.value: code for d, code in _DOC_CODE.items()}
    doc_series = pdf["doc_type"].map(doc_map)
    bad_doc = doc_series.isna().to_numpy()
    if bad_doc.any():
        line = _first_line(bad_doc)
        raise FormatError(
            f"{pub_path}:{line}: unknown doc_type {pdf['doc_type'].iloc[line - 2]!r}"
        )
    doc_codes = doc_series.to_numpy(dtype=np.int8)

    pub_ids = pdf["pub_id"].tolist()
    dup = pdf["pub_id"].duplicated().to_numpy()
    if dup.any():
        raise ConsistencyError(f"duplicate pub_id {pub_ids[int(np.flatnonzero(dup)[0])]!r}")

    units = [
        tuple(u for u in cell.split(";") if u) if cell else ()
        for cell in pdf["unit_ids"].tolist()
    ]

    _check_hierarchy_consistency(pub_ids, micro, meso, macro, hierarchy)

    lo = year_min if year_min is not None else (int(years.min()) if len(years) else 0)
    hi = year_max if year_max is not None else (int(years.max()) if len(years) else 0)
    if len(years):
        out = (years < lo) | (years > hi)
        if out.any():
            bad_pub = pub_ids[int(np.flatnonzero(out)[0])]
            raise ConsistencyError(
                f"publication {bad_pub!r} year outside declared range [{lo}, {hi}]"
            )

    edf = _read_tsv(edge_path, EDGE_HEADER)
    for col in EDGE_HEADER:
        empty = (edf[col] == "").to_numpy()
        if empty.any():
            raise FormatError(f"{edge_path}:{_first_line(empty)}: empty {col}")

    citing_raw = edf["citing_id"].to_numpy()
    cited_raw = edf["cited_id"].to_numpy()
    citing, cited, tallies = _resolve_edges(citing_raw, cited_raw, pd.Index(pub_ids))

    report = IngestReport(
        publications=len(pub_ids),
        edges_accepted=int(citing.size),
        edges_self=tallies["self"],
        edges_duplicate=tallies["duplicate"],
        edges_dangling=tallies["dangling"],
    )
    if tallies["self"] or tallies["dangling"]:
        logger.info(
            "edge ingestion dropped %d self-citations, %d dangling, %d duplicates",
            tallies["self"], tallies["dangling"], tallies["duplicate"],
        )
    return Corpus(
        pub_ids, years.astype(np.int32), doc_codes, micro, meso, macro, units,
        citing, cited, hierarchy, lo, hi, report,
    )


def _check_hierarchy_consistency(
    pub_ids: list[str],
    micro: np.ndarray,
    meso: np.ndarray,
    macro: np.ndarray,
    hierarchy: ClusterHierarchy,
) -> None:
    micro_to_meso = pd.Series(hierarchy.micro_to_meso)
    meso_to_macro = pd.Series(hierarchy.meso_to_macro)
    mapped_meso = pd.Series(micro).map(micro_to_meso)
    unknown = mapped_meso.isna().to_numpy()
    if unknown.any():
        pid = pub_ids[int(np.flatnonzero(unknown)[0])]
        raise ConsistencyError(f"publication {pid!r} has micro_id not present in hierarchy")
    mapped_macro = pd.Series(meso).map(meso_to_macro)
    unknown = mapped_macro.isna().to_numpy()
    if unknown.any():
        pid = pub_ids[int(np.flatnonzero(unknown)[0])]
        raise ConsistencyError(f"publication {pid!r} has meso_id not present in hierarchy")
    bad = (mapped_meso.to_numpy(dtype=np.int64) != meso) | (
        mapped_macro.to_numpy(dtype=np.int64) != macro
    )
    if bad.any():
        pid = pub_ids[int(np.flatnonzero(bad)[0])]
        raise ConsistencyError(
            f"publication {pid!r} cluster ids disagree with the hierarchy mapping"
        )


def _resolve_edges(
    citing_raw: np.ndarray, cited_raw: np.ndarray, index: pd.Index
) -> tuple[np.ndarray, np.ndarray, dict[str, int]]:
    """Classify raw edges into self / dangling / duplicate / accepted.

    Classification order per line: self-citation first, then endpoint
    resolution, then deduplication. Accepted edges come out sorted by
    (citing, cited) position, the canonical storage order.
    """
    self_mask = citing_raw == cited_raw
    n_self = int(self_mask.sum())
    citing_raw = citing_raw[~self_mask]
    cited_raw = cited_raw[~self_mask]

    src = index.get_indexer(citing_raw)
    dst = index.get_indexer(cited_raw)
    dangle = (src < 0) | (dst < 0)
    n_dangle = int(dangle.sum())
    src = src[~dangle].astype(np.int64)
    dst = dst[~dangle].astype(np.int64)

    n = max(len(index), 1)
    keys = src * n + dst
    unique = np.unique(keys)
    n_dup = int(keys.size - unique.size)
    citing = unique // n
    cited = unique % n
    return citing, cited, {"self": n_self, "dangling": n_dangle, "duplicate": n_dup}


def from_records(
    publications: Iterable[PublicationRecord],
    edges: Iterable[tuple[str, str]],
    hierarchy: ClusterHierarchy | Mapping[int, tuple[int, int]],
    year_min: int | None = None,
    year_max: int | None = None,
) -> Corpus:
    """Build a validated Corpus in memory (same invariants as load_corpus)."""
    if not isinstance(hierarchy, ClusterHierarchy):
        hierarchy = ClusterHierarchy.from_rows(
            (micro, meso, macro) for micro, (meso, macro) in hierarchy.items()
        )
    pubs = list(publications)
    pub_ids = [p.pub_id for p in pubs]
    if len(set(pub_ids)) != len(pub_ids):
        seen: set[str] = set()
        for pid in pub_ids:
            if pid in seen:
                raise ConsistencyError(f"duplicate pub_id {pid!r}")
            seen.add(pid)
    years = np.asarray([p.year for p in pubs], dtype=np.int64)
    micro = np.asarray([p.micro_id for p in pubs], dtype=np.int64)
    meso = np.asarray([p.meso_id for p in pubs], dtype=np.int64)
    macro = np.asarray([p.macro_id for p in pubs], dtype=np.int64)
    doc_codes = np.asarray([_DOC_CODE[p.doc_type] for p in pubs], dtype=np.int8)
    units = [tuple(sorted(p.unit_ids)) for p in pubs]

    _check_hierarchy_consistency(pub_ids, micro, meso, macro, hierarchy)

    lo = year_min if year_min is not None else (int(years.min()) if len(years) else 0)
    hi = year_max if year_max is not None else (int(years.max()) if len(years) else 0)
    if len(years):
        out = (years < lo) | (years > hi)
        if out.any():
            raise ConsistencyError(
                f"publication {pub_ids[int(np.flatnonzero(out)[0])]!r} year outside [{lo}, {hi}]"
            )

    edge_list = [(c, d) for c, d in edges]
    citing_raw = np.asarray([c for c, _ in edge_list], dtype=object)
    cited_raw = np.asarray([d for _, d in edge_list], dtype=object)
    citing, cited, tallies = _resolve_edges(citing_raw, cited_raw, pd.Index(pub_ids))
    report = IngestReport(
        publications=len(pub_ids),
        edges_accepted=int(citing.size),
        edges_self=tallies["self"],
        edges_duplicate=tallies["duplicate"],
        edges_dangling=tallies["dangling"],
    )
    return Corpus(
        pub_ids, years.astype(np.int32), doc_codes, micro, meso, macro, units,
        citing, cited, hierarchy, lo, hi, report,
    )


def write_corpus(
    corpus: Corpus,
    pub_path: str | Path,
    edge_path: str | Path,
    hierarchy_path: str | Path,
) -> None:
    """Serialize a corpus back to the three TSV formats (loadable identity)."""
    with open(pub_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(PUB_HEADER) + "\n")
        doc_names = {code: d.value for d, code in _DOC_CODE.items()}
        for i, pid in enumerate(corpus.pub_ids):
            fh.write(
                f"{pid}\t{corpus.years[i]}\t{doc_names[int(corpus.doc_codes[i])]}\t"
                f"{corpus.micro_ids[i]}\t{corpus.meso_ids[i]}\t{corpus.macro_ids[i]}\t"
                f"{';'.join(corpus.units[i])}\n"
            )
    with open(edge_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(EDGE_HEADER) + "\n")
        ids = corpus.pub_ids
        for c, d in zip(corpus.citing.tolist(), corpus.cited.tolist()):
            fh.write(f"{ids[c]}\t{ids[d]}\n")
    with open(hierarchy_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(HIERARCHY_HEADER) + "\n")
        for micro in sorted(corpus.hierarchy.micro_to_meso):
            meso, macro = corpus.hierarchy.lookup(micro)
            fh.write(f"{micro}\t{meso}\t{macro}\n")


def citation_counts(corpus: Corpus) -> dict[str, int]:
    """In-corpus citation count per publication id.

    The citation window is variable: every accepted edge counts, whatever the
    citing year. Never-cited publications map to 0.
    """
    counts = corpus.in_degrees()
    return dict(zip(corpus.pub_ids, counts.tolist()))
