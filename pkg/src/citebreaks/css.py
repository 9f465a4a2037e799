"""Characteristic Scores and Scales (CSS) citation-class partitions.

The CSS method (Schubert, Glanzel & Braun 1987) splits a citation
distribution into self-adjusting classes by iteratively truncating at
conditional means: mu1 is the mean of the whole field, mu2 the mean of the
papers at or above mu1, mu3 the mean of the papers at or above mu2. The
default three means give four classes, T1 (lowly cited) through T4
(outstanding). Ties with a mean go upward, so the field maximum always
survives every truncation.

If a truncation step fails to shrink the set (all remaining values equal),
the remaining means repeat the last computed one. When that happens on the
very first step the whole field is uniform and every member is classed T1;
an all-equal field has no outstanding papers.

Partitions are computed per meso-field over articles and reviews pooled
across all years. Reviews shape the thresholds; excluding them as candidates
happens downstream.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .corpus import OTHER, Corpus

logger = logging.getLogger(__name__)

DEFAULT_DEPTH = 3


class CitationClass(IntEnum):
    """CSS typologies, totally ordered from lowly cited to outstanding."""

    T1 = 1
    T2 = 2
    T3 = 3
    T4 = 4


def class_label(level: int) -> str:
    return f"T{int(level)}"


@dataclass(frozen=True)
class CssThresholds:
    """Conditional means of one field's citation distribution."""

    mus: tuple[float, ...]
    field_id: int | None
    n_members: int

    @property
    def mu1(self) -> float:
        return self.mus[0]

    @property
    def mu2(self) -> float:
        return self.mus[1]

    @property
    def mu3(self) -> float:
        return self.mus[2]


class CssPartition:
    """Class assignment of one field's members.

    ``levels`` holds 1-based class indices parallel to ``pub_ids`` and
    ``counts``; ``class_of`` exposes them as a pub_id -> class mapping
    (CitationClass members at the default depth).
    """

    def __init__(
        self,
        thresholds: CssThresholds,
        pub_ids: list[str],
        counts: np.ndarray,
        levels: np.ndarray,
    ):
        self.thresholds = thresholds
        self.pub_ids = pub_ids
        self.counts = counts
        self.levels = levels

    @property
    def n_classes(self) -> int:
        return len(self.thresholds.mus) + 1

    @cached_property
    def class_of(self) -> dict[str, int]:
        # CitationClass members up to T4; bare ints beyond (deep experiments)
        out: dict[str, int] = {}
        for pid, level in zip(self.pub_ids, self.levels.tolist()):
            out[pid] = CitationClass(level) if level <= 4 else level
        return out

    def membership_shares(self) -> np.ndarray:
        """Fraction of members per class, length n_classes."""
        counts = np.bincount(self.levels, minlength=self.n_classes + 1)[1:]
        return counts / self.levels.size

    def citation_shares(self) -> np.ndarray | None:
        """Fraction of the field's citations received per class; None if the
        field has no citations at all."""
        total = int(self.counts.sum())
        if total == 0:
            return None
        sums = np.bincount(self.levels, weights=self.counts, minlength=self.n_classes + 1)[1:]
        return sums / total


def _partition_arrays(
    pub_ids: list[str],
    counts: np.ndarray,
    depth: int,
    field_id: int | None,
) -> CssPartition:
    if counts.size == 0:
        raise ValueError("css_partition requires a nonempty distribution")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if (counts < 0).any():
        raise ValueError("negative citation count")

    mus: list[float] = []
    current = counts
    uniform_field = False
    for step in range(depth):
        mu = float(current.sum() / current.size)
        mus.append(mu)
        above = current[current >= mu]
        if above.size == current.size:
            # no shrinkage: the remaining values are all equal
            mus.extend([mu] * (depth - step - 1))
            uniform_field = step == 0
            break
        current = above

    if uniform_field:
        levels = np.ones(counts.size, dtype=np.int8)
    else:
        levels = np.ones(counts.size, dtype=np.int8)
        for mu in mus:
            levels += counts >= mu

    thresholds = CssThresholds(mus=tuple(mus), field_id=field_id, n_members=counts.size)
    return CssPartition(thresholds, pub_ids, counts.astype(np.int64), levels)


def css_partition(
    values: Iterable[tuple[str, int]],
    depth: int = DEFAULT_DEPTH,
    field_id: int | None = None,
) -> CssPartition:
    """Partition (pub_id, citation count) pairs into CSS classes.

    Pure function of the count multiset: input order never changes the
    thresholds or any class. Raises ValueError on empty input or negative
    counts.
    """
    pairs = list(values)
    pub_ids = [p for p, _ in pairs]
    counts = np.asarray([c for _, c in pairs], dtype=np.int64)
    return _partition_arrays(pub_ids, counts, depth, field_id)


def css_all_fields(
    corpus: Corpus,
    counts: Mapping[str, int],
    depth: int = DEFAULT_DEPTH,
) -> dict[int, CssPartition]:
    """One CSS partition per meso-field over its articles and reviews.

    Publications typed ``other`` are excluded. Meso-fields known to the
    hierarchy but without any eligible member are omitted with a log entry.
    """
    eligible = np.flatnonzero(corpus.doc_codes != OTHER)
    count_vec = np.asarray([counts.get(pid, 0) for pid in corpus.pub_ids], dtype=np.int64)

    partitions: dict[int, CssPartition] = {}
    if eligible.size:
        mesos = corpus.meso_ids[eligible]
        order = np.argsort(mesos, kind="stable")
        sorted_idx = eligible[order]
        sorted_meso = mesos[order]
        field_ids, starts = np.unique(sorted_meso, return_index=True)
        bounds = np.append(starts, sorted_meso.size)
        for k, meso_id in enumerate(field_ids.tolist()):
            members = sorted_idx[bounds[k] : bounds[k + 1]]
            partitions[meso_id] = _partition_arrays(
                [corpus.pub_ids[i] for i in members.tolist()],
                count_vec[members],
                depth,
                meso_id,
            )

    known = set(corpus.hierarchy.meso_to_macro)
    empty = sorted(known - set(partitions))
    for meso_id in empty:
        logger.info("meso-field %d has no eligible members; omitted from CSS", meso_id)
    return partitions


@dataclass(frozen=True)
class CssSummary:
    """Across-field means and standard deviations of per-class shares."""

    n_classes: int
    n_fields: int
    n_fields_with_citations: int
    pub_share_mean: np.ndarray
    pub_share_sd: np.ndarray
    cite_share_mean: np.ndarray
    cite_share_sd: np.ndarray

    def format_table(self) -> str:
        head = "".join(f"{class_label(k + 1):>16}" for k in range(self.n_classes))
        lines = [" " * 24 + head]
        for name, mean, sd in (
            ("publications %", self.pub_share_mean, self.pub_share_sd),
            ("citations %", self.cite_share_mean, self.cite_share_sd),
        ):
            cells = "".join(
                f"{100 * m:>9.1f} ({100 * s:.1f})" for m, s in zip(mean, sd)
            )
            lines.append(f"{name:<24}{cells}")
        return "\n".join(lines)


def css_summary(partitions: Mapping[int, CssPartition]) -> CssSummary:
    """Aggregate per-class membership and citation shares across fields.

    Standard deviations are population SDs over the fields (a single field
    yields sd 0). Fields that received no citations contribute to the
    membership rows only.
    """
    if not partitions:
        raise ValueError("css_summary requires at least one partition")
    n_classes = {p.n_classes for p in partitions.values()}
    if len(n_classes) != 1:
        raise ValueError("partitions disagree on class count")
    k = n_classes.pop()

    pub_shares = np.vstack([p.membership_shares() for p in partitions.values()])
    cite_rows = [s for p in partitions.values() if (s := p.citation_shares()) is not None]
    cite_shares = np.vstack(cite_rows) if cite_rows else np.zeros((0, k))

    def stats(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if m.shape[0] == 0:
            return np.zeros(k), np.zeros(k)
        return m.mean(axis=0), m.std(axis=0)

    pub_mean, pub_sd = stats(pub_shares)
    cite_mean, cite_sd = stats(cite_shares)
    return CssSummary(
        n_classes=k,
        n_fields=len(partitions),
        n_fields_with_citations=len(cite_rows),
        pub_share_mean=pub_mean,
        pub_share_sd=pub_sd,
        cite_share_mean=cite_mean,
        cite_share_sd=cite_sd,
    )


def write_css_tsv(
    partitions: Mapping[int, CssPartition],
    fields_path: str | Path,
    classes_path: str | Path,
) -> None:
    """Write per-field thresholds and per-publication classes as TSV."""
    with open(fields_path, "w", encoding="utf-8", newline="\n") as fh:
        depth = next(iter(partitions.values())).n_classes - 1 if partitions else DEFAULT_DEPTH
        mu_cols = "\t".join(f"mu{k + 1}" for k in range(depth))
        fh.write(f"meso_id\tn\t{mu_cols}\n")
        for meso_id in sorted(partitions):
            t = partitions[meso_id].thresholds
            mus = "\t".join(repr(m) for m in t.mus)
            fh.write(f"{meso_id}\t{t.n_members}\t{mus}\n")
    with open(classes_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("pub_id\tmeso_id\tclass\n")
        for meso_id in sorted(partitions):
            part = partitions[meso_id]
            rows = sorted(zip(part.pub_ids, part.levels.tolist()))
            for pid, level in rows:
                fh.write(f"{pid}\t{meso_id}\t{class_label(level)}\n")
