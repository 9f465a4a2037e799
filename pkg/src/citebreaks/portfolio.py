"""Per-unit portfolio reports over breakthrough sets.

A unit (funding centre, council, country...) is any tag carried in a
publication's ``unit_ids``. Reports count the unit's publications (articles
and reviews), its members in each breakthrough set, the share those members
represent of the reference set's breakthroughs, and the ratio of that share
to the unit's overall publication share. The top-decile indicator
PP(top 10%) is computed per (meso-field, year) stratum with fractional tie
assignment, so the whole reference always scores 0.10 up to rounding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .corpus import OTHER, Corpus
from .detect import BreakthroughSet


@dataclass(frozen=True)
class MethodStats:
    n_breakthroughs: int
    pct_of_own_set: float | None
    share_of_reference: float | None
    baseline_ratio: float | None


@dataclass(frozen=True)
class PortfolioReport:
    unit_id: str
    n_pubs: int
    methods: dict[str, MethodStats]
    pp_top10: float | None


@dataclass(frozen=True)
class TopDecileFlag:
    pub_id: str
    is_top10: bool


def _eligible_mask(corpus: Corpus, reference: set[str] | None) -> np.ndarray:
    mask = corpus.doc_codes != OTHER
    if reference is not None:
        ref = np.zeros(len(corpus), dtype=bool)
        for pid in reference:
            if pid in corpus:
                ref[corpus.index_of(pid)] = True
        mask &= ref
    return mask


def _unit_mask(corpus: Corpus, unit_id: str) -> np.ndarray:
    mask = np.zeros(len(corpus), dtype=bool)
    mask[corpus.unit_members(unit_id)] = True
    return mask


def unit_report(
    corpus: Corpus,
    sets: Iterable[BreakthroughSet],
    unit_id: str,
    reference: set[str] | None = None,
) -> PortfolioReport:
    """Counts, percentages and baseline ratios for one unit.

    ``reference`` restricts the universe (default: the whole corpus). A unit
    with no publications yields an empty report: n_pubs 0 and absent
    percentages/ratios rather than zero divisions.
    """
    eligible = _eligible_mask(corpus, reference)
    unit = _unit_mask(corpus, unit_id) & eligible
    n_ref = int(eligible.sum())
    n_pubs = int(unit.sum())

    methods: dict[str, MethodStats] = {}
    for bset in sets:
        member_mask = np.zeros(len(corpus), dtype=bool)
        for pid in bset.members:
            if pid in corpus:
                member_mask[corpus.index_of(pid)] = True
        member_mask &= eligible
        n_ref_b = int(member_mask.sum())
        n_b = int((member_mask & unit).sum())
        pct = n_b / n_pubs if n_pubs else None
        share = n_b / n_ref_b if n_ref_b else None
        ratio = None
        if n_pubs and n_ref and share is not None:
            ratio = share / (n_pubs / n_ref)
        methods[bset.method] = MethodStats(
            n_breakthroughs=n_b,
            pct_of_own_set=pct,
            share_of_reference=share,
            baseline_ratio=ratio,
        )
    assign = _assignments(corpus, corpus.in_degrees(), eligible)
    pp = float(assign[unit].mean()) if n_pubs else None
    return PortfolioReport(unit_id=unit_id, n_pubs=n_pubs, methods=methods, pp_top10=pp)


def reference_report(
    corpus: Corpus,
    sets: Iterable[BreakthroughSet],
    reference: set[str] | None = None,
    label: str = "_reference",
) -> PortfolioReport:
    """Totals row: the reference set reported against itself (ratios 1)."""
    eligible = _eligible_mask(corpus, reference)
    n_ref = int(eligible.sum())
    methods: dict[str, MethodStats] = {}
    for bset in sets:
        member_mask = np.zeros(len(corpus), dtype=bool)
        for pid in bset.members:
            if pid in corpus:
                member_mask[corpus.index_of(pid)] = True
        member_mask &= eligible
        n_ref_b = int(member_mask.sum())
        methods[bset.method] = MethodStats(
            n_breakthroughs=n_ref_b,
            pct_of_own_set=n_ref_b / n_ref if n_ref else None,
            share_of_reference=1.0 if n_ref_b else None,
            baseline_ratio=1.0 if n_ref_b and n_ref else None,
        )
    assign = _assignments(corpus, corpus.in_degrees(), eligible)
    pp = float(assign[eligible].mean()) if n_ref else None
    return PortfolioReport(unit_id=label, n_pubs=n_ref, methods=methods, pp_top10=pp)


def _count_vec(corpus: Corpus, counts: Mapping[str, int]) -> np.ndarray:
    return np.asarray([counts.get(pid, 0) for pid in corpus.pub_ids], dtype=np.int64)


def _strata(corpus: Corpus, idx: np.ndarray) -> Iterable[np.ndarray]:
    """Yield position arrays, one per (meso-field, year) stratum of idx."""
    meso_codes = np.unique(corpus.meso_ids[idx], return_inverse=True)[1]
    year_codes = np.unique(corpus.years[idx], return_inverse=True)[1]
    key = meso_codes.astype(np.int64) * (int(year_codes.max()) + 1) + year_codes
    order = np.argsort(key, kind="stable")
    sorted_idx = idx[order]
    sorted_key = key[order]
    starts = np.flatnonzero(np.r_[True, sorted_key[1:] != sorted_key[:-1]])
    bounds = np.append(starts, sorted_key.size)
    for s, e in zip(bounds[:-1], bounds[1:]):
        yield sorted_idx[s:e]


def _decile_cut(c: np.ndarray) -> tuple[int, int, int]:
    """Cut value plus strictly-above and tied-at-cut counts for one stratum.

    The cut sits at 1-based position ceil(n/10) of the descending counts;
    integer arithmetic avoids the float artifacts of ceil(0.1 * n).
    """
    n = c.size
    cut = int(np.sort(c)[::-1][(n + 9) // 10 - 1])
    k = int((c > cut).sum())
    t = int((c == cut).sum())
    return cut, k, t


def _assignments(corpus: Corpus, count_vec: np.ndarray, eligible: np.ndarray) -> np.ndarray:
    """Fractional top-decile assignment per position (0 outside eligible).

    Within each (meso, year) stratum of size n the decile mass is n/10:
    papers strictly above the cut count 1, papers tied at the cut split the
    remaining mass equally, so every stratum contributes exactly n/10.
    """
    assign = np.zeros(len(corpus), dtype=np.float64)
    idx = np.flatnonzero(eligible)
    if not idx.size:
        return assign
    for members in _strata(corpus, idx):
        c = count_vec[members]
        n = c.size
        cut, k, t = _decile_cut(c)
        assign[members[c > cut]] = 1.0
        assign[members[c == cut]] = (n - 10 * k) / (10 * t)
    return assign


def pp_top10(
    corpus: Corpus,
    counts: Mapping[str, int],
    unit_id: str,
    reference: set[str] | None = None,
) -> float | None:
    """Mean fractional top-decile membership of a unit's publications.

    Strata are (meso-field, year) over articles and reviews of the reference
    set. Returns None for a unit with no publications in scope.
    """
    eligible = _eligible_mask(corpus, reference)
    unit = _unit_mask(corpus, unit_id) & eligible
    if not unit.any():
        return None
    assign = _assignments(corpus, _count_vec(corpus, counts), eligible)
    return float(assign[unit].mean())


def top_decile_assignments(
    corpus: Corpus,
    counts: Mapping[str, int],
    reference: set[str] | None = None,
) -> dict[str, float]:
    """Fractional top-decile weight per eligible pub_id."""
    eligible = _eligible_mask(corpus, reference)
    assign = _assignments(corpus, _count_vec(corpus, counts), eligible)
    return {corpus.pub_ids[i]: float(assign[i]) for i in np.flatnonzero(eligible).tolist()}


def top_decile_flags(
    corpus: Corpus,
    counts: Mapping[str, int],
    reference: set[str] | None = None,
) -> list[TopDecileFlag]:
    """Boolean variant: the tied block at the cut is flagged only when doing
    so lands the flagged share nearer to 10% than leaving it out."""
    eligible = _eligible_mask(corpus, reference)
    count_vec = _count_vec(corpus, counts)
    flags: list[TopDecileFlag] = []
    idx = np.flatnonzero(eligible)
    if not idx.size:
        return flags
    flagged = np.zeros(len(corpus), dtype=bool)
    for members in _strata(corpus, idx):
        c = count_vec[members]
        n = c.size
        cut, k, t = _decile_cut(c)
        include_ties = abs(10 * (k + t) - n) < abs(10 * k - n)
        flagged[members[c > cut]] = True
        if include_ties:
            flagged[members[c == cut]] = True
    for i in np.flatnonzero(eligible).tolist():
        flags.append(TopDecileFlag(corpus.pub_ids[i], bool(flagged[i])))
    return flags


def meso_overlay(bset: BreakthroughSet, corpus: Corpus) -> dict[int, int]:
    """Member count per meso-field (zero-count fields omitted)."""
    overlay: dict[int, int] = {}
    for pid in bset.members:
        meso = int(corpus.meso_ids[corpus.index_of(pid)])
        overlay[meso] = overlay.get(meso, 0) + 1
    return overlay


def write_overlay_json(bset: BreakthroughSet, corpus: Corpus, path: str | Path) -> None:
    overlay = meso_overlay(bset, corpus)
    payload = {"method": bset.method, "counts": {str(k): v for k, v in sorted(overlay.items())}}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _fmt_pct(x: float | None) -> str:
    return "NA" if x is None else f"{100 * x:.2f}"


def _fmt(x: float | None, nd: int = 4) -> str:
    return "NA" if x is None else f"{x:.{nd}f}"


def write_report_tsv(reports: Iterable[PortfolioReport], path: str | Path) -> None:
    """One line per (unit, method); percentages carry two decimals."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(
            "unit_id\tmethod\tn_pubs\tn_breakthroughs\tpct_of_own_set\t"
            "share_of_reference_breakthroughs\tbaseline_ratio\tpp_top10\n"
        )
        for report in reports:
            for method in sorted(report.methods):
                st = report.methods[method]
                fh.write(
                    f"{report.unit_id}\t{method}\t{report.n_pubs}\t{st.n_breakthroughs}\t"
                    f"{_fmt_pct(st.pct_of_own_set)}\t{_fmt_pct(st.share_of_reference)}\t"
                    f"{_fmt(st.baseline_ratio, 4)}\t{_fmt(report.pp_top10, 4)}\n"
                )
