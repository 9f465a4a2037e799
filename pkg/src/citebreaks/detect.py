"""Breakthrough-candidate selection rules M1, M2a and M2b.

M1 takes the most cited article of every micro-field (all ties included); it
applies no citation-class gate and no follower filter. Micro-fields whose
best article was never cited contribute nothing.

M2a is the follower-filtered candidate pool: every top-class article that
kept at least the configured share of its citations alone.

M2b keeps the M2a members whose citation impact reaches more foreign
macro-fields than the average M2a member of their meso-field (strictly more,
so a uniform group selects nothing and M2b is always a subset of M2a).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Collection, Mapping

import numpy as np

from .corpus import ARTICLE, Corpus
from .follower import (
    DEFAULT_KEEP_THRESHOLD,
    UNION,
    FollowerVerdict,
    filter_followers,
    find_pairs,
)

logger = logging.getLogger(__name__)

M1, M2A, M2B = "M1", "M2a", "M2b"


@dataclass(frozen=True)
class M1Evidence:
    micro_id: int
    citations: int
    tied: bool


@dataclass(frozen=True)
class M2aEvidence:
    alone_share: float


@dataclass(frozen=True)
class M2bEvidence:
    external_macros: int
    meso_mean: float


@dataclass(frozen=True)
class DiffusionStat:
    """Distinct foreign macro-fields citing a publication."""

    pub_id: str
    external_macro_count: int
    own_macro: int


@dataclass(frozen=True)
class BreakthroughSet:
    method: str
    members: frozenset[str]
    evidence: dict[str, object]

    def __len__(self) -> int:
        return len(self.members)


def detect_m1(corpus: Corpus, counts: Mapping[str, int]) -> BreakthroughSet:
    """Most cited article(s) per micro-field, ties included."""
    count_vec = np.asarray([counts.get(pid, 0) for pid in corpus.pub_ids], dtype=np.int64)
    art = np.flatnonzero(corpus.doc_codes == ARTICLE)

    members: set[str] = set()
    evidence: dict[str, object] = {}
    if art.size:
        micro = corpus.micro_ids[art]
        c = count_vec[art]
        fields, inv = np.unique(micro, return_inverse=True)
        best = np.zeros(fields.size, dtype=np.int64)
        np.maximum.at(best, inv, c)
        winner = (c == best[inv]) & (best[inv] > 0)
        winners_per_field = np.bincount(inv[winner], minlength=fields.size)
        tied = winners_per_field > 1
        for pos in np.flatnonzero(winner).tolist():
            pid = corpus.pub_ids[art[pos]]
            members.add(pid)
            evidence[pid] = M1Evidence(
                micro_id=int(micro[pos]),
                citations=int(c[pos]),
                tied=bool(tied[inv[pos]]),
            )
    return BreakthroughSet(M1, frozenset(members), evidence)


def detect_m2a(pool: set[str], verdicts: Mapping[str, FollowerVerdict]) -> BreakthroughSet:
    """Candidates that passed the follower filter."""
    members = {pid for pid in pool if verdicts[pid].kept}
    evidence: dict[str, object] = {
        pid: M2aEvidence(alone_share=verdicts[pid].alone_share) for pid in members
    }
    return BreakthroughSet(M2A, frozenset(members), evidence)


def _member_ids(selected: "BreakthroughSet | Collection[str]") -> list[str]:
    if isinstance(selected, BreakthroughSet):
        return sorted(selected.members)
    return sorted(selected)


def macro_diffusion(
    m2a_set: "BreakthroughSet | Collection[str]", corpus: Corpus
) -> dict[str, DiffusionStat]:
    """Distinct citing macro-fields per member, own macro excluded."""
    member_ids = _member_ids(m2a_set)
    idx = np.asarray([corpus.index_of(pid) for pid in member_ids], dtype=np.int64)

    stats: dict[str, DiffusionStat] = {}
    if idx.size:
        pos_of = np.full(len(corpus), -1, dtype=np.int64)
        pos_of[idx] = np.arange(idx.size)
        sel = pos_of[corpus.cited] >= 0
        tgt_pos = pos_of[corpus.cited[sel]]
        macros, macro_code = np.unique(corpus.macro_ids, return_inverse=True)
        src_mac = macro_code[corpus.citing[sel]]
        keys = np.unique(tgt_pos * macros.size + src_mac)
        distinct = np.bincount(keys // macros.size, minlength=idx.size)
        own_keys = np.arange(idx.size) * macros.size + macro_code[idx]
        cited_by_own = np.isin(own_keys, keys)
        external = distinct - cited_by_own.astype(np.int64)
        for k, pid in enumerate(member_ids):
            stats[pid] = DiffusionStat(
                pub_id=pid,
                external_macro_count=int(external[k]),
                own_macro=int(corpus.macro_ids[idx[k]]),
            )
    return stats


def detect_m2b(
    m2a_set: "BreakthroughSet | Collection[str]",
    diffusion: Mapping[str, DiffusionStat],
    corpus: Corpus,
    strict: bool = True,
) -> BreakthroughSet:
    """M2a members with above-average foreign-macro diffusion in their meso-field.

    The group average includes every M2a member of the meso-field, zero
    diffusion included. With the default strict comparison a singleton group
    never selects its only member (it equals the mean).
    """
    member_ids = _member_ids(m2a_set)
    groups: dict[int, list[str]] = {}
    for pid in member_ids:
        meso = int(corpus.meso_ids[corpus.index_of(pid)])
        groups.setdefault(meso, []).append(pid)

    members: set[str] = set()
    evidence: dict[str, object] = {}
    for meso in sorted(groups):
        group = groups[meso]
        ext = np.asarray([diffusion[pid].external_macro_count for pid in group], dtype=np.int64)
        mean = float(ext.sum() / ext.size)
        chosen = ext > mean if strict else ext >= mean
        for pid, ok, e in zip(group, chosen.tolist(), ext.tolist()):
            if ok:
                members.add(pid)
                evidence[pid] = M2bEvidence(external_macros=int(e), meso_mean=mean)
    return BreakthroughSet(M2B, frozenset(members), evidence)


def apply_follower_filter(
    bset: BreakthroughSet,
    corpus: Corpus,
    keep_threshold: float = DEFAULT_KEEP_THRESHOLD,
    semantics: str = UNION,
) -> BreakthroughSet:
    """Re-run the follower screen over a breakthrough set's own members.

    Used to optionally compose M1 with the follower filter: pairs are found
    among the members themselves and discarded members are dropped.
    """
    pool = set(bset.members)
    pairs = find_pairs(pool, corpus)
    verdicts = filter_followers(pool, pairs, corpus, keep_threshold, semantics)
    kept = {pid for pid in pool if verdicts[pid].kept}
    return BreakthroughSet(
        bset.method,
        frozenset(kept),
        {pid: ev for pid, ev in bset.evidence.items() if pid in kept},
    )


_EVIDENCE_COLUMNS = {
    M1: ("micro_id", "citations", "tied"),
    M2A: ("alone_share",),
    M2B: ("external_macros", "meso_mean"),
}


def write_breakthroughs_tsv(bset: BreakthroughSet, path: str | Path) -> None:
    """One row per member with the method's evidence columns."""
    cols = _EVIDENCE_COLUMNS[bset.method]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("pub_id\tmethod\t" + "\t".join(cols) + "\n")
        for pid in sorted(bset.members):
            ev = bset.evidence.get(pid)
            cells = []
            for col in cols:
                val = getattr(ev, col, "")
                if isinstance(val, bool):
                    val = "true" if val else "false"
                elif isinstance(val, float):
                    val = f"{val:.6f}"
                cells.append(str(val))
            fh.write(f"{pid}\t{bset.method}\t" + "\t".join(cells) + "\n")


def read_breakthroughs_tsv(path: str | Path) -> BreakthroughSet:
    """Load member ids back from a breakthrough TSV (evidence not rebuilt)."""
    members: set[str] = set()
    method = ""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if header[:2] != ["pub_id", "method"]:
            raise ValueError(f"{path}: not a breakthrough TSV")
        for line in fh:
            parts = line.rstrip("\n").split("\t")
            members.add(parts[0])
            method = parts[1]
    return BreakthroughSet(method or "unknown", frozenset(members), {})
