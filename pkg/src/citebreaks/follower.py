"""Co-citation screening of highly cited candidates ("follower" filtering).

A candidate that cites an earlier candidate may owe part of its citation
impact to that predecessor. For every candidate pair (B2 cites B1) we count
how many of B2's citers also cite one of its linked B1 predecessors. B2 is
kept only if at least ``keep_threshold`` (default 70%) of its citers cite it
alone.

Two co-citer semantics are supported:

* ``union`` (default): a citer counts as a co-citer if it cites ANY of B2's
  predecessors; the alone share is computed once against the union.
* ``per_pair``: each (B2, B1) pair is tested separately; B2 is discarded if
  any single predecessor exceeds the co-citation budget. The reported
  verdict carries the worst pair.

The filter is a single pass: predecessors are drawn from the original
candidate pool even if they are themselves discarded, so verdicts are a pure
function of (pool, pairs, edges) and independent of evaluation order.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Mapping, NamedTuple

import numpy as np

from .corpus import ARTICLE, Corpus
from .css import CssPartition

logger = logging.getLogger(__name__)

DEFAULT_KEEP_THRESHOLD = 0.70
UNION = "union"
PER_PAIR = "per_pair"


class FollowerPair(NamedTuple):
    """A candidate citing another candidate (citing B2, cited B1)."""

    b2_id: str
    b1_id: str


class FollowerVerdict(NamedTuple):
    pub_id: str
    n_citers: int
    n_cociters: int
    alone_share: float
    kept: bool


def candidate_pool(corpus: Corpus, partitions: Mapping[int, CssPartition]) -> set[str]:
    """Top-class articles across all fields.

    Reviews contribute to the thresholds but are barred as candidates;
    ``other`` documents were never classed at all.
    """
    pool: set[str] = set()
    for part in partitions.values():
        top = part.n_classes
        for pid, level in zip(part.pub_ids, part.levels.tolist()):
            if level == top and corpus.doc_codes[corpus.index_of(pid)] == ARTICLE:
                pool.add(pid)
    return pool


def find_pairs(pool: set[str], corpus: Corpus) -> set[FollowerPair]:
    """All (citing, cited) edges with both endpoints in the pool."""
    in_pool = np.zeros(len(corpus), dtype=bool)
    for pid in pool:
        in_pool[corpus.index_of(pid)] = True
    mask = in_pool[corpus.citing] & in_pool[corpus.cited]
    ids = corpus.pub_ids
    return {
        FollowerPair(ids[c], ids[d])
        for c, d in zip(corpus.citing[mask].tolist(), corpus.cited[mask].tolist())
    }


def filter_followers(
    pool: set[str],
    pairs: set[FollowerPair],
    corpus: Corpus,
    keep_threshold: float = DEFAULT_KEEP_THRESHOLD,
    semantics: str = UNION,
) -> dict[str, FollowerVerdict]:
    """Verdict for every pool member.

    Members with no predecessor pair are kept with alone_share 1.0. A
    pair-linked member with zero citers cannot be scored either way; it is
    kept and flagged in the log. The threshold comparison is inclusive:
    alone_share exactly at the threshold keeps the paper.
    """
    if not 0.0 < keep_threshold <= 1.0:
        raise ValueError("keep_threshold must be in (0, 1]")
    if semantics not in (UNION, PER_PAIR):
        raise ValueError(f"unknown semantics {semantics!r}")

    n = len(corpus)
    b1s_of: dict[str, list[int]] = {}
    for b2, b1 in pairs:
        b1s_of.setdefault(b2, []).append(corpus.index_of(b1))

    # edges are stored sorted by (citing, cited), so the combined keys are
    # already ascending and usable with searchsorted directly
    edge_keys = corpus.citing * n + corpus.cited

    verdicts: dict[str, FollowerVerdict] = {}
    for pid in sorted(pool):
        idx = corpus.index_of(pid)
        citers = corpus.citers_of(idx)
        n_citers = int(citers.size)
        b1_idx = b1s_of.get(pid)
        if b1_idx is None:
            verdicts[pid] = FollowerVerdict(pid, n_citers, 0, 1.0, True)
            continue
        if n_citers == 0:
            logger.warning(
                "candidate %s cites a predecessor but has no citers; kept unscored", pid
            )
            verdicts[pid] = FollowerVerdict(pid, 0, 0, 1.0, True)
            continue
        b1_arr = np.asarray(sorted(set(b1_idx)), dtype=np.int64)
        queries = citers[:, None] * n + b1_arr[None, :]
        pos = np.searchsorted(edge_keys, queries.ravel())
        pos_c = np.minimum(pos, edge_keys.size - 1)
        hits = ((pos < edge_keys.size) & (edge_keys[pos_c] == queries.ravel())).reshape(
            n_citers, b1_arr.size
        )
        if semantics == UNION:
            n_cociters = int(hits.any(axis=1).sum())
        else:
            n_cociters = int(hits.sum(axis=0).max())
        alone_share = (n_citers - n_cociters) / n_citers
        verdicts[pid] = FollowerVerdict(
            pid, n_citers, n_cociters, alone_share, alone_share >= keep_threshold
        )
    return verdicts


def write_verdicts_tsv(verdicts: Mapping[str, FollowerVerdict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("pub_id\tn_citers\tn_cociters\talone_share\tkept\n")
        for pid in sorted(verdicts):
            v = verdicts[pid]
            fh.write(
                f"{v.pub_id}\t{v.n_citers}\t{v.n_cociters}\t{v.alone_share:.6f}\t"
                f"{'true' if v.kept else 'false'}\n"
            )
