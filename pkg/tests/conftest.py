"""Shared corpus builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from citebreaks.corpus import (
    ClusterHierarchy,
    Corpus,
    DocType,
    PublicationRecord,
    from_records,
)

DOC = {"article": DocType.ARTICLE, "review": DocType.REVIEW, "other": DocType.OTHER}


def make_corpus(pubs, edges=(), hierarchy=None, **kwargs) -> Corpus:
    """Build a corpus from terse tuples.

    pubs: (pub_id, year, doc_type, micro, meso, macro[, units]) tuples.
    The hierarchy defaults to the mapping implied by the records.
    """
    records = []
    implied: dict[int, tuple[int, int]] = {}
    for row in pubs:
        pid, year, doc, micro, meso, macro = row[:6]
        units = frozenset(row[6]) if len(row) > 6 else frozenset()
        records.append(
            PublicationRecord(
                pub_id=pid, year=year, doc_type=DOC[doc],
                micro_id=micro, meso_id=meso, macro_id=macro, unit_ids=units,
            )
        )
        implied.setdefault(micro, (meso, macro))
    if hierarchy is None:
        hierarchy = ClusterHierarchy.from_rows(
            (micro, meso, macro) for micro, (meso, macro) in sorted(implied.items())
        )
    return from_records(records, edges, hierarchy, **kwargs)


def random_corpus(rng: np.random.Generator, max_pubs=200, max_edges=2000) -> Corpus:
    """Small random corpus exercising doc types, fields and messy edges."""
    n = int(rng.integers(5, max_pubs + 1))
    n_micro = int(rng.integers(1, 13))
    pubs = []
    for i in range(n):
        micro = int(rng.integers(1, n_micro + 1))
        meso = (micro - 1) // 3 + 1
        macro = (meso - 1) // 2 + 1
        doc = rng.choice(["article", "article", "article", "review", "other"])
        units = ["A"] if rng.random() < 0.3 else (["B"] if rng.random() < 0.3 else [])
        pubs.append((f"p{i}", 2000 + int(rng.integers(0, 5)), str(doc), micro, meso, macro, units))
    k = int(rng.integers(0, max_edges + 1))
    src = rng.integers(0, n, size=k)
    dst = rng.integers(0, n, size=k)
    edges = [(f"p{a}", f"p{b}") for a, b in zip(src.tolist(), dst.tolist()) if a != b]
    return make_corpus(pubs, edges)


@pytest.fixture
def worked_field_corpus() -> Corpus:
    """One meso-field mirroring the 5-member worked distribution 0,0,0,4,16.

    Edges give B,C,D four citations of E and D one extra citer each pattern:
    counts A=0, B=0, C=0, D=4, E=16 with 20 citing papers in a second field.
    """
    pubs = [(pid, 2005, "article", 1, 1, 1) for pid in "ABCDE"]
    pubs += [(f"x{i}", 2006, "article", 9, 9, 9) for i in range(20)]
    edges = [(f"x{i}", "E") for i in range(16)] + [(f"x{i}", "D") for i in range(16, 20)]
    return make_corpus(pubs, edges)
