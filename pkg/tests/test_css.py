"""CSS partition: worked examples, oracle equivalence, invariants."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citebreaks.corpus import citation_counts
from citebreaks.css import (
    CitationClass,
    css_all_fields,
    css_partition,
    css_summary,
)

from conftest import make_corpus
from oracles import css_oracle

T1, T2, T3, T4 = CitationClass


def test_worked_example():
    part = css_partition([("A", 0), ("B", 0), ("C", 0), ("D", 4), ("E", 16)])
    assert part.thresholds.mus == (4.0, 10.0, 16.0)
    assert part.class_of == {"A": T1, "B": T1, "C": T1, "D": T2, "E": T4}
    assert T3 not in part.class_of.values()


def test_all_zero_is_all_t1():
    part = css_partition([(f"p{i}", 0) for i in range(6)])
    assert part.thresholds.mus == (0.0, 0.0, 0.0)
    assert set(part.class_of.values()) == {T1}


def test_single_member_is_t1():
    part = css_partition([("A", 7)])
    assert part.thresholds.mus == (7.0, 7.0, 7.0)
    assert part.class_of == {"A": T1}


def test_uniform_tail_lands_in_top_class():
    # first truncation shrinks, second stalls: the equal top block is T4
    part = css_partition([("A", 0), ("B", 4), ("C", 4)])
    assert part.thresholds.mu2 == part.thresholds.mu3 == 4.0
    assert part.class_of == {"A": T1, "B": T4, "C": T4}


def test_empty_and_negative_rejected():
    with pytest.raises(ValueError):
        css_partition([])
    with pytest.raises(ValueError):
        css_partition([("A", -1)])


def test_matches_scalar_oracle_on_random_multisets():
    rng = np.random.default_rng(2024)
    for trial in range(200):
        size = int(rng.integers(1, 301))
        if trial % 10 == 0:
            counts = [int(rng.integers(0, 50))] * size  # forced degenerate
        else:
            counts = rng.integers(0, 10_001, size=size).tolist()
        part = css_partition([(f"p{i}", c) for i, c in enumerate(counts)])
        mus, levels = css_oracle(counts)
        assert part.thresholds.mus == mus
        assert part.levels.tolist() == levels


@given(st.lists(st.integers(min_value=0, max_value=10_000), min_size=1, max_size=80))
@settings(max_examples=200, deadline=None)
def test_permutation_invariance(counts):
    fwd = css_partition([(f"p{i}", c) for i, c in enumerate(counts)])
    rev = css_partition([(f"p{i}", c) for i, c in reversed(list(enumerate(counts)))])
    assert fwd.thresholds.mus == rev.thresholds.mus
    assert fwd.class_of == rev.class_of


@given(st.lists(st.integers(min_value=0, max_value=10_000), min_size=1, max_size=80))
@settings(max_examples=200, deadline=None)
def test_threshold_monotone_and_t4_nonempty(counts):
    part = css_partition([(f"p{i}", c) for i, c in enumerate(counts)])
    mus = part.thresholds.mus
    assert mus[0] <= mus[1] <= mus[2]
    shares = part.membership_shares()
    assert shares.sum() == pytest.approx(1.0)
    if len(set(counts)) >= 2:
        assert (part.levels == 4).any(), "max member must reach T4"


def test_two_identical_fields_are_independent():
    pubs = []
    edges = []
    for meso, prefix in ((1, "a"), (2, "b")):
        micro = meso
        pubs += [(f"{prefix}{k}", 2000, "article", micro, meso, 1) for k in range(5)]
        # counts 0,0,0,4,16 via citers from a third field
    pubs += [(f"x{i}", 2001, "article", 99, 99, 9) for i in range(40)]
    for prefix in ("a", "b"):
        edges += [(f"x{i}", f"{prefix}4") for i in range(16)]
        edges += [(f"x{16 + i}", f"{prefix}3") for i in range(4)]
    corpus = make_corpus(pubs, edges)
    parts = css_all_fields(corpus, citation_counts(corpus))
    assert parts[1].thresholds.mus == parts[2].thresholds.mus == (4.0, 10.0, 16.0)
    for meso, prefix in ((1, "a"), (2, "b")):
        assert parts[meso].class_of == {
            f"{prefix}0": T1, f"{prefix}1": T1, f"{prefix}2": T1,
            f"{prefix}3": T2, f"{prefix}4": T4,
        }


def test_other_documents_excluded_review_included():
    pubs = [
        ("A", 2000, "article", 1, 1, 1),
        ("R", 2000, "review", 1, 1, 1),
        ("O", 2000, "other", 1, 1, 1),
        ("x", 2001, "article", 9, 9, 9),
    ]
    edges = [("x", "R"), ("A", "R")]
    corpus = make_corpus(pubs, edges)
    parts = css_all_fields(corpus, citation_counts(corpus))
    part = parts[1]
    assert "O" not in part.class_of
    # the review is the top-cited member and gets the top class like anyone
    assert part.class_of["R"] == T4


def test_summary_worked_example():
    part = css_partition([("A", 0), ("B", 0), ("C", 0), ("D", 4), ("E", 16)])
    summ = css_summary({1: part})
    assert summ.pub_share_mean.tolist() == [0.6, 0.2, 0.0, 0.2]
    assert summ.pub_share_sd.tolist() == [0.0, 0.0, 0.0, 0.0]
    assert summ.cite_share_mean.tolist() == [0.0, 0.2, 0.0, 0.8]


def test_summary_two_identical_fields_sd_zero():
    part = css_partition([("A", 0), ("B", 0), ("C", 0), ("D", 4), ("E", 16)])
    part2 = css_partition([("F", 0), ("G", 0), ("H", 0), ("I", 4), ("J", 16)])
    summ = css_summary({1: part, 2: part2})
    assert summ.pub_share_mean.tolist() == [0.6, 0.2, 0.0, 0.2]
    assert summ.pub_share_sd.tolist() == [0.0, 0.0, 0.0, 0.0]
    assert summ.n_fields == 2


def test_lognormal_field_brackets():
    rng = np.random.default_rng(42)
    counts = rng.lognormal(1.0, 1.2, 10_000).astype(np.int64)
    part = css_partition([(f"p{i}", int(c)) for i, c in enumerate(counts)])
    shares = part.membership_shares()
    cite_shares = part.citation_shares()
    # independent recomputation from the raw vector
    mus, levels = css_oracle(counts.tolist())
    levels = np.asarray(levels)
    assert np.array_equal(part.levels, levels)
    assert 0.60 <= shares[0] <= 0.85
    assert 0.005 <= shares[3] <= 0.06
    assert cite_shares[3] >= 0.15


def test_depth_knob():
    part = css_partition([("A", 0), ("B", 0), ("C", 4), ("D", 16)], depth=1)
    assert part.n_classes == 2
    assert len(part.thresholds.mus) == 1
    assert part.class_of["D"] == 2 and part.class_of["A"] == 1
