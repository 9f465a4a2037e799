"""Ingestion, validation and citation counting."""

import numpy as np
import pytest

from citebreaks.corpus import (
    ConsistencyError,
    FormatError,
    citation_counts,
    load_corpus,
    write_corpus,
)

from conftest import make_corpus, random_corpus
from oracles import in_degree_oracle

PUBS = "pub_id\tyear\tdoc_type\tmicro_id\tmeso_id\tmacro_id\tunit_ids\n"
EDGES = "citing_id\tcited_id\n"
HIER = "micro_id\tmeso_id\tmacro_id\n"


def write_trio(tmp_path, pubs, edges, hier):
    p, e, h = tmp_path / "p.tsv", tmp_path / "e.tsv", tmp_path / "h.tsv"
    p.write_text(pubs)
    e.write_text(edges)
    h.write_text(hier)
    return p, e, h


def test_minimal_load(tmp_path):
    p, e, h = write_trio(
        tmp_path,
        PUBS
        + "a\t2001\tarticle\t1\t10\t100\t\n"
        + "b\t2002\treview\t1\t10\t100\tu1\n"
        + "c\t2003\tother\t2\t10\t100\tu1;u2\n",
        EDGES + "a\tb\nc\ta\n",
        HIER + "1\t10\t100\n2\t10\t100\n",
    )
    corpus = load_corpus(p, e, h)
    assert len(corpus) == 3
    assert corpus.n_edges == 2
    assert corpus.ingest.to_dict() == {
        "publications": 3,
        "edges_accepted": 2,
        "edges_self": 0,
        "edges_duplicate": 0,
        "edges_dangling": 0,
    }
    rec = corpus.publication("c")
    assert rec.unit_ids == {"u1", "u2"}
    assert corpus.year_min == 2001 and corpus.year_max == 2003


def test_edge_tallies(tmp_path):
    p, e, h = write_trio(
        tmp_path,
        PUBS + "a\t2001\tarticle\t1\t10\t100\t\n" + "b\t2001\tarticle\t1\t10\t100\t\n",
        EDGES + "a\tb\na\tb\na\ta\nz\tb\na\tzz\n",
        HIER + "1\t10\t100\n",
    )
    corpus = load_corpus(p, e, h)
    r = corpus.ingest
    assert (r.edges_accepted, r.edges_self, r.edges_duplicate, r.edges_dangling) == (1, 1, 1, 2)


def test_missing_header(tmp_path):
    p, e, h = write_trio(
        tmp_path,
        "a\t2001\tarticle\t1\t10\t100\t\n",
        EDGES,
        HIER + "1\t10\t100\n",
    )
    with pytest.raises(FormatError, match="header"):
        load_corpus(p, e, h)


def test_bad_year_reports_line(tmp_path):
    p, e, h = write_trio(
        tmp_path,
        PUBS
        + "a\t2001\tarticle\t1\t10\t100\t\n"
        + "b\ttwenty\tarticle\t1\t10\t100\t\n",
        EDGES,
        HIER + "1\t10\t100\n",
    )
    with pytest.raises(FormatError, match=r":3"):
        load_corpus(p, e, h)


def test_wrong_column_count(tmp_path):
    p, e, h = write_trio(
        tmp_path,
        PUBS + "a\t2001\tarticle\t1\t10\t100\t\textra\tcols\n",
        EDGES,
        HIER + "1\t10\t100\n",
    )
    with pytest.raises(FormatError):
        load_corpus(p, e, h)


def test_bad_doc_type(tmp_path):
    p, e, h = write_trio(
        tmp_path,
        PUBS + "a\t2001\tArticle\t1\t10\t100\t\n",
        EDGES,
        HIER + "1\t10\t100\n",
    )
    with pytest.raises(FormatError, match="doc_type"):
        load_corpus(p, e, h)


def test_hierarchy_contradiction_names_pub(tmp_path):
    # record claims micro 1 -> meso 11, hierarchy says meso 10
    p, e, h = write_trio(
        tmp_path,
        PUBS + "badpub\t2001\tarticle\t1\t11\t100\t\n",
        EDGES,
        HIER + "1\t10\t100\n",
    )
    with pytest.raises(ConsistencyError, match="badpub"):
        load_corpus(p, e, h)


def test_unknown_micro_names_pub(tmp_path):
    p, e, h = write_trio(
        tmp_path,
        PUBS + "odd\t2001\tarticle\t7\t10\t100\t\n",
        EDGES,
        HIER + "1\t10\t100\n",
    )
    with pytest.raises(ConsistencyError, match="odd"):
        load_corpus(p, e, h)


def test_duplicate_pub_id(tmp_path):
    p, e, h = write_trio(
        tmp_path,
        PUBS + "a\t2001\tarticle\t1\t10\t100\t\na\t2002\tarticle\t1\t10\t100\t\n",
        EDGES,
        HIER + "1\t10\t100\n",
    )
    with pytest.raises(ConsistencyError, match="'a'"):
        load_corpus(p, e, h)


def test_ambiguous_hierarchy_rejected(tmp_path):
    p, e, h = write_trio(
        tmp_path,
        PUBS + "a\t2001\tarticle\t1\t10\t100\t\n",
        EDGES,
        HIER + "1\t10\t100\n1\t11\t100\n",
    )
    with pytest.raises(ConsistencyError, match="micro-field 1"):
        load_corpus(p, e, h)


def test_declared_year_range_enforced(tmp_path):
    p, e, h = write_trio(
        tmp_path,
        PUBS + "a\t1990\tarticle\t1\t10\t100\t\n",
        EDGES,
        HIER + "1\t10\t100\n",
    )
    with pytest.raises(ConsistencyError, match="year"):
        load_corpus(p, e, h, year_min=1993, year_max=2011)


def test_citation_counts_worked_example():
    corpus = make_corpus(
        [(pid, 2000, "article", 1, 1, 1) for pid in "ABC"],
        [("A", "B"), ("C", "B"), ("A", "C")],
    )
    assert citation_counts(corpus) == {"A": 0, "B": 2, "C": 1}


def test_citation_counts_empty_edges():
    corpus = make_corpus([(pid, 2000, "article", 1, 1, 1) for pid in "ABC"])
    assert citation_counts(corpus) == {"A": 0, "B": 0, "C": 0}


def test_citation_counts_match_in_degree_oracle():
    rng = np.random.default_rng(1234)
    for _ in range(10):
        n = int(rng.integers(20, 51))
        pubs = [(f"p{i}", 2000, "article", 1, 1, 1) for i in range(n)]
        raw = [
            (f"p{int(a)}", f"p{int(b)}")
            for a, b in zip(rng.integers(0, n, 300), rng.integers(0, n, 300))
        ]
        corpus = make_corpus(pubs, raw)
        assert citation_counts(corpus) == in_degree_oracle([p[0] for p in pubs], raw)


def test_count_sum_equals_accepted_edges():
    rng = np.random.default_rng(99)
    for _ in range(10):
        corpus = random_corpus(rng)
        assert sum(citation_counts(corpus).values()) == corpus.ingest.edges_accepted


def test_load_is_deterministic(tmp_path):
    p, e, h = write_trio(
        tmp_path,
        PUBS + "a\t2001\tarticle\t1\t10\t100\t\nb\t2001\treview\t1\t10\t100\tu1\n",
        EDGES + "a\tb\nb\ta\n",
        HIER + "1\t10\t100\n",
    )
    assert load_corpus(p, e, h) == load_corpus(p, e, h)


def test_round_trip_identity(tmp_path):
    rng = np.random.default_rng(7)
    corpus = random_corpus(rng)
    paths = (tmp_path / "p.tsv", tmp_path / "e.tsv", tmp_path / "h.tsv")
    write_corpus(corpus, *paths)
    reloaded = load_corpus(*paths)
    assert reloaded == corpus
    # a second cycle is byte-stable
    paths2 = (tmp_path / "p2.tsv", tmp_path / "e2.tsv", tmp_path / "h2.tsv")
    write_corpus(reloaded, *paths2)
    for a, b in zip(paths, paths2):
        assert a.read_bytes() == b.read_bytes()


def test_missing_trailing_unit_field_is_empty(tmp_path):
    # a line may stop after macro_id; unit set is then empty
    p, e, h = write_trio(
        tmp_path,
        PUBS + "a\t2001\tarticle\t1\t10\t100\n",
        EDGES,
        HIER + "1\t10\t100\n",
    )
    corpus = load_corpus(p, e, h)
    assert corpus.publication("a").unit_ids == frozenset()
