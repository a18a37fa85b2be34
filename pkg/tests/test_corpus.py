import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from expertfusion.corpus import (
    CorpusError,
    Query,
    build_index,
    candidates_for_query,
    load_corpus,
    match_documents,
    tokenize,
)
from conftest import pub
from oracles import toks


@pytest.mark.parametrize(
    "text, expected",
    [
        ("Information Retrieval", ["information", "retrieval"]),
        ("the of a", []),
        ("BM25-based ranking!", ["bm25", "based", "ranking"]),
        ("", []),
        (None, []),
        ("x y zz", ["zz"]),
    ],
)
def test_tokenize(text, expected):
    assert tokenize(text) == expected


@given(st.text())
def test_tokenize_idempotent(text):
    once = tokenize(text)
    assert tokenize(" ".join(once)) == once


def test_query_dedupes_terms():
    q = Query.parse("Retrieval of information retrieval")
    assert q.terms == ("retrieval", "information")
    with pytest.raises(ValueError):
        Query.parse("the of")


def _record(pid, refs=(), authors=("a",), **kw):
    rec = {
        "pub_id": pid,
        "title": kw.get("title", "some title"),
        "abstract": kw.get("abstract"),
        "authors": list(authors),
        "year": kw.get("year", 2000),
        "venue": "V",
        "venue_kind": kw.get("venue_kind", "conference"),
        "references": list(refs),
    }
    return json.dumps(rec)


def _write(tmp_path, lines):
    path = tmp_path / "corpus.jsonl"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_load_three_records(tmp_path):
    path = _write(tmp_path, [_record("p1"), _record("p2", ["p1"]), _record("p3", ["p1", "p2"])])
    loaded = load_corpus(path)
    assert len(loaded) == 3
    assert loaded.self_citations_dropped == 0
    assert loaded.dangling_references == 0


def test_self_citation_dropped(tmp_path):
    path = _write(tmp_path, [_record("p1", ["p1", "p2"]), _record("p2")])
    loaded = load_corpus(path)
    assert loaded.self_citations_dropped == 1
    assert loaded.publications[0].references == ("p2",)


def test_dangling_reference_kept_but_not_in_graph(tmp_path):
    path = _write(tmp_path, [_record("p1", ["ghost"]), _record("p2", ["p1"])])
    loaded = load_corpus(path)
    assert loaded.dangling_references == 1
    assert loaded.publications[0].references == ("ghost",)
    index = build_index(loaded.publications)
    assert index.citation_edges == 1
    assert "ghost" not in index.citation_in


def test_duplicate_pub_id(tmp_path):
    path = _write(tmp_path, [_record("p1"), _record("p1")])
    with pytest.raises(CorpusError, match="duplicate"):
        load_corpus(path)


@pytest.mark.parametrize(
    "bad",
    [
        "{not json",
        json.dumps({"pub_id": "p9"}),
        _record("p9", authors=()),
        _record("p9", authors=("a", "a")),
        _record("p9", year=0),
        _record("p9", venue_kind="workshop"),
    ],
)
def test_malformed_line_names_line_number(tmp_path, bad):
    path = _write(tmp_path, [_record("p1"), bad])
    with pytest.raises(CorpusError, match="line 2"):
        load_corpus(path)


def test_build_index_single_doc():
    index = build_index([pub("d", "information retrieval", ["a"])])
    assert set(index.postings) == {"information", "retrieval"}
    assert index.doc_len["d"] == 2
    assert index.avg_doc_len == 2


def test_build_index_citations_and_coauthors():
    index = build_index([pub("A", "alpha", ["x", "y"], refs=["B"]), pub("B", "beta", ["x"])])
    assert index.citation_in["B"] == ("A",)
    assert index.citation_in["A"] == ()
    assert index.coauthors["x"] == {"y"}
    assert index.coauthors["y"] == {"x"}


def test_build_index_empty():
    with pytest.raises(CorpusError):
        build_index([])


def test_index_invariants(toy_pubs, toy_index):
    for d, n in toy_index.doc_len.items():
        assert sum(tf for plist in toy_index.postings.values() for pid, tf in plist if pid == d) == n
    # transpose of references
    edges = {(p.pub_id, r) for p in toy_pubs for r in p.references}
    assert edges == {(c, d) for d, citing in toy_index.citation_in.items() for c in citing}
    assert toy_index.now_year == 2006
    for pids in toy_index.author_pubs.values():
        assert all(p in toy_index.publications for p in pids)


def test_abstract_is_indexed(toy_index):
    assert toy_index.doc_terms["d1"]["retrieval"] == 2
    assert toy_index.doc_terms["d1"]["ranking"] == 1


def test_match_documents(toy_pubs, toy_index):
    q = Query.parse("information retrieval")
    expected = {p.pub_id for p in toy_pubs if set(q.terms) & set(toks(p.text))}
    assert match_documents(toy_index, q) == expected == {"d1", "d2", "d4"}
    assert match_documents(toy_index, Query.parse("quantum")) == set()


def test_match_single_term_overlap():
    index = build_index([pub("d", "retrieval models", ["a"])])
    assert match_documents(index, Query.parse("information retrieval")) == {"d"}


def test_candidates(toy_index):
    assert candidates_for_query(toy_index, Query.parse("information retrieval")) == {"x", "y", "z"}
    assert candidates_for_query(toy_index, Query.parse("quantum")) == set()


def test_candidates_union():
    index = build_index([pub("d1", "retrieval", ["a1"]), pub("d2", "retrieval", ["a1", "a2"])])
    assert candidates_for_query(index, Query.parse("retrieval")) == {"a1", "a2"}


def test_three_author_scenario():
    pubs = [
        pub("p1", "information retrieval systems", ["author1"]),
        pub("p2", "retrieval evaluation", ["author2", "author1"]),
        pub("p3", "information seeking", ["author3"]),
        pub("p4", "graph drawing", ["author4"]),
    ]
    index = build_index(pubs)
    assert candidates_for_query(index, Query.parse("Information Retrieval")) == {
        "author1",
        "author2",
        "author3",
    }


@given(st.lists(st.sampled_from(["retrieval", "graph", "model", "search"]), min_size=1, max_size=4))
def test_candidates_monotone(words):
    base = [pub("d1", "retrieval", ["a1"]), pub("d2", "graph", ["a2"])]
    q = Query.parse("retrieval search")
    before = candidates_for_query(build_index(base), q)
    after = candidates_for_query(build_index(base + [pub("d3", " ".join(words), ["a3"])]), q)
    assert before <= after
