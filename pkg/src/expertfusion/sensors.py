"""Event extraction for the text, profile and citation sensors.

Each extractor returns an :class:`EventScoreTable` with one row per
candidate (sorted by author id) and one column per event, in the fixed
order of the matching ``*_EVENTS`` tuple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import bibliometrics as bib
from .corpus import Index, Query, match_documents

SENSOR_KINDS = ("text", "profile", "citation")

BM25_K1 = 1.2
BM25_B = 0.75

TEXT_EVENTS = (
    "text.tf",
    "text.idf",
    "text.doc_len.avg",
    "text.unique_authors",
    "text.bm25.sum",
    "text.bm25.avg",
    "text.bm25.max",
    "text.jaccard.sum",
    "text.jaccard.avg",
    "text.jaccard.max",
    "text.venue_bm25.sum",
    "text.venue_bm25.avg",
    "text.venue_bm25.max",
    "text.venue_jaccard.sum",
    "text.venue_jaccard.avg",
    "text.venue_jaccard.max",
)

PROFILE_EVENTS = (
    "profile.pubs.query",
    "profile.pubs.all",
    "profile.journals.query",
    "profile.journals.all",
    "profile.years_since_first_pub.query",
    "profile.years_since_first_pub.all",
    "profile.years_since_first_journal.query",
    "profile.years_since_first_journal.all",
    "profile.years_since_last_pub.query",
    "profile.years_since_last_pub.all",
    "profile.years_since_last_journal.query",
    "profile.years_since_last_journal.all",
    "profile.pub_span.query",
    "profile.pub_span.all",
    "profile.journal_span.query",
    "profile.journal_span.all",
    "profile.pubs_per_year",
    "profile.journals_per_year",
)

CITATION_EVENTS = (
    "citation.cites.query",
    "citation.cites.all",
    "citation.cites.avg",
    "citation.cites_per_year.avg",
    "citation.cites.max",
    "citation.collaborators",
    "citation.h_index",
    "citation.h_index.query",
    "citation.contemporary_h_index",
    "citation.trend_h_index",
    "citation.individual_h_index",
    "citation.g_index",
    "citation.a_index",
    "citation.e_index",
    "citation.pagerank.sum",
    "citation.pagerank.avg",
)

EVENTS = {"text": TEXT_EVENTS, "profile": PROFILE_EVENTS, "citation": CITATION_EVENTS}


def min_max_normalize(column) -> np.ndarray:
    """Rescale to [0, 1]; a constant column maps to all zeros."""
    col = np.asarray(column, dtype=float)
    if col.size == 0:
        raise ValueError("cannot normalize an empty column")
    if not np.all(np.isfinite(col)):
        raise ValueError("column contains non-finite values")
    lo, hi = col.min(), col.max()
    if hi == lo:
        return np.zeros_like(col)
    return (col - lo) / (hi - lo)


@dataclass(frozen=True, eq=False)
class EventScoreTable:
    sensor_kind: str
    candidates: tuple[str, ...]
    events: tuple[str, ...]
    raw: np.ndarray
    normalized: np.ndarray

    @classmethod
    def from_raw(cls, sensor_kind, candidates, events, raw) -> "EventScoreTable":
        raw = np.asarray(raw, dtype=float).reshape(len(candidates), len(events))
        norm = np.zeros_like(raw)
        if raw.size:
            norm = np.column_stack([min_max_normalize(raw[:, j]) for j in range(raw.shape[1])])
        raw.setflags(write=False)
        norm.setflags(write=False)
        return cls(sensor_kind, tuple(candidates), tuple(events), raw, norm)

    def column(self, event: str, normalized: bool = False) -> dict[str, float]:
        j = self.events.index(event)
        data = self.normalized if normalized else self.raw
        return {c: float(data[i, j]) for i, c in enumerate(self.candidates)}

    def row(self, candidate: str) -> dict[str, float]:
        i = self.candidates.index(candidate)
        return {e: float(self.raw[i, j]) for j, e in enumerate(self.events)}


# -- text similarity ---------------------------------------------------------


def idf(num_docs: int, df: int) -> float:
    return math.log((num_docs - df + 0.5) / (df + 0.5) + 1.0)


def bm25_terms(
    terms: Iterable[str],
    tf: Mapping[str, int],
    length: float,
    avg_len: float,
    df: Mapping[str, int],
    num_docs: int,
) -> float:
    """Okapi BM25 of one bag of words against generic collection statistics."""
    score = 0.0
    norm = BM25_K1 * (1.0 - BM25_B + BM25_B * length / avg_len) if avg_len else BM25_K1
    for t in terms:
        f = tf.get(t, 0)
        if f:
            score += idf(num_docs, df[t]) * f * (BM25_K1 + 1.0) / (f + norm)
    return score


def bm25(index: Index, q: Query, doc: str) -> float:
    if doc not in index.doc_terms:
        raise KeyError(doc)
    df = {t: index.df(t) for t in q.terms}
    return bm25_terms(
        q.terms, index.doc_terms[doc], index.doc_len[doc], index.avg_doc_len, df, index.num_docs
    )


def jaccard(query_terms, doc_terms) -> float:
    q, d = set(query_terms), set(doc_terms)
    if not q:
        raise ValueError("query term set must be nonempty")
    if not d:
        return 0.0
    return len(q & d) / len(q | d)


def _triple(values: Sequence[float]) -> tuple[float, float, float]:
    if not values:
        return 0.0, 0.0, 0.0
    return float(sum(values)), float(sum(values) / len(values)), float(max(values))


def _venue_scores(index: Index, q: Query, matched: set[str]) -> dict[tuple[str, str], tuple[float, float]]:
    """BM25 and Jaccard of every venue pseudo-document built from matched papers.

    Venues are keyed by (venue_kind, venue) so a conference and a journal
    sharing a name stay separate.
    """
    bags: dict[tuple[str, str], dict[str, int]] = {}
    for pid in sorted(matched):
        pub = index.publications[pid]
        bag = bags.setdefault((pub.venue_kind, pub.venue), {})
        for term, f in index.doc_terms[pid].items():
            bag[term] = bag.get(term, 0) + f
    if not bags:
        return {}
    lengths = {k: sum(b.values()) for k, b in bags.items()}
    avg_len = sum(lengths.values()) / len(bags)
    df = {t: sum(1 for b in bags.values() if t in b) for t in q.terms}
    return {
        k: (
            bm25_terms(q.terms, bag, lengths[k], avg_len, df, len(bags)),
            jaccard(q.terms, bag),
        )
        for k, bag in bags.items()
    }


def _matched_by_author(index: Index, matched: set[str], author: str) -> list[str]:
    return [p for p in index.author_pubs.get(author, ()) if p in matched]


def extract_text_events(index: Index, q: Query, candidates: Iterable[str]) -> EventScoreTable:
    cands = sorted(set(candidates))
    if not cands:
        raise ValueError("candidate set must be nonempty")
    matched = match_documents(index, q)
    venues = _venue_scores(index, q, matched)
    qset = set(q.terms)
    rows = []
    for a in cands:
        docs = _matched_by_author(index, matched, a)
        if not docs:
            rows.append([0.0] * len(TEXT_EVENTS))
            continue
        tf = sum(index.doc_terms[d].get(t, 0) for d in docs for t in q.terms)
        present = {t for d in docs for t in q.terms if t in index.doc_terms[d]}
        idf_sum = sum(idf(index.num_docs, index.df(t)) for t in sorted(present))
        avg_len = sum(index.doc_len[d] for d in docs) / len(docs)
        others = {x for d in docs for x in index.publications[d].author_ids if x != a}
        bm = [bm25(index, q, d) for d in docs]
        jac = [jaccard(qset, index.doc_terms[d]) for d in docs]
        keys = sorted({(index.publications[d].venue_kind, index.publications[d].venue) for d in docs})
        vbm = [venues[k][0] for k in keys]
        vjac = [venues[k][1] for k in keys]
        rows.append(
            [tf, idf_sum, avg_len, len(others), *_triple(bm), *_triple(jac), *_triple(vbm), *_triple(vjac)]
        )
    return EventScoreTable.from_raw("text", cands, TEXT_EVENTS, rows)


# -- profile -----------------------------------------------------------------


def _career(years: list[int], now_year: int) -> tuple[int, int, int]:
    """(years since first, years since last, span); zeros when empty."""
    if not years:
        return 0, 0, 0
    first, last = min(years), max(years)
    return max(now_year - first, 0), max(now_year - last, 0), last - first


def extract_profile_events(index: Index, q: Query, candidates: Iterable[str]) -> EventScoreTable:
    cands = sorted(set(candidates))
    if not cands:
        raise ValueError("candidate set must be nonempty")
    matched = match_documents(index, q)
    now = index.now_year
    rows = []
    for a in cands:
        pubs = [index.publications[p] for p in index.author_pubs.get(a, ())]
        groups = {
            "pubs.query": [p.year for p in pubs if p.pub_id in matched],
            "pubs.all": [p.year for p in pubs],
            "journals.query": [p.year for p in pubs if p.pub_id in matched and p.venue_kind == "journal"],
            "journals.all": [p.year for p in pubs if p.venue_kind == "journal"],
        }
        careers = [_career(years, now) for years in groups.values()]
        all_pubs, all_journals = groups["pubs.all"], groups["journals.all"]
        pub_span, journal_span = careers[1][2], careers[3][2]
        rows.append(
            [len(years) for years in groups.values()]
            + [c[0] for c in careers]
            + [c[1] for c in careers]
            + [c[2] for c in careers]
            + [
                len(all_pubs) / (pub_span + 1) if all_pubs else 0.0,
                len(all_journals) / (journal_span + 1) if all_journals else 0.0,
            ]
        )
    return EventScoreTable.from_raw("profile", cands, PROFILE_EVENTS, rows)


# -- citation ----------------------------------------------------------------


def citation_count(index: Index, pub: str) -> int:
    if pub not in index.publications:
        raise KeyError(pub)
    return len(index.citation_in[pub])


@dataclass(frozen=True)
class BibliometricIndices:
    h_index: int
    h_index_query: int
    contemporary_h_index: int
    trend_h_index: int
    individual_h_index: float
    g_index: int
    a_index: float
    e_index: float


def bibliometric_indices(
    index: Index, author: str, q: Query | None = None, matched: set[str] | None = None
) -> BibliometricIndices:
    """Impact indices of one author; the query-conditioned h uses matched papers only."""
    if author not in index.author_pubs:
        raise KeyError(author)
    if matched is None:
        matched = match_documents(index, q) if q is not None else set()
    pids = index.author_pubs[author]
    pubs = [index.publications[p] for p in pids]
    cites = [len(index.citation_in[p]) for p in pids]
    citing_years = [[index.publications[c].year for c in index.citation_in[p]] for p in pids]
    now = index.now_year
    return BibliometricIndices(
        h_index=bib.h_index(cites),
        h_index_query=bib.h_index([c for p, c in zip(pids, cites) if p in matched]),
        contemporary_h_index=bib.contemporary_h_index(cites, [p.year for p in pubs], now),
        trend_h_index=bib.trend_h_index(citing_years, now),
        individual_h_index=bib.individual_h_index(cites, [len(p.author_ids) for p in pubs]),
        g_index=bib.g_index(cites),
        a_index=bib.a_index(cites),
        e_index=bib.e_index(cites),
    )


def extract_citation_events(index: Index, q: Query, candidates: Iterable[str]) -> EventScoreTable:
    cands = sorted(set(candidates))
    if not cands:
        raise ValueError("candidate set must be nonempty")
    matched = match_documents(index, q)
    ranks = index.pagerank
    now = index.now_year
    rows = []
    for a in cands:
        pids = index.author_pubs.get(a, ())
        on_topic = [p for p in pids if p in matched]
        topic_cites = [citation_count(index, p) for p in on_topic]
        per_year = [
            c / (max(now - index.publications[p].year, 0) + 1)
            for p, c in zip(on_topic, topic_cites)
        ]
        if pids:
            ind = bibliometric_indices(index, a, matched=matched)
            indices = [
                ind.h_index,
                ind.h_index_query,
                ind.contemporary_h_index,
                ind.trend_h_index,
                ind.individual_h_index,
                ind.g_index,
                ind.a_index,
                ind.e_index,
            ]
        else:
            indices = [0] * 8
        pr = [ranks.get(p, 0.0) for p in pids]
        rows.append(
            [
                sum(topic_cites),
                sum(citation_count(index, p) for p in pids),
                sum(topic_cites) / len(topic_cites) if topic_cites else 0.0,
                sum(per_year) / len(per_year) if per_year else 0.0,
                max(topic_cites, default=0),
                len(index.coauthors.get(a, ())),
                *indices,
                sum(pr),
                sum(pr) / len(pr) if pr else 0.0,
            ]
        )
    return EventScoreTable.from_raw("citation", cands, CITATION_EVENTS, rows)


EXTRACTORS = {
    "text": extract_text_events,
    "profile": extract_profile_events,
    "citation": extract_citation_events,
}


def extract(sensor_kind: str, index: Index, q: Query, candidates: Iterable[str]) -> EventScoreTable:
    try:
        fn = EXTRACTORS[sensor_kind]
    except KeyError:
        raise ValueError(f"unknown sensor {sensor_kind!r}") from None
    return fn(index, q, candidates)
