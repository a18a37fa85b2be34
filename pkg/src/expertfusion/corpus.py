"""Corpus loading, tokenization and the immutable query-time index."""

from __future__ import annotations

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable

logger = logging.getLogger(__name__)

VENUE_KINDS = ("conference", "journal")

STOPWORDS = frozenset(
    """
    a about above after again against all am an and any are as at be because
    been before being below between both but by can did do does doing down
    during each few for from further had has have having he her here hers
    him his how if in into is it its itself just me more most my no nor not
    now of off on once only or other our ours out over own same she should
    so some such than that the their theirs them then there these they this
    those through to too under until up very was we were what when where
    which while who whom why will with you your yours
    """.split()
)

_SPLIT = re.compile(r"[^0-9a-z]+")


class CorpusError(ValueError):
    """Raised when a corpus file or publication collection is invalid."""


def tokenize(text: str | None) -> list[str]:
    """Lowercase, split on non-alphanumerics, drop short tokens and stopwords."""
    if not text:
        return []
    return [
        tok
        for tok in _SPLIT.split(text.lower())
        if len(tok) >= 2 and tok not in STOPWORDS
    ]


@dataclass(frozen=True)
class Publication:
    pub_id: str
    title: str
    abstract: str | None
    author_ids: tuple[str, ...]
    year: int
    venue: str
    venue_kind: str
    references: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.pub_id:
            raise CorpusError("pub_id must be nonempty")
        if not self.author_ids:
            raise CorpusError(f"{self.pub_id}: author list is empty")
        if len(set(self.author_ids)) != len(self.author_ids):
            raise CorpusError(f"{self.pub_id}: duplicate author in author list")
        if self.year <= 0:
            raise CorpusError(f"{self.pub_id}: year must be positive")
        if self.venue_kind not in VENUE_KINDS:
            raise CorpusError(f"{self.pub_id}: unknown venue_kind {self.venue_kind!r}")
        if self.pub_id in self.references:
            raise CorpusError(f"{self.pub_id}: publication cites itself")

    @property
    def text(self) -> str:
        if self.abstract:
            return f"{self.title} {self.abstract}"
        return self.title

    def to_record(self) -> dict:
        return {
            "pub_id": self.pub_id,
            "title": self.title,
            "abstract": self.abstract,
            "authors": list(self.author_ids),
            "year": self.year,
            "venue": self.venue,
            "venue_kind": self.venue_kind,
            "references": list(self.references),
        }


@dataclass(frozen=True)
class Query:
    raw: str
    terms: tuple[str, ...]

    @classmethod
    def parse(cls, raw: str) -> "Query":
        terms = tuple(dict.fromkeys(tokenize(raw)))
        if not terms:
            raise ValueError(f"query {raw!r} has no indexable terms")
        return cls(raw, terms)


@dataclass
class LoadedCorpus:
    publications: list[Publication]
    self_citations_dropped: int = 0
    dangling_references: int = 0

    def __len__(self):
        return len(self.publications)

    def __iter__(self):
        return iter(self.publications)


_FIELDS = ("pub_id", "title", "abstract", "authors", "year", "venue", "venue_kind", "references")


def _parse_record(rec, lineno: int) -> tuple[Publication, int]:
    if not isinstance(rec, dict) or set(rec) != set(_FIELDS):
        raise CorpusError(f"line {lineno}: expected fields {', '.join(_FIELDS)}")
    refs = rec["references"]
    authors = rec["authors"]
    if not isinstance(refs, list) or not all(isinstance(r, str) for r in refs):
        raise CorpusError(f"line {lineno}: references must be an array of strings")
    if not isinstance(authors, list) or not all(isinstance(a, str) for a in authors):
        raise CorpusError(f"line {lineno}: authors must be an array of strings")
    if not isinstance(rec["year"], int) or isinstance(rec["year"], bool):
        raise CorpusError(f"line {lineno}: year must be an integer")
    for key in ("pub_id", "title", "venue", "venue_kind"):
        if not isinstance(rec[key], str):
            raise CorpusError(f"line {lineno}: {key} must be a string")
    if rec["abstract"] is not None and not isinstance(rec["abstract"], str):
        raise CorpusError(f"line {lineno}: abstract must be a string or null")

    kept = tuple(r for r in refs if r != rec["pub_id"])
    try:
        pub = Publication(
            pub_id=rec["pub_id"],
            title=rec["title"],
            abstract=rec["abstract"],
            author_ids=tuple(authors),
            year=rec["year"],
            venue=rec["venue"],
            venue_kind=rec["venue_kind"],
            references=kept,
        )
    except CorpusError as exc:
        raise CorpusError(f"line {lineno}: {exc}") from None
    return pub, len(refs) - len(kept)


def load_corpus(path: str | Path) -> LoadedCorpus:
    """Read a line-delimited JSON corpus.

    Self-citations are dropped and counted. References to unknown pub_ids
    stay on the record but are counted as dangling.
    """
    path = Path(path)
    pubs: list[Publication] = []
    seen: set[str] = set()
    self_cites = 0
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {lineno}: malformed record ({exc.msg})") from None
            pub, dropped = _parse_record(rec, lineno)
            if pub.pub_id in seen:
                raise CorpusError(f"line {lineno}: duplicate pub_id {pub.pub_id!r}")
            seen.add(pub.pub_id)
            self_cites += dropped
            pubs.append(pub)

    dangling = sum(1 for p in pubs for r in p.references if r not in seen)
    if self_cites:
        logger.warning("%s: dropped %d self-citation link(s)", path, self_cites)
    if dangling:
        logger.warning("%s: %d reference(s) to unknown publications", path, dangling)
    return LoadedCorpus(pubs, self_cites, dangling)


def write_corpus(pubs: Iterable[Publication], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for pub in pubs:
            fh.write(json.dumps(pub.to_record(), ensure_ascii=False) + "\n")


@dataclass(frozen=True, eq=False)
class Index:
    """Read-only statistics over a publication collection.

    ``postings`` maps term -> tuple of (pub_id, tf); ``doc_terms`` is the
    per-document view of the same counts.
    """

    publications: dict[str, Publication]
    postings: dict[str, tuple[tuple[str, int], ...]]
    doc_terms: dict[str, dict[str, int]]
    doc_len: dict[str, int]
    avg_doc_len: float
    num_docs: int
    author_pubs: dict[str, tuple[str, ...]]
    citation_in: dict[str, tuple[str, ...]]
    coauthors: dict[str, frozenset[str]]
    now_year: int
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def df(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    @property
    def authors(self) -> list[str]:
        return sorted(self.author_pubs)

    @property
    def citation_edges(self) -> int:
        return sum(len(v) for v in self.citation_in.values())

    @cached_property
    def references_out(self) -> dict[str, tuple[str, ...]]:
        """Citing -> cited, restricted to publications in the index."""
        return {
            pid: tuple(r for r in pub.references if r in self.publications)
            for pid, pub in self.publications.items()
        }

    @cached_property
    def pagerank(self) -> dict[str, float]:
        from .pagerank import pagerank

        return pagerank(self.references_out)

    def stats(self) -> dict[str, int]:
        return {
            "publications": self.num_docs,
            "authors": len(self.author_pubs),
            "citation_links": self.citation_edges,
            "terms": len(self.postings),
            "journal_papers": sum(
                1 for p in self.publications.values() if p.venue_kind == "journal"
            ),
            "conference_papers": sum(
                1 for p in self.publications.values() if p.venue_kind == "conference"
            ),
        }


def build_index(pubs: Iterable[Publication]) -> Index:
    pubs = list(pubs)
    if not pubs:
        raise CorpusError("cannot build an index from an empty collection")
    by_id: dict[str, Publication] = {}
    for pub in pubs:
        if pub.pub_id in by_id:
            raise CorpusError(f"duplicate pub_id {pub.pub_id!r}")
        by_id[pub.pub_id] = pub

    doc_terms: dict[str, dict[str, int]] = {}
    doc_len: dict[str, int] = {}
    postings: dict[str, list[tuple[str, int]]] = {}
    author_pubs: dict[str, list[str]] = {}
    citation_in: dict[str, list[str]] = {pid: [] for pid in by_id}
    coauthors: dict[str, set[str]] = {}

    for pid, pub in by_id.items():
        tokens = tokenize(pub.text)
        counts = dict(Counter(tokens))
        doc_terms[pid] = counts
        doc_len[pid] = len(tokens)
        for term, tf in counts.items():
            postings.setdefault(term, []).append((pid, tf))
        for a in pub.author_ids:
            author_pubs.setdefault(a, []).append(pid)
            coauthors.setdefault(a, set()).update(x for x in pub.author_ids if x != a)
        for ref in pub.references:
            if ref in by_id and ref != pid:
                citation_in[ref].append(pid)

    return Index(
        publications=by_id,
        postings={t: tuple(p) for t, p in sorted(postings.items())},
        doc_terms=doc_terms,
        doc_len=doc_len,
        avg_doc_len=sum(doc_len.values()) / len(doc_len),
        num_docs=len(by_id),
        author_pubs={a: tuple(p) for a, p in sorted(author_pubs.items())},
        citation_in={k: tuple(v) for k, v in citation_in.items()},
        coauthors={a: frozenset(c) for a, c in sorted(coauthors.items())},
        now_year=max(p.year for p in by_id.values()),
    )


def match_documents(index: Index, q: Query) -> set[str]:
    """Publications whose indexed text contains at least one query term."""
    matched: set[str] = set()
    for term in q.terms:
        matched.update(pid for pid, _ in index.postings.get(term, ()))
    return matched


def candidates_for_query(index: Index, q: Query) -> set[str]:
    return {
        a
        for pid in match_documents(index, q)
        for a in index.publications[pid].author_ids
    }
