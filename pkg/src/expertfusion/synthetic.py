"""Seeded synthetic bibliographic corpus with known topic experts.

Designated experts publish more, write more on-topic papers and attract
more citations. Two kinds of distractors make the sensors disagree:
prolific generalists (long publication records spread over many topics)
and keyword-heavy newcomers (on-topic titles but few citations).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Publication

TOPICS = {
    "information retrieval": "search ranking query relevance index document retrieval engine",
    "machine learning": "classifier training kernel model supervised feature learning boosting",
    "computer vision": "image segmentation object recognition camera visual detection pixel",
    "natural language processing": "parsing syntax semantic corpus grammar tagging lexical translation",
    "database systems": "transaction sql relational schema storage indexing concurrency optimizer",
    "computer networks": "routing protocol packet wireless congestion bandwidth latency switch",
    "software engineering": "testing requirements refactoring maintenance defect design verification code",
    "distributed computing": "consensus replication cluster fault grid peer scheduling parallel",
    "computational biology": "protein gene sequence genome alignment expression molecular phylogeny",
    "computer graphics": "rendering mesh shading animation texture geometry lighting surface",
}

GENERAL_WORDS = (
    "approach method novel efficient framework analysis system evaluation study "
    "towards improved scalable robust adaptive using based new large scale "
    "theory practice experiments results performance applications data "
    "algorithm algorithms techniques model models problem problems framework"
).split()


@dataclass
class SyntheticBenchmark:
    publications: list[Publication]
    qrels: dict[str, set[str]]
    experts: dict[str, list[str]]


def generate(
    seed: int = 7,
    num_authors: int = 400,
    experts_per_topic: int = 6,
    first_year: int = 1985,
    last_year: int = 2010,
) -> SyntheticBenchmark:
    rng = np.random.default_rng(seed)
    topics = list(TOPICS)
    vocab = {t: TOPICS[t].split() for t in topics}
    n_topics = len(topics)

    authors = [f"a{i:04d}" for i in range(num_authors)]
    expert_of: dict[str, str] = {}
    experts: dict[str, list[str]] = {t: [] for t in topics}
    order = rng.permutation(num_authors)
    cursor = 0
    for t in topics:
        for _ in range(experts_per_topic):
            a = authors[order[cursor]]
            cursor += 1
            expert_of[a] = t
            experts[t].append(a)
    others = [authors[i] for i in order[cursor:]]
    home = {a: topics[int(rng.integers(n_topics))] for a in others}
    for a, t in expert_of.items():
        home[a] = t
    kind = {a: "expert" for a in expert_of}
    for a in others:
        u = rng.random()
        kind[a] = "generalist" if u < 0.12 else "newcomer" if u < 0.30 else "regular"
    by_home: dict[str, list[str]] = {t: [] for t in topics}
    for a in others:
        by_home[home[a]].append(a)

    def title_for(topic: str, on_query: float) -> str:
        words = []
        if rng.random() < on_query:
            qwords = topic.split()
            k = int(rng.integers(1, len(qwords) + 1))
            words += list(rng.choice(qwords, size=k, replace=False))
        words += list(rng.choice(vocab[topic], size=int(rng.integers(2, 4)), replace=False))
        words += list(rng.choice(GENERAL_WORDS, size=int(rng.integers(2, 4)), replace=False))
        rng.shuffle(words)
        return " ".join(words)

    def abstract_for(topic: str, on_query: float) -> str | None:
        if rng.random() < 0.4:
            return None
        parts = [title_for(topic, on_query) for _ in range(int(rng.integers(2, 5)))]
        return ". ".join(parts)

    drafts = []
    for a in authors:
        k = kind[a]
        if k == "expert":
            n_pubs = 6 + int(rng.poisson(6))
            start = int(rng.integers(first_year, first_year + 12))
            p_home, p_query, p_journal = 0.8, 0.55, 0.4
        elif k == "generalist":
            n_pubs = 8 + int(rng.poisson(8))
            start = int(rng.integers(first_year, first_year + 10))
            p_home, p_query, p_journal = 0.2, 0.35, 0.45
        elif k == "newcomer":
            n_pubs = 1 + int(rng.poisson(2))
            start = int(rng.integers(last_year - 4, last_year + 1))
            p_home, p_query, p_journal = 0.95, 0.9, 0.1
        else:
            n_pubs = 1 + int(rng.poisson(1.5))
            start = int(rng.integers(first_year + 5, last_year + 1))
            p_home, p_query, p_journal = 0.5, 0.4, 0.2
        for _ in range(n_pubs):
            topic = home[a] if rng.random() < p_home else topics[int(rng.integers(n_topics))]
            year = int(rng.integers(start, last_year + 1))
            co = []
            for _ in range(int(rng.poisson(1.2))):
                pool = experts[topic] if (k == "expert" and rng.random() < 0.4) else by_home[topic]
                if pool:
                    c = pool[int(rng.integers(len(pool)))]
                    if c != a and c not in co:
                        co.append(c)
            is_journal = rng.random() < p_journal
            venue_idx = int(rng.integers(2))
            drafts.append(
                {
                    "authors": (a, *co),
                    "topic": topic,
                    "year": year,
                    "title": title_for(topic, p_query),
                    "abstract": abstract_for(topic, p_query),
                    "venue_kind": "journal" if is_journal else "conference",
                    "venue": f"{'J' if is_journal else 'C'}-{topics.index(topic)}-{venue_idx}",
                    "expert_paper": k == "expert" and topic == home[a],
                }
            )

    drafts.sort(key=lambda d: (d["year"], d["authors"][0], d["title"]))
    ids = [f"p{i:05d}" for i in range(len(drafts))]
    years = np.array([d["year"] for d in drafts])
    topic_idx = np.array([topics.index(d["topic"]) for d in drafts])
    attract = np.array([6.0 if d["expert_paper"] else 1.0 for d in drafts])

    pubs = []
    for i, d in enumerate(drafts):
        earlier = np.flatnonzero(years < d["year"])
        refs: list[str] = []
        if earlier.size:
            w = attract[earlier] * np.where(topic_idx[earlier] == topic_idx[i], 6.0, 1.0)
            n_refs = min(int(rng.poisson(5)), earlier.size)
            if n_refs:
                picked = rng.choice(earlier, size=n_refs, replace=False, p=w / w.sum())
                refs = [ids[j] for j in sorted(picked)]
        pubs.append(
            Publication(
                pub_id=ids[i],
                title=d["title"],
                abstract=d["abstract"],
                author_ids=tuple(d["authors"]),
                year=d["year"],
                venue=d["venue"],
                venue_kind=d["venue_kind"],
                references=tuple(refs),
            )
        )
    qrels = {t: set(experts[t]) for t in topics}
    return SyntheticBenchmark(pubs, qrels, experts)
