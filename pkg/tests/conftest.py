import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from expertfusion.corpus import Publication, build_index  # noqa: E402
from expertfusion.sensors import EventScoreTable  # noqa: E402

AUTHORS = ("author1", "author2", "author3")

# Raw event scores for the three-author "information retrieval" example.
PAPER_RAW = {
    "text": (("TF", "BM25"), [[9990, 1057], [9202, 1064], [9001, 939]]),
    "profile": (("Pubs", "Journ"), [[70, 10], [25, 7], [103, 32]]),
    "citation": (("Cits", "CitsQT"), [[903, 266], [417, 397], [1403, 487]]),
}


@pytest.fixture
def paper_tables():
    return {
        kind: EventScoreTable.from_raw(kind, AUTHORS, events, rows)
        for kind, (events, rows) in PAPER_RAW.items()
    }


def pub(pid, title, authors, year=2000, venue="SIGIR", kind="conference", refs=(), abstract=None):
    return Publication(pid, title, abstract, tuple(authors), year, venue, kind, tuple(refs))


TOY_PUBS = [
    pub("d1", "information retrieval models", ["x", "y"], 2000, "SIGIR", "conference", abstract="ranking documents for retrieval"),
    pub("d2", "retrieval evaluation", ["x"], 2004, "IRJ", "journal", refs=["d1"]),
    pub("d3", "graph algorithms", ["y", "z"], 2002, "SODA", "conference", refs=["d1", "d2"]),
    pub("d4", "information theory", ["z"], 2006, "IRJ", "journal", refs=["d2"]),
    pub("d5", "sorting networks", ["w"], 2003, "SODA", "conference", refs=["d3"]),
]


@pytest.fixture
def toy_pubs():
    return list(TOY_PUBS)


@pytest.fixture
def toy_index():
    return build_index(TOY_PUBS)
