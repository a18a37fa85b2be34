"""Multi-sensor expert finding with entropy-weighted Dempster-Shafer fusion."""

from .corpus import Index, Publication, Query, build_index, load_corpus
from .evidence import MassFunction, ds_combine, multisensor_rank
from .fusion import RankedList, borda_fuse, combsum, condorcet_fuse
from .pipeline import RunConfig, search

__all__ = [
    "Index",
    "MassFunction",
    "Publication",
    "Query",
    "RankedList",
    "RunConfig",
    "borda_fuse",
    "build_index",
    "combsum",
    "condorcet_fuse",
    "ds_combine",
    "load_corpus",
    "multisensor_rank",
    "search",
]

__version__ = "0.1.0"
