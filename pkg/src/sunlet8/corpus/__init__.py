"""Explicit decompositions shipped with the package, and the tools that make them."""

from .store import (
    CorpusEntry,
    CorpusError,
    ENV_DIR,
    corpus_verify,
    default_dir,
    dumps,
    list_ids,
    load,
    load_all,
    loads,
    store,
)
from .index import by_host, lookup

__all__ = [
    "CorpusEntry",
    "CorpusError",
    "ENV_DIR",
    "by_host",
    "corpus_verify",
    "default_dir",
    "dumps",
    "list_ids",
    "load",
    "load_all",
    "loads",
    "lookup",
    "store",
]
