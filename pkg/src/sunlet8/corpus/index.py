"""Host -> corpus entry lookup, loaded once per corpus directory."""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from typing import Optional

from ..graphs import GraphSpec
from .store import CorpusEntry, default_dir, load_all


@lru_cache(maxsize=8)
def _index(directory: str) -> dict[GraphSpec, CorpusEntry]:
    out: dict[GraphSpec, CorpusEntry] = {}
    for entry in load_all(Path(directory)).values():
        out.setdefault(entry.host, entry)
    return out


def by_host(directory: Optional[Path] = None) -> dict[GraphSpec, CorpusEntry]:
    return _index(str(directory or default_dir()))


def lookup(host: GraphSpec, directory: Optional[Path] = None) -> Optional[CorpusEntry]:
    return by_host(directory).get(host)
