"""Corpus entries and their one-file-per-entry text format.

::

    host cartesian 8 10
    provenance paper-appendix
    blk c 0,0 0,5 0,1 0,6 p 0,2 0,7 0,3 0,8
    ...
    # free-text notes

Indices are 0-based.  The format is canonical: ``dumps(loads(t)) == t`` for
every file written by :func:`dumps`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..graphs import GraphSpec, SpecError, Vertex, format_spec, parse_spec
from ..sunlet import SunletBlock
from ..verify import Decomposition, VerificationReport, verify

# "composed" marks composer output written in the same format
PROVENANCE = ("paper-appendix", "search-derived", "repaired", "composed")
ENV_DIR = "SUNLET8_CORPUS"
SUFFIX = ".txt"
# one id per line; a directory with a manifest must hold exactly those entries
MANIFEST = "MANIFEST"


class CorpusError(OSError):
    """Missing, unreadable or malformed corpus data."""


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    host: GraphSpec
    blocks: tuple[SunletBlock, ...]
    provenance: str
    notes: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if self.provenance not in PROVENANCE:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if self.provenance == "repaired" and not self.notes.strip():
            raise ValueError("a repaired entry must say which blocks were replaced")

    def decomposition(self) -> Decomposition:
        return Decomposition(self.host, self.blocks)


def _vertex(tok: str) -> Vertex:
    r, sep, c = tok.partition(",")
    if not sep:
        raise ValueError(f"bad vertex {tok!r}")
    return Vertex(int(r), int(c))


def dumps(entry: CorpusEntry) -> str:
    out = [f"host {format_spec(entry.host)}", f"provenance {entry.provenance}"]
    for b in entry.blocks:
        out.append("blk c " + " ".join(map(str, b.cycle)) + " p " + " ".join(map(str, b.pendants)))
    for line in entry.notes.splitlines():
        out.append(f"# {line}")
    return "\n".join(out) + "\n"


def loads(text: str, id: str) -> CorpusEntry:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 2 or not lines[0].startswith("host ") or not lines[1].startswith("provenance "):
        raise CorpusError(f"{id}: missing host/provenance header")
    try:
        host = parse_spec(lines[0][5:])
    except SpecError as exc:
        raise CorpusError(f"{id}: {exc}") from exc
    prov = lines[1][len("provenance "):].strip()
    blocks = []
    notes = []
    for no, line in enumerate(lines[2:], 3):
        if line.startswith("#"):
            notes.append(line[2:] if line.startswith("# ") else line[1:])
            continue
        toks = line.split()
        if len(toks) != 11 or toks[0] != "blk" or toks[1] != "c" or toks[6] != "p":
            raise CorpusError(f"{id}:{no}: malformed block line")
        try:
            blocks.append(
                SunletBlock(tuple(_vertex(t) for t in toks[2:6]), tuple(_vertex(t) for t in toks[7:11]))
            )
        except ValueError as exc:
            raise CorpusError(f"{id}:{no}: {exc}") from exc
    try:
        return CorpusEntry(id, host, tuple(blocks), prov, "\n".join(notes))
    except ValueError as exc:
        raise CorpusError(f"{id}: {exc}") from exc


def default_dir() -> Path:
    env = os.environ.get(ENV_DIR)
    if env:
        return Path(env)
    return Path(__file__).with_name("data")


def entry_path(id: str, directory: Optional[Path] = None) -> Path:
    return Path(directory or default_dir()) / f"{id}{SUFFIX}"


def store(entry: CorpusEntry, directory: Optional[Path] = None) -> Path:
    p = entry_path(entry.id, directory)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(entry))
    return p


def load(id: str, directory: Optional[Path] = None) -> CorpusEntry:
    p = entry_path(id, directory)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read corpus entry {id}: {exc}") from exc
    return loads(text, id)


def read_manifest(directory: Optional[Path] = None) -> Optional[list[str]]:
    p = Path(directory or default_dir()) / MANIFEST
    if not p.is_file():
        return None
    return sorted(line.strip() for line in p.read_text(encoding="utf-8").splitlines() if line.strip())


def write_manifest(ids, directory: Optional[Path] = None) -> Path:
    p = Path(directory or default_dir()) / MANIFEST
    with open(p, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("".join(f"{i}\n" for i in sorted(set(ids))))
    return p


def list_ids(directory: Optional[Path] = None) -> list[str]:
    d = Path(directory or default_dir())
    if not d.is_dir():
        raise CorpusError(f"corpus directory {d} does not exist")
    ids = sorted(p.name[: -len(SUFFIX)] for p in d.glob(f"*{SUFFIX}"))
    listed = read_manifest(d)
    if listed is not None:
        gone = sorted(set(listed) - set(ids))
        if gone:
            raise CorpusError(f"corpus directory {d} lacks listed entries: {', '.join(gone)}")
        extra = sorted(set(ids) - set(listed))
        if extra:
            raise CorpusError(f"corpus directory {d} holds unlisted entries: {', '.join(extra)}")
    if not ids:
        raise CorpusError(f"corpus directory {d} holds no entries")
    return ids


def load_all(directory: Optional[Path] = None) -> dict[str, CorpusEntry]:
    return {i: load(i, directory) for i in list_ids(directory)}


def corpus_verify(directory: Optional[Path] = None) -> dict[str, VerificationReport]:
    return {i: verify(e.decomposition()) for i, e in load_all(directory).items()}
