"""Exact-decomposition checking: the ground truth for every other module."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .graphs import Edge, GraphSpec, describe, edge_count, edge_list
from .sunlet import SunletBlock, block_edges_unchecked, validate_block


@dataclass(frozen=True)
class Decomposition:
    host: GraphSpec
    blocks: tuple[SunletBlock, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(self.blocks))


@dataclass
class VerificationReport:
    duplicated: list[tuple[Edge, list[int]]] = field(default_factory=list)
    missing: list[Edge] = field(default_factory=list)
    foreign: list[tuple[Edge, int]] = field(default_factory=list)
    bad_blocks: list[tuple[int, str]] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not (self.duplicated or self.missing or self.foreign or self.bad_blocks)

    @property
    def status(self) -> str:
        return "valid" if self.valid else "invalid"

    def defect_blocks(self) -> set[int]:
        out = {i for i, _ in self.bad_blocks}
        out.update(i for _, i in self.foreign)
        for _, idx in self.duplicated:
            out.update(idx)
        return out

    def summary(self) -> str:
        return (
            f"{self.status}: {len(self.duplicated)} duplicated, {len(self.missing)} missing, "
            f"{len(self.foreign)} foreign, {len(self.bad_blocks)} bad blocks"
        )

    def lines(self, limit: int | None = None) -> list[str]:
        """Human-readable defect listing, one defect per line."""
        out = [self.summary()]
        rows: list[str] = []
        rows += [f"bad-block {i}: {why}" for i, why in self.bad_blocks]
        rows += [f"duplicated {a}-{b} in blocks {idx}" for (a, b), idx in self.duplicated]
        rows += [f"foreign {a}-{b} in block {i}" for (a, b), i in self.foreign]
        rows += [f"missing {a}-{b}" for a, b in self.missing]
        if limit is not None and len(rows) > limit:
            rows = rows[:limit] + [f"... {len(rows) - limit} more"]
        return out + rows


def verify(d: Decomposition) -> VerificationReport:
    """Check that ``d.blocks`` partition the edges of ``d.host`` into L8 copies.

    Every defect is reported, not only the first.
    """
    host = d.host
    report = VerificationReport()
    host_edges = set(edge_list(host))
    seen: dict[Edge, int] = {}
    dup: dict[Edge, list[int]] = defaultdict(list)
    for idx, block in enumerate(d.blocks):
        vs = block.cycle + block.pendants
        if len(vs) != 8 or len(set(vs)) != 8:
            report.bad_blocks.append((idx, validate_block(block, host) or "malformed"))
            continue
        for e in block_edges_unchecked(block):
            if e not in host_edges:
                report.foreign.append((e, idx))
                continue
            first = seen.setdefault(e, idx)
            if first != idx:
                if not dup[e]:
                    dup[e].append(first)
                dup[e].append(idx)
    report.duplicated = sorted(dup.items())
    report.foreign.sort()
    if len(seen) != len(host_edges):
        report.missing = sorted(host_edges.difference(seen))
    foreign_blocks = {i for _, i in report.foreign}
    for i in sorted(foreign_blocks):
        why = validate_block(d.blocks[i], host)
        if why is not None and why.startswith("out-of-range"):
            report.bad_blocks.append((i, why))
    report.bad_blocks.sort()
    return report


def verify_bruteforce(host: GraphSpec, blocks: Sequence[SunletBlock]) -> bool:
    """Independent multiset comparison used to cross-check :func:`verify`.

    Deliberately shares nothing with :func:`verify` beyond the edge listing:
    edges are rebuilt from the matrix columns and compared as sorted lists.
    """
    claimed: list[tuple] = []
    for b in blocks:
        if len(set(b.cycle) | set(b.pendants)) != 8:
            return False
        for i in range(4):
            for x, y in ((b.cycle[i], b.cycle[(i + 1) % 4]), (b.cycle[i], b.pendants[i])):
                claimed.append(tuple(sorted((tuple(x), tuple(y)))))
    expected = sorted(tuple(sorted((tuple(a), tuple(b)))) for a, b in edge_list(host))
    return sorted(claimed) == expected


def expected_blocks(host: GraphSpec) -> int:
    e = edge_count(host)
    if e % 8:
        raise ValueError(f"{describe(host)} has {e} edges, not a multiple of 8")
    return e // 8
