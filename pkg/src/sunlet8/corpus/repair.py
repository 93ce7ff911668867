"""Turn a defective explicit decomposition into a valid one.

Defective blocks are dropped (as few as possible: of two blocks sharing an
edge only one has to go), and the searcher covers whatever the surviving
blocks leave uncovered.  If the residual cannot be decomposed, the blocks
around it are released as well and the search is retried on the larger hole.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from ..graphs import GraphSpec, edge_list
from ..search.engine import SearchConfig, search_edges
from ..sunlet import SunletBlock, block_edges_unchecked, format_block
from ..verify import Decomposition, verify


class UnrepairableError(RuntimeError):
    pass


@dataclass
class RepairResult:
    blocks: list[SunletBlock]
    removed: list[int]  # indices into the input sequence
    added: int
    notes: str


def _initial_removals(host: GraphSpec, blocks: Sequence[SunletBlock], limit: int = 8) -> list[set[int]]:
    """Small removal sets that leave no duplicated edge, best first."""
    rep = verify(Decomposition(host, tuple(blocks)))
    base = {i for i, _ in rep.bad_blocks} | {i for _, i in rep.foreign}
    clashes = [frozenset(set(idx) - base) for _, idx in rep.duplicated]
    out: list[set[int]] = []

    def rec(drop: set[int], rest: list[frozenset]) -> None:
        if len(out) >= limit:
            return
        live = [c - drop for c in rest if len(c - drop) > 1]
        if not live:
            if drop not in out:
                out.append(set(drop))
            return
        load = Counter(i for c in live for i in c)
        # keep one block of the first clash, drop the others; busiest candidates first
        first = live[0]
        for keep in sorted(first, key=lambda i: (load[i], i)):
            rec(drop | (first - {keep}), live[1:])

    rec(set(base), clashes)
    return out


def repair(
    host: GraphSpec,
    blocks: Sequence[SunletBlock],
    time_budget: float = 3.0,
    max_rounds: int = 4,
    seed: int = 0,
) -> RepairResult:
    blocks = list(blocks)
    if verify(Decomposition(host, tuple(blocks))).valid:
        return RepairResult(blocks, [], 0, "")
    host_edges = edge_list(host)
    starts = _initial_removals(host, blocks)
    for drop in starts:
        got = _attempt(host, host_edges, blocks, drop, time_budget, max_rounds, seed)
        if got is not None:
            return got
    raise UnrepairableError("no repair found")


def _attempt(host, host_edges, blocks, start, time_budget, rounds, seed, singles=4):
    """Grow the removal set from ``start`` until the hole is decomposable.

    First one block at a time (keeps the repair small), then, restarting from
    ``start``, by whole neighbourhoods of the hole.
    """
    for mode, steps in (("single", singles), ("ball", rounds)):
        drop = set(start)
        for _ in range(steps + 1):
            kept = [b for i, b in enumerate(blocks) if i not in drop]
            covered = {e for b in kept for e in block_edges_unchecked(b)}
            residual = [e for e in host_edges if e not in covered]
            if residual and len(residual) % 8 == 0:
                cfg = SearchConfig(time_budget=time_budget, seed=seed, restart_policy="luby-scaled")
                out = search_edges(residual, cfg)
                if out.found:
                    return _result(host, blocks, kept, drop, out.decomposition.blocks)
            rv = Counter(v for e in residual for v in e)
            free = [i for i in range(len(blocks)) if i not in drop]
            if not free:
                break
            if mode == "single":
                drop.add(max(free, key=lambda i: (sum(rv[v] for v in blocks[i].vertices()), -i)))
                continue
            more = {i for i in free if sum(v in rv for v in blocks[i].vertices()) >= 2}
            drop |= more or {i for i in free if any(v in rv for v in blocks[i].vertices())}
    return None


def _result(host, blocks, kept, drop, new):
    fixed = kept + list(new)
    if not verify(Decomposition(host, tuple(fixed))).valid:
        raise UnrepairableError("repaired decomposition failed verification")
    removed = sorted(drop)
    lines = [f"replaced {len(removed)} source block(s) by {len(new)} searched block(s):"]
    lines += [f"  removed #{i}: {format_block(blocks[i])}" for i in removed]
    return RepairResult(fixed, removed, len(new), "\n".join(lines))
