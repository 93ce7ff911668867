"""Regenerate the shipped corpus files.

Appendix entries come from the family files in ``appendix/``; anything that
fails verification goes through :func:`repair`.  The remaining bricks are
found by search with fixed seeds, so a rebuild reproduces the same files.

    python -m sunlet8.corpus.build [--only ID ...] [--out DIR]
"""

from __future__ import annotations

import argparse
import logging
import time
from pathlib import Path
from typing import Optional

from ..graphs import parse_spec
from ..search.cyclic import cyclic_search
from ..search.engine import SearchConfig, search
from ..search.orbit import rotation_search
from ..search.twophase import two_phase_search
from ..verify import Decomposition, verify
from .families import expand_text
from .repair import repair
from .store import CorpusEntry, default_dir, read_manifest, store, write_manifest

log = logging.getLogger(__name__)

APPENDIX_DIR = Path(__file__).with_name("appendix")

# id -> (host, method, seed); method "dfs" is the exact-cover engine, "cyclic"
# the difference method (host must be K_n or an odd x odd product),
# "twophase" the cycles-first search, "orbit" orbits under column rotation
BRICKS: dict[str, tuple[str, str, int]] = {
    "fig-1": ("cartesian 4 4", "dfs", 0),
    "k16": ("complete 16", "dfs", 0),
    "k17": ("complete 17", "cyclic", 0),
    "bip-4-4": ("bipartite 4 4", "dfs", 0),
    "bip-8-6": ("bipartite 8 6", "dfs", 0),
    "bip-8-7": ("bipartite 8 7", "dfs", 0),
    "bip-8-8": ("bipartite 8 8", "dfs", 0),
    "bip-8-9": ("bipartite 8 9", "dfs", 0),
    "bip-8-10": ("bipartite 8 10", "dfs", 0),
    "bip-8-11": ("bipartite 8 11", "dfs", 0),
    "bip-8-13": ("bipartite 8 13", "dfs", 0),
    "cart-8-2": ("cartesian 8 2", "twophase", 0),
    "cart-4-2": ("cartesian 4 2", "twophase", 0),
    "cart-4-6": ("cartesian 4 6", "twophase", 0),
    "cart-4-10": ("cartesian 4 10", "orbit", 0),
    "cart-15-19": ("cartesian 15 19", "cyclic", 0),
    "cart-13-21": ("cartesian 13 21", "cyclic", 0),
}


def appendix_ids() -> list[str]:
    return sorted(p.stem for p in APPENDIX_DIR.glob("*.fam"))


def expand_appendix(id: str, time_budget: float = 3.0) -> CorpusEntry:
    """Expand one appendix section; repair it if the expansion does not verify."""
    path = APPENDIX_DIR / f"{id}.fam"
    if not path.is_file():
        raise KeyError(f"no appendix section {id!r}")
    exp = expand_text(path.read_text(encoding="utf-8"))
    rep = verify(Decomposition(exp.host, tuple(exp.blocks)))
    if rep.valid and not exp.failures:
        return CorpusEntry(id, exp.host, tuple(exp.blocks), "paper-appendix")
    fixed = repair(exp.host, exp.blocks, time_budget=time_budget)
    notes = [f"expanded {len(exp.blocks)} blocks; {rep.summary()}"]
    for line, env, template, why in exp.failures:
        notes.append(f"unexpandable template (family line {line}, {env}): {template}: {why}")
    notes.append(fixed.notes)
    return CorpusEntry(id, exp.host, tuple(fixed.blocks), "repaired", "\n".join(notes))


def derive_brick(id: str, time_budget: float = 600.0) -> CorpusEntry:
    spec, method, seed = BRICKS[id]
    host = parse_spec(spec)
    t0 = time.monotonic()
    if method == "cyclic":
        if host.__class__.__name__ == "Complete":
            out = cyclic_search(1, host.order, seed=seed, time_budget=time_budget)
        else:
            out = cyclic_search(host.m, host.n, seed=seed, time_budget=time_budget)
    elif method == "orbit":
        out = rotation_search(host.m, host.n, time_budget=time_budget, seed=seed)
    elif method == "twophase":
        out = two_phase_search(host, time_budget=time_budget)
    else:
        cfg = SearchConfig(time_budget=time_budget, seed=seed, restart_policy="luby-scaled", ceiling=10**6)
        out = search(host, cfg)
    if not out.found:
        raise RuntimeError(f"{id}: search ended with {out.result}")
    note = f"{method} search, seed {seed}, {out.stats.nodes} nodes, {time.monotonic() - t0:.2f}s"
    return CorpusEntry(id, host, out.decomposition.blocks, "search-derived", note)


def build(only: Optional[list[str]] = None, out: Optional[Path] = None) -> list[CorpusEntry]:
    wanted = only or appendix_ids() + list(BRICKS)
    done = []
    for id in wanted:
        entry = expand_appendix(id) if id in appendix_ids() else derive_brick(id)
        if not verify(entry.decomposition()).valid:
            raise RuntimeError(f"{id} does not verify")
        store(entry, out or default_dir())
        log.info("%s: %d blocks, %s", id, len(entry.blocks), entry.provenance)
        done.append(entry)
    target = out or default_dir()
    write_manifest((read_manifest(target) or []) + [e.id for e in done], target)
    return done


def main(argv: Optional[list[str]] = None) -> int:
    ap = argparse.ArgumentParser(prog="python -m sunlet8.corpus.build")
    ap.add_argument("--only", nargs="*")
    ap.add_argument("--out", type=Path)
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    build(args.only, args.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
