"""Hill climbing over adjacency matrices with frozen seed regions.

A template fixes some vertex pairs as edges or non-edges; the remaining free
pairs start random and are flipped one at a time.  A flip is kept when the
number of family members contained in the graph does not drop.  Scores are
memoised per free-pair pattern for the life of one restart, and scoring
stops early (returning -1) once the current score can no longer be reached.
"""

from __future__ import annotations

import multiprocessing as mp
import time
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from . import _kernels as K
from .graph import Graph, encode_graph6
from .iso import from_rows, to_rows
from .records import RunRecord
from .search import GraphFamily, OrderingStrategy, Strategy, order_family, rng_for, trial_seed
from .verify import verify_universal

Pair = tuple[int, int]


@dataclass(frozen=True)
class SeedTemplate:
    order: int
    frozen_ones: frozenset[Pair]
    frozen_zeros: frozenset[Pair]
    free_pairs: tuple[Pair, ...]
    init_probability: float
    kind: str = ""
    k: int = 0

    def __post_init__(self) -> None:
        every = set(combinations(range(self.order), 2))
        parts = [set(self.frozen_ones), set(self.frozen_zeros), set(self.free_pairs)]
        if sum(map(len, parts)) != len(every) or set().union(*parts) != every:
            raise ValueError("frozen and free pairs must partition all vertex pairs")


def make_seed_template(kind: str, k: int, n: int) -> SeedTemplate:
    """``clique-indep``: clique on 0..k-1 and independent set on k-1..2k-2.

    ``star``: centre 0 joined to 1..k-1, leaves pairwise non-adjacent.
    """
    if kind == "clique-indep":
        if n < 2 * k - 1:
            raise ValueError(f"clique-indep with k={k} needs n >= {2 * k - 1}, got {n}")
        ones = set(combinations(range(k), 2))
        zeros = set(combinations(range(k - 1, 2 * k - 1), 2))
        prob = 0.5
    elif kind == "star":
        if n < k:
            raise ValueError(f"star with k={k} needs n >= {k}, got {n}")
        ones = {(0, i) for i in range(1, k)}
        zeros = set(combinations(range(1, k), 2))
        prob = 0.1
    else:
        raise ValueError(f"unknown template kind {kind!r}")
    free = tuple(p for p in combinations(range(n), 2) if p not in ones and p not in zeros)
    return SeedTemplate(n, frozenset(ones), frozenset(zeros), free, prob, kind, k)


def default_max_iter(k: int) -> int:
    return 10000 if k >= 7 else 1000


@dataclass
class ClimbConfig:
    template: SeedTemplate
    family: GraphFamily
    max_iter: int = 1000
    time_limit: float = 60.0
    rng_seed: int = 0
    max_restarts: Optional[int] = None
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass
class ClimbStats:
    restarts: int = 0
    iterations: int = 0
    subiso_calls: int = 0
    cache_hits: int = 0
    best_score: int = -1


def score(g: Graph, family: GraphFamily, floor: int = 0) -> int:
    """Members of ``family`` contained in ``g``; -1 as soon as that drops below ``floor``."""
    fam_adj, fam_n = family.arrays
    ws = K.make_workspace(max(family.max_order, 1))
    s, _ = K.score_graph(fam_adj, fam_n, to_rows(g), g.order, floor, *ws)
    return int(s)


def _climb(config: ClimbConfig, seed: int, deadline: float, trace: Optional[list]):
    tpl = config.template
    n = tpl.order
    fam = config.family
    fam_adj, fam_n = fam.arrays
    total = len(fam)
    ws = K.make_workspace(max(fam.max_order, 1))
    rng = rng_for(seed)
    stats = ClimbStats()
    free = np.array(tpl.free_pairs, dtype=np.int64).reshape(-1, 2)
    base = np.zeros(max(n, 1), dtype=np.int64)[:n]
    for u, v in tpl.frozen_ones:
        base[u] |= 1 << v
        base[v] |= 1 << u

    def scored(g, floor):
        s, c = K.score_graph(fam_adj, fam_n, g, n, floor, *ws)
        stats.subiso_calls += int(c)
        return int(s)

    while True:
        if config.max_restarts is not None and stats.restarts >= config.max_restarts:
            return None, stats
        if stats.restarts and time.monotonic() >= deadline:
            return None, stats
        stats.restarts += 1
        g = base.copy()
        init = rng.random(len(free)) < tpl.init_probability
        key = 0
        for idx in np.flatnonzero(init):
            u, v = free[idx]
            g[u] ^= 1 << v
            g[v] ^= 1 << u
            key ^= 1 << int(idx)
        cache: dict[int, int] = {}
        cur = scored(g, 0)
        cache[key] = cur
        stats.best_score = max(stats.best_score, cur)
        if trace is not None:
            trace.append((stats.restarts, 0, cur, tuple(int(x) for x in g)))
        if cur == total:
            return g, stats
        for it in range(1, config.max_iter + 1):
            if not len(free):
                break
            idx = int(rng.integers(len(free)))
            u, v = free[idx]
            g[u] ^= 1 << v
            g[v] ^= 1 << u
            nkey = key ^ (1 << idx)
            stats.iterations += 1
            s = cache.get(nkey)
            if s is None:
                s = scored(g, cur)
                cache[nkey] = s
            else:
                stats.cache_hits += 1
            if s >= cur:
                cur, key = s, nkey
                stats.best_score = max(stats.best_score, cur)
                if trace is not None:
                    trace.append((stats.restarts, it, cur, tuple(int(x) for x in g)))
                if cur == total:
                    return g, stats
            else:
                g[u] ^= 1 << v
                g[v] ^= 1 << u
            if time.monotonic() >= deadline:
                return None, stats


def _worker(args):
    config, seed, deadline_in = args
    g, stats = _climb(config, seed, time.monotonic() + deadline_in, None)
    return (None if g is None else tuple(int(x) for x in g)), stats, seed


def hill_climb(config: ClimbConfig, trace: Optional[list] = None
               ) -> tuple[Optional[Graph], RunRecord]:
    """Climb until a universal graph is found, restarts run out or time is up.

    Worker ``i`` climbs with seed ``trial_seed(rng_seed, i)``; ``jobs=1``
    is exactly worker 0.  A returned graph has been certified by the
    independent checker.
    """
    start = time.monotonic()
    fam = order_family(config.family, OrderingStrategy(Strategy.AUTOMORPHISMS))
    config = ClimbConfig(config.template, fam, config.max_iter, config.time_limit,
                         config.rng_seed, config.max_restarts, config.jobs)
    seeds = [trial_seed(config.rng_seed, i) for i in range(max(config.jobs, 1))]
    stats = ClimbStats()
    rows = None
    winner = None
    if config.jobs <= 1:
        rows, stats = _climb(config, seeds[0], start + config.time_limit, trace)
        winner = seeds[0]
    else:
        ctx = mp.get_context("fork")
        with ctx.Pool(config.jobs) as pool:
            for res, st, seed in pool.imap_unordered(
                    _worker, [(config, s, config.time_limit) for s in seeds]):
                stats.restarts += st.restarts
                stats.iterations += st.iterations
                stats.subiso_calls += st.subiso_calls
                stats.cache_hits += st.cache_hits
                stats.best_score = max(stats.best_score, st.best_score)
                if res is not None:
                    rows, winner = res, seed
                    pool.terminate()
                    break
    graph = None
    verified = False
    if rows is not None:
        graph = from_rows(rows, config.template.order)
        cert = verify_universal(graph, fam)
        verified = cert.valid
        if not verified:
            graph = None
    record = RunRecord(
        command="search-heuristic",
        flags={
            "template": config.template.kind, "k": config.template.k,
            "order": config.template.order, "max_iter": config.max_iter,
            "time_limit": config.time_limit, "jobs": config.jobs,
            "max_restarts": config.max_restarts,
        },
        seeds=[config.rng_seed] + ([winner] if winner is not None else []),
        family=fam.label,
        stats={
            "restarts": stats.restarts, "iterations": stats.iterations,
            "subiso_calls": stats.subiso_calls, "cache_hits": stats.cache_hits,
            "best_score": stats.best_score, "family_size": len(fam),
            "verified": verified,
        },
        results=[encode_graph6(graph)] if graph is not None else [],
        wall_seconds=round(time.monotonic() - start, 3),
    )
    return graph, record
