"""Brute-force search for induced universal graphs and family orderings.

A candidate is universal when every family member embeds in it as an
induced subgraph.  Members are tested in family order and the test stops at
the first failure, so the order of the family only changes how many solver
calls a scan needs, never which candidates pass.
"""

from __future__ import annotations

import csv
import enum
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional, Sequence

import numpy as np

from . import _kernels as K
from .enumeration import GraphStream, all_graphs, all_trees, candidates, graphs_from_file
from .graph import Graph, edge_extremeness
from .iso import automorphism_count, canonical_graph6, from_rows, to_rows


class MissingCandidates(LookupError):
    """No candidate stream is available for an order the search needs."""


@dataclass
class GraphFamily:
    members: list[Graph]
    label: str = ""
    kind: str = "file"
    k: Optional[int] = None

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Graph]:
        return iter(self.members)

    def reordered(self, members: list[Graph]) -> GraphFamily:
        return GraphFamily(members, self.label, self.kind, self.k)

    @cached_property
    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Padded row matrix and order vector for the compiled scanners."""
        width = max([g.order for g in self.members] + [1])
        adj = np.zeros((len(self.members), width), dtype=np.int64)
        orders = np.zeros(len(self.members), dtype=np.int64)
        for i, g in enumerate(self.members):
            adj[i, :g.order] = to_rows(g)
            orders[i] = g.order
        return adj, orders

    @property
    def max_order(self) -> int:
        return max([g.order for g in self.members] + [0])


def family_from_descriptor(desc: str) -> GraphFamily:
    """Parse ``all:K``, ``trees:K`` or ``file:PATH``."""
    kind, sep, arg = desc.partition(":")
    if not sep or not arg:
        raise ValueError(f"bad family descriptor {desc!r}; use all:K, trees:K or file:PATH")
    if kind == "all":
        k = int(arg)
        return GraphFamily(list(all_graphs(k)), f"all graphs order {k}", "all", k)
    if kind == "trees":
        k = int(arg)
        return GraphFamily(all_trees(k), f"trees order {k}", "trees", k)
    if kind == "file":
        path = Path(arg)
        with path.open() as fh:
            first = next((ln for ln in fh if ln.strip()), None)
        if first is None:
            return GraphFamily([], f"file {path}", "file", None)
        from .graph import decode_graph6
        order = decode_graph6(first.strip()).order
        members = list(graphs_from_file(path, order))
        return GraphFamily(members, f"file {path}", "file", order)
    raise ValueError(f"unknown family kind {kind!r}; use all, trees or file")


# -- ordering strategies --------------------------------------------------


class Strategy(str, enum.Enum):
    AUTOMORPHISMS = "automorphisms"
    EDGES = "edges"
    ALMOST_RANDOM = "almost-random"
    RANDOM = "random"


@dataclass(frozen=True)
class OrderingStrategy:
    kind: Strategy
    rng_seed: int = 0
    randomize_ties: bool = False

    @classmethod
    def parse(cls, name: str, rng_seed: int = 0, randomize_ties: bool = False) -> OrderingStrategy:
        return cls(Strategy(name), rng_seed, randomize_ties)


def rng_for(seed: int) -> np.random.Generator:
    """PCG64 generator for ``seed``; the only generator used for shuffles."""
    return np.random.Generator(np.random.PCG64(seed))


def trial_seed(base_seed: int, trial: int) -> int:
    """Per-trial 64-bit seed derived from ``(base_seed, trial)``."""
    return int(np.random.SeedSequence([base_seed, trial]).generate_state(1, dtype=np.uint64)[0])


@lru_cache(maxsize=None)
def _aut(g: Graph) -> int:
    return automorphism_count(g)


@lru_cache(maxsize=None)
def _canon_key(g: Graph) -> str:
    return canonical_graph6(g)


def _shuffled(members: list[Graph], seed: int) -> list[Graph]:
    perm = rng_for(seed).permutation(len(members))
    return [members[i] for i in perm]


def order_family(family: GraphFamily, strategy: OrderingStrategy) -> GraphFamily:
    members = list(family.members)
    kind = strategy.kind
    if kind in (Strategy.AUTOMORPHISMS, Strategy.EDGES):
        key = _aut if kind is Strategy.AUTOMORPHISMS else edge_extremeness
        if strategy.randomize_ties:
            members = _shuffled(members, strategy.rng_seed)
            members.sort(key=lambda g: -key(g))
        else:
            members.sort(key=lambda g: (-key(g), _canon_key(g)))
        return family.reordered(members)
    members = _shuffled(members, strategy.rng_seed)
    if kind is Strategy.ALMOST_RANDOM:
        front = []
        for g in members:
            full = g.order * (g.order - 1) // 2
            if g.order == family.k and g.num_edges() in (0, full):
                front.append(g)
        # complete graph first, then the edgeless one
        front.sort(key=lambda g: -g.num_edges())
        members = front + [g for g in members if not any(g is h for h in front)]
    return family.reordered(members)


# -- universality ---------------------------------------------------------


@dataclass
class SearchStats:
    subiso_calls: int = 0
    candidates_tested: int = 0
    universal_found: int = 0

    def merge(self, other: SearchStats) -> SearchStats:
        self.subiso_calls += other.subiso_calls
        self.candidates_tested += other.candidates_tested
        self.universal_found += other.universal_found
        return self

    def as_dict(self) -> dict:
        return {
            "subiso_calls": self.subiso_calls,
            "candidates_tested": self.candidates_tested,
            "universal_found": self.universal_found,
        }


def is_induced_universal(family: GraphFamily, g: Graph, stats: Optional[SearchStats] = None) -> bool:
    fam_adj, fam_n = family.arrays
    ws = K.make_workspace(max(family.max_order, 1))
    ok, calls = K.check_universal(fam_adj, fam_n, to_rows(g), g.order, *ws)
    if stats is not None:
        stats.subiso_calls += int(calls)
    return bool(ok)


def _scan(fam_adj: np.ndarray, fam_n: np.ndarray, rows: np.ndarray, n: int):
    univ = np.zeros(rows.shape[0], dtype=np.bool_)
    calls = np.zeros(rows.shape[0], dtype=np.int64)
    K.scan_batch(fam_adj, fam_n, rows, n, univ, calls)
    return rows[univ], int(calls.sum()), rows.shape[0]


def _as_stream(cands) -> GraphStream:
    if isinstance(cands, GraphStream):
        return cands
    graphs = list(cands)
    orders = {g.order for g in graphs}
    if len(orders) > 1:
        raise ValueError(f"candidates have mixed orders {sorted(orders)}")
    n = orders.pop() if orders else 0
    rows = np.array([to_rows(g) for g in graphs], dtype=np.int64).reshape(len(graphs), n)

    def batches(size: int):
        for start in range(0, len(graphs), size):
            yield rows[start:start + size]

    return GraphStream(n, "candidate list", batches)


def default_jobs() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def all_induced_universal_graphs(family: GraphFamily, cands: GraphStream | Iterable[Graph],
                                 jobs: int = 1, batch: int = 16384
                                 ) -> tuple[list[Graph], SearchStats]:
    """Every candidate universal for ``family``, sorted by canonical graph6.

    With ``jobs > 1`` batches are scanned in worker processes; the result
    list and the summed counters do not depend on ``jobs``.
    """
    stream = _as_stream(cands)
    n = stream.order
    fam_adj, fam_n = family.arrays
    stats = SearchStats()
    found: list[np.ndarray] = []

    def absorb(res) -> None:
        rows, calls, tested = res
        stats.subiso_calls += calls
        stats.candidates_tested += tested
        stats.universal_found += rows.shape[0]
        found.append(rows)

    if jobs <= 1:
        for rows in stream.batches(batch):
            if rows.shape[1] != n:
                raise ValueError("candidate stream has mixed orders")
            absorb(_scan(fam_adj, fam_n, rows, n))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            pending = []
            for rows in stream.batches(batch):
                if rows.shape[1] != n:
                    raise ValueError("candidate stream has mixed orders")
                pending.append(pool.submit(_scan, fam_adj, fam_n, rows, n))
                if len(pending) >= 4 * jobs:
                    absorb(pending.pop(0).result())
            for fut in pending:
                absorb(fut.result())
    graphs = [from_rows(r, n) for part in found for r in part]
    graphs.sort(key=_canon_key)
    return graphs, stats


def known_lower_bound(k: int, family_kind: str = "all") -> int:
    """Smallest order an induced universal graph can have, from known bounds."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if family_kind == "trees":
        return k
    if family_kind != "all":
        raise ValueError(f"unknown family kind {family_kind!r}")
    bound = 2 * k - 1
    if k >= 4:
        bound = 2 * k
    if k >= 6:
        bound = 2 * k + 2
    return max(bound, 0)


def minimal_universal_search(family: GraphFamily,
                             candidate_source: Callable[[int], GraphStream] = candidates,
                             start: Optional[int] = None, max_order: int = 64,
                             jobs: int = 1) -> tuple[int, list[Graph], SearchStats]:
    """Smallest order with a universal candidate, and every graph at that order."""
    if start is None:
        kind = family.kind if family.kind in ("all", "trees") else "trees"
        start = known_lower_bound(family.k if family.k is not None else family.max_order, kind)
    total = SearchStats()
    for n in range(start, max_order + 1):
        try:
            stream = candidate_source(n)
        except (FileNotFoundError, ValueError) as exc:
            raise MissingCandidates(f"order {n}: {exc}") from exc
        graphs, stats = all_induced_universal_graphs(family, stream, jobs=jobs)
        total.merge(stats)
        if graphs:
            return n, graphs, total
    raise MissingCandidates(f"no universal graph up to order {max_order}")


# -- ordering experiment --------------------------------------------------


@dataclass
class ExperimentRow:
    strategy: str
    trial: int | str
    seed: int | str
    calls: float
    universal_found: int = 0


def ordering_experiment(family: GraphFamily, n: int, strategies: Sequence[Strategy | str],
                        trials: int, base_seed: int = 0,
                        cands: GraphStream | Iterable[Graph] | None = None,
                        randomize_ties: bool = False,
                        progress: Optional[Callable[[str, int], None]] = None
                        ) -> list[ExperimentRow]:
    """Solver calls needed to scan all order-``n`` candidates, per strategy and trial.

    The trial seed depends only on ``(base_seed, trial)``, so strategies that
    reduce to the same shuffle see the same member order.  Mean rows follow
    the per-trial rows of each strategy.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    stream = _as_stream(cands) if cands is not None else candidates(n)
    parts = list(stream.batches())
    rows = np.concatenate(parts) if parts else np.zeros((0, n), dtype=np.int64)
    out: list[ExperimentRow] = []
    for name in strategies:
        strat = Strategy(name)
        per_trial = []
        for t in range(trials):
            seed = trial_seed(base_seed, t)
            ordered = order_family(family, OrderingStrategy(strat, seed, randomize_ties))
            fam_adj, fam_n = ordered.arrays
            univ, calls, _ = _scan(fam_adj, fam_n, rows, n)
            out.append(ExperimentRow(strat.value, t, seed, calls, univ.shape[0]))
            per_trial.append(calls)
            if progress is not None:
                progress(strat.value, t)
        out.append(ExperimentRow(strat.value, "mean", "", float(np.mean(per_trial)),
                                 out[-1].universal_found))
    return out


CSV_COLUMNS = ("strategy", "trial", "seed", "calls")


def write_experiment_csv(rows: Iterable[ExperimentRow], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        calls = f"{r.calls:.1f}" if isinstance(r.calls, float) else r.calls
        w.writerow([r.strategy, r.trial, r.seed, calls])


def strategy_means(rows: Iterable[ExperimentRow]) -> dict[str, float]:
    return {r.strategy: float(r.calls) for r in rows if r.trial == "mean"}
