"""Completion search for induced universal graphs of the order-k tree family.

Every tree on k vertices contains the star on k vertices only when it *is*
that star, but every universal graph must contain the star, so we may fix
it on vertices ``0..k-1`` (centre 0).  What remains free is, per star vertex,
a row of ``m = n - k`` adjacencies into the tail, plus the tail block itself.

Two symmetry-breaking rules cut the space:

* the tail block is one of the canonical order-``m`` matrices;
* leaf rows are non-increasing: ``x[i] <= x[i-1]`` for ``i >= 2``.

The centre row ``x[0]`` and the first leaf row ``x[1]`` range freely.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from . import _kernels as K
from .enumeration import all_trees, small_canonical_matrices
from .graph import Graph
from .iso import canonical_form, canonical_graph6, from_rows, to_rows
from .search import GraphFamily, OrderingStrategy, Strategy, order_family

MAX_TAIL = 5
NAIVE_MAX_BITS = 30


@dataclass
class CompletionResult:
    n: int
    k: int
    graphs: list[Graph] = field(default_factory=list)
    matrices_tested: int = 0
    subiso_calls: int = 0
    raw_hits: int = 0


def make_graph(n: int, k: int, rows: Sequence[int], tail: Graph) -> Graph:
    """Star on ``0..k-1``, leaf/centre rows into the tail, tail block bottom-right.

    Bit ``t`` of a row counted from the most significant end (``m - 1 - t``)
    is the adjacency to tail vertex ``k + t``.
    """
    m = n - k
    if len(rows) != k or tail.order != m or m < 0:
        raise ValueError(f"need {k} rows and a tail of order {n - k}")
    for x in rows:
        if not 0 <= x < (1 << m) or (m == 0 and x != 0):
            raise ValueError(f"row value {x} out of range for {m} tail vertices")
    g = K.make_completion_graph(np.array(rows, dtype=np.int64), k, m, to_rows(tail) if m else np.zeros(0, dtype=np.int64))
    return from_rows(g, n)


def tree_family(k: int) -> GraphFamily:
    fam = GraphFamily(all_trees(k), f"trees order {k}", "trees", k)
    return order_family(fam, OrderingStrategy(Strategy.AUTOMORPHISMS))


def _check(n: int, k: int) -> int:
    if k < 1:
        raise ValueError("k must be at least 1")
    m = n - k
    if m < 0:
        raise ValueError("n must be at least k")
    if m > MAX_TAIL:
        raise ValueError(f"n - k = {m} exceeds the canonical-matrix list (at most {MAX_TAIL})")
    return m


def sequence_bound(n: int, k: int) -> int:
    """Upper bound on the number of row sequences enumerated."""
    m = n - k
    top = 1 << m
    return top * comb(top + k - 2, k - 1)


def _tails(m: int) -> np.ndarray:
    tails = small_canonical_matrices(m)
    out = np.zeros((len(tails), max(m, 1)), dtype=np.int64)
    for i, t in enumerate(tails):
        out[i, :m] = to_rows(t)
    return out[:, :m] if m else np.zeros((len(tails), 0), dtype=np.int64)


def _complete_chunk(k, m, tails, fam_adj, fam_n, lo, hi):
    cap = 4096
    while True:
        out = np.zeros((cap, max(k + m, 1)), dtype=np.int64)
        found, tested, calls = K.completion_scan(k, m, tails, fam_adj, fam_n, lo, hi, out, cap)
        if found <= cap:
            return out[:found, :k + m], int(tested), int(calls)
        cap = int(found)


def _naive_chunk(k, m, fam_adj, fam_n, lo, hi):
    cap = 4096
    while True:
        out = np.zeros((cap, max(k + m, 1)), dtype=np.int64)
        found, tested, calls = K.naive_completion_scan(k, m, fam_adj, fam_n, lo, hi, out, cap)
        if found <= cap:
            return out[:found, :k + m], int(tested), int(calls)
        cap = int(found)


def _dedup(n: int, k: int, parts, result: CompletionResult) -> CompletionResult:
    seen: dict[str, Graph] = {}
    for rows, tested, calls in parts:
        result.matrices_tested += tested
        result.subiso_calls += calls
        result.raw_hits += rows.shape[0]
        for r in rows:
            g = from_rows(r, n)
            c = canonical_form(g)
            seen.setdefault(canonical_graph6(c), c)
    result.graphs = [seen[key] for key in sorted(seen)]
    return result


def _run(chunks, fn, jobs):
    if jobs <= 1 or len(chunks) == 1:
        return [fn(*c) for c in chunks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futs = [pool.submit(fn, *c) for c in chunks]
        return [f.result() for f in futs]


def complete_search(n: int, k: int, jobs: int = 1) -> CompletionResult:
    """All order-``n`` graphs universal for the trees on ``k`` vertices, one per class."""
    m = _check(n, k)
    fam = tree_family(k)
    fam_adj, fam_n = fam.arrays
    tails = _tails(m)
    top = 1 << m
    # the centre row splits the work into equal-ish static chunks
    chunks = [(k, m, tails, fam_adj, fam_n, x, x + 1) for x in range(top)]
    parts = _run(chunks, _complete_chunk, jobs)
    return _dedup(n, k, parts, CompletionResult(n, k))


def naive_complete_search(n: int, k: int, jobs: int = 1) -> CompletionResult:
    """Same result set as :func:`complete_search`, trying every completion."""
    m = _check(n, k)
    bits = k * m + m * (m - 1) // 2
    if bits > NAIVE_MAX_BITS:
        raise ValueError(f"naive completion needs {bits} free bits (limit {NAIVE_MAX_BITS})")
    fam = tree_family(k)
    fam_adj, fam_n = fam.arrays
    total = 1 << bits
    step = max(1, total // max(jobs * 4, 1))
    chunks = [(k, m, fam_adj, fam_n, lo, min(lo + step, total)) for lo in range(0, total, step)]
    parts = _run(chunks, _naive_chunk, jobs)
    return _dedup(n, k, parts, CompletionResult(n, k))


def minimal_tree_universal(k: int, max_n: int | None = None, jobs: int = 1) -> CompletionResult:
    """First ``n >= k`` where the completion search finds anything."""
    top = max_n if max_n is not None else k + MAX_TAIL
    for n in range(k, top + 1):
        res = complete_search(n, k, jobs=jobs)
        if res.graphs:
            return res
    return CompletionResult(top, k)
