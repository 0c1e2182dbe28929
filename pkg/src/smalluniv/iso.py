"""Induced subgraph isomorphism, isomorphism, automorphisms and canonical forms.

The decision solver splits pattern/target vertices into label classes
(vertices adjacent / non-adjacent to every matched pair) and backtracks as
soon as some class has fewer target than pattern vertices, i.e. when the
bound on the common induced subgraph drops below the pattern order.  It runs
compiled; see :mod:`smalluniv._kernels`.

:func:`naive_induced_iso` is a deliberately separate, plain backtracking
checker used for second opinions and certificates.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from . import _kernels as K
from .graph import Graph, encode_graph6

CANONICAL_MAX_ORDER = 12
AUTOMORPHISM_MAX_ORDER = 10

_SIGN = 1 << 63


def to_rows(g: Graph) -> np.ndarray:
    """int64 row array of ``g`` (bit 63 wraps to the sign bit)."""
    return np.array([r - (1 << 64) if r >= _SIGN else r for r in g.adj], dtype=np.int64)


def from_rows(rows, n: Optional[int] = None) -> Graph:
    n = len(rows) if n is None else n
    return Graph(n, tuple(int(r) & ((1 << 64) - 1) for r in rows[:n]))


def induced_subgraph_iso(pattern: Graph, target: Graph) -> bool:
    """True iff ``pattern`` is isomorphic to an induced subgraph of ``target``."""
    if pattern.order > target.order:
        return False
    return bool(K.subiso(to_rows(pattern), pattern.order, to_rows(target), target.order))


def find_embedding(pattern: Graph, target: Graph) -> Optional[tuple[int, ...]]:
    """One induced embedding as a tuple ``m`` with pattern ``v`` -> target ``m[v]``."""
    if pattern.order > target.order:
        return None
    if pattern.order == 0:
        return ()
    m = K.find_embedding(to_rows(pattern), pattern.order, to_rows(target), target.order)
    if len(m) == 0:
        return None
    return tuple(int(x) for x in m)


def is_embedding(pattern: Graph, target: Graph, mapping) -> bool:
    """Check injectivity and exact edge/non-edge preservation."""
    if len(mapping) != pattern.order or len(set(mapping)) != len(mapping):
        return False
    if any(not 0 <= w < target.order for w in mapping):
        return False
    for v in range(pattern.order):
        for u in range(v):
            if pattern.has_edge(u, v) != target.has_edge(mapping[u], mapping[v]):
                return False
    return True


def is_isomorphic(a: Graph, b: Graph) -> bool:
    if a.order != b.order or a.num_edges() != b.num_edges():
        return False
    if sorted(a.degrees()) != sorted(b.degrees()):
        return False
    return induced_subgraph_iso(a, b)


def _extend_automorphism(g: Graph, fixed: dict[int, int]) -> bool:
    n = g.order
    deg = g.degrees()
    if len(set(fixed.values())) != len(fixed):
        return False
    image = [-1] * n
    for v, w in fixed.items():
        image[v] = w
    for v in fixed:
        for u in fixed:
            if g.has_edge(u, v) != g.has_edge(fixed[u], fixed[v]):
                return False
    free = [v for v in range(n) if image[v] < 0]
    taken = set(fixed.values())

    def place(idx: int) -> bool:
        if idx == len(free):
            return True
        v = free[idx]
        for w in range(n):
            if w in taken or deg[w] != deg[v]:
                continue
            if all(g.has_edge(u, v) == g.has_edge(image[u], w) for u in range(n) if image[u] >= 0):
                image[v] = w
                taken.add(w)
                if place(idx + 1):
                    return True
                image[v] = -1
                taken.discard(w)
        return False

    return place(0)


def automorphism_count(g: Graph) -> int:
    """|Aut(g)| as the product of successive stabiliser orbit sizes."""
    if g.order > AUTOMORPHISM_MAX_ORDER:
        raise ValueError(f"automorphism_count supports order <= {AUTOMORPHISM_MAX_ORDER}")
    deg = g.degrees()
    count = 1
    fixed: dict[int, int] = {}
    for v in range(g.order):
        orbit = sum(
            1 for w in range(g.order)
            if deg[w] == deg[v] and _extend_automorphism(g, {**fixed, v: w})
        )
        count *= orbit
        fixed[v] = v
    return count


def canonical_labelling(g: Graph) -> tuple[int, ...]:
    """Vertex order ``p`` such that relabelling by ``p`` gives the canonical form."""
    if g.order > CANONICAL_MAX_ORDER:
        raise ValueError(f"canonical forms are supported up to order {CANONICAL_MAX_ORDER}")
    if g.order == 0:
        return ()
    return tuple(int(x) for x in K.canonical_labelling(to_rows(g), g.order))


def canonical_form(g: Graph) -> Graph:
    """The relabelling of ``g`` with the lexicographically smallest graph6 bits.

    Two graphs have equal canonical forms iff they are isomorphic.
    """
    perm = canonical_labelling(g)
    if not perm:
        return g
    out = np.zeros(g.order, dtype=np.int64)
    K.relabel_rows(to_rows(g), g.order, np.array(perm, dtype=np.int64), out)
    return from_rows(out)


def canonical_graph6(g: Graph) -> str:
    return encode_graph6(canonical_form(g))


def is_canonical(g: Graph) -> bool:
    if g.order > CANONICAL_MAX_ORDER:
        raise ValueError(f"canonical forms are supported up to order {CANONICAL_MAX_ORDER}")
    if g.order <= 1:
        return True
    return bool(K.is_canonical(to_rows(g), g.order))


# -- independent checker --------------------------------------------------


def naive_find_embedding(pattern: Graph, target: Graph) -> Optional[tuple[int, ...]]:
    """Plain backtracking over injective maps, checking every pair directly.

    Shares no code with the label-class solver.  Pattern vertices are placed
    in a connectivity-first order so that adjacency constraints bite early.
    """
    p, t = pattern.order, target.order
    if p > t:
        return None
    if p == 0:
        return ()
    pe = [[pattern.has_edge(u, v) for v in range(p)] for u in range(p)]
    te = [[target.has_edge(u, v) for v in range(t)] for u in range(t)]

    order = [max(range(p), key=lambda v: (sum(pe[v]), -v))]
    while len(order) < p:
        rest = [v for v in range(p) if v not in order]
        order.append(max(rest, key=lambda v: (sum(pe[v][u] for u in order), sum(pe[v]), -v)))

    image = [-1] * p
    used = [False] * t

    def place(idx: int) -> bool:
        if idx == p:
            return True
        v = order[idx]
        prev = order[:idx]
        for w in range(t):
            if used[w]:
                continue
            if all(pe[v][u] == te[w][image[u]] for u in prev):
                image[v] = w
                used[w] = True
                if place(idx + 1):
                    return True
                used[w] = False
                image[v] = -1
        return False

    if place(0):
        return tuple(image)
    return None


def naive_induced_iso(pattern: Graph, target: Graph) -> bool:
    return naive_find_embedding(pattern, target) is not None
