"""Compact undirected simple graphs stored as per-vertex bitmasks.

A :class:`Graph` of order ``n`` keeps one integer per vertex; bit ``j`` of
row ``i`` is set iff ``{i, j}`` is an edge.  Graphs are immutable values and
every operation in this module is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

MAX_ORDER = 64


class Graph6Error(ValueError):
    """Raised for malformed graph6 input; ``offset`` is the byte position."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


@dataclass(frozen=True, slots=True)
class Graph:
    order: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.order <= MAX_ORDER:
            raise ValueError(f"order must be in 0..{MAX_ORDER}, got {self.order}")
        if len(self.adj) != self.order:
            raise ValueError("adjacency length does not match order")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {(u, v)} out of range for order {n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        for j in range(self.order):
            row = self.adj[j]
            for i in range(j):
                if row >> i & 1:
                    yield i, j

    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def __repr__(self) -> str:
        return f"Graph({encode_graph6(self)!r})"


def validate(g: Graph) -> None:
    """Raise ``ValueError`` unless ``g`` is symmetric, loop-free and in range."""
    n = g.order
    full = (1 << n) - 1
    for i, row in enumerate(g.adj):
        if row < 0 or row & ~full:
            raise ValueError(f"row {i} has bits outside 0..{n - 1}")
        if row >> i & 1:
            raise ValueError(f"loop at vertex {i}")
        for j in range(n):
            if (row >> j & 1) != (g.adj[j] >> i & 1):
                raise ValueError(f"asymmetric entry ({i}, {j})")


# -- named graphs ---------------------------------------------------------


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << i) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def star_graph(n: int) -> Graph:
    """Star on ``n`` vertices with centre 0 (``n - 1`` leaves)."""
    return Graph.from_edges(n, ((0, i) for i in range(1, n)))


# -- elementary operations ------------------------------------------------


def complement(g: Graph) -> Graph:
    full = (1 << g.order) - 1
    return Graph(g.order, tuple(full & ~row & ~(1 << i) for i, row in enumerate(g.adj)))


def _as_vertex_list(g: Graph, s: int | Iterable[int]) -> list[int]:
    if isinstance(s, int):
        if s < 0 or s >> g.order:
            raise ValueError("vertex set has bits outside the graph")
        return [v for v in range(g.order) if s >> v & 1]
    verts = sorted(set(s))
    if verts and not (0 <= verts[0] and verts[-1] < g.order):
        raise ValueError("vertex set has vertices outside the graph")
    return verts


def induced_subgraph(g: Graph, s: int | Iterable[int]) -> Graph:
    """Subgraph induced by ``s`` (a bitmask or an iterable of vertices).

    Vertices are relabelled ``0..|s|-1`` in ascending original index.
    """
    verts = _as_vertex_list(g, s)
    rows = []
    for v in verts:
        row = g.adj[v]
        rows.append(sum(1 << i for i, u in enumerate(verts) if row >> u & 1))
    return Graph(len(verts), tuple(rows))


def relabel(g: Graph, perm: Iterable[int]) -> Graph:
    """Graph whose vertex ``i`` is vertex ``perm[i]`` of ``g``."""
    perm = list(perm)
    if sorted(perm) != list(range(g.order)):
        raise ValueError("perm is not a permutation of the vertices")
    return induced_subgraph_ordered(g, perm)


def induced_subgraph_ordered(g: Graph, verts: list[int]) -> Graph:
    rows = []
    for v in verts:
        row = g.adj[v]
        rows.append(sum(1 << i for i, u in enumerate(verts) if row >> u & 1))
    return Graph(len(verts), tuple(rows))


def flip_edge(g: Graph, v: int, w: int) -> Graph:
    if v == w:
        raise ValueError("cannot flip a loop")
    if not (0 <= v < g.order and 0 <= w < g.order):
        raise ValueError(f"vertex out of range for order {g.order}")
    rows = list(g.adj)
    rows[v] ^= 1 << w
    rows[w] ^= 1 << v
    return Graph(g.order, tuple(rows))


def edge_extremeness(g: Graph) -> int:
    """``|2|E| - C(n, 2)|``: large for very sparse or very dense graphs."""
    n = g.order
    return abs(2 * g.num_edges() - n * (n - 1) // 2)


def disjoint_union(a: Graph, b: Graph) -> Graph:
    rows = list(a.adj) + [row << a.order for row in b.adj]
    return Graph(a.order + b.order, tuple(rows))


# -- graph6 ---------------------------------------------------------------

_HEADER = ">>graph6<<"


def _size_prefix(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))


def encode_graph6(g: Graph) -> str:
    n = g.order
    bits = []
    for j in range(1, n):
        row = g.adj[j]
        for i in range(j):
            bits.append(row >> i & 1)
    bits.extend([0] * (-len(bits) % 6))
    chunks = []
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = val << 1 | b
        chunks.append(chr(val + 63))
    return _size_prefix(n) + "".join(chunks)


def decode_graph6(text: str) -> Graph:
    """Parse one graph6 line; an optional ``>>graph6<<`` header is accepted."""
    s = text.rstrip("\r\n")
    base = 0
    if s.startswith(_HEADER):
        s = s[len(_HEADER):]
        base = len(_HEADER)
    if not s:
        raise Graph6Error("empty graph6 string", base)
    for pos, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"character {ch!r} outside range 63..126", base + pos)

    if s[0] != "~":
        n, body = ord(s[0]) - 63, 1
    else:
        if len(s) < 4 or s[1] == "~":
            raise Graph6Error("malformed length prefix", base)
        n = 0
        for ch in s[1:4]:
            n = n << 6 | (ord(ch) - 63)
        if n <= 62:
            raise Graph6Error("non-minimal length prefix", base)
        body = 4
    if n > MAX_ORDER:
        raise Graph6Error(f"order {n} exceeds {MAX_ORDER}", base)

    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    payload = s[body:]
    if len(payload) != nchars:
        raise Graph6Error(
            f"expected {nchars} payload characters for order {n}, got {len(payload)}",
            base + body + min(len(payload), nchars),
        )
    rows = [0] * n
    i, j = 0, 1
    for k, ch in enumerate(payload):
        val = ord(ch) - 63
        for shift in range(5, -1, -1):
            bit_index = 6 * k + 5 - shift
            bit = val >> shift & 1
            if bit_index >= nbits:
                if bit:
                    raise Graph6Error("padding bits set", base + body + k)
                continue
            if bit:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            i += 1
            if i == j:
                i, j = 0, j + 1
    return Graph(n, tuple(rows))
