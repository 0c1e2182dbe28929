"""Isomorph-free generation of graphs and free trees, and graph6 list files.

Graphs are produced by orderly generation: every canonical graph of order
``n - 1`` is extended by one vertex over all ``2**(n-1)`` neighbourhoods and
an extension is kept iff it is itself canonical.  Canonical matrices have
canonical leading submatrices, so each class appears exactly once.
"""

from __future__ import annotations

import itertools
import os
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterator, Optional

import numpy as np

from . import _kernels as K
from .g6array import decode_lines, encode_rows, line_length
from .graph import Graph, Graph6Error, decode_graph6
from .iso import canonical_form, from_rows, to_rows

INTERNAL_MAX_ORDER = 8
TREE_MAX_ORDER = 10
DEFAULT_BATCH = 65536


class GraphStream:
    """A re-iterable stream of graphs of one order.

    Iterating yields :class:`Graph` values; :meth:`batches` yields int64 row
    arrays for the compiled scanners.  File-backed streams hold only one
    batch in memory at a time.
    """

    def __init__(self, order: int, label: str,
                 batches: Callable[[int], Iterator[np.ndarray]]) -> None:
        self.order = order
        self.label = label
        self._batches = batches

    def batches(self, size: int = DEFAULT_BATCH) -> Iterator[np.ndarray]:
        return self._batches(size)

    def __iter__(self) -> Iterator[Graph]:
        for rows in self.batches():
            for r in rows:
                yield from_rows(r, self.order)

    def __repr__(self) -> str:
        return f"GraphStream({self.label!r}, order={self.order})"


# -- internal generation --------------------------------------------------


def extend_rows(parents: np.ndarray, n: int, batch: int = 2048) -> Iterator[np.ndarray]:
    """Canonical order-``n`` children of canonical order-``(n-1)`` parents."""
    if n == 0:
        yield np.zeros((1, 0), dtype=np.int64)
        return
    width = 1 << (n - 1)
    for start in range(0, parents.shape[0], batch):
        chunk = np.ascontiguousarray(parents[start:start + batch])
        out = np.empty((chunk.shape[0] * width, n), dtype=np.int64)
        count = K.extend_orderly(chunk, n, out)
        yield out[:count]


@lru_cache(maxsize=None)
def _level(n: int) -> np.ndarray:
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    parts = list(extend_rows(_level(n - 1), n))
    rows = np.concatenate(parts) if parts else np.zeros((0, n), dtype=np.int64)
    rows.setflags(write=False)
    return rows


def graph_rows(n: int) -> np.ndarray:
    """All canonical graphs of order ``n`` (``n <= 8``) as a read-only array."""
    if not 0 <= n <= INTERNAL_MAX_ORDER:
        raise ValueError(
            f"internal generation covers orders 0..{INTERNAL_MAX_ORDER}; "
            f"for order {n} supply a graph6 file (see extend_graph6_file)"
        )
    return _level(n)


def all_graphs(n: int) -> GraphStream:
    rows = graph_rows(n)

    def batches(size: int) -> Iterator[np.ndarray]:
        for start in range(0, max(rows.shape[0], 1), size):
            chunk = rows[start:start + size]
            if chunk.shape[0]:
                yield chunk

    return GraphStream(n, f"all graphs of order {n}", batches)


# -- graph6 files ---------------------------------------------------------


def _decode_slow(numbered: list[tuple[int, str]], order: int) -> np.ndarray:
    rows = np.zeros((len(numbered), order), dtype=np.int64)
    for idx, (lineno, line) in enumerate(numbered):
        try:
            g = decode_graph6(line)
        except Graph6Error as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if g.order != order:
            raise ValueError(f"line {lineno}: order {g.order}, expected {order}")
        rows[idx] = to_rows(g)
    return rows


def graphs_from_file(path: str | os.PathLike, expected_order: int) -> GraphStream:
    """Stream graphs from a graph6 file, one per line, checking every order."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    width = line_length(expected_order) + 1

    def batches(size: int) -> Iterator[np.ndarray]:
        with path.open("rb") as fh:
            lineno = 1
            while True:
                lines = list(itertools.islice(fh, size))
                if not lines:
                    return
                buf = b"".join(lines)
                rows = None
                if len(buf) == width * len(lines):
                    try:
                        rows = decode_lines(buf, expected_order)
                    except ValueError:
                        rows = None
                if rows is None:
                    numbered = [
                        (lineno + i, ln.decode("ascii", errors="replace"))
                        for i, ln in enumerate(lines)
                        if ln.strip()
                    ]
                    rows = _decode_slow(numbered, expected_order)
                lineno += len(lines)
                if rows.shape[0]:
                    yield rows

    return GraphStream(expected_order, str(path), batches)


def write_graph6(path: str | os.PathLike, rows_iter, n: int) -> int:
    """Write row arrays as graph6 lines; returns the number of graphs."""
    count = 0
    with open(path, "wb") as fh:
        for rows in rows_iter:
            fh.write(encode_rows(rows, n))
            count += rows.shape[0]
    return count


def extend_graph6_file(src: str | os.PathLike, dst: str | os.PathLike, order: int,
                       progress: Optional[Callable[[int, int], None]] = None) -> int:
    """Write all graphs of ``order`` to ``dst`` from the order-``(order-1)`` list in ``src``.

    ``src`` must hold exactly one graph per isomorphism class (as produced
    by this module or by an external generator); parents are canonicalised first, so any
    labelling is accepted.  Returns the number of graphs written.
    """
    parents = [rows for rows in graphs_from_file(src, order - 1).batches()]
    parent_rows = np.concatenate(parents) if parents else np.zeros((0, order - 1), dtype=np.int64)
    canon = np.empty_like(parent_rows)
    if order - 1 > 0:
        K.canonicalize_batch(parent_rows, order - 1, canon)
    total = parent_rows.shape[0]

    def children() -> Iterator[np.ndarray]:
        done = 0
        batch = 1024
        for rows in extend_rows(canon, order, batch=batch):
            done = min(done + batch, total)
            if progress is not None:
                progress(done, total)
            yield rows

    return write_graph6(dst, children(), order)


DATA_ENV = "SMALLUNIV_DATA"


def data_dir() -> Path:
    """Directory for cached candidate files (``$SMALLUNIV_DATA`` or ~/.cache/smalluniv)."""
    env = os.environ.get(DATA_ENV)
    return Path(env) if env else Path.home() / ".cache" / "smalluniv"


def candidate_path(n: int, directory: str | os.PathLike | None = None) -> Path:
    return Path(directory or data_dir()) / f"graphs{n}.g6"


def ensure_candidate_file(n: int, directory: str | os.PathLike | None = None,
                          progress: Optional[Callable[[int, int], None]] = None) -> Path:
    """Path of a graph6 file holding all graphs of order ``n``, building it if absent.

    Orders above the internal limit are built one level at a time from the
    order-8 list.  Files are written under a temporary name and renamed, so
    an interrupted run never leaves a truncated list behind.
    """
    target = candidate_path(n, directory)
    if target.exists():
        return target
    target.parent.mkdir(parents=True, exist_ok=True)
    if n <= INTERNAL_MAX_ORDER:
        tmp = target.with_suffix(".part")
        write_graph6(tmp, all_graphs(n).batches(), n)
        os.replace(tmp, target)
        return target
    src = ensure_candidate_file(n - 1, directory, progress)
    tmp = target.with_suffix(".part")
    extend_graph6_file(src, tmp, n, progress)
    os.replace(tmp, target)
    return target


def candidates(n: int, directory: str | os.PathLike | None = None) -> GraphStream:
    """All graphs of order ``n``: generated for ``n <= 8``, else read from the cache."""
    if n <= INTERNAL_MAX_ORDER:
        return all_graphs(n)
    path = candidate_path(n, directory)
    if not path.exists():
        raise FileNotFoundError(
            f"no candidate file for order {n} at {path}; build it with "
            f"'smalluniv enumerate --order {n} --out {path}'"
        )
    return graphs_from_file(path, n)


# -- trees ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _tree_rows(k: int) -> tuple[tuple[int, ...], ...]:
    if k == 1:
        return ((0,),)
    seen = set()
    for parent in _tree_rows(k - 1):
        for v in range(k - 1):
            rows = list(parent) + [1 << v]
            rows[v] |= 1 << (k - 1)
            seen.add(canonical_form(Graph(k, tuple(rows))).adj)
    return tuple(sorted(seen))


def all_trees(k: int) -> list[Graph]:
    """All free trees on ``k`` vertices, in canonical form, sorted by rows.

    Built by attaching a leaf to every vertex of every tree on ``k - 1``
    vertices and keeping one canonical form per class.
    """
    if not 1 <= k <= TREE_MAX_ORDER:
        raise ValueError(f"trees are generated for 1 <= k <= {TREE_MAX_ORDER}")
    return [Graph(k, rows) for rows in _tree_rows(k)]


def small_canonical_matrices(m: int) -> list[Graph]:
    """One canonical adjacency matrix per isomorphism class of order ``m``."""
    if not 0 <= m <= 5:
        raise ValueError("small canonical matrices are provided for 0 <= m <= 5")
    return list(all_graphs(m))
