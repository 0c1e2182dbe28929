"""Independent certification of claimed universal graphs.

Containment is decided here only by :func:`smalluniv.iso.naive_find_embedding`,
a plain backtracking checker that shares no code with the compiled
label-class solver.  Each positive verdict carries the embedding found, and
that embedding is replayed pair by pair before it is accepted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .graph import Graph, encode_graph6
from .iso import induced_subgraph_iso, naive_find_embedding, naive_induced_iso
from .search import GraphFamily


class MatrixFormatError(ValueError):
    pass


@dataclass
class MemberVerdict:
    member: Graph
    witness: Optional[tuple[int, ...]]

    @property
    def ok(self) -> bool:
        return self.witness is not None


@dataclass
class Certificate:
    graph: Graph
    family: str
    verdicts: list[MemberVerdict] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return all(v.ok for v in self.verdicts)

    @property
    def passed(self) -> int:
        return sum(v.ok for v in self.verdicts)

    def failures(self) -> list[Graph]:
        return [v.member for v in self.verdicts if not v.ok]

    def to_json(self) -> dict:
        return {
            "graph": encode_graph6(self.graph),
            "family": self.family,
            "valid": self.valid,
            "passed": self.passed,
            "members": len(self.verdicts),
            "verdicts": [
                {"member": encode_graph6(v.member),
                 "witness": list(v.witness) if v.witness is not None else None}
                for v in self.verdicts
            ],
        }

    def to_text(self) -> str:
        lines = [
            f"graph   {encode_graph6(self.graph)}  (order {self.graph.order})",
            f"family  {self.family}",
            f"result  {'VALID' if self.valid else 'INVALID'}  {self.passed}/{len(self.verdicts)}",
            "",
        ]
        width = max([len(encode_graph6(v.member)) for v in self.verdicts] + [6])
        for v in self.verdicts:
            wit = " ".join(map(str, v.witness)) if v.witness is not None else "MISSING"
            lines.append(f"{encode_graph6(v.member):<{width}}  {wit}")
        return "\n".join(lines) + "\n"


def replay_witness(member: Graph, g: Graph, witness) -> bool:
    """Direct pairwise check that ``witness`` is an induced embedding."""
    if len(witness) != member.order or len(set(witness)) != member.order:
        return False
    if any(not 0 <= w < g.order for w in witness):
        return False
    for u in range(member.order):
        for v in range(u + 1, member.order):
            if member.has_edge(u, v) != g.has_edge(witness[u], witness[v]):
                return False
    return True


def verify_universal(g: Graph, family: GraphFamily) -> Certificate:
    cert = Certificate(g, family.label)
    for member in family.members:
        wit = naive_find_embedding(member, g)
        if wit is not None and not replay_witness(member, g, wit):
            wit = None
        cert.verdicts.append(MemberVerdict(member, wit))
    return cert


def cross_check(g: Graph, family: GraphFamily) -> bool:
    """True iff the compiled solver and the naive checker agree on every member."""
    return all(induced_subgraph_iso(h, g) == naive_induced_iso(h, g) for h in family.members)


def parse_matrix_text(text: str) -> Graph:
    """Parse ``n`` lines of ``n`` space-separated 0/1 tokens."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    n = len(rows)
    for i, r in enumerate(rows):
        if len(r) != n:
            raise MatrixFormatError(f"row {i}: {len(r)} entries, expected {n}")
        for j, tok in enumerate(r):
            if tok not in ("0", "1"):
                raise MatrixFormatError(f"row {i}, column {j}: token {tok!r} is not 0 or 1")
    adj = [0] * n
    for i in range(n):
        if rows[i][i] != "0":
            raise MatrixFormatError(f"row {i}, column {i}: nonzero diagonal entry")
        for j in range(n):
            if rows[i][j] != rows[j][i]:
                raise MatrixFormatError(f"row {i}, column {j}: matrix is not symmetric")
            if rows[i][j] == "1":
                adj[i] |= 1 << j
    return Graph(n, tuple(adj))


def format_matrix_text(g: Graph) -> str:
    return "".join(
        " ".join("1" if g.has_edge(i, j) else "0" for j in range(g.order)) + "\n"
        for i in range(g.order)
    )


def certificate_json(cert: Certificate) -> str:
    return json.dumps(cert.to_json(), indent=2) + "\n"
