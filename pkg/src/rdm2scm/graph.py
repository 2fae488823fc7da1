"""Directed mixed graphs with self-loops, d-separation and DOT export."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class DirectedMixedGraph:
    """Nodes, directed edges ``(tail, head)`` and bidirected edges ``{a, b}``."""

    nodes: tuple
    directed: frozenset
    bidirected: frozenset  # of frozensets with two elements

    @classmethod
    def make(cls, nodes, directed=(), bidirected=()) -> "DirectedMixedGraph":
        nodes = tuple(nodes)
        if len(set(nodes)) != len(nodes):
            raise InvalidArgumentError("duplicate node labels")
        ns = set(nodes)
        d = frozenset((a, b) for a, b in directed)
        bi = set()
        for a, b in bidirected:
            if a == b:
                raise InvalidArgumentError(f"bidirected edge needs distinct endpoints, got {a}<->{b}")
            bi.add(frozenset((a, b)))
        for a, b in d:
            if a not in ns or b not in ns:
                raise InvalidArgumentError(f"edge {a}->{b} has an endpoint outside the node set")
        for pair in bi:
            if not pair <= ns:
                raise InvalidArgumentError(f"edge {set(pair)} has an endpoint outside the node set")
        return cls(nodes, d, frozenset(bi))

    def parents(self, v) -> set:
        return {a for a, b in self.directed if b == v}

    def children(self, v) -> set:
        return {b for a, b in self.directed if a == v}

    def spouses(self, v) -> set:
        return {next(iter(p - {v})) for p in self.bidirected if v in p}

    def self_loops(self) -> set:
        return {a for a, b in self.directed if a == b}

    def ancestors(self, S) -> set:
        """``S`` together with every node having a directed path into ``S``."""
        seen = set(S)
        todo = deque(S)
        while todo:
            v = todo.popleft()
            for p in self.parents(v):
                if p not in seen:
                    seen.add(p)
                    todo.append(p)
        return seen

    def without_incoming(self, I) -> "DirectedMixedGraph":
        """Graph surgery for a perfect intervention on ``I``."""
        I = set(I)
        return DirectedMixedGraph.make(
            self.nodes,
            {(a, b) for a, b in self.directed if b not in I},
            {tuple(p) for p in self.bidirected if not (p & I)},
        )

    def to_data(self) -> dict:
        return {
            "nodes": sorted(self.nodes),
            "directed": sorted([a, b] for a, b in self.directed),
            "bidirected": sorted(sorted(p) for p in self.bidirected),
        }

    @classmethod
    def from_data(cls, data) -> "DirectedMixedGraph":
        return cls.make(data["nodes"], [tuple(e) for e in data["directed"]], [tuple(e) for e in data["bidirected"]])


def graph_equal(g1: DirectedMixedGraph, g2: DirectedMixedGraph) -> bool:
    return set(g1.nodes) == set(g2.nodes) and g1.directed == g2.directed and g1.bidirected == g2.bidirected


def _check_query(g, A, B, C):
    A, B, C = set(A), set(B), set(C)
    ns = set(g.nodes)
    for S, label in ((A, "A"), (B, "B"), (C, "C")):
        if not S <= ns:
            raise InvalidArgumentError(f"{label} contains unknown nodes {sorted(S - ns)}")
    if A & B or A & C or B & C:
        raise InvalidArgumentError("A, B and C must be pairwise disjoint")
    loops = g.self_loops()
    if loops:
        raise InvalidArgumentError(
            f"graph has self-loops at {sorted(loops)}; resolve them first (e.g. remove_self_loops_linear)"
        )
    return A, B, C


def _incident(g):
    """Per node: list of (neighbour, head_at_self, head_at_neighbour)."""
    inc = {v: [] for v in g.nodes}
    for a, b in g.directed:
        inc[a].append((b, False, True))
        inc[b].append((a, True, False))
    for p in g.bidirected:
        a, b = tuple(p)
        inc[a].append((b, True, True))
        inc[b].append((a, True, True))
    return inc


def d_separated(g: DirectedMixedGraph, A, B, C=()) -> bool:
    """d-separation (m-separation) of ``A`` and ``B`` given ``C`` in a mixed graph.

    A path is open when each collider on it is an ancestor of ``C`` and no
    non-collider is in ``C``; bidirected edges carry arrowheads at both ends.
    Cycles are fine, self-loops are rejected.
    """
    A, B, C = _check_query(g, A, B, C)
    if not A or not B:
        return True
    anc = g.ancestors(C)
    inc = _incident(g)
    # state: (node, arrived with an arrowhead at node)
    start = [(a, False) for a in A]
    seen = set(start)
    todo = deque(start)
    while todo:
        v, head_in = todo.popleft()
        for w, head_v, head_w in inc[v]:
            collider = head_in and head_v
            if collider:
                if v not in anc:
                    continue
            elif v in C:
                continue
            if w in B:
                return False
            st = (w, head_w)
            if st not in seen:
                seen.add(st)
                todo.append(st)
    return True


def to_dot(g: DirectedMixedGraph, name="G") -> str:
    """Deterministic DOT text; bidirected edges are drawn ``dir=both``."""
    q = lambda s: '"' + str(s).replace('"', '\\"') + '"'
    lines = [f"digraph {q(name)} {{"]
    for v in sorted(g.nodes):
        lines.append(f"  {q(v)};")
    for a, b in sorted(g.directed):
        lines.append(f"  {q(a)} -> {q(b)};")
    for a, b in sorted(sorted(p) for p in g.bidirected):
        lines.append(f"  {q(a)} -> {q(b)} [dir=both, style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
