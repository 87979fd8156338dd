"""Finite edge-involutive subgraphs of a group Cayley graph.

Vertices are group elements, so graphs live embedded in the (never
materialized) Cayley graph and equality is literal set equality of canonical
forms; no isomorphism testing is ever needed.  Each involutive edge pair is
stored once in positive-letter normal form ``(source, generator)`` and
negative-letter queries are rewritten on the fly.  Isolated vertices are first
class: spans of pure jump terms are edgeless but still carry their endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .groups import (
    GroupElem,
    GroupOracle,
    OracleError,
    compose,
    eval_word,
    group_elements,
    right_mul,
)
from .words import FTerm, Letter, Word

Edge = tuple[GroupElem, int]


@dataclass(frozen=True, eq=False)
class Subgraph:
    """A finite subgraph, closed under edge involution by construction."""

    oracle: GroupOracle
    vertices: frozenset[GroupElem]
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "edges", frozenset(self.edges))
        for src, base in self.edges:
            if src not in self.vertices:
                raise ValueError(f"edge source {src} is not a vertex")
            if self.edge_target(src, base) not in self.vertices:
                raise ValueError(f"edge target of ({src}, {base}) is not a vertex")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgraph):
            return NotImplemented
        return (self.vertices == other.vertices and self.edges == other.edges
                and self.oracle == other.oracle)

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def edge_target(self, src: GroupElem, base: int) -> GroupElem:
        return right_mul(src, Letter(base, 1))

    def neighbor(self, g: GroupElem, letter: Letter) -> Optional[GroupElem]:
        """The endpoint of the ``letter`` edge at ``g``, if that edge exists."""
        if letter.sign > 0:
            if (g, letter.base) in self.edges:
                return right_mul(g, letter)
            return None
        src = right_mul(g, letter)
        if (src, letter.base) in self.edges:
            return src
        return None

    def vertex_count(self) -> int:
        return len(self.vertices)

    def edge_count(self) -> int:
        return len(self.edges)


def vertex_graph(oracle: GroupOracle, vertices: Iterable[GroupElem]) -> Subgraph:
    """An edgeless graph on the given vertices."""
    return Subgraph(oracle, frozenset(vertices), frozenset())


def singleton(g: GroupElem) -> Subgraph:
    return vertex_graph(g.oracle, (g,))


def _positive_edge(src: GroupElem, letter: Letter, dst: GroupElem) -> Edge:
    return (src, letter.base) if letter.sign > 0 else (dst, letter.base)


def span_path(oracle: GroupOracle, start: GroupElem, w: Word) -> Subgraph:
    """Vertices and edges traversed by the path labeled ``w`` from ``start``."""
    vertices = {start}
    edges = set()
    cur = start
    for letter in w:
        nxt = right_mul(cur, letter)
        edges.add(_positive_edge(cur, letter, nxt))
        vertices.add(nxt)
        cur = nxt
    return Subgraph(oracle, frozenset(vertices), frozenset(edges))


def span_journey(oracle: GroupOracle, start: GroupElem, t: FTerm) -> Subgraph:
    """Union of the spans of the constituent paths of the journey labeled ``t``.

    Jumps contribute no edges, but every constituent path spans its endpoints,
    so jump endpoints are vertices of the result (an empty path still spans
    the vertex it sits on).  The result may be disconnected.
    """
    graph = span_path(oracle, start, t.words[0])
    cur = eval_path_end(oracle, start, t.words[0])
    for v, u in zip(t.jumps, t.words[1:]):
        cur = compose(cur, eval_word(oracle, v))
        piece = span_path(oracle, cur, u)
        graph = union(graph, piece)
        cur = eval_path_end(oracle, cur, u)
    return graph


def eval_path_end(oracle: GroupOracle, start: GroupElem, w: Word) -> GroupElem:
    return compose(start, eval_word(oracle, w))


def trace_path(graph: Subgraph, start: GroupElem, w: Word) -> Optional[GroupElem]:
    """Endpoint of the path labeled ``w`` from ``start``, if it lies in the
    graph; the empty word traces iff ``start`` is a vertex."""
    if start not in graph.vertices:
        return None
    cur = start
    for letter in w:
        nxt = graph.neighbor(cur, letter)
        if nxt is None:
            return None
        cur = nxt
    return cur


def trace_journey(graph: Subgraph, start: GroupElem, t: FTerm) -> Optional[GroupElem]:
    """Endpoint of the journey labeled ``t`` from ``start``, if it lies in the
    graph: path factors must trace edge by edge, jump factors need both their
    source and target present as vertices."""
    cur = trace_path(graph, start, t.words[0])
    if cur is None:
        return None
    for v, u in zip(t.jumps, t.words[1:]):
        cur = compose(cur, eval_word(graph.oracle, v))
        if cur not in graph.vertices:
            return None
        cur = trace_path(graph, cur, u)
        if cur is None:
            return None
    return cur


def translate(g: GroupElem, graph: Subgraph) -> Subgraph:
    """Image of the graph under the left action of ``g``; labels unchanged."""
    return Subgraph(
        graph.oracle,
        frozenset(compose(g, v) for v in graph.vertices),
        frozenset((compose(g, src), base) for src, base in graph.edges),
    )


def union(a: Subgraph, b: Subgraph) -> Subgraph:
    if a.oracle != b.oracle:
        raise OracleError("graphs belong to different oracles")
    return Subgraph(a.oracle, a.vertices | b.vertices, a.edges | b.edges)


def contains(outer: Subgraph, inner: Subgraph) -> bool:
    return inner.vertices <= outer.vertices and inner.edges <= outer.edges


def components(graph: Subgraph) -> set[Subgraph]:
    """Partition into maximal connected subgraphs; isolated vertices are
    singleton components."""
    adjacency: dict[GroupElem, set[GroupElem]] = {v: set() for v in graph.vertices}
    targets: dict[Edge, GroupElem] = {}
    for src, base in graph.edges:
        dst = graph.edge_target(src, base)
        targets[(src, base)] = dst
        adjacency[src].add(dst)
        adjacency[dst].add(src)
    out: set[Subgraph] = set()
    unseen = set(graph.vertices)
    while unseen:
        root = unseen.pop()
        comp = {root}
        stack = [root]
        while stack:
            v = stack.pop()
            for w in adjacency[v]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        unseen -= comp
        comp_edges = frozenset(e for e, dst in targets.items() if e[0] in comp)
        out.add(Subgraph(graph.oracle, frozenset(comp), comp_edges))
    return out


def is_connected(graph: Subgraph) -> bool:
    return len(components(graph)) <= 1


def to_dot(graph: Subgraph, highlights: Iterable[GroupElem] = ()) -> str:
    """Deterministic DOT: nodes and arcs in canonical sorted order, one arc
    per positive-letter edge, highlighted vertices double-circled."""
    marked = set(highlights)
    lines = ["digraph {", "  rankdir=LR;"]
    for v in sorted(graph.vertices, key=GroupElem.sort_key):
        label = _dot_quote(str(v))
        if v in marked:
            lines.append(f"  {label} [peripheries=2];")
        else:
            lines.append(f"  {label};")
    for src, base in sorted(graph.edges, key=lambda e: (e[0].sort_key(), e[1])):
        dst = graph.edge_target(src, base)
        name = graph.oracle.alphabet.name(base)
        lines.append(f"  {_dot_quote(str(src))} -> {_dot_quote(str(dst))}"
                     f" [label=\"{name}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_quote(label: str) -> str:
    return '"' + label.replace('"', '\\"') + '"'


def full_cayley_graph(oracle: GroupOracle) -> Subgraph:
    """The whole Cayley graph of a finite (permutation) oracle."""
    elems = group_elements(oracle)
    edges = frozenset((g, base) for g in elems for base in range(oracle.rank))
    return Subgraph(oracle, frozenset(elems), edges)
