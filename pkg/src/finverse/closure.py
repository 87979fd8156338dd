"""Finitary, translation-invariant closure operators on Cayley subgraphs.

A relation system turns into a closure by saturation: a graph is closed when
every relation pair reads identically between every pair of its vertices, and
the closure of a graph is approached by iterated full P-expansions (each round
recomputes all occurrences against the frozen graph, then sews on all partner
spans at once, so rounds are deterministic regardless of iteration order).
Closures can be infinite, so the fixpoint engine is budget-aware and reports
whether it stabilized or ran out of budget.

Two built-in operators avoid infinite relation schemas: the identity closures
(everything is closed) and the tree-connect closure over a free oracle, which
returns the geodesic hull, i.e. the union of the unique reduced paths between
the graph's vertices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union

from .graphs import (
    Subgraph,
    is_connected,
    span_journey,
    span_path,
    trace_journey,
    trace_path,
    union,
)
from .groups import FREE, GroupElem, GroupOracle, compose, eval_word, geodesic_word, invert_elem
from .words import FTerm, Word, erase_m, term_key, word_key

Label = Union[Word, FTerm]

WORD_MODE = "word"
TERM_MODE = "term"


class ClosureError(ValueError):
    """Invalid relation system, budget, or closure precondition."""


class ClosureStatus(enum.Enum):
    STABILIZED = "Stabilized"
    BUDGET_EXHAUSTED = "BudgetExhausted"


@dataclass(frozen=True)
class ClosureBudget:
    """Bounds on the fixpoint iteration; both must be positive."""

    max_rounds: int = 64
    max_vertices: int = 10000

    def __post_init__(self) -> None:
        if self.max_rounds < 1 or self.max_vertices < 1:
            raise ClosureError("budget bounds must be positive")


@dataclass(frozen=True)
class ClosureResult:
    """Outcome of a budgeted closure: Stabilized implies the graph is closed."""

    graph: Subgraph
    status: ClosureStatus
    rounds_used: int

    @property
    def stabilized(self) -> bool:
        return self.status is ClosureStatus.STABILIZED


def label_image(oracle: GroupOracle, label: Label) -> GroupElem:
    """The group element a word or term evaluates to."""
    if isinstance(label, FTerm):
        label = erase_m(label)
    return eval_word(oracle, label)


@dataclass(frozen=True, eq=False)
class RelationSystem:
    """A finite symmetric set of label pairs, each equal in the group.

    Word pairs drive path-based saturation on connected graphs; term pairs
    drive journey-based saturation on arbitrary graphs.
    """

    oracle: GroupOracle
    mode: str
    pairs: tuple[tuple[Label, Label], ...]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RelationSystem):
            return NotImplemented
        return (self.oracle == other.oracle and self.mode == other.mode
                and self.pairs == other.pairs)

    def __hash__(self) -> int:
        return hash((self.mode, self.pairs))


def relation_system(oracle: GroupOracle, mode: str,
                    pairs: list[tuple[Label, Label]] | tuple) -> RelationSystem:
    """Validate, normalize and symmetrize a set of relation pairs."""
    if mode not in (WORD_MODE, TERM_MODE):
        raise ClosureError(f"unknown relation mode {mode!r}")
    normalized = set()
    for u, v in pairs:
        u = _normalize_label(u, mode)
        v = _normalize_label(v, mode)
        if label_image(oracle, u) != label_image(oracle, v):
            raise ClosureError("relation pair is not equal in the group")
        normalized.add((u, v))
        normalized.add((v, u))
    key = word_key if mode == WORD_MODE else term_key
    ordered = tuple(sorted(normalized, key=lambda p: (key(p[0]), key(p[1]))))
    return RelationSystem(oracle, mode, ordered)


def _normalize_label(label: Label, mode: str) -> Label:
    if mode == WORD_MODE:
        if isinstance(label, FTerm):
            return label.plain_word()
        return label
    if isinstance(label, Word):
        return FTerm.from_word(label)
    return label


IDENTITY_ALL = "identity_all"
IDENTITY_CONNECTED = "identity_connected"
TREE_CONNECT = "tree_connect"
RELATION = "relation"


@dataclass(frozen=True)
class ClosureOperator:
    kind: str
    relations: Optional[RelationSystem] = None

    @property
    def mode(self) -> str:
        """Which label language the operator's fixed points are defined by."""
        if self.kind == IDENTITY_CONNECTED:
            return WORD_MODE
        if self.kind == RELATION:
            return self.relations.mode
        return TERM_MODE


def identity_all() -> ClosureOperator:
    return ClosureOperator(IDENTITY_ALL)


def identity_connected() -> ClosureOperator:
    return ClosureOperator(IDENTITY_CONNECTED)


def tree_connect() -> ClosureOperator:
    return ClosureOperator(TREE_CONNECT)


def relation_closure(relations: RelationSystem) -> ClosureOperator:
    return ClosureOperator(RELATION, relations)


def occurrences(graph: Subgraph, label: Label) -> frozenset[tuple[GroupElem, GroupElem]]:
    """All (g, h) such that ``label`` reads from g to h inside the graph.

    Determinism of the ambient Cayley graph makes one trace attempt per start
    vertex exhaustive.
    """
    trace = trace_journey if isinstance(label, FTerm) else trace_path
    found = []
    for g in graph.vertices:
        h = trace(graph, g, label)
        if h is not None:
            found.append((g, h))
    return frozenset(found)


def full_p_expansion(graph: Subgraph, relations: RelationSystem) -> Subgraph:
    """One simultaneous saturation round.

    Wherever a relation side reads in the frozen input graph, the span of its
    partner is sewn on at the same start vertex.  In word mode the input must
    be connected; sewn paths share their start vertex, so the output stays
    connected.
    """
    word_mode = relations.mode == WORD_MODE
    if word_mode and not is_connected(graph):
        raise ClosureError("word-mode expansion requires a connected graph")
    vertices = set(graph.vertices)
    edges = set(graph.edges)
    for u, v in relations.pairs:
        for g, _h in occurrences(graph, u):
            if word_mode:
                piece = span_path(graph.oracle, g, v)
            else:
                piece = span_journey(graph.oracle, g, v)
            vertices |= piece.vertices
            edges |= piece.edges
    return Subgraph(graph.oracle, frozenset(vertices), frozenset(edges))


def is_closed(graph: Subgraph, relations: RelationSystem) -> bool:
    """Whether every relation pair reads between exactly the same vertex
    pairs of the graph."""
    return all(occurrences(graph, u) == occurrences(graph, v)
               for u, v in relations.pairs)


def geodesic_hull(graph: Subgraph) -> Subgraph:
    """Smallest connected subgraph of the Cayley tree of a free oracle that
    contains the graph: the union of reduced paths from a base vertex."""
    if graph.oracle.kind != FREE:
        raise ClosureError("tree-connect closure requires a free oracle")
    if not graph.vertices:
        return graph
    base = min(graph.vertices, key=GroupElem.sort_key)
    hull = graph
    base_inv = invert_elem(base)
    for v in graph.vertices:
        w = geodesic_word(graph.oracle, compose(base_inv, v))
        hull = union(hull, span_path(graph.oracle, base, w))
    return hull


def is_closed_under(graph: Subgraph, operator: ClosureOperator) -> bool:
    """Fixed-point test for any operator variant."""
    if operator.kind == IDENTITY_ALL:
        return True
    if operator.kind == IDENTITY_CONNECTED:
        return is_connected(graph)
    if operator.kind == TREE_CONNECT:
        return geodesic_hull(graph) == graph
    return is_closed(graph, operator.relations)


class ExpansionState:
    """Budgeted, stepwise closure of one graph under one operator.

    ``rounds`` counts rounds that grew the graph; detecting the fixpoint takes
    one extra no-op round which is not counted.  A round that overshoots the
    vertex budget is still completed before the state is marked exhausted.
    """

    def __init__(self, graph: Subgraph, operator: ClosureOperator,
                 budget: ClosureBudget):
        if operator.kind in (IDENTITY_CONNECTED, RELATION) \
                and operator.mode == WORD_MODE and not is_connected(graph):
            raise ClosureError("this operator only accepts connected graphs")
        if operator.kind == TREE_CONNECT and graph.oracle.kind != FREE:
            raise ClosureError("tree-connect closure requires a free oracle")
        self.graph = graph
        self.operator = operator
        self.budget = budget
        self.rounds = 0
        self.stabilized = False
        self.exhausted = False
        self._steps = 0

    @property
    def done(self) -> bool:
        return self.stabilized or self.exhausted

    def step(self) -> None:
        """Run one expansion round; no-op once stabilized or exhausted."""
        if self.done:
            return
        if self._steps >= self.budget.max_rounds:
            self.exhausted = True
            return
        nxt = self._expand_once()
        self._steps += 1
        if nxt == self.graph:
            self.stabilized = True
            return
        self.graph = nxt
        self.rounds = self._steps
        if self.operator.kind == RELATION and self.operator.mode == WORD_MODE:
            assert is_connected(nxt), "expansion broke connectivity"
        if len(nxt.vertices) > self.budget.max_vertices:
            self.exhausted = True

    def _expand_once(self) -> Subgraph:
        kind = self.operator.kind
        if kind in (IDENTITY_ALL, IDENTITY_CONNECTED):
            return self.graph
        if kind == TREE_CONNECT:
            return geodesic_hull(self.graph)
        return full_p_expansion(self.graph, self.operator.relations)

    def result(self) -> ClosureResult:
        status = ClosureStatus.STABILIZED if self.stabilized \
            else ClosureStatus.BUDGET_EXHAUSTED
        return ClosureResult(self.graph, status, self.rounds)


def close(graph: Subgraph, operator: ClosureOperator,
          budget: ClosureBudget) -> ClosureResult:
    """Budgeted closure; the graph grows monotonically across rounds."""
    state = ExpansionState(graph, operator, budget)
    while not state.done:
        state.step()
    return state.result()


def expansion_trace(graph: Subgraph, operator: ClosureOperator,
                    budget: ClosureBudget) -> tuple[list[Subgraph], ClosureResult]:
    """The round-by-round graph sequence, starting at the input graph."""
    state = ExpansionState(graph, operator, budget)
    trace = [state.graph]
    while not state.done:
        before = state.graph
        state.step()
        if state.graph != before:
            trace.append(state.graph)
    return trace, state.result()
