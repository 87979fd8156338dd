"""Monoids of pairs (closed subgraph, group element).

An element is carried by a finite seed graph containing the identity vertex
and the element's group image (the anchor), together with the budgeted closure
of that seed.  Arithmetic acts on seeds, so it stays exact even when a closure
ran out of budget: union and translation commute with closing.  Comparisons,
in contrast, are only defined once both closures stabilized; anything else is
routed through the semi-decision protocol of the presentation layer.

With a connected-graph closure this realizes E-unitary inverse monoids
(identity closure: the Margolis-Meakin expansion; over a free group: the free
inverse monoid in its Munn-tree form).  With an all-subgraph closure it
realizes F-inverse monoids in the signature extended by the greatest-element
operation (identity closure over a free group: the free F-inverse monoid;
tree-connect closure: the free inverse monoid viewed as an F-inverse monoid).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .closure import (
    ClosureBudget,
    ClosureError,
    ClosureOperator,
    ClosureResult,
    RELATION,
    TERM_MODE,
    TREE_CONNECT,
    WORD_MODE,
    close,
    identity_all,
    identity_connected,
    is_closed_under,
    label_image,
    tree_connect,
)
from .graphs import (
    Subgraph,
    contains,
    full_cayley_graph,
    is_connected,
    span_journey,
    span_path,
    translate,
    union,
    vertex_graph,
)
from .groups import (
    FREE,
    PERMUTATION,
    GroupElem,
    GroupOracle,
    OracleError,
    compose,
    free_group,
    invert_elem,
)
from .words import Alphabet, FTerm, Letter, Word

E_UNITARY = "e-unitary"
F_INVERSE = "f-inverse"


class ModeError(ValueError):
    """Operation or label not available in the context's mode."""


class NotStabilizedError(RuntimeError):
    """Comparison attempted on an element whose closure ran out of budget."""


@dataclass(frozen=True)
class MonoidContext:
    """Ambient data of one monoid: oracle, closure operator, mode, budget."""

    oracle: GroupOracle
    closure: ClosureOperator
    mode: str
    default_budget: ClosureBudget = ClosureBudget()

    def __post_init__(self) -> None:
        if self.mode not in (E_UNITARY, F_INVERSE):
            raise ModeError(f"unknown mode {self.mode!r}")
        expected = WORD_MODE if self.mode == E_UNITARY else TERM_MODE
        if self.closure.mode != expected:
            raise ModeError(
                f"{self.mode} mode requires a {expected}-mode closure operator")
        if self.closure.kind == TREE_CONNECT and self.oracle.kind != FREE:
            raise ModeError("tree-connect closure requires a free oracle")
        if self.closure.kind == RELATION \
                and self.closure.relations.oracle != self.oracle:
            raise ModeError("relation system belongs to a different oracle")


@dataclass(frozen=True, eq=False)
class Element:
    """A monoid element (closed graph, anchor), carried by its seed.

    Equality and hashing are by (closed graph, anchor) and are only defined
    once the closure stabilized.
    """

    context: MonoidContext
    seed: Subgraph
    anchor: GroupElem
    closed: ClosureResult

    @property
    def stabilized(self) -> bool:
        return self.closed.stabilized

    @property
    def graph(self) -> Subgraph:
        return self.closed.graph

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        if self.context != other.context:
            return False
        if not (self.stabilized and other.stabilized):
            raise NotStabilizedError(
                "element equality is undefined on budget-exhausted closures")
        return self.graph == other.graph and self.anchor == other.anchor

    def __hash__(self) -> int:
        if not self.stabilized:
            raise NotStabilizedError(
                "element hashing is undefined on budget-exhausted closures")
        return hash((self.graph, self.anchor))

    def __mul__(self, other: "Element") -> "Element":
        return multiply(self.context, self, other)

    def __invert__(self) -> "Element":
        return inverse(self.context, self)

    def __repr__(self) -> str:
        return (f"Element(anchor={self.anchor}, "
                f"vertices={self.graph.vertex_count()}, "
                f"edges={self.graph.edge_count()}, "
                f"status={self.closed.status.value})")


def _element(ctx: MonoidContext, seed: Subgraph, anchor: GroupElem) -> Element:
    identity = ctx.oracle.identity()
    if identity not in seed.vertices or anchor not in seed.vertices:
        raise ValueError("seed must contain the identity and the anchor")
    if ctx.mode == E_UNITARY and not is_connected(seed):
        raise ModeError("e-unitary elements need connected seeds")
    closed = close(seed, ctx.closure, ctx.default_budget)
    return Element(ctx, seed, anchor, closed)


def eval_word_elem(ctx: MonoidContext, w: Word) -> Element:
    """The element represented by a word: seeded by its path span from 1."""
    seed = span_path(ctx.oracle, ctx.oracle.identity(), w)
    return _element(ctx, seed, label_image(ctx.oracle, w))


def eval_term_elem(ctx: MonoidContext, t: FTerm) -> Element:
    """The element represented by a term: seeded by its journey span from 1."""
    if ctx.mode == E_UNITARY:
        raise ModeError("terms with jump markers need f-inverse mode")
    seed = span_journey(ctx.oracle, ctx.oracle.identity(), t)
    return _element(ctx, seed, label_image(ctx.oracle, t))


def identity_element(ctx: MonoidContext) -> Element:
    return eval_word_elem(ctx, Word())


def generator_element(ctx: MonoidContext, base: int, sign: int = 1) -> Element:
    return eval_word_elem(ctx, Word((Letter(base, sign),)))


def _check_context(ctx: MonoidContext, *elems: Element) -> None:
    for e in elems:
        if e.context != ctx:
            raise ValueError("element belongs to a different context")


def multiply(ctx: MonoidContext, a: Element, b: Element) -> Element:
    """Product: union the seeds (b translated by a's anchor), re-close."""
    _check_context(ctx, a, b)
    seed = union(a.seed, translate(a.anchor, b.seed))
    return _element(ctx, seed, compose(a.anchor, b.anchor))


def inverse(ctx: MonoidContext, a: Element) -> Element:
    """Inverse: translate the seed by the inverse anchor."""
    _check_context(ctx, a)
    g_inv = invert_elem(a.anchor)
    return _element(ctx, translate(g_inv, a.seed), g_inv)


def max_m(ctx: MonoidContext, a: Element) -> Element:
    """Greatest element of a's class under the group-image congruence:
    re-close the bare two-vertex seed {1, anchor}."""
    _check_context(ctx, a)
    if ctx.mode != F_INVERSE:
        raise ModeError("the greatest-element operation needs f-inverse mode")
    seed = vertex_graph(ctx.oracle, (ctx.oracle.identity(), a.anchor))
    return _element(ctx, seed, a.anchor)


def leq(ctx: MonoidContext, a: Element, b: Element) -> bool:
    """Natural partial order: equal anchors and b's graph inside a's."""
    _check_context(ctx, a, b)
    if not (a.stabilized and b.stabilized):
        raise NotStabilizedError("order comparison needs stabilized closures")
    return a.anchor == b.anchor and contains(a.graph, b.graph)


def sigma(a: Element) -> GroupElem:
    """Image in the greatest group quotient; this is just the anchor."""
    return a.anchor


def is_idempotent(a: Element) -> bool:
    if not a.stabilized:
        raise NotStabilizedError("idempotency test needs a stabilized closure")
    return a.anchor.is_identity


def meet_idempotent(ctx: MonoidContext, e: Element, f: Element) -> Element:
    """Meet of two idempotents: close the union of their graphs."""
    if not (is_idempotent(e) and is_idempotent(f)):
        raise ValueError("meet is only defined for idempotents")
    return multiply(ctx, e, f)


def canonical_morphism(ctx_from: MonoidContext, ctx_to: MonoidContext,
                       a: Element) -> Element:
    """Re-close a's seed under the target closure, keeping the anchor.

    This is the canonical homomorphism between the two monoids whenever the
    target closure dominates the source one; that containment is spot-checked
    on the given seed.
    """
    _check_context(ctx_from, a)
    if ctx_from.oracle != ctx_to.oracle or ctx_from.mode != ctx_to.mode:
        raise ValueError("canonical morphism needs matching oracle and mode")
    image = _element(ctx_to, a.seed, a.anchor)
    if a.stabilized and image.stabilized and not contains(image.graph, a.graph):
        raise ClosureError(
            "target closure does not dominate the source closure on this seed")
    return image


def elements_enumerate(ctx: MonoidContext) -> frozenset[Element]:
    """All elements over a finite oracle, by brute-force seed enumeration.

    Every closed graph is its own closure, so enumerating closed subgraphs of
    the (finite) Cayley graph containing the identity, anchored at each of
    their vertices, is exhaustive.
    """
    if ctx.oracle.kind != PERMUTATION:
        raise OracleError("enumeration needs a finite (permutation) oracle")
    gamma = full_cayley_graph(ctx.oracle)
    identity = ctx.oracle.identity()
    others = sorted((v for v in gamma.vertices if v != identity),
                    key=GroupElem.sort_key)
    all_edges = sorted(gamma.edges, key=lambda e: (e[0].sort_key(), e[1]))
    if len(others) + len(all_edges) > 22:
        raise OracleError("Cayley graph too large for exhaustive enumeration")
    out = set()
    for k in range(len(others) + 1):
        for chosen in itertools.combinations(others, k):
            vset = frozenset((identity,) + chosen)
            induced = [e for e in all_edges
                       if e[0] in vset and gamma.edge_target(*e) in vset]
            for j in range(len(induced) + 1):
                for esub in itertools.combinations(induced, j):
                    graph = Subgraph(ctx.oracle, vset, frozenset(esub))
                    if ctx.mode == E_UNITARY and not is_connected(graph):
                        continue
                    if not is_closed_under(graph, ctx.closure):
                        continue
                    for anchor in graph.vertices:
                        out.add(_element(ctx, graph, anchor))
    return frozenset(out)


# --- ready-made contexts -----------------------------------------------------

def margolis_meakin_context(oracle: GroupOracle,
                            budget: Optional[ClosureBudget] = None) -> MonoidContext:
    """E-unitary expansion of a group: identity closure on connected graphs."""
    return MonoidContext(oracle, identity_connected(), E_UNITARY,
                         budget or ClosureBudget())


def fim_context(alphabet: Alphabet | Iterable[str],
                budget: Optional[ClosureBudget] = None) -> MonoidContext:
    """Free inverse monoid in its Munn-tree form."""
    return margolis_meakin_context(free_group(alphabet), budget)


def free_f_inverse_context(oracle: GroupOracle,
                           budget: Optional[ClosureBudget] = None) -> MonoidContext:
    """Initial F-inverse object over the oracle: identity closure on all
    subgraphs; over a free group this is the free F-inverse monoid."""
    return MonoidContext(oracle, identity_all(), F_INVERSE,
                         budget or ClosureBudget())


def fim_as_f_inverse_context(alphabet: Alphabet | Iterable[str],
                             budget: Optional[ClosureBudget] = None) -> MonoidContext:
    """The free inverse monoid as an F-inverse monoid: tree-connect closure."""
    return MonoidContext(free_group(alphabet), tree_connect(), F_INVERSE,
                         budget or ClosureBudget())
