"""Presentation files, word-problem verdicts, graph export, expansion tracing.

Presentation grammar (statements end with ``;``, comments run from ``#`` to
end of line):

    inv                    -- word relators, E-unitary machinery
    finv                   -- term relators (jump markers allowed)
    gens x y ...           -- generator names
    group free             -- free group on the generators (the default)
    group abelian          -- free abelian group on the generators
    group perm N x=(1 2) y=(1 2 3) ...
                           -- permutation group on N points, cycle notation,
                              identity written ()
    rels LHS = RHS         -- one relator pair; empty side = identity word
    builtin fim | free_finv | margolis_meakin | fim_as_finv
                           -- closure of a named model instead of relators

Equality of two labels is semi-decided by growing both saturation sequences
and checking mutual containment of the initial spans; the order query grows
one sequence and re-traces the candidate label each round.  Verdicts print as
single machine-parseable lines ``VERDICT=<...> ROUNDS=<n> VERTICES=<n>`` and
map to exit codes 0 (equal / greater-or-equal), 1 (refuted), 2 (unknown at
budget), 3 (usage or load error).
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, replace
from typing import Optional, Union

from .closure import (
    ClosureBudget,
    ClosureError,
    ExpansionState,
    WORD_MODE,
    label_image,
    relation_closure,
    relation_system,
)
from .graphs import Subgraph, contains, span_journey, span_path, to_dot, trace_journey, trace_path
from .groups import GroupOracle, OracleError, free_abelian_group, free_group, parse_cycles, permutation_group
from .monoid import (
    E_UNITARY,
    F_INVERSE,
    MonoidContext,
    eval_term_elem,
    eval_word_elem,
    fim_as_f_inverse_context,
    fim_context,
    free_f_inverse_context,
    margolis_meakin_context,
)
from .words import Alphabet, FTerm, ParseError, Word, parse_term, parse_word

Label = Union[Word, FTerm]

BUILTINS = ("fim", "free_finv", "margolis_meakin", "fim_as_finv")


class PresentationError(ValueError):
    """Malformed presentation file or invalid relator set."""


@dataclass(frozen=True)
class Presentation:
    kind: str  # "inv" | "finv"
    alphabet: Alphabet
    oracle: GroupOracle
    builtin: Optional[str]
    relators: tuple[tuple[Label, Label], ...]


@dataclass(frozen=True)
class Verdict:
    """Outcome of a word-problem query.

    EQUAL / NOT_EQUAL / GREATER_EQ / NOT_GREATER_EQ are final; UNKNOWN carries
    the rounds and sizes reached when the budget ran out.  ``vertices`` totals
    the tracked saturation graphs.
    """

    kind: str
    reason: Optional[str] = None
    rounds: int = 0
    vertices: int = 0

    def line(self) -> str:
        reason = f" REASON={self.reason}" if self.reason else ""
        return (f"VERDICT={self.kind}{reason}"
                f" ROUNDS={self.rounds} VERTICES={self.vertices}")

    @property
    def exit_code(self) -> int:
        if self.kind in ("EQUAL", "GREATER_EQ"):
            return 0
        if self.kind in ("NOT_EQUAL", "NOT_GREATER_EQ"):
            return 1
        return 2


# --- presentation parsing ----------------------------------------------------

_PERM_IMAGE = re.compile(r"([a-zA-Z][a-zA-Z0-9_]*)\s*=\s*((?:\([\d\s]*\))+)")


def parse_presentation(text: str) -> tuple[MonoidContext, Presentation]:
    """Parse a presentation file; relator pairs are validated to be equal in
    the declared group (a load error otherwise)."""
    kind = None
    gens: Optional[list[str]] = None
    group_stmt: Optional[list[str]] = None
    rel_stmts: list[str] = []
    builtin: Optional[str] = None

    text = re.sub(r"#[^\n]*", "", text)
    for raw in text.split(";"):
        stmt = raw.strip()
        if not stmt:
            continue
        head, _, rest = stmt.partition(" ")
        rest = rest.strip()
        if head in ("inv", "finv"):
            if rest:
                raise PresentationError(f"unexpected text after {head!r}")
            if kind is not None:
                raise PresentationError("mode declared twice")
            kind = head
        elif head == "gens":
            if gens is not None:
                raise PresentationError("generators declared twice")
            gens = rest.split()
            if not gens:
                raise PresentationError("empty generator list")
        elif head == "group":
            if group_stmt is not None:
                raise PresentationError("group declared twice")
            group_stmt = rest.split(None, 2)
            if not group_stmt:
                raise PresentationError("empty group declaration")
        elif head == "rels":
            rel_stmts.append(rest)
        elif head == "builtin":
            if builtin is not None:
                raise PresentationError("builtin declared twice")
            builtin = rest
            if builtin not in BUILTINS:
                raise PresentationError(f"unknown builtin {builtin!r}")
        else:
            raise PresentationError(f"unknown statement {head!r}")

    if kind is None:
        raise PresentationError("missing mode statement (inv or finv)")
    if gens is None:
        raise PresentationError("missing gens statement")
    if builtin is not None and rel_stmts:
        raise PresentationError("builtin and rels are mutually exclusive")

    try:
        alphabet = Alphabet(tuple(gens))
        oracle = _build_oracle(alphabet, group_stmt)
        if builtin is not None:
            ctx = _builtin_context(builtin, kind, oracle)
            pres = Presentation(kind, alphabet, oracle, builtin, ())
            return ctx, pres
        relators = tuple(_parse_relator(stmt, kind, alphabet)
                         for stmt in rel_stmts)
        mode = WORD_MODE if kind == "inv" else "term"
        system = relation_system(oracle, mode, list(relators))
        ctx = MonoidContext(oracle, relation_closure(system),
                            E_UNITARY if kind == "inv" else F_INVERSE)
        return ctx, Presentation(kind, alphabet, oracle, None, relators)
    except (ParseError, OracleError, ClosureError) as exc:
        raise PresentationError(str(exc)) from exc


def _build_oracle(alphabet: Alphabet, group_stmt: Optional[list[str]]) -> GroupOracle:
    if group_stmt is None:
        group_stmt = ["free"]
    kind = group_stmt[0]
    if kind == "free":
        if len(group_stmt) > 1:
            raise PresentationError("unexpected text after 'group free'")
        return free_group(alphabet)
    if kind == "abelian":
        if len(group_stmt) > 1:
            raise PresentationError("unexpected text after 'group abelian'")
        return free_abelian_group(alphabet)
    if kind == "perm":
        if len(group_stmt) < 2:
            raise PresentationError("'group perm' needs a degree")
        try:
            degree = int(group_stmt[1])
        except ValueError:
            raise PresentationError(f"bad degree {group_stmt[1]!r}") from None
        images_text = group_stmt[2] if len(group_stmt) > 2 else ""
        images: dict[str, tuple[int, ...]] = {}
        for match in _PERM_IMAGE.finditer(images_text):
            name, cycles = match.group(1), match.group(2)
            if name in images:
                raise PresentationError(f"image of {name!r} declared twice")
            images[name] = parse_cycles(cycles, degree)
        leftover = _PERM_IMAGE.sub("", images_text).strip()
        if leftover:
            raise PresentationError(
                f"unparsed text in group declaration: {leftover!r}")
        return permutation_group(alphabet, degree, images)
    raise PresentationError(f"unknown group kind {kind!r}")


def _parse_relator(stmt: str, kind: str, alphabet: Alphabet) -> tuple[Label, Label]:
    if "=" not in stmt:
        raise PresentationError(f"relator without '=': {stmt!r}")
    lhs_text, _, rhs_text = stmt.partition("=")
    if kind == "inv":
        return (parse_word(lhs_text.strip(), alphabet),
                parse_word(rhs_text.strip(), alphabet))
    return (parse_term(lhs_text.strip(), alphabet),
            parse_term(rhs_text.strip(), alphabet))


def _builtin_context(builtin: str, kind: str, oracle: GroupOracle) -> MonoidContext:
    if builtin in ("fim", "margolis_meakin") and kind != "inv":
        raise PresentationError(f"builtin {builtin!r} needs inv mode")
    if builtin in ("free_finv", "fim_as_finv") and kind != "finv":
        raise PresentationError(f"builtin {builtin!r} needs finv mode")
    if builtin == "fim":
        if oracle.kind != "free":
            raise PresentationError("builtin 'fim' needs a free group")
        return fim_context(oracle.alphabet)
    if builtin == "margolis_meakin":
        return margolis_meakin_context(oracle)
    if builtin == "free_finv":
        return free_f_inverse_context(oracle)
    if oracle.kind != "free":
        raise PresentationError("builtin 'fim_as_finv' needs a free group")
    return fim_as_f_inverse_context(oracle.alphabet)


# --- queries -------------------------------------------------------------

def _normalize(ctx: MonoidContext, label: Label) -> Label:
    if ctx.mode == E_UNITARY:
        if isinstance(label, FTerm):
            return label.plain_word()
        return label
    if isinstance(label, Word):
        return FTerm.from_word(label)
    return label


def _span(ctx: MonoidContext, label: Label) -> Subgraph:
    identity = ctx.oracle.identity()
    if isinstance(label, FTerm):
        return span_journey(ctx.oracle, identity, label)
    return span_path(ctx.oracle, identity, label)


def _trace(graph: Subgraph, label: Label):
    identity = graph.oracle.identity()
    if isinstance(label, FTerm):
        return trace_journey(graph, identity, label)
    return trace_path(graph, identity, label)


def check_equal(ctx: MonoidContext, u: Label, v: Label,
                budget: Optional[ClosureBudget] = None) -> Verdict:
    """Semi-decide u = v by growing both saturation sequences.

    EQUAL as soon as each initial span is contained in the other side's
    current graph; NOT_EQUAL if the group images differ, or if both sequences
    stabilize on distinct graphs; UNKNOWN once both sides hit the budget.
    """
    budget = budget or ctx.default_budget
    u = _normalize(ctx, u)
    v = _normalize(ctx, v)
    span_u = _span(ctx, u)
    span_v = _span(ctx, v)
    if label_image(ctx.oracle, u) != label_image(ctx.oracle, v):
        return Verdict("NOT_EQUAL", "group-image", 0,
                       span_u.vertex_count() + span_v.vertex_count())
    state_u = ExpansionState(span_u, ctx.closure, budget)
    state_v = ExpansionState(span_v, ctx.closure, budget)
    while True:
        rounds = max(state_u.rounds, state_v.rounds)
        total = state_u.graph.vertex_count() + state_v.graph.vertex_count()
        if contains(state_u.graph, span_v) and contains(state_v.graph, span_u):
            return Verdict("EQUAL", None, rounds, total)
        if state_u.stabilized and state_v.stabilized:
            return Verdict("NOT_EQUAL", "stabilized-distinct", rounds, total)
        if state_u.done and state_v.done:
            return Verdict("UNKNOWN", None, rounds, total)
        state_u.step()
        state_v.step()


def check_geq(ctx: MonoidContext, u: Label, w: Label,
              budget: Optional[ClosureBudget] = None) -> Verdict:
    """Semi-decide u >= w: u must read from 1 to w's image inside the
    saturation of w's span."""
    budget = budget or ctx.default_budget
    u = _normalize(ctx, u)
    w = _normalize(ctx, w)
    w_image = label_image(ctx.oracle, w)
    if label_image(ctx.oracle, u) != w_image:
        return Verdict("NOT_GREATER_EQ", "group-image", 0,
                       _span(ctx, w).vertex_count())
    state = ExpansionState(_span(ctx, w), ctx.closure, budget)
    while True:
        if _trace(state.graph, u) == w_image:
            return Verdict("GREATER_EQ", None, state.rounds,
                           state.graph.vertex_count())
        if state.stabilized:
            return Verdict("NOT_GREATER_EQ", "stabilized", state.rounds,
                           state.graph.vertex_count())
        if state.done:
            return Verdict("UNKNOWN", None, state.rounds,
                           state.graph.vertex_count())
        state.step()


def graph_export(ctx: MonoidContext, label: Label,
                 budget: Optional[ClosureBudget] = None,
                 rounds: bool = False):
    """DOT text of the (possibly budget-truncated) saturation of the label's
    span, with 1 and the label's image double-circled; with ``rounds`` a list
    with one DOT text per expansion round."""
    budget = budget or ctx.default_budget
    label = _normalize(ctx, label)
    highlights = (ctx.oracle.identity(), label_image(ctx.oracle, label))
    state = ExpansionState(_span(ctx, label), ctx.closure, budget)
    snapshots = [state.graph]
    while not state.done:
        before = state.graph
        state.step()
        if state.graph != before:
            snapshots.append(state.graph)
    if rounds:
        return [to_dot(g, highlights) for g in snapshots]
    return to_dot(snapshots[-1], highlights)


def expansion_report(ctx: MonoidContext, label: Label,
                     budget: Optional[ClosureBudget] = None) -> list[str]:
    """One text line per expansion round plus a final status line."""
    budget = budget or ctx.default_budget
    label = _normalize(ctx, label)
    state = ExpansionState(_span(ctx, label), ctx.closure, budget)
    lines = [f"ROUND=0 VERTICES={state.graph.vertex_count()}"
             f" EDGES={state.graph.edge_count()}"]
    while not state.done:
        before = state.graph
        state.step()
        if state.graph != before:
            lines.append(f"ROUND={state.rounds}"
                         f" VERTICES={state.graph.vertex_count()}"
                         f" EDGES={state.graph.edge_count()}")
    result = state.result()
    lines.append(f"STATUS={result.status.value} ROUNDS={result.rounds_used}"
                 f" VERTICES={result.graph.vertex_count()}")
    return lines


# --- command line -------------------------------------------------------

def _parse_label(ctx: MonoidContext, pres: Presentation, text: str) -> Label:
    if pres.kind == "inv":
        return parse_word(text, pres.alphabet)
    return parse_term(text, pres.alphabet)


def _maybe_caveat(pres: Presentation) -> None:
    if pres.kind == "inv" and pres.builtin is None:
        print("note: inv-mode verdicts are valid under the presentation's "
              "E-unitarity assumption", file=sys.stderr)


def main(argv: Optional[list[str]] = None) -> int:
    budget_parser = argparse.ArgumentParser(add_help=False)
    budget_parser.add_argument("--budget-rounds", type=int, default=64,
                               metavar="N", help="max expansion rounds per graph")
    budget_parser.add_argument("--budget-vertices", type=int, default=10000,
                               metavar="N", help="max vertices per graph")

    parser = argparse.ArgumentParser(
        prog="finverse",
        description="word problems and saturation graphs for inverse and "
                    "F-inverse monoid presentations")
    parser.add_argument("presentation", help="path to a presentation file")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[budget_parser],
                            help="evaluate a label to an element")
    p_eval.add_argument("label")
    p_eq = sub.add_parser("eq", parents=[budget_parser],
                          help="semi-decide equality of two labels")
    p_eq.add_argument("lhs")
    p_eq.add_argument("rhs")
    p_geq = sub.add_parser("geq", parents=[budget_parser],
                           help="semi-decide the natural order u >= w")
    p_geq.add_argument("upper")
    p_geq.add_argument("lower")
    p_graph = sub.add_parser("graph", parents=[budget_parser],
                             help="export the saturation graph as DOT")
    p_graph.add_argument("label")
    p_graph.add_argument("--rounds", action="store_true",
                         help="one DOT digraph per expansion round")
    p_graph.add_argument("--dot", metavar="PATH",
                         help="write DOT to a file instead of stdout")
    p_trace = sub.add_parser("trace", parents=[budget_parser],
                             help="print per-round growth of the saturation")
    p_trace.add_argument("label")

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 3 if exc.code not in (0, None) else 0

    try:
        with open(args.presentation, encoding="utf-8") as handle:
            ctx, pres = parse_presentation(handle.read())
        budget = ClosureBudget(args.budget_rounds, args.budget_vertices)
        ctx = replace(ctx, default_budget=budget)
        if args.command == "eval":
            label = _parse_label(ctx, pres, args.label)
            elem = (eval_word_elem(ctx, label) if isinstance(label, Word)
                    else eval_term_elem(ctx, label))
            result = elem.closed
            print(f"STATUS={result.status.value} ROUNDS={result.rounds_used}"
                  f" VERTICES={result.graph.vertex_count()}"
                  f" EDGES={result.graph.edge_count()}"
                  f" ANCHOR=\"{elem.anchor}\"")
            return 0
        if args.command == "eq":
            _maybe_caveat(pres)
            verdict = check_equal(ctx, _parse_label(ctx, pres, args.lhs),
                                  _parse_label(ctx, pres, args.rhs), budget)
            print(verdict.line())
            return verdict.exit_code
        if args.command == "geq":
            _maybe_caveat(pres)
            verdict = check_geq(ctx, _parse_label(ctx, pres, args.upper),
                                _parse_label(ctx, pres, args.lower), budget)
            print(verdict.line())
            return verdict.exit_code
        if args.command == "graph":
            label = _parse_label(ctx, pres, args.label)
            out = graph_export(ctx, label, budget, rounds=args.rounds)
            text = "\n".join(out) if args.rounds else out
            if args.dot:
                with open(args.dot, "w", encoding="utf-8") as handle:
                    handle.write(text)
            else:
                print(text, end="")
            return 0
        label = _parse_label(ctx, pres, args.label)
        for line in expansion_report(ctx, label, budget):
            print(line)
        return 0
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (PresentationError, ParseError, OracleError, ClosureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
