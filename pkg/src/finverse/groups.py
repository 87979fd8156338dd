"""X-generated group oracles with canonical element forms.

Only kinds with a trivially decidable word problem are provided (free, free
abelian, finite permutation): every downstream construction needs to decide
vertex equality in the group's Cayley graph.  The Cayley graph itself is never
materialized; neighbors are computed by multiplying with generator images.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from .words import Alphabet, Letter, Word

FREE = "free"
FREE_ABELIAN = "free_abelian"
PERMUTATION = "permutation"

_KINDS = (FREE, FREE_ABELIAN, PERMUTATION)


class OracleError(ValueError):
    """Oracle mismatch, invalid declaration, or unsupported operation."""


@dataclass(frozen=True)
class GroupOracle:
    """An X-generated group with canonical forms for its elements.

    ``images`` is only used for the permutation kind: one table per generator,
    mapping points 0..degree-1.
    """

    kind: str
    alphabet: Alphabet
    degree: int = 0
    images: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise OracleError(f"unknown oracle kind {self.kind!r}")
        if self.kind == PERMUTATION:
            if self.degree < 1:
                raise OracleError("permutation degree must be positive")
            if len(self.images) != len(self.alphabet):
                raise OracleError("every generator needs a permutation image")
            for table in self.images:
                if sorted(table) != list(range(self.degree)):
                    raise OracleError(f"not a bijection on {self.degree} points: {table}")

    @property
    def rank(self) -> int:
        return len(self.alphabet)

    def identity(self) -> "GroupElem":
        if self.kind == FREE:
            return GroupElem(self, ())
        if self.kind == FREE_ABELIAN:
            return GroupElem(self, (0,) * self.rank)
        return GroupElem(self, tuple(range(self.degree)))


def free_group(names: Iterable[str] | Alphabet) -> GroupOracle:
    return GroupOracle(FREE, _as_alphabet(names))


def free_abelian_group(names: Iterable[str] | Alphabet) -> GroupOracle:
    return GroupOracle(FREE_ABELIAN, _as_alphabet(names))


def permutation_group(names: Iterable[str] | Alphabet, degree: int,
                      images: Mapping[str, str | tuple[int, ...]]) -> GroupOracle:
    """Finite permutation oracle; images given as tables or cycle strings."""
    alphabet = _as_alphabet(names)
    tables = []
    for name in alphabet.names:
        if name not in images:
            raise OracleError(f"no image given for generator {name!r}")
        image = images[name]
        if isinstance(image, str):
            image = parse_cycles(image, degree)
        tables.append(tuple(image))
    return GroupOracle(PERMUTATION, alphabet, degree, tuple(tables))


def _as_alphabet(names: Iterable[str] | Alphabet) -> Alphabet:
    return names if isinstance(names, Alphabet) else Alphabet(tuple(names))


@dataclass(frozen=True, eq=False)
class GroupElem:
    """Canonical form of a group element; hashed by form only."""

    oracle: GroupOracle
    form: tuple

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupElem):
            return NotImplemented
        return self.form == other.form and (
            self.oracle is other.oracle or self.oracle == other.oracle)

    def __hash__(self) -> int:
        return hash(self.form)

    @property
    def is_identity(self) -> bool:
        return self == self.oracle.identity()

    def sort_key(self) -> tuple:
        if self.oracle.kind == FREE:
            return (len(self.form), self.form)
        return (0, self.form)

    def __str__(self) -> str:
        if self.oracle.kind == FREE:
            if not self.form:
                return "1"
            alphabet = self.oracle.alphabet
            return " ".join(
                alphabet.name(b) if s > 0 else alphabet.name(b) + "^-1"
                for b, s in self.form)
        if self.oracle.kind == FREE_ABELIAN:
            return "(" + ",".join(str(n) for n in self.form) + ")"
        return cycles_str(self.form)

    def __repr__(self) -> str:
        return f"GroupElem({self})"


@lru_cache(maxsize=None)
def _letter_image(oracle: GroupOracle, base: int, sign: int) -> GroupElem:
    if base >= oracle.rank:
        raise OracleError(f"letter index {base} outside alphabet")
    if oracle.kind == FREE:
        return GroupElem(oracle, ((base, sign),))
    if oracle.kind == FREE_ABELIAN:
        vec = [0] * oracle.rank
        vec[base] = sign
        return GroupElem(oracle, tuple(vec))
    table = oracle.images[base]
    if sign < 0:
        table = _invert_table(table)
    return GroupElem(oracle, table)


def _invert_table(table: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(table)
    for i, j in enumerate(table):
        out[j] = i
    return tuple(out)


def eval_word(oracle: GroupOracle, w: Word) -> GroupElem:
    """Canonical form of the product of generator images along ``w``."""
    if oracle.kind == FREE:
        stack: list[tuple[int, int]] = []
        for letter in w:
            if letter.base >= oracle.rank:
                raise OracleError(f"letter index {letter.base} outside alphabet")
            if stack and stack[-1][0] == letter.base and stack[-1][1] == -letter.sign:
                stack.pop()
            else:
                stack.append((letter.base, letter.sign))
        return GroupElem(oracle, tuple(stack))
    g = oracle.identity()
    for letter in w:
        g = right_mul(g, letter)
    return g


def compose(a: GroupElem, b: GroupElem) -> GroupElem:
    if a.oracle is not b.oracle and a.oracle != b.oracle:
        raise OracleError("elements belong to different oracles")
    oracle = a.oracle
    if oracle.kind == FREE:
        fa, fb = a.form, b.form
        i, j = len(fa), 0
        while i > 0 and j < len(fb) and fa[i - 1][0] == fb[j][0] \
                and fa[i - 1][1] == -fb[j][1]:
            i -= 1
            j += 1
        return GroupElem(oracle, fa[:i] + fb[j:])
    if oracle.kind == FREE_ABELIAN:
        return GroupElem(oracle, tuple(x + y for x, y in zip(a.form, b.form)))
    return GroupElem(oracle, tuple(b.form[p] for p in a.form))


def invert_elem(a: GroupElem) -> GroupElem:
    oracle = a.oracle
    if oracle.kind == FREE:
        return GroupElem(oracle, tuple((b, -s) for b, s in reversed(a.form)))
    if oracle.kind == FREE_ABELIAN:
        return GroupElem(oracle, tuple(-x for x in a.form))
    return GroupElem(oracle, _invert_table(a.form))


def right_mul(g: GroupElem, letter: Letter) -> GroupElem:
    """The Cayley-graph neighbor of ``g`` along ``letter``."""
    return compose(g, _letter_image(g.oracle, letter.base, letter.sign))


def geodesic_word(oracle: GroupOracle, g: GroupElem) -> Word:
    """The unique reduced word evaluating to ``g``; free oracles only.

    Other kinds have no canonical word form, which is the signal that callers
    must go through a relation-based closure instead.
    """
    if oracle.kind != FREE:
        raise OracleError("geodesic words are only defined for free oracles")
    return Word(tuple(Letter(b, s) for b, s in g.form))


def group_elements(oracle: GroupOracle) -> tuple[GroupElem, ...]:
    """All elements of a finite (permutation) oracle, in canonical order."""
    if oracle.kind != PERMUTATION:
        raise OracleError("only permutation oracles are finite")
    seen = {oracle.identity()}
    frontier = [oracle.identity()]
    while frontier:
        nxt = []
        for g in frontier:
            for base in range(oracle.rank):
                for sign in (1, -1):
                    h = right_mul(g, Letter(base, sign))
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
        frontier = nxt
    return tuple(sorted(seen, key=GroupElem.sort_key))


# --- cycle notation ----------------------------------------------------------

_CYCLES_RE = re.compile(r"\s*(?:\(\s*(?:\d+(?:\s+\d+)*)?\s*\)\s*)+")
_ONE_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    """Parse cycle notation like ``(1 2 3)`` or ``(1 2)(3 4)``; ``()`` is the
    identity.  Points are 1-based; successive cycles compose left to right.
    """
    if not _CYCLES_RE.fullmatch(text):
        raise OracleError(f"malformed cycle notation {text!r}")
    table = list(range(degree))
    for match in _ONE_CYCLE.finditer(text):
        body = match.group(1).split()
        points = [int(tok) - 1 for tok in body]
        if any(p < 0 or p >= degree for p in points):
            raise OracleError(f"cycle point outside 1..{degree} in {text!r}")
        if len(set(points)) != len(points):
            raise OracleError(f"repeated point within a cycle in {text!r}")
        if len(points) < 2:
            continue
        mapping = {points[i]: points[(i + 1) % len(points)]
                   for i in range(len(points))}
        table = [mapping.get(t, t) for t in table]
    return tuple(table)


def cycles_str(table: tuple[int, ...]) -> str:
    """Deterministic cycle form, cycles by least point, ``()`` for identity."""
    seen = [False] * len(table)
    cycles = []
    for start in range(len(table)):
        if seen[start] or table[start] == start:
            seen[start] = True
            continue
        cycle = [start]
        seen[start] = True
        point = table[start]
        while point != start:
            cycle.append(point)
            seen[point] = True
            point = table[point]
        cycles.append("(" + " ".join(str(p + 1) for p in cycle) + ")")
    return "".join(cycles) if cycles else "()"
