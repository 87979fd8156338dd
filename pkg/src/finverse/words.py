"""Free monoid with involution, and the jump-term language on top of it.

Generators are interned to integer indices via :class:`Alphabet`; a word is a
flat tuple of signed letters, which keeps hashing and comparison cheap (graph
saturation hashes words constantly).  Terms extend words with "jump" factors
``(v)^m`` and are kept in the alternating shape ``u0 (v1)^m u1 ... (vn)^m un``
with exactly one marker level; nested markers are rejected at parse time, and
callers that need to collapse a marked term first strip markers with
:func:`erase_m`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, NamedTuple


class ParseError(ValueError):
    """Malformed word/term text, or a generator name outside the alphabet."""


_NAME = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")


@dataclass(frozen=True)
class Alphabet:
    """Ordered generator names, interned to indices 0..n-1."""

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "names", tuple(self.names))
        for name in self.names:
            if not _NAME.fullmatch(name):
                raise ParseError(f"invalid generator name {name!r}")
        if len(set(self.names)) != len(self.names):
            raise ParseError("duplicate generator names")

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ParseError(f"unknown generator {name!r}") from None

    def name(self, index: int) -> str:
        return self.names[index]


class Letter(NamedTuple):
    """A generator (sign +1) or its formal inverse (sign -1)."""

    base: int
    sign: int

    def inverse(self) -> "Letter":
        return Letter(self.base, -self.sign)


@dataclass(frozen=True)
class Word:
    """A finite sequence of letters; the empty sequence is the identity."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple(self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)


EMPTY_WORD = Word()


@dataclass(frozen=True)
class FTerm:
    """Alternating term ``u0 (v1)^m u1 ... (vn)^m un``.

    ``words`` holds the n+1 plain factors and ``jumps`` the n marked ones;
    ``n = 0`` degenerates to a plain word.
    """

    words: tuple[Word, ...] = (EMPTY_WORD,)
    jumps: tuple[Word, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "words", tuple(self.words))
        object.__setattr__(self, "jumps", tuple(self.jumps))
        if len(self.words) != len(self.jumps) + 1:
            raise ValueError("term must alternate n+1 words with n jumps")

    @classmethod
    def from_word(cls, w: Word) -> "FTerm":
        return cls((w,), ())

    @property
    def is_plain(self) -> bool:
        return not self.jumps

    def plain_word(self) -> Word:
        if self.jumps:
            raise ValueError("term contains jump markers")
        return self.words[0]

    def __mul__(self, other: "FTerm") -> "FTerm":
        return concat_terms(self, other)


def concat_terms(a: FTerm, b: FTerm) -> FTerm:
    """Concatenate two terms, fusing the boundary word factors."""
    words = a.words[:-1] + (a.words[-1] * b.words[0],) + b.words[1:]
    return FTerm(words, a.jumps + b.jumps)


def invert_word(w: Word) -> Word:
    """Reverse the sequence and flip every sign; an involution."""
    return Word(tuple(letter.inverse() for letter in reversed(w.letters)))


def free_reduce(w: Word) -> Word:
    """The unique word with no factor ``x x^-1``, by iterated cancellation."""
    out: list[Letter] = []
    for letter in w.letters:
        if out and out[-1].base == letter.base and out[-1].sign == -letter.sign:
            out.pop()
        else:
            out.append(letter)
    return Word(tuple(out))


def invert_term(t: FTerm) -> FTerm:
    """Reverse the alternation, inverting every factor.

    The marked factors invert in place, i.e. ``(v)^m`` becomes ``(v^-1)^m``,
    so the result labels the reversed journey.
    """
    words = tuple(invert_word(u) for u in reversed(t.words))
    jumps = tuple(invert_word(v) for v in reversed(t.jumps))
    return FTerm(words, jumps)


def erase_m(t: FTerm) -> Word:
    """Concatenation of all factors with the jump markers removed."""
    letters: list[Letter] = list(t.words[0].letters)
    for v, u in zip(t.jumps, t.words[1:]):
        letters.extend(v.letters)
        letters.extend(u.letters)
    return Word(tuple(letters))


# --- parsing -----------------------------------------------------------------
#
# Grammar: tokens are generator names [a-zA-Z][a-zA-Z0-9_]*, each optionally
# suffixed by ^-1 or ^m; parenthesized groups ( ... ) may also take ^-1 or ^m;
# juxtaposition (whitespace) is concatenation; the empty string is the
# identity.  ^m marks its operand, which must be marker-free, as a jump word.

_TOKEN = re.compile(
    r"(?P<name>[a-zA-Z][a-zA-Z0-9_]*)"
    r"|(?P<inv>\^-1)"
    r"|(?P<m>\^m)"
    r"|(?P<lp>\()"
    r"|(?P<rp>\))"
    r"|(?P<ws>\s+)"
    r"|(?P<bad>.)"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    for match in _TOKEN.finditer(text):
        kind = match.lastgroup
        if kind == "ws":
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character {match.group()!r}")
        tokens.append((kind, match.group()))
    return tokens


def _parse_items(tokens: list[tuple[str, str]], pos: int, alphabet: Alphabet,
                 depth: int) -> tuple[FTerm, int]:
    items: list[FTerm] = []
    while pos < len(tokens):
        kind, value = tokens[pos]
        if kind == "name":
            letter = Letter(alphabet.index(value), 1)
            items.append(FTerm.from_word(Word((letter,))))
            pos += 1
        elif kind == "lp":
            inner, pos = _parse_items(tokens, pos + 1, alphabet, depth + 1)
            if pos >= len(tokens) or tokens[pos][0] != "rp":
                raise ParseError("missing ')'")
            items.append(inner)
            pos += 1
        elif kind == "rp":
            if depth == 0:
                raise ParseError("unbalanced ')'")
            break
        elif kind == "inv":
            if not items:
                raise ParseError("'^-1' has nothing to apply to")
            items[-1] = invert_term(items[-1])
            pos += 1
        else:  # kind == "m"
            if not items:
                raise ParseError("'^m' has nothing to apply to")
            if items[-1].jumps:
                raise ParseError("nested '^m' markers are not allowed")
            items[-1] = FTerm((EMPTY_WORD, EMPTY_WORD), (items[-1].words[0],))
            pos += 1
    term = FTerm.from_word(EMPTY_WORD)
    for item in items:
        term = concat_terms(term, item)
    return term, pos


def parse_term(text: str, alphabet: Alphabet) -> FTerm:
    """Parse a term; no implicit reduction is performed."""
    tokens = _tokenize(text)
    term, pos = _parse_items(tokens, 0, alphabet, 0)
    if pos != len(tokens):
        raise ParseError("unbalanced ')'")
    return term


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse a plain word; jump markers are rejected."""
    term = parse_term(text, alphabet)
    if term.jumps:
        raise ParseError("'^m' is not allowed in a plain word")
    return term.words[0]


# --- printing ----------------------------------------------------------------
#
# Canonical text form: whitespace-separated tokens, `x^-1` for inverses and
# `( ... )^m` for jump factors.  parse(print(x)) == x.

def print_letter(letter: Letter, alphabet: Alphabet) -> str:
    name = alphabet.name(letter.base)
    return name if letter.sign > 0 else name + "^-1"


def print_word(w: Word, alphabet: Alphabet) -> str:
    return " ".join(print_letter(letter, alphabet) for letter in w.letters)


def print_term(t: FTerm, alphabet: Alphabet) -> str:
    pieces = []
    if t.words[0].letters:
        pieces.append(print_word(t.words[0], alphabet))
    for v, u in zip(t.jumps, t.words[1:]):
        pieces.append(f"({print_word(v, alphabet)})^m")
        if u.letters:
            pieces.append(print_word(u, alphabet))
    return " ".join(pieces)


def word_key(w: Word) -> tuple:
    """Total order on words: by length, then letterwise."""
    return (len(w.letters), w.letters)


def term_key(t: FTerm) -> tuple:
    return (len(t.jumps), tuple(word_key(u) for u in t.words),
            tuple(word_key(v) for v in t.jumps))
