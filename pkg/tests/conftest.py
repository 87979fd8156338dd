"""Shared generators for the test suite.

Seeded `random.Random` builders drive the counted acceptance runs; hypothesis
strategies drive the law-style property tests.
"""

import random

from hypothesis import strategies as st

from finverse import Alphabet, FTerm, Letter, Word

AB1 = Alphabet(("x",))
AB2 = Alphabet(("x", "y"))


def rand_word(rng: random.Random, n_gens: int, max_len: int, length=None) -> Word:
    n = rng.randint(0, max_len) if length is None else length
    return Word(tuple(Letter(rng.randrange(n_gens), rng.choice((1, -1)))
                      for _ in range(n)))


def rand_term(rng: random.Random, n_gens: int, max_jumps: int = 2,
              max_len: int = 4) -> FTerm:
    jumps = rng.randint(0, max_jumps)
    return FTerm(
        tuple(rand_word(rng, n_gens, max_len) for _ in range(jumps + 1)),
        tuple(rand_word(rng, n_gens, max_len) for _ in range(jumps)),
    )


def letters_st(n_gens: int = 2):
    return st.builds(Letter, st.integers(0, n_gens - 1), st.sampled_from((1, -1)))


def words_st(n_gens: int = 2, max_len: int = 8):
    return st.builds(Word, st.lists(letters_st(n_gens), max_size=max_len).map(tuple))


@st.composite
def terms_st(draw, n_gens: int = 2, max_jumps: int = 3, max_len: int = 5):
    jumps = draw(st.lists(words_st(n_gens, max_len), max_size=max_jumps))
    words = draw(st.lists(words_st(n_gens, max_len),
                          min_size=len(jumps) + 1, max_size=len(jumps) + 1))
    return FTerm(tuple(words), tuple(jumps))
