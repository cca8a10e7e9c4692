"""Core word and alphabet operations.

A word is a plain tuple of non-negative integer symbols; an alphabet is any
set of symbols.  Everything here is a pure function on immutable values, so
results can be shared freely between threads and certificate checkers can
recompute without aliasing hazards.

The on-disk text format used by the CLI is one word per line, symbols as
space-separated decimal integers; the empty word is an empty line.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import groupby
from typing import Callable, Iterable, Optional

Symbol = int
Word = tuple[int, ...]
Alphabet = frozenset[int]

EMPTY: Word = ()


def word(symbols: Iterable[int]) -> Word:
    """Normalize an iterable of symbols to a Word, rejecting negatives."""
    w = tuple(int(s) for s in symbols)
    if any(s < 0 for s in w):
        raise ValueError("symbols must be non-negative integers")
    return w


@dataclass(frozen=True)
class WordStats:
    """Occurrence summary of a word: its alphabet, per-symbol counts and the
    largest count (a word is q-bounded iff max_count <= q)."""

    alphabet: Alphabet
    counts: dict
    max_count: int


def word_stats(w: Iterable[int]) -> WordStats:
    counts = Counter(w)
    return WordStats(
        alphabet=frozenset(counts),
        counts=dict(counts),
        max_count=max(counts.values(), default=0),
    )


def is_q_bounded(w: Iterable[int], q: int) -> bool:
    """True iff every symbol occurs at most q times in w."""
    return word_stats(w).max_count <= q


def project(w: Iterable[int], subalphabet: Iterable[int]) -> Word:
    """Erase every symbol outside `subalphabet`, keeping the rest in order.

    The subalphabet does not have to be contained in the alphabet of w;
    projecting onto the empty set yields the empty word.
    """
    keep = frozenset(subalphabet)
    return tuple(s for s in w if s in keep)


def condense(w: Iterable[int], subalphabet: Iterable[int]) -> Word:
    """Project onto `subalphabet` and collapse every maximal run of equal
    adjacent symbols to a single symbol.

    Adjacent symbols of the result always differ.
    """
    return tuple(s for s, _ in groupby(project(w, subalphabet)))


def is_permutation(w: Iterable[int], alphabet: Iterable[int]) -> bool:
    """True iff w contains each symbol of `alphabet` exactly once and no others."""
    w = tuple(w)
    alphabet = frozenset(alphabet)
    return len(w) == len(alphabet) and frozenset(w) == alphabet


def lex_less(u: Iterable[int], v: Iterable[int],
             key: Optional[Callable[[int], int]] = None) -> bool:
    """Strict lexicographic order on words.

    u < v iff u is a proper prefix of v, or at the first differing position
    the symbol of u orders strictly before the symbol of v.  `key` remaps
    symbols to their rank under a custom total order; by default symbols
    compare as integers.
    """
    u = tuple(u)
    v = tuple(v)
    if key is not None:
        u = tuple(key(s) for s in u)
        v = tuple(key(s) for s in v)
    for a, b in zip(u, v):
        if a != b:
            return a < b
    return len(u) < len(v)


def first_occurrence_order(w: Iterable[int]) -> tuple[int, ...]:
    """Distinct symbols of w, ordered by first appearance."""
    return tuple(dict.fromkeys(w))


def split_word(w: Word, splits: Iterable[int]) -> tuple[Word, ...]:
    """Cut w at the given offsets (number of symbols before each cut).

    splits must be strictly increasing and lie strictly inside the word, so
    every resulting part is nonempty.
    """
    w = tuple(w)
    splits = tuple(splits)
    cuts = [0, *splits, len(w)]
    for a, b in zip(cuts, cuts[1:]):
        if not a < b:
            raise ValueError(f"invalid split offsets {splits} for length {len(w)}")
    return tuple(w[a:b] for a, b in zip(cuts, cuts[1:]))


def equal_blocks(w: Word, count: int) -> tuple[Word, ...]:
    """Factor w into `count` blocks of equal length."""
    w = tuple(w)
    if count < 1 or len(w) % count:
        raise ValueError(f"cannot cut length {len(w)} into {count} equal blocks")
    size = len(w) // count
    return tuple(w[i * size:(i + 1) * size] for i in range(count))


# -- word file format -------------------------------------------------------

def parse_word_line(line: str) -> Word:
    return word(line.split())


def parse_words(text: str) -> list[Word]:
    return [parse_word_line(line) for line in text.splitlines()]


def format_word(w: Word) -> str:
    return " ".join(str(s) for s in w)


def format_words(ws: Iterable[Word]) -> str:
    lines = [format_word(w) for w in ws]
    return "\n".join(lines) + ("\n" if lines else "")
