"""Simulated compression oracle, iterated hash evaluators and the birthday
search baseline.

The oracle is a seeded keyed mixer over (state, block) pairs: deterministic,
approximately uniform, and emphatically not a cryptographic hash.  Its
query counter tracks *distinct* (state, block) pairs, matching the cost
model in which repeated evaluations of known pairs are free; the raw call
count is kept alongside for reporting.

A single oracle instance is a mutable resource and must not be shared
between concurrent attacks; independent trials use independent oracles with
distinct seeds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .words import Word, word_stats

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """Finalizing 64-bit avalanche mixer (splitmix-style)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, tag: str) -> int:
    """Stable sub-seed derivation for independent random streams."""
    acc = mix64(seed ^ _GOLDEN)
    for byte in tag.encode():
        acc = mix64(acc ^ byte)
    return acc


class CompressionOracle:
    """Black-box f: {0,1}^n x {0,1}^m -> {0,1}^n with memoized queries.

    Same (seed, h, b) always yields the same output; query_count equals the
    number of distinct (h, b) pairs ever evaluated.
    """

    def __init__(self, n: int, m: int, seed: int):
        if not 1 <= n:
            raise ValueError("hash length n must be >= 1")
        if m <= n:
            raise ValueError("block length m must exceed hash length n")
        self.n = n
        self.m = m
        self.seed = int(seed)
        self._memo: dict = {}
        self.raw_calls = 0
        self._key = mix64(self.seed ^ _GOLDEN)

    @property
    def query_count(self) -> int:
        return len(self._memo)

    def clone(self) -> "CompressionOracle":
        """Fresh oracle computing the same function with its own counter."""
        return CompressionOracle(self.n, self.m, self.seed)

    def _derive(self, h: int, b: int) -> int:
        acc = mix64(self._key ^ h)
        while True:
            acc = mix64(acc ^ (b & _MASK64))
            b >>= 64
            if not b:
                break
        return acc & ((1 << self.n) - 1)

    def compress(self, h: int, b: int) -> int:
        if not 0 <= h < (1 << self.n):
            raise ValueError(f"hash value {h} outside {self.n}-bit range")
        if not 0 <= b < (1 << self.m):
            raise ValueError(f"block {b} outside {self.m}-bit range")
        self.raw_calls += 1
        key = (h, b)
        cached = self._memo.get(key)
        if cached is None:
            cached = self._derive(h, b)
            self._memo[key] = cached
        return cached


def f_plus(oracle: CompressionOracle, h: int, blocks: Sequence[int]) -> int:
    """Left fold of the compression function over a nonempty block sequence."""
    if not blocks:
        raise ValueError("block sequence must be nonempty")
    state = h
    for b in blocks:
        state = oracle.compress(state, b)
    return state


def f_alpha(oracle: CompressionOracle, h: int, blocks: Sequence[int],
            schedule_word: Word) -> int:
    """Iterated compression: feed blocks in the order and multiplicity given
    by the schedule word (1-based indices into `blocks`)."""
    if not schedule_word:
        raise ValueError("schedule word must be nonempty")
    count = len(blocks)
    for sym in schedule_word:
        if not 1 <= sym <= count:
            raise ValueError(f"schedule symbol {sym} out of range 1..{count}")
    return f_plus(oracle, h, [blocks[sym - 1] for sym in schedule_word])


@dataclass(frozen=True)
class Schedule:
    """Family of schedule words, one per message block count.

    generator(l) must return a word over {1..l} using every symbol, with no
    symbol occurring more than q_bound times.
    """

    name: str
    q_bound: int
    generator: Callable[[int], Word] = field(repr=False)


def identity_schedule() -> Schedule:
    """Traditional iterated hashing: block i is consumed once, in order."""
    return Schedule("identity", 1, lambda l: tuple(range(1, l + 1)))


def mirror_schedule() -> Schedule:
    """2-bounded palindromic schedule 1 2 .. l l .. 2 1."""
    return Schedule(
        "mirror", 2,
        lambda l: tuple(range(1, l + 1)) + tuple(range(l, 0, -1)),
    )


def schedule_from_words(words: Sequence[Word], name: str = "file") -> Schedule:
    """Schedule backed by an explicit word list; words[l-1] serves length l."""
    words = [tuple(w) for w in words]
    bound = max((word_stats(w).max_count for w in words if w), default=1)

    def generator(l: int) -> Word:
        if not 1 <= l <= len(words) or not words[l - 1]:
            raise ValueError(f"schedule provides no word for message length {l}")
        return words[l - 1]

    return Schedule(name, bound, generator)


def validate_schedule_word(sched: Schedule, l: int) -> Word:
    """Materialize and sanity-check one schedule word."""
    w = tuple(sched.generator(l))
    stats = word_stats(w)
    if stats.alphabet != frozenset(range(1, l + 1)):
        raise ValueError(f"schedule word for l={l} does not cover 1..{l}")
    if stats.max_count > sched.q_bound:
        raise ValueError(
            f"schedule word for l={l} exceeds declared bound {sched.q_bound}")
    return w


def gihf_eval(oracle: CompressionOracle, sched: Schedule, h0: int,
              message: Sequence[int]) -> int:
    """Hash a message under the generalized construction: pick the schedule
    word for its block count and run the iterated compression."""
    if not message:
        raise ValueError("message must contain at least one block")
    return f_alpha(oracle, h0, message, tuple(sched.generator(len(message))))


class BlockSampler:
    """Deterministic stream of distinct message blocks.

    Walks a seeded affine permutation of {0..2^m - 1} from the start, so the
    first 2^m draws are pairwise distinct and any (seed, m) pair reproduces
    the same stream.
    """

    def __init__(self, m: int, seed: int):
        if m < 1:
            raise ValueError("block length m must be >= 1")
        self.m = m
        self.seed = int(seed)
        space = 1 << m
        self._mult = (2 * mix64(self.seed) + 1) % space
        if self._mult == 1 and m > 1:
            self._mult = (self._mult + 2) % space
        self._offset = mix64(self.seed ^ 0xA5A5A5A5A5A5A5A5) % space
        self._index = 0

    def __iter__(self) -> Iterator[int]:
        return self

    def __next__(self) -> int:
        if self._index >= (1 << self.m):
            raise RuntimeError("block space exhausted")
        value = (self._mult * self._index + self._offset) % (1 << self.m)
        self._index += 1
        return value


def birthday_search(oracle: CompressionOracle, h: int, k: int,
                    sampler: Optional[BlockSampler] = None) -> tuple[tuple[int, ...], int]:
    """Find k distinct blocks with equal compress(h, .) by table lookup.

    Returns the colliding blocks and the number of distinct queries spent.
    Memory-unrestricted: every seen value is kept until some bucket fills.
    """
    if k < 2:
        raise ValueError("collision size k must be >= 2")
    if sampler is None:
        sampler = BlockSampler(oracle.m, derive_seed(oracle.seed, "birthday"))
    start = oracle.query_count
    buckets: dict = {}
    for block in sampler:
        digest = oracle.compress(h, block)
        bucket = buckets.setdefault(digest, [])
        bucket.append(block)
        if len(bucket) == k:
            return tuple(bucket), oracle.query_count - start
    raise RuntimeError("sampler exhausted before finding a collision")
