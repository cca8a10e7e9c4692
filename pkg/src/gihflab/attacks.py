"""Multicollision attacks on the simulated hash constructions.

joux_attack chains independent block-pair collisions along a traditional
iterated hash: each stage costs one birthday search, so a 2^r-collision
costs r searches while its size grows exponentially.

generalized_attack extends the idea to q-bounded schedules.  An attack
certificate (see nesting) cuts the schedule word into parts that condense
to permutations of a subalphabet B.  Walking the first part yields one
pair collision per B-position; every later part is walked block group by
block group, collapsing the >= 2^n inherited sub-message combinations of
each group by birthday search among them.  Group iteration order and
candidate enumeration are fixed (first-occurrence order, sequential), so a
given oracle seed reproduces the attack byte for byte.

An attack owns its oracle exclusively while it runs; verification re-hashes
every expanded message on a counter-isolated clone so audit queries never
pollute the attack cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator, Optional, Sequence

from .hashsim import (
    BlockSampler,
    CompressionOracle,
    Schedule,
    derive_seed,
    gihf_eval,
    identity_schedule,
    validate_schedule_word,
)
from .nesting import ConstructionError, attack_threshold, find_attack_structure
from .words import Word, condense, equal_blocks, split_word

DEFAULT_A_TILDE = 2.5
DEFAULT_EXPANSION_CAP = 1 << 16


@dataclass(frozen=True)
class CollisionGroup:
    """Interchangeable block assignments for one set of message positions."""

    positions: tuple[int, ...]
    choices: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class MulticollisionSet:
    """Product-form multicollision: independent choice groups over disjoint
    positions plus fixed blocks everywhere else.

    The expansion (one message per combination of group choices) has
    2^r members, all of block length `length`.
    """

    length: int
    groups: tuple[CollisionGroup, ...]
    base_blocks: dict
    r: int

    def validate(self) -> None:
        seen: set = set()
        expansion = 1
        for group in self.groups:
            if len(group.positions) != len(set(group.positions)):
                raise ValueError("duplicate position inside a group")
            if seen & set(group.positions):
                raise ValueError("groups must cover disjoint positions")
            seen |= set(group.positions)
            if len(group.choices) < 2:
                raise ValueError("each group needs at least two choices")
            if any(len(c) != len(group.positions) for c in group.choices):
                raise ValueError("choice width must match the group positions")
            expansion *= len(group.choices)
        covered = seen | set(self.base_blocks)
        if covered != set(range(1, self.length + 1)) or len(seen) + len(self.base_blocks) != self.length:
            raise ValueError("groups plus base blocks must cover every position exactly once")
        if expansion != 2 ** self.r:
            raise ValueError(f"expansion size {expansion} != 2^{self.r}")

    @property
    def expansion_size(self) -> int:
        size = 1
        for group in self.groups:
            size *= len(group.choices)
        return size

    def message(self, selection: Sequence[int]) -> tuple[int, ...]:
        blocks = [0] * self.length
        for pos, blk in self.base_blocks.items():
            blocks[pos - 1] = blk
        for group, pick in zip(self.groups, selection):
            for pos, blk in zip(group.positions, group.choices[pick]):
                blocks[pos - 1] = blk
        return tuple(blocks)

    def messages(self) -> Iterator[tuple[int, ...]]:
        for selection in product(*(range(len(g.choices)) for g in self.groups)):
            yield self.message(selection)

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "r": self.r,
            "groups": [
                {"positions": list(g.positions), "choices": [list(c) for c in g.choices]}
                for g in self.groups
            ],
            "base_blocks": [[pos, blk] for pos, blk in sorted(self.base_blocks.items())],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MulticollisionSet":
        return cls(
            length=int(data["length"]),
            groups=tuple(
                CollisionGroup(tuple(g["positions"]), tuple(tuple(c) for c in g["choices"]))
                for g in data["groups"]
            ),
            base_blocks={int(pos): int(blk) for pos, blk in data["base_blocks"]},
            r=int(data["r"]),
        )


@dataclass(frozen=True)
class AttackReport:
    """Outcome and exact cost accounting of one attack run.

    attack_queries counts distinct compression queries spent by the attack
    itself; raw_calls additionally counts repeated evaluations of known
    pairs.  stage_queries gives the per-stage split (per pair collision for
    the first level, per collapsed group afterwards), which also records the
    per-position reading of the first-level cost estimate next to the
    per-symbol one implied by walking the whole part.
    """

    r: int
    n: int
    m: int
    q: int
    l: int
    attack_queries: int
    verify_ok: bool
    bound: float
    seed: int
    a_tilde: float = DEFAULT_A_TILDE
    h0: int = 0
    p: int = 1
    schedule: str = "identity"
    raw_calls: int = 0
    stage_queries: tuple = ()
    level_queries: tuple = ()

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "n": self.n,
            "m": self.m,
            "q": self.q,
            "l": self.l,
            "attack_queries": self.attack_queries,
            "verify_ok": self.verify_ok,
            "bound": self.bound,
            "seed": self.seed,
            "a_tilde": self.a_tilde,
            "h0": self.h0,
            "p": self.p,
            "schedule": self.schedule,
            "raw_calls": self.raw_calls,
            "stage_queries": list(self.stage_queries),
            "level_queries": list(self.level_queries),
        }


@dataclass(frozen=True)
class VerificationResult:
    """Truthy iff verification passed; complete=False flags sampling mode."""

    ok: bool
    complete: bool
    checked: int
    digest: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


def complexity_bound(n: int, q: int, r: int, a_tilde: float = DEFAULT_A_TILDE):
    """Query bound a~ * q * N^ * 2^(n/2) for building a 2^r-collision on a
    q-bounded construction of hash length n.

    N^ is the exact forcing boundary for q = 2 (with m = n^((q-1)^2) *
    r^(2q-3)), the proven upper bound m^(2^(q-1)) for q >= 3, and by
    convention r for q = 1 (one pair search per stage).  Returns an int
    whenever the value is integral.
    """
    if n < 1 or q < 1 or r < 1:
        raise ValueError("n, q and r must be >= 1")
    if q == 1:
        n_hat = r
    else:
        m = n ** ((q - 1) ** 2) * r ** (2 * q - 3)
        n_hat = m * m - m + 1 if q == 2 else m ** (2 ** (q - 1))
    value = Fraction(a_tilde) * q * n_hat * (2 ** (n // 2))
    if n % 2:
        return float(value) * math.sqrt(2)
    return int(value) if value.denominator == 1 else float(value)


def _cross_collision(evaluate: Callable[[int], int], sampler: BlockSampler):
    """Search two distinct blocks with equal digest under `evaluate`.

    Candidates are drawn alternately into two streams and only collisions
    across streams are accepted, mirroring the search for a pair (b, b').
    Returns (first-drawn block, second-drawn block, digest).
    """
    first_seen: dict = {}
    second_seen: dict = {}
    while True:
        bx = next(sampler)
        dx = evaluate(bx)
        if dx in second_seen:
            return second_seen[dx], bx, dx
        first_seen.setdefault(dx, bx)
        by = next(sampler)
        dy = evaluate(by)
        if dy in first_seen:
            return first_seen[dy], by, dy
        second_seen.setdefault(dy, by)


def block_pair_collision(oracle: CompressionOracle, h: int,
                         sampler: Optional[BlockSampler] = None):
    """Two distinct blocks b, b' with compress(h, b) == compress(h, b').

    Returns (b, b', next state, distinct queries spent).  Expected cost is a
    small constant times 2^(n/2).
    """
    if sampler is None:
        sampler = BlockSampler(oracle.m, derive_seed(oracle.seed, f"pair:{h}"))
    start = oracle.query_count
    b1, b2, digest = _cross_collision(lambda b: oracle.compress(h, b), sampler)
    return b1, b2, digest, oracle.query_count - start


def verify_multicollision(oracle: CompressionOracle, sched: Schedule, h0: int,
                          mc: MulticollisionSet,
                          cap: int = DEFAULT_EXPANSION_CAP) -> VerificationResult:
    """Expand the multicollision and re-hash every message on the given
    (counter-isolated) oracle, confirming one common digest and pairwise
    distinct messages.

    Expansions beyond `cap` are sampled deterministically instead of fully
    enumerated; the result is then flagged complete=False.
    """
    try:
        mc.validate()
    except (ValueError, TypeError, AttributeError):
        return VerificationResult(False, True, 0)
    size = mc.expansion_size
    if size <= cap:
        complete = True
        selections = product(*(range(len(g.choices)) for g in mc.groups))
    else:
        complete = False
        rng_state = derive_seed(0xC011EC7, f"sample:{size}")
        picks = []
        state = rng_state
        for _ in range(cap):
            selection = []
            for group in mc.groups:
                state = (state * 6364136223846793005 + 1442695040888963407) % (1 << 64)
                selection.append(state % len(group.choices))
            picks.append(tuple(selection))
        selections = iter(picks)

    digest = None
    seen_selections: set = set()
    seen_messages: set = set()
    checked = 0
    for selection in selections:
        selection = tuple(selection)
        if selection in seen_selections:
            continue  # sampling mode may redraw a combination
        seen_selections.add(selection)
        message = mc.message(selection)
        if message in seen_messages:
            return VerificationResult(False, complete, checked)
        seen_messages.add(message)
        value = gihf_eval(oracle, sched, h0, message)
        if digest is None:
            digest = value
        elif value != digest:
            return VerificationResult(False, complete, checked)
        checked += 1
    return VerificationResult(True, complete, checked, digest)


def joux_attack(oracle: CompressionOracle, h0: int, r: int, *,
                sampler: Optional[BlockSampler] = None,
                a_tilde: float = DEFAULT_A_TILDE,
                expansion_cap: int = DEFAULT_EXPANSION_CAP):
    """Build a 2^r-collision on the traditional iterated hash by chaining r
    independent block-pair collisions from h0.

    Returns (MulticollisionSet, AttackReport); the report's stage_queries
    reconcile exactly with attack_queries.
    """
    if r < 1:
        raise ValueError("collision exponent r must be >= 1")
    if sampler is None:
        sampler = BlockSampler(oracle.m, derive_seed(oracle.seed, "joux"))
    start = oracle.query_count
    raw_start = oracle.raw_calls
    state = h0
    groups = []
    stage_queries = []
    for position in range(1, r + 1):
        b1, b2, state, spent = block_pair_collision(oracle, state, sampler)
        groups.append(CollisionGroup((position,), ((b1,), (b2,))))
        stage_queries.append(spent)
    mc = MulticollisionSet(length=r, groups=tuple(groups), base_blocks={}, r=r)
    mc.validate()
    attack_queries = oracle.query_count - start
    outcome = verify_multicollision(oracle.clone(), identity_schedule(), h0, mc,
                                    cap=expansion_cap)
    report = AttackReport(
        r=r, n=oracle.n, m=oracle.m, q=1, l=r,
        attack_queries=attack_queries,
        verify_ok=outcome.ok,
        bound=complexity_bound(oracle.n, 1, r, a_tilde),
        seed=oracle.seed, a_tilde=a_tilde, h0=h0, p=1, schedule="identity",
        raw_calls=oracle.raw_calls - raw_start,
        stage_queries=tuple(stage_queries),
        level_queries=(attack_queries,),
    )
    return mc, report


def _first_level_groups(oracle, part, subset, base, state, sampler):
    """One pair collision per subalphabet position, walked along the part.

    Each chosen position occupies a span of the part containing no other
    subalphabet symbol; evaluating a candidate block replays the span with
    fixed filler blocks, so span length is the per-candidate query cost.
    """
    order = condense(part, subset)
    first = {}
    last = {}
    for idx, sym in enumerate(part):
        if sym in subset:
            first.setdefault(sym, idx)
            last[sym] = idx
    groups = []
    stage_queries = []
    cursor = 0
    for sym in order:
        for idx in range(cursor, first[sym]):
            state = oracle.compress(state, base[part[idx]])
        span = part[first[sym]:last[sym] + 1]

        def evaluate(block, state=state, span=span, sym=sym):
            value = state
            for s in span:
                value = oracle.compress(value, block if s == sym else base[s])
            return value

        before = oracle.query_count
        b1, b2, state = _cross_collision(evaluate, sampler)
        stage_queries.append(oracle.query_count - before)
        groups.append(CollisionGroup((sym,), ((b1,), (b2,))))
        cursor = last[sym] + 1
    for idx in range(cursor, len(part)):
        state = oracle.compress(state, base[part[idx]])
    return groups, state, stage_queries


def _collapse_level(oracle, part, subset, base, state, groups, block_count):
    """Collapse the inherited choice groups along one later part.

    The part's subalphabet symbols split into `block_count` consecutive
    blocks; each block's alphabet is a disjoint union of previous groups.
    Enumerating the combined choices of those groups and replaying the
    block's span finds two combinations with equal outgoing state, which
    become the block's single surviving binary group.
    """
    order = condense(part, subset)
    blocks = equal_blocks(order, block_count)
    first = {}
    last = {}
    for idx, sym in enumerate(part):
        if sym in subset:
            first.setdefault(sym, idx)
            last[sym] = idx
    by_position = {}
    for gi, group in enumerate(groups):
        for pos in group.positions:
            by_position[pos] = gi
    new_groups = []
    stage_queries = []
    cursor = 0
    for block in blocks:
        begin = min(first[sym] for sym in block)
        end = max(last[sym] for sym in block)
        for idx in range(cursor, begin):
            state = oracle.compress(state, base[part[idx]])
        members = list(dict.fromkeys(by_position[sym] for sym in block))
        # the certificate guarantees previous groups tile each block exactly
        assert sum(len(groups[gi].positions) for gi in members) == len(block)
        span = part[begin:end + 1]
        before = oracle.query_count
        table: dict = {}
        found = None
        for combo in product(*(range(len(groups[gi].choices)) for gi in members)):
            assignment = {}
            for gi, pick in zip(members, combo):
                group = groups[gi]
                for pos, blk in zip(group.positions, group.choices[pick]):
                    assignment[pos] = blk
            value = state
            for s in span:
                value = oracle.compress(value, assignment[s] if s in assignment else base[s])
            if value in table:
                found = (table[value], combo, value)
                break
            table[value] = combo
        if found is None:
            raise ConstructionError(
                "no collision among the inherited candidate combinations")
        combo_a, combo_b, state = found
        positions = []
        choice_a = []
        choice_b = []
        for gi, pick_a, pick_b in zip(members, combo_a, combo_b):
            group = groups[gi]
            positions.extend(group.positions)
            choice_a.extend(group.choices[pick_a])
            choice_b.extend(group.choices[pick_b])
        new_groups.append(CollisionGroup(tuple(positions), (tuple(choice_a), tuple(choice_b))))
        stage_queries.append(oracle.query_count - before)
        cursor = end + 1
    for idx in range(cursor, len(part)):
        state = oracle.compress(state, base[part[idx]])
    return new_groups, state, stage_queries


def generalized_attack(oracle: CompressionOracle, sched: Schedule, q: int,
                       n_param: int, r: int, *, h0: int = 0,
                       sampler: Optional[BlockSampler] = None,
                       a_tilde: float = DEFAULT_A_TILDE,
                       expansion_cap: int = DEFAULT_EXPANSION_CAP):
    """Build a verified 2^r-collision on the q-bounded generalized iterated
    hash given by `sched`, using the smallest message length whose schedule
    word meets the attack-structure threshold.

    Returns (MulticollisionSet, AttackReport).
    """
    if r < 1:
        raise ValueError("collision exponent r must be >= 1")
    if q < 1:
        raise ValueError("occurrence bound q must be >= 1")
    if n_param != oracle.n:
        raise ValueError(f"n_param {n_param} != oracle hash length {oracle.n}")
    if sched.q_bound > q:
        raise ValueError(
            f"schedule declares bound {sched.q_bound}, exceeding q = {q}")
    length = attack_threshold(n_param, r, q)
    try:
        alpha = validate_schedule_word(sched, length)
    except ValueError as exc:
        raise ValueError(
            f"schedule cannot serve the required message length l = {length}: {exc}"
        ) from exc
    cert = find_attack_structure(alpha, n_param, r, q)

    if sampler is None:
        sampler = BlockSampler(oracle.m, derive_seed(oracle.seed, "gihf"))
    base = {pos: next(sampler) for pos in range(1, length + 1)}
    subset = set(cert.subalphabet)
    parts = split_word(alpha, cert.splits)

    start = oracle.query_count
    raw_start = oracle.raw_calls
    state = h0
    level_queries = []
    before = oracle.query_count
    groups, state, stage_queries = _first_level_groups(
        oracle, parts[0], subset, base, state, sampler)
    level_queries.append(oracle.query_count - before)
    for i in range(2, cert.p + 1):
        block_count = n_param ** (cert.p - i) * r
        before = oracle.query_count
        groups, state, collapsed = _collapse_level(
            oracle, parts[i - 1], subset, base, state, groups, block_count)
        stage_queries.extend(collapsed)
        level_queries.append(oracle.query_count - before)

    base_blocks = {pos: blk for pos, blk in base.items()
                   if pos not in subset}
    mc = MulticollisionSet(length=length, groups=tuple(groups),
                           base_blocks=base_blocks, r=r)
    mc.validate()
    attack_queries = oracle.query_count - start
    outcome = verify_multicollision(oracle.clone(), sched, h0, mc, cap=expansion_cap)
    report = AttackReport(
        r=r, n=oracle.n, m=oracle.m, q=q, l=length,
        attack_queries=attack_queries,
        verify_ok=outcome.ok,
        bound=complexity_bound(oracle.n, q, r, a_tilde),
        seed=oracle.seed, a_tilde=a_tilde, h0=h0, p=cert.p, schedule=sched.name,
        raw_calls=oracle.raw_calls - raw_start,
        stage_queries=tuple(stage_queries),
        level_queries=tuple(level_queries),
    )
    return mc, report
