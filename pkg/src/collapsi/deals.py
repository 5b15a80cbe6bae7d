"""Symmetry-reduced enumeration of all deals, weights, and random sampling.

One joker is pinned at (0,0); the second takes one of five representative
cells, one per torus-distance class of its 15 possible placements. The class
weights (how many raw placements each representative stands for) make
statistics over the enumeration proportional to uniformly random deals.

The remaining 14 cells are filled by choosing cells for the four aces, then
the four 2s, then the four 3s, with the two 4s taking what is left; fill
ranks unrank lexicographically over row-major free cells, so enumeration
order is reproducible and shardable.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .engine import (
    CELLS,
    JOKER_REPRESENTATIVES,
    Card,
    CollapsiError,
    Deal,
    GameState,
    Player,
    cell_index,
)

# Weight of each representative in JOKER_REPRESENTATIVES order:
# (0,1) and (1,1) and (1,2) stand for four placements each, (0,2) for two,
# (2,2) for itself only.
CLASS_WEIGHTS = (4, 2, 4, 4, 1)

_ACE_CHOICES = math.comb(14, 4)
_TWO_CHOICES = math.comb(10, 4)
_THREE_CHOICES = math.comb(6, 4)
FILLS_PER_CLASS = _ACE_CHOICES * _TWO_CHOICES * _THREE_CHOICES


def enumeration_total() -> int:
    """Deals in the reduced enumeration: 5 * C(14,4) * C(10,4) * C(6,4)."""
    return len(JOKER_REPRESENTATIVES) * FILLS_PER_CLASS


def weighted_total() -> int:
    """Sum of weights over the enumeration; proportional to all raw deals."""
    return sum(CLASS_WEIGHTS) * FILLS_PER_CLASS


@dataclass(frozen=True, slots=True)
class DealIndex:
    """Position in the enumeration: second-joker class and fill rank."""

    joker_class: int
    fill_rank: int

    def __post_init__(self) -> None:
        if not 0 <= self.joker_class < len(JOKER_REPRESENTATIVES):
            raise IndexError(f"joker_class out of range: {self.joker_class}")
        if not 0 <= self.fill_rank < FILLS_PER_CLASS:
            raise IndexError(f"fill_rank out of range: {self.fill_rank}")

    @property
    def global_index(self) -> int:
        return self.joker_class * FILLS_PER_CLASS + self.fill_rank

    @classmethod
    def from_global(cls, index: int) -> "DealIndex":
        if not 0 <= index < enumeration_total():
            raise IndexError(f"deal index out of range: {index}")
        return cls(index // FILLS_PER_CLASS, index % FILLS_PER_CLASS)

    @property
    def weight(self) -> int:
        return CLASS_WEIGHTS[self.joker_class]


def _free_cells(joker_class: int) -> tuple[int, ...]:
    rep = cell_index(JOKER_REPRESENTATIVES[joker_class])
    return tuple(c for c in range(CELLS) if c not in (0, rep))


def _unrank_combo(rank: int, n: int, k: int) -> tuple[int, ...]:
    """The k-subset of {0..n-1} with lexicographic rank ``rank``."""
    combo = []
    e = 0
    for remaining in range(k, 0, -1):
        c = math.comb(n - e - 1, remaining - 1)
        while c <= rank:
            rank -= c
            e += 1
            c = math.comb(n - e - 1, remaining - 1)
        combo.append(e)
        e += 1
    return tuple(combo)


def _rank_combo(combo: tuple[int, ...], n: int) -> int:
    """Inverse of _unrank_combo."""
    rank = 0
    prev = -1
    k = len(combo)
    for i, e in enumerate(combo):
        for x in range(prev + 1, e):
            rank += math.comb(n - x - 1, k - i - 1)
        prev = e
    return rank


def _assemble(joker_class: int, aces: tuple[int, ...], twos: tuple[int, ...],
              threes: tuple[int, ...], rem6: tuple[int, ...]) -> Deal:
    cards = [Card.FOUR] * CELLS
    cards[0] = Card.JOKER
    cards[cell_index(JOKER_REPRESENTATIVES[joker_class])] = Card.JOKER
    for cell in aces:
        cards[cell] = Card.ACE
    for cell in twos:
        cards[cell] = Card.TWO
    for cell in threes:
        cards[cell] = Card.THREE
    return Deal(tuple(cards))


def deal_at(index: DealIndex | int) -> Deal:
    """Bijective unranking of the enumeration (inverse of index_of)."""
    if isinstance(index, int):
        index = DealIndex.from_global(index)
    free = _free_cells(index.joker_class)
    a_rank, rest = divmod(index.fill_rank, _TWO_CHOICES * _THREE_CHOICES)
    t_rank, th_rank = divmod(rest, _THREE_CHOICES)
    aces = tuple(free[i] for i in _unrank_combo(a_rank, 14, 4))
    rem10 = tuple(c for c in free if c not in aces)
    twos = tuple(rem10[i] for i in _unrank_combo(t_rank, 10, 4))
    rem6 = tuple(c for c in rem10 if c not in twos)
    threes = tuple(rem6[i] for i in _unrank_combo(th_rank, 6, 4))
    return _assemble(index.joker_class, aces, twos, threes, rem6)


def index_of(deal: Deal) -> DealIndex:
    """Rank a deal in enumeration form; CollapsiError if jokers are misplaced."""
    if deal.cards[0] is not Card.JOKER:
        raise CollapsiError("deal is not in enumeration form: no joker at (0,0)")
    second = deal.jokers[1]
    try:
        joker_class = JOKER_REPRESENTATIVES.index(second)
    except ValueError:
        raise CollapsiError(f"second joker {second} is not a representative cell") from None
    free = _free_cells(joker_class)
    pos_in_free = {cell: i for i, cell in enumerate(free)}
    aces = tuple(pos_in_free[i] for i, c in enumerate(deal.cards) if c is Card.ACE)
    rem10 = tuple(i for i in free if deal.cards[i] is not Card.ACE)
    twos = tuple(j for j, cell in enumerate(rem10) if deal.cards[cell] is Card.TWO)
    rem6 = tuple(cell for cell in rem10 if deal.cards[cell] is not Card.TWO)
    threes = tuple(j for j, cell in enumerate(rem6) if deal.cards[cell] is Card.THREE)
    fill = (_rank_combo(aces, 14) * _TWO_CHOICES + _rank_combo(twos, 10)) * _THREE_CHOICES
    return DealIndex(joker_class, fill + _rank_combo(threes, 6))


def enumerate_deals(shard_index: int = 0, shard_count: int = 1) -> Iterator[tuple[int, Deal, int]]:
    """Stream (global_index, deal, weight) for indices i with i % shard_count == shard_index.

    Indices increase; shards are disjoint and united cover the enumeration.
    """
    if not 0 <= shard_index < shard_count:
        raise ValueError(f"shard must satisfy 0 <= k < n, got {shard_index}/{shard_count}")
    idx = 0
    for joker_class in range(len(JOKER_REPRESENTATIVES)):
        weight = CLASS_WEIGHTS[joker_class]
        free = _free_cells(joker_class)
        for aces in combinations(free, 4):
            rem10 = tuple(c for c in free if c not in aces)
            for twos in combinations(rem10, 4):
                rem6 = tuple(c for c in rem10 if c not in twos)
                for threes in combinations(rem6, 4):
                    if (idx - shard_index) % shard_count == 0:
                        yield idx, _assemble(joker_class, aces, twos, threes, rem6), weight
                    idx += 1


def count_enumerated(shard_index: int = 0, shard_count: int = 1) -> tuple[int, int]:
    """(deal count, weight sum) of a shard, by walking the fill combinations."""
    if not 0 <= shard_index < shard_count:
        raise ValueError(f"shard must satisfy 0 <= k < n, got {shard_index}/{shard_count}")
    deals = 0
    weight = 0
    idx = 0
    for joker_class in range(len(JOKER_REPRESENTATIVES)):
        w = CLASS_WEIGHTS[joker_class]
        for _aces in combinations(range(14), 4):
            for _twos in combinations(range(10), 4):
                for _threes in combinations(range(6), 4):
                    if (idx - shard_index) % shard_count == 0:
                        deals += 1
                        weight += w
                    idx += 1
    return deals, weight


_DECK = tuple(
    card
    for card, count in ((Card.ACE, 4), (Card.TWO, 4), (Card.THREE, 4), (Card.FOUR, 2), (Card.JOKER, 2))
    for _ in range(count)
)


def _randbelow(rng: random.Random, n: int) -> int:
    # rejection sampling on getrandbits: uniform and stable across platforms
    k = n.bit_length()
    r = rng.getrandbits(k)
    while r >= n:
        r = rng.getrandbits(k)
    return r


def random_deal(rng: random.Random) -> Deal:
    """Uniform random arrangement of the 16-card multiset (not canonicalized)."""
    cards = list(_DECK)
    for i in range(CELLS - 1, 0, -1):
        j = _randbelow(rng, i + 1)
        cards[i], cards[j] = cards[j], cards[i]
    return Deal(tuple(cards))


def initial_state(deal: Deal) -> GameState:
    """Fresh game: red on the first joker in row-major order, red to move."""
    red, blue = deal.jokers
    return GameState(deal=deal, face_up=(1 << CELLS) - 1, red_pos=red,
                     blue_pos=blue, to_move=Player.RED)
