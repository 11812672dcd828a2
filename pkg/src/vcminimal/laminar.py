"""Directed (laminar) families of subsets of a finite ground set.

Sets are packed into Python ints (bit ``i`` set means element ``i`` is a
member), so subset, intersection, difference and cardinality are
word-parallel operations.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import MalformedInputError, NotDirectedError


def iter_bits(bits: int) -> Iterator[int]:
    # scanning the binary string beats repeated big-int masking on dense sets
    digits = bin(bits)[:1:-1]
    i = digits.find("1")
    while i >= 0:
        yield i
        i = digits.find("1", i + 1)


def popcount(bits: int) -> int:
    return bits.bit_count()


@dataclass(frozen=True)
class ElementSet:
    """A subset of ``range(n)``; equality is extensional."""

    n: int
    bits: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise MalformedInputError(f"negative ground size {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise MalformedInputError(f"set {self.bits:#x} exceeds ground size {self.n}")

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> ElementSet:
        bits = 0
        for m in members:
            if not isinstance(m, int) or isinstance(m, bool) or not 0 <= m < n:
                raise MalformedInputError(f"element {m!r} out of range for ground size {n}")
            bits |= 1 << m
        return cls(n, bits)

    @classmethod
    def full(cls, n: int) -> ElementSet:
        return cls(n, (1 << n) - 1)

    @cached_property
    def members(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.bits))

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return self.bits.bit_count()

    def __bool__(self):
        return self.bits != 0

    def __contains__(self, item):
        return isinstance(item, int) and 0 <= item < self.n and bool(self.bits >> item & 1)

    def _other(self, other: ElementSet) -> int:
        if not isinstance(other, ElementSet):
            return NotImplemented
        if other.n != self.n:
            raise MalformedInputError(f"ground size mismatch: {self.n} vs {other.n}")
        return other.bits

    def __and__(self, other):
        return ElementSet(self.n, self.bits & self._other(other))

    def __or__(self, other):
        return ElementSet(self.n, self.bits | self._other(other))

    def __sub__(self, other):
        return ElementSet(self.n, self.bits & ~self._other(other))

    def issubset(self, other: ElementSet) -> bool:
        return self.bits & ~self._other(other) == 0

    def isdisjoint(self, other: ElementSet) -> bool:
        return self.bits & self._other(other) == 0

    def sort_key(self):
        """Size descending, then lexicographic member order."""
        return (-len(self), self.members)

    def __repr__(self):
        return "{" + ",".join(map(str, self.members)) + "}"


def canonical_order(balls: Iterable[ElementSet]) -> tuple[ElementSet, ...]:
    """Drop empty sets and duplicates; sort by size desc then members."""
    unique = {b.bits: b for b in balls if b.bits}
    return tuple(sorted(unique.values(), key=ElementSet.sort_key))


@dataclass(frozen=True)
class DirectedCheck:
    witness: tuple[ElementSet, ElementSet] | None = None

    def __bool__(self):
        return self.witness is None


def _same_ground(balls: Sequence[ElementSet]) -> None:
    sizes = {b.n for b in balls}
    if len(sizes) > 1:
        raise MalformedInputError(f"balls over different ground sizes {sorted(sizes)}")


def check_directed(balls: Sequence[ElementSet]) -> DirectedCheck:
    """Decide whether every pair of balls is nested or disjoint.

    Runs in time linear in the total size of the balls: balls are visited
    largest first and each element remembers the smallest ball seen so far
    that contains it. A ball is consistent iff all its elements share that
    owner. Returns a falsy ``DirectedCheck`` carrying one violating pair
    otherwise.
    """
    _same_ground(balls)
    ordered = canonical_order(balls)
    if not ordered:
        return DirectedCheck()
    owner: dict[int, int] = {}
    for i, ball in enumerate(ordered):
        owners = {owner.get(e, -1) for e in ball.members}
        if len(owners) > 1:
            for j in sorted(owners):
                if j >= 0 and not ball.issubset(ordered[j]):
                    return DirectedCheck((ordered[j], ball))
            raise AssertionError("unreachable: inconsistent owners without witness")
        for e in ball.members:
            owner[e] = i
    return DirectedCheck()


@dataclass(frozen=True)
class DirectedFamily:
    """A validated directed family Psi over ``range(ground_size)``.

    Empty balls and duplicates are dropped; balls are kept in canonical
    order so that ball indices are reproducible.
    """

    ground_size: int
    balls: tuple[ElementSet, ...] = ()

    def __post_init__(self):
        balls = tuple(self.balls)
        for b in balls:
            if not isinstance(b, ElementSet):
                raise MalformedInputError(f"ball {b!r} is not an ElementSet")
            if b.n != self.ground_size:
                raise MalformedInputError(
                    f"ball {b} has ground size {b.n}, family has {self.ground_size}"
                )
        verdict = check_directed(balls)
        if not verdict:
            raise NotDirectedError(*verdict.witness)
        object.__setattr__(self, "balls", canonical_order(balls))

    @classmethod
    def from_lists(cls, ground_size: int, balls: Iterable[Iterable[int]]) -> DirectedFamily:
        return cls(ground_size, tuple(ElementSet.of(ground_size, b) for b in balls))

    @cached_property
    def _index(self) -> dict[int, int]:
        return {b.bits: i for i, b in enumerate(self.balls)}

    def index_of(self, ball: ElementSet) -> int:
        try:
            return self._index[ball.bits]
        except KeyError:
            raise MalformedInputError(f"{ball} is not a ball of the family") from None

    def __contains__(self, ball):
        return isinstance(ball, ElementSet) and ball.n == self.ground_size and ball.bits in self._index

    def __len__(self):
        return len(self.balls)


@dataclass(frozen=True)
class LaminarForest:
    """Containment forest of a directed family.

    Node 0 is the virtual root standing for the whole ground set; node
    ``i + 1`` is ``family.balls[i]``. Parents always have smaller indices
    than their children, so reversed index order is a post-order.
    """

    family: DirectedFamily
    sets: tuple[ElementSet, ...]
    parent: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    gap: tuple[ElementSet, ...]

    @property
    def ground_size(self) -> int:
        return self.family.ground_size

    def __len__(self):
        return len(self.sets)

    @cached_property
    def node_of_element(self) -> tuple[int, ...]:
        """For each element, the node whose gap holds it."""
        where = [0] * self.ground_size
        for v, g in enumerate(self.gap):
            for e in g.members:
                where[e] = v
        return tuple(where)

    def node_of(self, ball: ElementSet) -> int:
        return self.family.index_of(ball) + 1


def build_forest(family: DirectedFamily) -> LaminarForest:
    n = family.ground_size
    sets = (ElementSet.full(n),) + family.balls
    owner = [0] * n
    parent = [0] * len(sets)
    kids: list[list[int]] = [[] for _ in sets]
    for v in range(1, len(sets)):
        members = sets[v].members
        p = owner[members[0]]
        parent[v] = p
        kids[p].append(v)
        for e in members:
            owner[e] = v
    gap_bits = [s.bits for s in sets]
    for v in range(1, len(sets)):
        gap_bits[parent[v]] &= ~sets[v].bits
    return LaminarForest(
        family=family,
        sets=sets,
        parent=tuple(parent),
        children=tuple(tuple(k) for k in kids),
        gap=tuple(ElementSet(n, g) for g in gap_bits),
    )


def restrict_family(family: DirectedFamily, keep: ElementSet) -> DirectedFamily:
    """Intersect every ball with ``keep``; intersection preserves directedness."""
    if keep.n != family.ground_size:
        raise MalformedInputError(f"keep has ground size {keep.n}, family has {family.ground_size}")
    return DirectedFamily(family.ground_size, tuple(b & keep for b in family.balls))
