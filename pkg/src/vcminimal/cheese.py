"""Swiss cheese decompositions and minimal VC-minimal complexity.

A set is expressible over a laminar forest exactly when it is a union of
gap regions of balls. Any in/out labeling of the forest nodes that agrees
with the target on nonempty gaps induces a decomposition whose cost
(outer balls plus holes) equals the number of nodes whose state differs
from their parent's, so minimal complexity is a two-state tree DP.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import DisjointnessError, InexpressibleError, MalformedInputError
from .laminar import DirectedFamily, ElementSet, LaminarForest, build_forest

OUT, IN = 0, 1


@dataclass(frozen=True)
class SwissCheese:
    outer: ElementSet
    holes: tuple[ElementSet, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "holes", tuple(self.holes))
        for h in self.holes:
            if h.n != self.outer.n:
                raise MalformedInputError("hole and outer ball over different ground sizes")

    @property
    def cost(self) -> int:
        return 1 + len(self.holes)

    def evaluate(self) -> ElementSet:
        bits = self.outer.bits
        for h in self.holes:
            bits &= ~h.bits
        return ElementSet(self.outer.n, bits)

    def balls(self) -> tuple[ElementSet, ...]:
        return (self.outer,) + self.holes


@dataclass(frozen=True)
class CheeseDecomposition:
    ground_size: int
    cheeses: tuple[SwissCheese, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cheeses", tuple(self.cheeses))
        for c in self.cheeses:
            if c.outer.n != self.ground_size:
                raise MalformedInputError(
                    f"cheese over ground size {c.outer.n}, decomposition has {self.ground_size}"
                )

    @property
    def complexity(self) -> int:
        # always recomputed from the cheeses
        return sum(c.cost for c in self.cheeses)

    def balls(self):
        for c in self.cheeses:
            yield from c.balls()

    def validate(self, family: DirectedFamily) -> ElementSet:
        """Check every ball belongs to ``family`` and cheeses are disjoint."""
        for ball in self.balls():
            if ball not in family:
                raise MalformedInputError(f"{ball} is not a ball of the family")
        return evaluate(self)


def evaluate(d: CheeseDecomposition) -> ElementSet:
    """Union of the cheese evaluations; overlapping cheeses are rejected."""
    seen = 0
    values = [c.evaluate().bits for c in d.cheeses]
    for j, v in enumerate(values):
        if v & seen:
            i = next(i for i in range(j) if values[i] & v)
            raise DisjointnessError(i, j)
        seen |= v
    return ElementSet(d.ground_size, seen)


@dataclass(frozen=True)
class Witness:
    """Why a set is not a disjoint union of cheeses.

    ``kind`` is ``"outside"`` (``element`` lies in no ball) or
    ``"mixed-gap"`` (``node``'s gap is split by the set).
    """

    kind: str
    node: int | None = None
    element: int | None = None
    ball: ElementSet | None = None

    def __str__(self):
        if self.kind == "outside":
            return f"element {self.element} lies outside all balls"
        return f"gap of ball {self.ball} (node {self.node}) is split"


@dataclass(frozen=True)
class Expressibility:
    witness: Witness | None = None

    def __bool__(self):
        return self.witness is None


def _check_target(target: ElementSet, forest: LaminarForest) -> None:
    if target.n != forest.ground_size:
        raise MalformedInputError(
            f"target has ground size {target.n}, forest has {forest.ground_size}"
        )


def expressible(target: ElementSet, forest: LaminarForest) -> Expressibility:
    _check_target(target, forest)
    s = target.bits
    outside = forest.gap[0].bits & s
    if outside:
        return Expressibility(Witness("outside", element=(outside & -outside).bit_length() - 1))
    for v in range(1, len(forest)):
        g = forest.gap[v].bits
        hit = g & s
        if hit and hit != g:
            return Expressibility(Witness("mixed-gap", node=v, ball=forest.sets[v]))
    return Expressibility()


@dataclass(frozen=True)
class FlipLabeling:
    """In/out state per forest node; node 0 (virtual root) is always out."""

    forest: LaminarForest
    state: tuple[int, ...]

    @cached_property
    def flips(self) -> tuple[int, ...]:
        p = self.forest.parent
        return tuple(v for v in range(1, len(self.state)) if self.state[v] != self.state[p[v]])

    def target(self) -> ElementSet:
        bits = 0
        for v, g in enumerate(self.forest.gap):
            if self.state[v] == IN:
                bits |= g.bits
        return ElementSet(self.forest.ground_size, bits)

    def check(self, target: ElementSet) -> None:
        if len(self.state) != len(self.forest) or self.state[0] != OUT:
            raise MalformedInputError("labeling must cover every node with the root out")
        for v, g in enumerate(self.forest.gap):
            if g and (self.state[v] == IN) != g.issubset(target):
                raise MalformedInputError(f"node {v} state disagrees with its gap")


def labeling_from_flips(forest: LaminarForest, flips: Sequence[int]) -> FlipLabeling:
    """States by parity of flipped nodes on each root path."""
    flipped = set(flips)
    if 0 in flipped:
        raise MalformedInputError("the virtual root cannot be flipped")
    state = [OUT] * len(forest)
    for v in range(1, len(forest)):
        state[v] = state[forest.parent[v]] ^ (v in flipped)
    return FlipLabeling(forest, tuple(state))


def decomposition_from_labeling(labeling: FlipLabeling) -> CheeseDecomposition:
    """Out->in flips become outer balls; in->out flips become holes of the
    nearest flipped ancestor."""
    forest, state = labeling.forest, labeling.state
    flips = set(labeling.flips)
    nearest = [0] * len(forest)
    holes: dict[int, list[int]] = {}
    for v in range(1, len(forest)):
        p = forest.parent[v]
        if v in flips:
            if state[v] == IN:
                holes[v] = []
            else:
                holes[nearest[p]].append(v)
            nearest[v] = v
        else:
            nearest[v] = nearest[p]
    cheeses = tuple(
        SwissCheese(forest.sets[u], tuple(forest.sets[w] for w in hs))
        for u, hs in sorted(holes.items())
    )
    return CheeseDecomposition(forest.ground_size, cheeses)


def decomposition_from_flips(forest: LaminarForest, flips: Sequence[int]) -> CheeseDecomposition:
    """Same result as ``decomposition_from_labeling(labeling_from_flips(...))``
    but touching only the flipped nodes and their ancestors."""
    flipped = set(flips)
    if 0 in flipped:
        raise MalformedInputError("the virtual root cannot be flipped")
    holes: dict[int, list[int]] = {}
    pending = []
    for v in sorted(flipped):
        u, above = forest.parent[v], []
        while u:
            if u in flipped:
                above.append(u)
            u = forest.parent[u]
        if len(above) % 2 == 0:
            holes[v] = []
        else:
            pending.append((above[0], v))
    for u, w in pending:
        holes[u].append(w)
    return CheeseDecomposition(
        forest.ground_size,
        tuple(
            SwissCheese(forest.sets[u], tuple(forest.sets[w] for w in sorted(hs)))
            for u, hs in sorted(holes.items())
        ),
    )


def flip_target(forest: LaminarForest, flips: Sequence[int]) -> ElementSet:
    """Elements under an odd number of flipped balls."""
    bits = 0
    for v in set(flips):
        bits ^= forest.sets[v].bits
    return ElementSet(forest.ground_size, bits)


def _allowed(gap_bits: int, s: int) -> tuple[int, ...]:
    if not gap_bits:
        return (OUT, IN)
    return (IN,) if gap_bits & s else (OUT,)


def _tables(target: ElementSet, forest: LaminarForest):
    verdict = expressible(target, forest)
    if not verdict:
        raise InexpressibleError(verdict.witness)
    s = target.bits
    k = len(forest)
    # own[v][t]: cost of v's subtree when v itself is in state t
    own = [[0, 0] for _ in range(k)]
    # dp[v][t]: cost of v's subtree when v's parent is in state t
    dp = [[0, 0] for _ in range(k)]
    for v in range(k - 1, 0, -1):
        allowed = _allowed(forest.gap[v].bits, s)
        for t in (OUT, IN):
            dp[v][t] = min((u != t) + own[v][u] for u in allowed)
        p = forest.parent[v]
        own[p][OUT] += dp[v][OUT]
        own[p][IN] += dp[v][IN]
    return own, dp


def min_complexity(target: ElementSet, forest: LaminarForest) -> int:
    """Least number of outer balls plus holes writing ``target`` as a
    disjoint union of cheeses over the forest's family."""
    own, _ = _tables(target, forest)
    return own[0][OUT]


def optimal_labeling(target: ElementSet, forest: LaminarForest) -> FlipLabeling:
    own, _ = _tables(target, forest)
    s = target.bits
    state = [OUT] * len(forest)
    for v in range(1, len(forest)):
        t = state[forest.parent[v]]
        allowed = _allowed(forest.gap[v].bits, s)
        # ties keep the parent's state
        state[v] = min(allowed, key=lambda u: ((u != t) + own[v][u], u != t))
    return FlipLabeling(forest, tuple(state))


def decompose(target: ElementSet, forest: LaminarForest) -> CheeseDecomposition:
    return decomposition_from_labeling(optimal_labeling(target, forest))


def restrict_cheese_bits(cheeses, keep: int) -> list[tuple[int, tuple[int, ...]]]:
    """Bit-level core of ``restrict_decomposition`` on (outer, holes) pairs."""
    out = []
    for outer, holes in cheeses:
        o = outer & keep
        hs: list[int] = []
        for h in holes:
            h &= keep
            if h and h not in hs:
                hs.append(h)
        value = o
        for h in hs:
            value &= ~h
        if value:
            out.append((o, tuple(hs)))
    return out


def to_bits(d: CheeseDecomposition) -> list[tuple[int, tuple[int, ...]]]:
    return [(c.outer.bits, tuple(h.bits for h in c.holes)) for c in d.cheeses]


def from_bits(n: int, cheeses) -> CheeseDecomposition:
    return CheeseDecomposition(
        n,
        tuple(SwissCheese(ElementSet(n, o), tuple(ElementSet(n, h) for h in hs)) for o, hs in cheeses),
    )


def restrict_decomposition(
    d: CheeseDecomposition, keep: ElementSet, family: DirectedFamily | None = None
) -> CheeseDecomposition:
    """Intersect every ball with ``keep``, dropping empty holes and cheeses
    that restrict to nothing. ``family``, when given, must contain every
    surviving ball (it is normally ``restrict_family(original, keep)``)."""
    if keep.n != d.ground_size:
        raise MalformedInputError("keep and decomposition over different ground sizes")
    out = from_bits(d.ground_size, restrict_cheese_bits(to_bits(d), keep.bits))
    if family is not None:
        out.validate(family)
    return out


def vertex_complexities(instance) -> list[int]:
    forest = build_forest(instance.family)
    result = []
    for a, adj in enumerate(instance.adjacency):
        try:
            result.append(min_complexity(adj, forest))
        except InexpressibleError as exc:
            raise InexpressibleError(exc.witness, vertex=a) from None
    return result


def graph_complexity(instance) -> int:
    """Max over left vertices of the minimal complexity of its neighborhood.

    The instance has VC-minimal complexity below every N greater than this.
    """
    return max(vertex_complexities(instance), default=0)
