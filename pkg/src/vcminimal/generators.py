"""Seeded generators of valid extraction instances.

Randomness comes from numpy's PCG64 seeded through ``SeedSequence``.
Independent streams are addressed by a spawn key, e.g. ``(STREAM_FAMILY,)``
for the family and ``(STREAM_VERTEX, a)`` for left vertex ``a``, so output
does not depend on generation order.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .cheese import (
    CheeseDecomposition,
    SwissCheese,
    decomposition_from_flips,
    flip_target,
)
from .errors import MalformedInputError, ValidationError
from .instance import ExtractionInstance
from .laminar import DirectedFamily, ElementSet, build_forest

KINDS = ("forest", "padic", "laminar-flip")

STREAM_FAMILY = 0
STREAM_VERTEX = 1
STREAM_SPLIT = 2
STREAM_CORPUS = 3

NONEMPTY_RETRIES = 16


def stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def split_seed(seed: int, index: int) -> int:
    """64-bit seed of the ``index``-th member of a corpus seeded by ``seed``."""
    words = np.random.SeedSequence(seed, spawn_key=(STREAM_CORPUS, index)).generate_state(2)
    return int(words[0]) | int(words[1]) << 32


@dataclass(frozen=True)
class RootedForest:
    parent: tuple[int | None, ...]

    def __post_init__(self):
        n = len(self.parent)
        for v, p in enumerate(self.parent):
            if p is not None and not 0 <= p < n:
                raise MalformedInputError(f"parent {p} of {v} out of range")
        for v in range(n):
            seen, u = set(), v
            while u is not None:
                if u in seen:
                    raise MalformedInputError(f"parent relation has a cycle through {u}")
                seen.add(u)
                u = self.parent[u]

    def __len__(self):
        return len(self.parent)

    @cached_property
    def _children(self) -> tuple[tuple[int, ...], ...]:
        kids: list[list[int]] = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if p is not None:
                kids[p].append(v)
        return tuple(tuple(k) for k in kids)

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[tuple[int, int]]) -> RootedForest:
        """Root each component at its minimum vertex and orient edges by BFS."""
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise MalformedInputError(f"bad edge ({u}, {v})")
            nbrs[u].append(v)
            nbrs[v].append(u)
        parent: list[int | None] = [None] * n
        seen = [False] * n
        for root in range(n):
            if seen[root]:
                continue
            seen[root] = True
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for w in sorted(nbrs[u]):
                    if seen[w]:
                        if parent[u] != w:
                            raise MalformedInputError("edge list contains a cycle")
                        continue
                    seen[w] = True
                    parent[w] = u
                    queue.append(w)
        return cls(tuple(parent))


def random_forest(n: int, rng: np.random.Generator, attach: float = 0.9) -> RootedForest:
    """Random labeled forest: each vertex in a random order joins an
    earlier one with probability ``attach``."""
    order = rng.permutation(n)
    edges = []
    for i in range(1, n):
        if rng.random() < attach:
            j = int(rng.integers(0, i))
            edges.append((int(order[i]), int(order[j])))
    return RootedForest.from_edges(n, edges)


def _forest_balls(h: RootedForest) -> list[set[int]]:
    kids: list[set[int]] = [set() for _ in range(len(h))]
    for v, p in enumerate(h.parent):
        if p is not None:
            kids[p].add(v)
    balls = []
    for v, p in enumerate(h.parent):
        if p is not None:
            balls.append({p})
        if kids[v]:
            balls.append(kids[v])
    return balls


def forest_family(h: RootedForest) -> DirectedFamily:
    """Predecessor singletons and successor sets of every vertex."""
    return DirectedFamily.from_lists(len(h), _forest_balls(h))


def forest_instance(
    h: RootedForest, xs: Sequence[int], ys: Sequence[int], metadata: dict | None = None
) -> ExtractionInstance:
    """Bipartite graph of the forest's edges between disjoint X and Y.

    Left vertex ``i`` is ``sorted(xs)[i]``; right element ``j`` is
    ``sorted(ys)[j]``.
    """
    xs, ys = sorted(xs), sorted(ys)
    if set(xs) & set(ys):
        raise ValidationError("X and Y must be disjoint")
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        raise ValidationError("duplicate vertices in X or Y")
    for v in xs + ys:
        if not 0 <= v < len(h):
            raise ValidationError(f"vertex {v} not in the forest")
    pos = {v: j for j, v in enumerate(ys)}
    m = len(ys)

    def to_y(vertices) -> ElementSet:
        return ElementSet.of(m, (pos[v] for v in vertices if v in pos))

    family = DirectedFamily(m, tuple(to_y(b) for b in _forest_balls(h)))
    adjacency, decomps = [], []
    for a in xs:
        pred = to_y([] if h.parent[a] is None else [h.parent[a]])
        succ = to_y(h.children(a))
        cheeses = tuple(SwissCheese(b) for b in (pred, succ) if b)
        adjacency.append(pred | succ)
        decomps.append(CheeseDecomposition(m, cheeses))
    return ExtractionInstance.build(family, adjacency, decomps, bound=3, metadata=metadata)


def padic_strings(p: int, depth: int, n: int, rng: np.random.Generator) -> list[tuple[int, ...]]:
    digits = rng.integers(0, p, size=(n, depth))
    return [tuple(int(d) for d in row) for row in digits]


def padic_family_from_strings(strings: Sequence[Sequence[int]]) -> DirectedFamily:
    """Balls are the classes of elements sharing a prefix of each length."""
    n = len(strings)
    depth = min((len(s) for s in strings), default=0)
    classes: dict[tuple[int, ...], set[int]] = {}
    for i, s in enumerate(strings):
        for k in range(1, depth + 1):
            classes.setdefault(tuple(s[:k]), set()).add(i)
    return DirectedFamily.from_lists(n, classes.values())


def padic_family(p: int, depth: int, n: int, seed: int) -> DirectedFamily:
    if p < 2 or depth < 1 or n < 0:
        raise MalformedInputError("need p >= 2, depth >= 1, n >= 0")
    return padic_family_from_strings(padic_strings(p, depth, n, stream(seed, STREAM_FAMILY)))


def random_laminar_family(
    n: int, seed: int, branching: int = 3, depth: int = 4, keep: float = 0.8
) -> DirectedFamily:
    """Nested interval splits of a random permutation of the ground set."""
    rng = stream(seed, STREAM_FAMILY)
    order = [int(v) for v in rng.permutation(n)]
    balls: list[list[int]] = []

    def split(lo: int, hi: int, level: int) -> None:
        if hi - lo < 2 or level >= depth:
            return
        parts = int(rng.integers(2, max(2, min(branching, hi - lo)) + 1))
        cuts = sorted(int(c) for c in rng.choice(np.arange(lo + 1, hi), size=parts - 1, replace=False))
        bounds = [lo] + cuts + [hi]
        for a, b in zip(bounds, bounds[1:]):
            if rng.random() < keep:
                balls.append(order[a:b])
            split(a, b, level + 1)

    if n and rng.random() < 0.5:
        balls.append(order)
    split(0, n, 0)
    return DirectedFamily.from_lists(n, balls)


def instance_from_flips(
    family: DirectedFamily,
    flip_sets: Sequence[Sequence[int]],
    bound: int,
    metadata: dict | None = None,
) -> ExtractionInstance:
    """One left vertex per flip set of forest nodes (``i + 1`` is ball ``i``).

    The neighborhood is the union of gaps under an odd number of flipped
    nodes; its decomposition is read off the flips, so its complexity is
    the number of flips.
    """
    forest = build_forest(family)
    adjacency = [flip_target(forest, f) for f in flip_sets]
    decomps = [decomposition_from_flips(forest, f) for f in flip_sets]
    return ExtractionInstance.build(family, adjacency, decomps, bound=bound, metadata=metadata)


def flip_sample_graph(
    family: DirectedFamily,
    left_size: int,
    max_flips: int,
    seed: int,
    nonempty: bool = False,
    metadata: dict | None = None,
) -> ExtractionInstance:
    """Left vertices get 0..max_flips distinct random flipped forest nodes.

    N = max_flips + 1 is a valid bound. With ``nonempty`` a vertex whose
    neighborhood comes out empty is resampled a bounded number of times.
    """
    if max_flips < 0 or left_size < 0:
        raise MalformedInputError("max_flips and left_size must be nonnegative")
    forest = build_forest(family)
    nodes = len(forest) - 1
    flip_sets = []
    for a in range(left_size):
        rng = stream(seed, STREAM_VERTEX, a)
        for _ in range(NONEMPTY_RETRIES):
            count = int(rng.integers(0, min(max_flips, nodes) + 1))
            flips = sorted(int(v) + 1 for v in rng.choice(nodes, size=count, replace=False)) if count else []
            if flip_target(forest, flips) or not nonempty or not nodes or not max_flips:
                break
        flip_sets.append(flips)
    return instance_from_flips(family, flip_sets, max_flips + 1, metadata)


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    left: int
    right: int
    seed: int
    p: int = 2
    depth: int = 4
    max_flips: int = 3
    nonempty: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MalformedInputError(f"unknown generator kind {self.kind!r}")
        if self.left < 1 or self.right < 1:
            raise MalformedInputError("--left and --right must be positive")
        if self.p < 2 or self.depth < 1 or self.max_flips < 0:
            raise MalformedInputError("need p >= 2, depth >= 1, max_flips >= 0")
        if not 0 <= self.seed < 2**64:
            raise MalformedInputError("seed must fit in 64 unsigned bits")

    def params(self) -> dict:
        out = {"left": self.left, "right": self.right}
        if self.kind != "forest":
            out.update(p=self.p, depth=self.depth, max_flips=self.max_flips, nonempty=self.nonempty)
        return out


def generate(spec: GeneratorSpec) -> ExtractionInstance:
    meta = {"kind": spec.kind, "seed": spec.seed, "params": spec.params()}
    if spec.kind == "forest":
        total = spec.left + spec.right
        h = random_forest(total, stream(spec.seed, STREAM_FAMILY))
        order = [int(v) for v in stream(spec.seed, STREAM_SPLIT).permutation(total)]
        return forest_instance(h, order[: spec.left], order[spec.left :], metadata=meta)
    if spec.kind == "padic":
        family = padic_family(spec.p, spec.depth, spec.right, spec.seed)
    else:
        family = random_laminar_family(spec.right, spec.seed, branching=spec.p, depth=spec.depth)
    return flip_sample_graph(family, spec.left, spec.max_flips, spec.seed, spec.nonempty, metadata=meta)
