"""Bipartite instances (X, Y; E) carrying a shared directed family and a
per-vertex cheese decomposition, and the rectangles extracted from them."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .cheese import CheeseDecomposition, decompose, vertex_complexities
from .errors import ComplexityBoundError, InexpressibleError, MalformedInputError, ValidationError, VCMinimalError
from .laminar import DirectedFamily, ElementSet, build_forest

COMPLETE = "complete"
EMPTY = "empty"


@dataclass(frozen=True)
class ExtractionInstance:
    """Left vertices are ``0..left_size-1``; the right side Y is the whole
    ground set of ``family``. ``adjacency[a]`` is E(a, Y)."""

    family: DirectedFamily
    adjacency: tuple[ElementSet, ...]
    decomps: tuple[CheeseDecomposition, ...]
    bound: int
    metadata: dict = field(default_factory=dict, compare=True)

    @property
    def left_size(self) -> int:
        return len(self.adjacency)

    @property
    def right_size(self) -> int:
        return self.family.ground_size

    @classmethod
    def build(
        cls,
        family: DirectedFamily,
        adjacency: Sequence[ElementSet],
        decomps: Sequence[CheeseDecomposition] | None = None,
        bound: int | None = None,
        metadata: dict | None = None,
    ) -> ExtractionInstance:
        """Fill in minimal decompositions and the least valid bound when
        they are not supplied, then validate."""
        adjacency = tuple(adjacency)
        if decomps is None:
            forest = build_forest(family)
            found = []
            for a, adj in enumerate(adjacency):
                try:
                    found.append(decompose(adj, forest))
                except InexpressibleError as exc:
                    raise InexpressibleError(exc.witness, vertex=a) from None
            decomps = found
        decomps = tuple(decomps)
        if bound is None:
            bound = 1 + max((d.complexity for d in decomps), default=0)
        inst = cls(family, adjacency, decomps, bound, dict(metadata or {}))
        inst.validate()
        return inst

    def validate(self) -> None:
        # every field is immutable, so a successful check is remembered
        if self.__dict__.get("_validated"):
            return
        n = self.family.ground_size
        if not isinstance(self.bound, int) or self.bound < 1:
            raise ValidationError(f"bound N must be a positive integer, got {self.bound!r}")
        if len(self.decomps) != len(self.adjacency):
            raise ValidationError(
                f"{len(self.decomps)} decompositions for {len(self.adjacency)} left vertices"
            )
        for a, (adj, d) in enumerate(zip(self.adjacency, self.decomps)):
            if adj.n != n or d.ground_size != n:
                raise ValidationError("ground size mismatch", vertex=a)
            try:
                value = d.validate(self.family)
            except VCMinimalError as exc:
                raise ValidationError(str(exc), vertex=a) from exc
            if value != adj:
                raise ValidationError(
                    f"decomposition evaluates to {value}, adjacency is {adj}", vertex=a
                )
            if d.complexity >= self.bound:
                raise ComplexityBoundError(
                    f"complexity {d.complexity} is not below N={self.bound}", vertex=a
                )
        object.__setattr__(self, "_validated", True)

    def complexities(self) -> list[int]:
        """Minimal (DP) complexity per left vertex, ignoring carried decomps."""
        return vertex_complexities(self)


@dataclass(frozen=True)
class HomogeneousRectangle:
    left: tuple[int, ...]
    right: ElementSet
    kind: str

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(sorted(self.left)))
        if self.kind not in (COMPLETE, EMPTY):
            raise MalformedInputError(f"unknown rectangle kind {self.kind!r}")

    @property
    def min_side(self) -> int:
        return min(len(self.left), len(self.right))


def check_rectangle_sides(instance: ExtractionInstance, rect: HomogeneousRectangle) -> None:
    if rect.right.n != instance.right_size:
        raise MalformedInputError("rectangle right side over the wrong ground size")
    for a in rect.left:
        if not 0 <= a < instance.left_size:
            raise MalformedInputError(f"left vertex {a} out of range")
    if len(set(rect.left)) != len(rect.left):
        raise MalformedInputError("duplicate left vertices in rectangle")
