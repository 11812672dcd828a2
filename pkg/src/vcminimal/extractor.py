"""Homogeneous rectangle extraction for bipartite graphs of bounded
VC-minimal complexity.

Given an instance whose neighborhoods have complexity < N, ``extract``
returns X' x Y' entirely inside or entirely outside E with
``2**(N+4) * |X'| >= |X|`` and ``2**(N+4) * |Y'| >= |Y|``. Each level of the
loop either stops on a homogeneous region (the base case, the remainder R
of a minimal large ball, or the prefix union C for the vertices that have
no ball inside C) or discards C and recurses on the vertices that lose a
ball to it, with N one smaller.

All thresholds are integer cross-multiplications.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cheese import build_forest, from_bits, min_complexity, restrict_cheese_bits, to_bits
from .errors import ClaimViolation, ComplexityBoundError, ValidationError
from .instance import COMPLETE, EMPTY, ExtractionInstance, HomogeneousRectangle
from .laminar import ElementSet, iter_bits, popcount, restrict_family

BASE = "base"
REMAINDER = "remainder-R"
A2_ON_C = "A2-on-C"
RECURSE = "recurse-A1"

# Z needs 8|Z| >= |Y|; R wins at 16|R| >= |Y|; the prefix stops at 32|C| >= |Y|.
Z_FACTOR = 8
R_FACTOR = 16
C_FACTOR = 32
C_UPPER = 5  # 32|C| <= 5|Y|, i.e. |C| <= (1/32 + 1/8)|Y|


def k_fraction(bound: int) -> Fraction:
    """Guaranteed side fraction for complexity < ``bound``."""
    if bound < 1:
        raise ValueError("bound must be positive")
    return Fraction(1, 2 ** (bound + 4))


def guarantee_holds(n_left: int, n_right: int, bound: int, out_left: int, out_right: int) -> bool:
    scale = 2 ** (bound + 4)
    return scale * out_left >= n_left and scale * out_right >= n_right


@dataclass(frozen=True)
class Level:
    bound: int
    left_size: int
    right_size: int
    branch: str
    z: ElementSet | None = None
    maximal: tuple[ElementSet, ...] = ()
    remainder: ElementSet | None = None
    t0: int | None = None
    c: ElementSet | None = None
    a1_size: int | None = None
    a2_size: int | None = None
    out_left: int = 0
    out_right: int = 0
    claims_checked: bool = False

    def to_json(self) -> dict:
        def s(x):
            return None if x is None else list(x.members)

        return {
            "bound": self.bound,
            "left_size": self.left_size,
            "right_size": self.right_size,
            "branch": self.branch,
            "Z": s(self.z),
            "maximal": [list(m.members) for m in self.maximal],
            "R": s(self.remainder),
            "t0": self.t0,
            "C": s(self.c),
            "A1": self.a1_size,
            "A2": self.a2_size,
            "out_left": self.out_left,
            "out_right": self.out_right,
            "claims_checked": self.claims_checked,
        }


@dataclass(frozen=True)
class ExtractionTrace:
    levels: tuple[Level, ...]

    @property
    def branches(self) -> tuple[str, ...]:
        return tuple(lv.branch for lv in self.levels)

    def to_json(self) -> list[dict]:
        return [lv.to_json() for lv in self.levels]


@dataclass(frozen=True)
class ClaimReport:
    """Per-vertex classification of E(a, region): full, empty or mixed."""

    region: ElementSet
    verdicts: dict[int, str]

    @property
    def counterexamples(self) -> tuple[int, ...]:
        return tuple(a for a, v in self.verdicts.items() if v == "mixed")

    def __bool__(self):
        return not self.counterexamples


def _classify(adjacency: Sequence[int], vertices: Iterable[int], region: int) -> dict[int, str]:
    out = {}
    for a in vertices:
        hit = adjacency[a] & region
        out[a] = "full" if hit == region else "empty" if hit == 0 else "mixed"
    return out


def check_claim_32(
    instance: ExtractionInstance, remainder: ElementSet, vertices: Iterable[int] | None = None
) -> ClaimReport:
    """Every vertex sees all of R or none of it."""
    adj = [x.bits for x in instance.adjacency]
    vs = range(instance.left_size) if vertices is None else vertices
    return ClaimReport(remainder, _classify(adj, vs, remainder.bits))


def check_claim_33(instance: ExtractionInstance, c: ElementSet, a2: Iterable[int]) -> ClaimReport:
    """Every vertex with no ball inside C sees all of C or none of it."""
    adj = [x.bits for x in instance.adjacency]
    return ClaimReport(c, _classify(adj, a2, c.bits))


def auto_bound(instance: ExtractionInstance) -> int:
    """Least N with complexity < N, using minimal decompositions."""
    return max(instance.complexities(), default=0) + 1


def _members(bits: int) -> tuple[int, ...]:
    return tuple(iter_bits(bits))


def _by_size_then_lex(bits: int):
    return (-popcount(bits), _members(bits))


def _majority(adj: Sequence[int], side: Sequence[int], region: int, claim: str):
    full, empty = [], []
    for a in side:
        hit = adj[a] & region
        if hit == region:
            full.append(a)
        elif hit == 0:
            empty.append(a)
        else:
            raise ClaimViolation(
                f"{claim}: vertex {a} meets region {list(_members(region))} only partially"
            )
    # ties go to the empty side
    if len(full) > len(empty):
        return full, COMPLETE
    return empty, EMPTY


def _cost(cheeses) -> int:
    return sum(1 + len(h) for _, h in cheeses)


def extract(
    instance: ExtractionInstance, check_claims: bool = False, debug: bool = False
) -> tuple[HomogeneousRectangle, ExtractionTrace]:
    """Find a homogeneous rectangle with both sides at least 1/2**(N+4).

    ``check_claims`` classifies every vertex against R and C at each level
    and aborts on a mixed vertex. ``debug`` additionally restricts the
    family at each level, checks the carried decompositions against it and
    compares their cost with the DP minimum.
    """
    instance.validate()
    n = instance.right_size
    if instance.left_size == 0 or n == 0:
        raise ValidationError("both sides of the bipartite graph must be nonempty")
    orig_adj = [x.bits for x in instance.adjacency]
    adj = list(orig_adj)
    dec = [to_bits(d) for d in instance.decomps]
    xs = list(range(instance.left_size))
    y = (1 << n) - 1
    bound = instance.bound
    family = instance.family
    levels: list[Level] = []

    while True:
        ysize = popcount(y)
        common = dict(bound=bound, left_size=len(xs), right_size=ysize)
        if bound == 1:
            bad = [a for a in xs if adj[a]]
            if bad:
                raise ComplexityBoundError("nonempty neighborhood at N=1", vertex=bad[0])
            levels.append(Level(branch=BASE, out_left=len(xs), out_right=ysize, **common))
            rect = HomogeneousRectangle(tuple(xs), ElementSet(n, y), EMPTY)
            break

        balls = {y}
        for a in xs:
            for outer, holes in dec[a]:
                balls.add(outer)
                balls.update(holes)
        qualifying = [b for b in balls if Z_FACTOR * popcount(b) >= ysize]
        smallest = min(popcount(b) for b in qualifying)
        z = min((b for b in qualifying if popcount(b) == smallest), key=_members)

        inner = sorted((b for b in balls if b != z and b & ~z == 0), key=popcount, reverse=True)
        maximal, covered = [], 0
        for b in inner:
            if b & covered == 0:
                maximal.append(b)
                covered |= b
        maximal.sort(key=_by_size_then_lex)
        r = z & ~covered
        common.update(
            z=ElementSet(n, z),
            maximal=tuple(ElementSet(n, m) for m in maximal),
            remainder=ElementSet(n, r),
            claims_checked=check_claims,
        )
        if check_claims:
            report = _classify(orig_adj, xs, r)
            bad = [a for a, v in report.items() if v == "mixed"]
            if bad:
                raise ClaimViolation(f"claim on R fails at vertex {bad[0]} (N={bound})")

        if R_FACTOR * popcount(r) >= ysize:
            side, kind = _majority(adj, xs, r, "remainder claim")
            levels.append(Level(branch=REMAINDER, out_left=len(side), out_right=popcount(r), **common))
            rect = HomogeneousRectangle(tuple(side), ElementSet(n, r), kind)
            break

        c, t0 = 0, None
        for t, m in enumerate(maximal, start=1):
            c |= m
            if C_FACTOR * popcount(c) >= ysize:
                t0 = t
                break
        if t0 is None:
            raise AssertionError("maximal balls never reach 1/32 of Y although R is small")
        csize = popcount(c)
        if not (C_FACTOR * csize >= ysize and C_FACTOR * csize <= C_UPPER * ysize):
            raise AssertionError(f"prefix union size {csize} outside [|Y|/32, 5|Y|/32] for |Y|={ysize}")

        a1, a2 = [], []
        for a in xs:
            inside = any(
                outer & ~c == 0 or any(h & ~c == 0 for h in holes) for outer, holes in dec[a]
            )
            (a1 if inside else a2).append(a)
        common.update(t0=t0, c=ElementSet(n, c), a1_size=len(a1), a2_size=len(a2))
        if check_claims:
            report = _classify(orig_adj, a2, c)
            bad = [a for a, v in report.items() if v == "mixed"]
            if bad:
                raise ClaimViolation(f"claim on C fails at vertex {bad[0]} (N={bound})")

        if 2 * len(a2) >= len(xs):
            side, kind = _majority(adj, a2, c, "prefix claim")
            levels.append(Level(branch=A2_ON_C, out_left=len(side), out_right=csize, **common))
            rect = HomogeneousRectangle(tuple(side), ElementSet(n, c), kind)
            break

        keep = y & ~c
        for a in a1:
            before = _cost(dec[a])
            dec[a] = restrict_cheese_bits(dec[a], keep)
            if _cost(dec[a]) > before - 1:
                raise AssertionError(f"vertex {a} kept complexity {_cost(dec[a])} from {before}")
            adj[a] &= keep
        levels.append(Level(branch=RECURSE, out_left=len(a1), out_right=popcount(keep), **common))
        xs, y, bound = a1, keep, bound - 1
        if debug:
            family = restrict_family(family, ElementSet(n, y))
            _debug_check(family, adj, dec, xs, n)

    if len(levels) > instance.bound:
        raise AssertionError(f"recursion depth {len(levels) - 1} exceeds N-1")
    return rect, ExtractionTrace(tuple(levels))


def _debug_check(family, adj, dec, xs, n):
    forest = build_forest(family)
    for a in xs:
        d = from_bits(n, dec[a])
        if d.validate(family).bits != adj[a]:
            raise AssertionError(f"carried decomposition of vertex {a} drifted from adjacency")
        if min_complexity(ElementSet(n, adj[a]), forest) > d.complexity:
            raise AssertionError(f"carried complexity of vertex {a} beats the minimum")


def replay_trace(instance: ExtractionInstance, trace: ExtractionTrace) -> HomogeneousRectangle:
    """Rebuild the output rectangle from the recorded C and R choices."""
    n = instance.right_size
    adj = [x.bits for x in instance.adjacency]
    dec = [to_bits(d) for d in instance.decomps]
    xs = list(range(instance.left_size))
    y = (1 << n) - 1
    for lv in trace.levels:
        if lv.branch == BASE:
            return HomogeneousRectangle(tuple(xs), ElementSet(n, y), EMPTY)
        if lv.branch == REMAINDER:
            side, kind = _majority(adj, xs, lv.remainder.bits, "remainder claim")
            return HomogeneousRectangle(tuple(side), lv.remainder, kind)
        c = lv.c.bits
        a1 = [a for a in xs if any(o & ~c == 0 or any(h & ~c == 0 for h in hs) for o, hs in dec[a])]
        if lv.branch == A2_ON_C:
            a2 = [a for a in xs if a not in set(a1)]
            side, kind = _majority(adj, a2, c, "prefix claim")
            return HomogeneousRectangle(tuple(side), lv.c, kind)
        y &= ~c
        for a in a1:
            dec[a] = restrict_cheese_bits(dec[a], y)
            adj[a] &= y
        xs = a1
    raise ValueError("trace does not end in a terminal branch")
