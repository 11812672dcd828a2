"""Brute-force references, independent of the forest and the tree DP.

These are meant for tiny inputs: they check the fast code paths, not
replace them.
"""
from __future__ import annotations

import enum
import os
import time
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import MalformedInputError, VCMinimalError
from .instance import COMPLETE, EMPTY, ExtractionInstance, HomogeneousRectangle, check_rectangle_sides
from .laminar import DirectedCheck, DirectedFamily, ElementSet, iter_bits, popcount

ENV_MAX_COST = "VCMINIMAL_ORACLE_MAX_COST"
ENV_MAX_SIDE = "VCMINIMAL_ORACLE_MAX_SIDE"
ENV_WALL_SECONDS = "VCMINIMAL_ORACLE_WALL_SECONDS"


class Outcome(enum.Enum):
    INEXPRESSIBLE = "inexpressible"
    INCONCLUSIVE = "inconclusive"


class BudgetExceeded(VCMinimalError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_cost: int = 6
    max_side: int = 16
    wall_seconds: float | None = None

    def __post_init__(self):
        if self.max_cost < 0 or self.max_side < 1:
            raise MalformedInputError("oracle budgets must be positive")
        if self.wall_seconds is not None and self.wall_seconds <= 0:
            raise MalformedInputError("wall-clock cap must be positive")

    @classmethod
    def from_env(cls, environ=None) -> OracleBudget:
        env = os.environ if environ is None else environ

        def read(name, default):
            raw = env.get(name)
            if raw is None:
                return default
            try:
                return int(raw)
            except ValueError:
                raise MalformedInputError(f"{name} must be an integer, got {raw!r}") from None

        return cls(
            max_cost=read(ENV_MAX_COST, cls.max_cost),
            max_side=read(ENV_MAX_SIDE, cls.max_side),
            wall_seconds=read(ENV_WALL_SECONDS, None),
        )

    def deadline(self) -> float | None:
        return None if self.wall_seconds is None else time.monotonic() + self.wall_seconds


def _expired(deadline):
    return deadline is not None and time.monotonic() > deadline


def naive_check_directed(balls: Sequence[ElementSet]) -> DirectedCheck:
    """Pairwise test of nested-or-disjoint; first violating pair in input order."""
    for i, j in combinations(range(len(balls)), 2):
        a, b = balls[i], balls[j]
        if not (a.issubset(b) or b.issubset(a) or a.isdisjoint(b)):
            return DirectedCheck((a, b))
    return DirectedCheck()


@dataclass(frozen=True)
class RectangleVerdict:
    counterexample: tuple[int, int] | None = None

    def __bool__(self):
        return self.counterexample is None


def verify_rectangle(instance: ExtractionInstance, rect: HomogeneousRectangle) -> RectangleVerdict:
    check_rectangle_sides(instance, rect)
    y = rect.right.bits
    for a in rect.left:
        adj = instance.adjacency[a].bits
        bad = y & ~adj if rect.kind == COMPLETE else y & adj
        if bad:
            return RectangleVerdict((a, (bad & -bad).bit_length() - 1))
    return RectangleVerdict()


def _atom(x: int, balls: Sequence[int]) -> int | None:
    containing = [b for b in balls if b >> x & 1]
    if not containing:
        return None
    smallest = min(containing, key=popcount)
    atom = smallest
    for b in balls:
        if b != smallest and b & ~smallest == 0:
            atom &= ~b
    return atom


def brute_min_complexity(
    target: ElementSet, family: DirectedFamily, budget: OracleBudget = OracleBudget()
) -> int | Outcome:
    """Least total cost of explicit disjoint cheese lists with union ``target``.

    Tries cost 0, 1, ... up to ``budget.max_cost``; each search covers the
    lowest uncovered element with some cheese, so no ordering of the same
    cheeses is revisited. Returns ``Outcome.INCONCLUSIVE`` when nothing is
    found within the budget.
    """
    s = target.bits
    balls = [b.bits for b in family.balls]
    for x in iter_bits(s):
        atom = _atom(x, balls)
        if atom is None or atom & ~s:
            return Outcome.INEXPRESSIBLE

    best: dict[int, int] = {}
    for o in balls:
        inside = [b for b in balls if b != o and b & ~o == 0]
        for k in range(min(len(inside), budget.max_cost - 1) + 1):
            for holes in combinations(inside, k):
                value = o
                for h in holes:
                    value &= ~h
                if value and value & ~s == 0:
                    cost = 1 + k
                    if cost < best.get(value, cost + 1):
                        best[value] = cost
    by_low: dict[int, list[tuple[int, int]]] = {}
    for value, cost in sorted(best.items(), key=lambda kv: (kv[1], kv[0])):
        low = (value & -value).bit_length() - 1
        by_low.setdefault(low, []).append((value, cost))

    deadline = budget.deadline()
    memo: dict[tuple[int, int], bool] = {}

    def cover(rest: int, allowance: int) -> bool:
        if rest == 0:
            return True
        if allowance <= 0:
            return False
        key = (rest, allowance)
        if key in memo:
            return memo[key]
        low = (rest & -rest).bit_length() - 1
        found = False
        for value, cost in by_low.get(low, ()):
            if cost > allowance:
                break
            if value & ~rest == 0 and cover(rest & ~value, allowance - cost):
                found = True
                break
        memo[key] = found
        return found

    for c in range(budget.max_cost + 1):
        if _expired(deadline):
            return Outcome.INCONCLUSIVE
        if cover(s, c):
            return c
    return Outcome.INCONCLUSIVE


def _best_over_subsets(rows: Sequence[int], other_size: int, deadline, transposed: bool = False):
    """Best (chosen, common, kind) over nonempty subsets of ``rows``.

    ``rows[i]`` is the neighborhood bitmask of row ``i`` in the other side.
    Returns chosen row indices, the forced other-side mask, and whether
    the rectangle is complete.
    """
    full = (1 << other_size) - 1
    m = len(rows)
    best = None  # (min_side, product, key tuple, chosen, other, is_complete)

    def consider(chosen, other, complete):
        nonlocal best
        size = popcount(other)
        if not size:
            return
        score = (min(len(chosen), size), len(chosen) * size)
        if best is not None and score < best[:2]:
            return
        sides = (tuple(chosen), tuple(iter_bits(other)))
        if transposed:
            sides = sides[::-1]
        key = sides + (COMPLETE if complete else EMPTY,)
        if best is None or score > best[:2] or key < best[2]:
            best = (score[0], score[1], key, list(chosen), other, complete)

    chosen: list[int] = []

    def dfs(start: int, inter: int, union: int):
        if _expired(deadline):
            raise BudgetExceeded("oracle wall-clock cap reached")
        for i in range(start, m):
            ni, nu = inter & rows[i], union | rows[i]
            chosen.append(i)
            consider(chosen, ni, True)
            consider(chosen, full & ~nu, False)
            reach = min(len(chosen) + m - 1 - i, max(popcount(ni), popcount(full & ~nu)))
            if best is None or reach >= best[0]:
                dfs(i + 1, ni, nu)
            chosen.pop()

    dfs(0, full, 0)
    return best


def brute_best_rectangle(
    instance: ExtractionInstance, budget: OracleBudget = OracleBudget()
) -> HomogeneousRectangle:
    """Homogeneous rectangle maximizing min(|X'|, |Y'|), exactly.

    Enumerates subsets of the smaller side; the other side is then forced
    to the common neighborhood or common non-neighborhood. Ties prefer the
    larger product, then the lexicographically least (X', Y', kind).
    """
    nx, ny = instance.left_size, instance.right_size
    if min(nx, ny) > budget.max_side:
        raise BudgetExceeded(f"smaller side {min(nx, ny)} exceeds cap {budget.max_side}")
    if nx == 0 or ny == 0:
        raise BudgetExceeded("empty side")
    deadline = budget.deadline()
    adj = [a.bits for a in instance.adjacency]
    if nx <= ny:
        _, _, _, chosen, other, complete = _best_over_subsets(adj, ny, deadline)
        left, right = chosen, other
    else:
        cols = [sum(1 << a for a in range(nx) if adj[a] >> y & 1) for y in range(ny)]
        _, _, _, chosen, other, complete = _best_over_subsets(cols, nx, deadline, transposed=True)
        left, right = list(iter_bits(other)), sum(1 << y for y in chosen)
    return HomogeneousRectangle(tuple(left), ElementSet(ny, right), COMPLETE if complete else EMPTY)
