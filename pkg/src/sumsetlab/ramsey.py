"""Finite homogeneous-set searches for colorings of increasing tuples.

Three searches live here.  brute_homogeneous scans m-subsets of the
universe in lexicographic order and returns the first one on which the
coloring is constant, so its failures are genuinely exhaustive.
greedy_end_homogeneous implements the end-agreement strategy: pick a
candidate top t, grow a set of points that agree with t in the last slot of
every tuple, and then extract a monochromatic set for the reduced coloring
g(y) = f(y, t); dead ends backtrack, and with an unbounded budget the
procedure is a complete decision method for "some m members plus a top are
fully constant".  multi_homogeneous chains searches for several colorings
by iterated restriction and falls back to a direct simultaneous scan so
that its NotFound is exhaustive too.

Every returned set is re-checked by verify_homogeneous, a deliberately
plain enumerator that shares no logic with the searches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

FULL_SCAN_POINTS = 24
FULL_SCAN_ARITY = 4
TRUNCATED_BUDGET = 200_000


class TupleColoring:
    """Total coloring of strictly increasing tuples from range(universe)."""

    def __init__(self, arity: int, colors: int, universe: int, evaluate: Callable, name: str = ""):
        if arity < 0 or colors < 1 or universe < 0:
            raise ValueError("arity must be >= 0, colors >= 1, universe >= 0")
        self.arity = arity
        self.colors = colors
        self.universe = universe
        self.evaluate = evaluate
        self.name = name
        self._memo: dict[tuple[int, ...], int] = {}

    def color(self, tup: Sequence[int]) -> int:
        key = tuple(tup)
        cached = self._memo.get(key)
        if cached is None:
            if len(key) != self.arity:
                raise ValueError(f"expected arity {self.arity}, got {len(key)}")
            if any(a >= b for a, b in zip(key, key[1:])):
                raise ValueError(f"tuple must be strictly increasing, got {key}")
            cached = self.evaluate(key)
            if not 0 <= cached < self.colors:
                raise RuntimeError(f"coloring produced out-of-range color {cached}")
            self._memo[key] = cached
        return cached


@dataclass(frozen=True)
class HomogeneousSet:
    """Members (and optionally a designated top above them) plus the constant
    color seen by each covered coloring."""

    members: tuple[int, ...]
    top: int | None
    colors: tuple[int, ...]

    @property
    def color(self) -> int:
        return self.colors[0]

    def all_points(self) -> tuple[int, ...]:
        return self.members if self.top is None else self.members + (self.top,)


@dataclass(frozen=True)
class NoHomogeneousSet:
    """Failure outcome; exhaustive is False when a budget cut the search off."""

    reason: str
    exhaustive: bool
    nodes: int
    level: int | None = None
    top: int | None = None
    deepest: tuple[int, ...] | None = None
    constraints: tuple | None = None
    candidates: int | None = None


class _BudgetExceeded(Exception):
    pass


def _effective_budget(budget: int | None, n_points: int, arity: int) -> float:
    if budget is not None:
        return budget
    if n_points <= FULL_SCAN_POINTS and arity <= FULL_SCAN_ARITY:
        return math.inf
    return TRUNCATED_BUDGET


def verify_homogeneous(
    colorings: Sequence[TupleColoring], members: Sequence[int], top: int | None = None
):
    """Re-evaluate every tuple of every coloring; None if all constant.

    Returns (coloring position, tuple, color, tuple, color) for the first
    disagreement found.  Kept free of any search logic on purpose.
    """
    points = sorted(members) + ([top] if top is not None else [])
    for position, coloring in enumerate(colorings):
        seen: dict[int, tuple[int, ...]] = {}
        for tup in combinations(points, coloring.arity):
            c = coloring.color(tup)
            seen.setdefault(c, tup)
            if len(seen) > 1:
                (c1, t1), (c2, t2) = sorted(seen.items())[:2]
                return (position, t1, c1, t2, c2)
    return None


def brute_homogeneous(
    coloring: TupleColoring, m: int, points: Sequence[int] | None = None, budget: int | None = None
):
    """Lexicographically least m-subset on which the coloring is constant."""
    if m < coloring.arity:
        raise ValueError(f"target size {m} below arity {coloring.arity}")
    pts = sorted(points) if points is not None else list(range(coloring.universe))
    cap = _effective_budget(budget, len(pts), coloring.arity)
    scanned = 0
    for candidate in combinations(pts, m):
        if scanned >= cap:
            return NoHomogeneousSet(
                reason="budget exceeded", exhaustive=False, nodes=scanned, candidates=scanned
            )
        scanned += 1
        tuples = combinations(candidate, coloring.arity)
        first = coloring.color(next(tuples))
        if all(coloring.color(tup) == first for tup in tuples):
            if verify_homogeneous([coloring], candidate) is not None:
                raise RuntimeError("verifier rejected a set the scan accepted")
            return HomogeneousSet(members=candidate, top=None, colors=(first,))
    return NoHomogeneousSet(
        reason="no homogeneous set of the requested size",
        exhaustive=True,
        nodes=scanned,
        candidates=scanned,
    )


def greedy_end_homogeneous(
    coloring: TupleColoring, m: int, points: Sequence[int] | None = None, budget: int | None = None
):
    """End-agreement search: grow points that mimic a top, then extract.

    For each top candidate t (largest first) the search grows a chain A'
    below t, always taking the least point alpha whose tuples agree with t
    in the last slot: f(y + (alpha,)) == f(y + (t,)) for every increasing
    (n-1)-tuple y from A'.  At a maximal chain it runs brute_homogeneous on
    g(y) = f(y + (t,)) and, on success, returns the extracted members with
    top t; otherwise it backtracks.  With an unexhausted budget a NotFound
    means no m members plus top are fully constant anywhere in the points.
    """
    n = coloring.arity
    if n < 2:
        raise ValueError(f"end-agreement search needs arity >= 2, got {n}")
    pts = sorted(points) if points is not None else list(range(coloring.universe))
    cap = _effective_budget(budget, len(pts), n)
    nodes = 0
    deepest: tuple[int, ...] = ()
    deepest_top: int | None = None
    deepest_constraints: tuple = ()

    def grow(top: int, below: list[int], chain: list[int], reduced: TupleColoring):
        nonlocal nodes, deepest, deepest_top, deepest_constraints
        nodes += 1
        if nodes > cap:
            raise _BudgetExceeded
        viable = []
        floor = chain[-1] if chain else None
        for alpha in below:
            if floor is not None and alpha <= floor:
                continue
            if all(
                coloring.color(y + (alpha,)) == coloring.color(y + (top,))
                for y in combinations(chain, n - 1)
            ):
                viable.append(alpha)
        if not viable:
            found = brute_homogeneous(reduced, m, points=chain)
            if isinstance(found, HomogeneousSet):
                result = HomogeneousSet(members=found.members, top=top, colors=found.colors)
                if verify_homogeneous([coloring], result.members, result.top) is not None:
                    raise RuntimeError("extracted set failed independent verification")
                return result
            if len(chain) >= len(deepest):
                deepest = tuple(chain)
                deepest_top = top
                deepest_constraints = tuple(
                    (y, coloring.color(y + (top,))) for y in combinations(chain, n - 1)
                )
            return None
        for alpha in viable:
            result = grow(top, below, chain + [alpha], reduced)
            if result is not None:
                return result
        return None

    truncated = False
    for top in reversed(pts):
        below = [p for p in pts if p < top]
        if len(below) < m:
            continue
        reduced = TupleColoring(
            arity=n - 1,
            colors=coloring.colors,
            universe=coloring.universe,
            evaluate=lambda y, t=top: coloring.color(y + (t,)),
        )
        try:
            result = grow(top, below, [], reduced)
        except _BudgetExceeded:
            truncated = True
            break
        if result is not None:
            return result
    return NoHomogeneousSet(
        reason="budget exceeded" if truncated else "every top candidate exhausted",
        exhaustive=not truncated,
        nodes=nodes,
        top=deepest_top,
        deepest=deepest,
        constraints=deepest_constraints,
    )


def _simultaneous_scan(
    colorings: Sequence[TupleColoring], m: int, pts: list[int], budget: int | None
):
    """Complete direct scan for m members plus top constant for every coloring."""
    cap = _effective_budget(budget, len(pts), max(f.arity for f in colorings))
    scanned = 0
    for candidate in combinations(pts, m + 1):
        if scanned >= cap:
            return NoHomogeneousSet(reason="budget exceeded", exhaustive=False, nodes=scanned)
        scanned += 1
        colors = []
        for coloring in colorings:
            tuples = combinations(candidate, coloring.arity)
            first = coloring.color(next(tuples))
            if any(coloring.color(tup) != first for tup in tuples):
                colors = None
                break
            colors.append(first)
        if colors is not None:
            return HomogeneousSet(members=candidate[:-1], top=candidate[-1], colors=tuple(colors))
    return NoHomogeneousSet(
        reason="no simultaneous homogeneous set", exhaustive=True, nodes=scanned
    )


def multi_homogeneous(
    colorings: Sequence[TupleColoring],
    m: int,
    points: Sequence[int] | None = None,
    budget: int | None = None,
):
    """Members plus top homogeneous for every listed coloring at once.

    Works by iterated restriction (homogenize the first coloring, search
    within the result for the second, and so on).  When restriction dead
    ends, a direct simultaneous scan of the original points settles the
    matter, so a NotFound with exhaustive=True really means no such set
    exists.
    """
    if not colorings:
        raise ValueError("need at least one coloring")
    universes = {f.universe for f in colorings}
    if len(universes) != 1:
        raise ValueError("colorings must share a universe")
    pts = sorted(points) if points is not None else list(range(colorings[0].universe))
    current = pts
    nodes = 0
    result = None
    for level, coloring in enumerate(colorings):
        result = greedy_end_homogeneous(coloring, m, points=current, budget=budget)
        nodes += result.nodes if isinstance(result, NoHomogeneousSet) else 0
        if isinstance(result, NoHomogeneousSet):
            scan = _simultaneous_scan(colorings, m, pts, budget)
            if isinstance(scan, HomogeneousSet):
                return scan
            return NoHomogeneousSet(
                reason=f"level {level} ({result.reason}); direct scan: {scan.reason}",
                exhaustive=scan.exhaustive,
                nodes=nodes + scan.nodes,
                level=level,
                deepest=result.deepest,
                constraints=result.constraints,
            )
        current = sorted(result.all_points())
    members, top = result.members, result.top
    all_points = sorted(members) + [top]
    colors = tuple(f.color(tuple(all_points[: f.arity])) for f in colorings)
    if verify_homogeneous(colorings, members, top) is not None:
        raise RuntimeError("iterated restriction produced a non-homogeneous set")
    return HomogeneousSet(members=members, top=top, colors=colors)
