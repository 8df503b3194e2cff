"""General witness pipeline over r disjoint index families.

The index universe is carved into r blocks, one per family, mimicking the
layout A_i = {e at offset i*width + j : j >= 1} with the top at the block's
last slot and the block's first slot left unused.  Level-l canonical tuples
draw an ordered pair from each of the first l families and a single element
from the rest; check_levels asks whether each derived coloring d_l is
constant across every index-strictly-increasing canonical tuple.

When the initial system is not level-homogeneous, two reduction steps try
to make it so.  shrink re-picks family members one at a time in round-robin
order; each pick must leave every canonical tuple's color unchanged when it
trades places with its family's top (replacement_search), and the finished
system is re-verified to satisfy the saturation law: the color of any
index-strictly-increasing canonical tuple equals the color of its
TOP-saturated form, so colors depend only on the index vector.  last_step
then homogenizes, level by level, the coloring of index vectors through
their saturated tuples, nesting the surviving position sets.

Once level constants rho_0 .. rho_r exist, two of them coincide, say at
levels l' < l, and make_witness_tuples lays out the witness frames: the
halved level-l' pattern on a_i doubles back onto a level-l' tuple while
cross sums fill a level-l tuple, so every pairwise sum is colored by the
shared constant.  All identities are re-derived exactly and verify_witness
re-colors every sum before a certificate is issued.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Sequence

from .oracle import ColoringOracle, WitnessCertificate, verify_witness
from .pattern import (
    TOP,
    CanonicalTuple,
    IndexFamily,
    Position,
    canonical_tuple,
    families_are_laid_out,
    is_index_strictly_increasing,
    is_l_canonical,
    is_top,
    make_string,
    star,
)
from .ramsey import HomogeneousSet, TupleColoring, brute_homogeneous


@dataclass(frozen=True)
class FamilySystem:
    """r index families on disjoint increasing ranges, equally sized, each
    with a top; rho holds the per-level constants once they are known."""

    families: tuple[IndexFamily, ...]
    rho: tuple[int, ...] | None = None

    def __post_init__(self):
        if not self.families:
            raise ValueError("a family system needs at least one family")
        if not families_are_laid_out(self.families):
            raise ValueError("families must occupy disjoint increasing ranges")
        sizes = {f.size for f in self.families}
        if len(sizes) != 1:
            raise ValueError(f"families must share one member count, got sizes {sorted(sizes)}")

    @property
    def r(self) -> int:
        return len(self.families)

    @property
    def member_count(self) -> int:
        return self.families[0].size

    def payload_families(self) -> list[dict]:
        return [{"members": list(f.members), "top": f.top} for f in self.families]


def layout_families(r: int, member_count: int, block: int | None = None) -> FamilySystem:
    """Contiguous blocks [i*block, (i+1)*block): first slot unused, members
    next, top at the last slot."""
    if member_count < 1:
        raise ValueError("member_count must be positive")
    width = block if block is not None else member_count + 2
    if width < member_count + 2:
        raise ValueError(f"block width {width} cannot hold {member_count} members plus a top")
    families = []
    for i in range(r):
        base = i * width
        members = tuple(base + 1 + j for j in range(member_count))
        families.append(IndexFamily(members=members, top=(i + 1) * width - 1))
    return FamilySystem(families=tuple(families))


def system_from_universe(r: int, n: int) -> FamilySystem:
    """Largest uniform layout fitting inside range(n)."""
    block = n // r
    if block < 3:
        raise ValueError(f"universe of size {n} cannot hold {r} families")
    return layout_families(r, member_count=block - 2, block=block)


def trim_members(sys: FamilySystem, m: int, rho: tuple[int, ...] | None = None) -> FamilySystem:
    """Keep the first m members of every family; tops are untouched."""
    if m > sys.member_count:
        raise ValueError(f"cannot trim to {m} members, only {sys.member_count} present")
    families = tuple(
        IndexFamily(members=f.members[:m], top=f.top) for f in sys.families
    )
    return FamilySystem(families=families, rho=rho)


def select_positions(sys: FamilySystem, positions: Sequence[int], rho=None) -> FamilySystem:
    """Restrict every family to the given member positions (same for all)."""
    chosen = sorted(positions)
    families = tuple(
        IndexFamily(members=tuple(f.members[p] for p in chosen), top=f.top)
        for f in sys.families
    )
    return FamilySystem(families=families, rho=rho)


def iter_canonical_tuples(
    families: Sequence[IndexFamily],
    l: int,
    pools: Sequence[Sequence[Position]] | None = None,
    index_strict: bool = False,
    containing_top_of: int | None = None,
) -> Iterator[CanonicalTuple]:
    """Enumerate l-canonical tuples drawing positions from per-family pools.

    Pools default to every member position plus TOP.  With index_strict the
    index vector must be strictly increasing in the finite-strict sense;
    with containing_top_of=j only tuples using the top of family j appear.
    The enumeration order is deterministic: index vectors ascend
    lexicographically with TOP last, then primed vectors likewise.
    """
    r = len(families)
    if not 0 <= l <= r:
        raise ValueError(f"level {l} out of range for {r} families")
    if pools is None:
        pools = [list(range(f.size)) + [TOP] for f in families]
    finite_pool = [sorted(p for p in pool if not is_top(p)) for pool in pools]
    has_top = [any(is_top(p) for p in pool) for pool in pools]

    unprimed_choices: list[list[Position]] = []
    for k in range(r):
        if k < l:
            choices: list[Position] = list(finite_pool[k])
        else:
            choices = list(finite_pool[k]) + ([TOP] if has_top[k] else [])
        if containing_top_of == k and k >= l:
            choices = [TOP] if has_top[k] else []
        unprimed_choices.append(choices)

    for index in product(*unprimed_choices):
        if index_strict and not is_index_strictly_increasing(index):
            continue
        finite_values = [p for p in index if not is_top(p)]
        bound = max(finite_values) if finite_values else None
        primed_choices: list[list[Position]] = []
        feasible = True
        for k in range(l):
            if containing_top_of == k:
                options: list[Position] = [TOP] if has_top[k] else []
            else:
                options = [p for p in finite_pool[k] if bound is None or p > bound]
                if has_top[k]:
                    options.append(TOP)
            if not options:
                feasible = False
                break
            primed_choices.append(options)
        if not feasible:
            continue
        for primed in product(*primed_choices):
            yield canonical_tuple(families, l, index, primed)


def level_color(oracle: ColoringOracle, sys: FamilySystem, t: CanonicalTuple) -> int:
    """Color of the derived coloring d_l on the tuple's entries."""
    return oracle.color(star(make_string(sys.r, t.l), t.entries))


def _substituted_color(
    oracle: ColoringOracle, sys: FamilySystem, t: CanonicalTuple, j: int, position: int
) -> int:
    """Color after trading family j's top for its member at the position."""
    family = sys.families[j]
    entries = tuple(
        family.members[position] if e == family.top else e for e in t.entries
    )
    return oracle.color(star(make_string(sys.r, t.l), entries))


@dataclass(frozen=True)
class LevelReport:
    level: int
    constant: bool
    color: int | None
    tuple_count: int
    counterexample: tuple | None  # (tuple_a, color_a, tuple_b, color_b)


@dataclass(frozen=True)
class HomogeneityReport:
    levels: tuple[LevelReport, ...]

    @property
    def all_constant(self) -> bool:
        return all(level.constant for level in self.levels)

    @property
    def colors(self) -> tuple[int, ...]:
        if not self.all_constant:
            raise ValueError("report is not constant at every level")
        return tuple(level.color for level in self.levels)


def check_levels(oracle: ColoringOracle, sys: FamilySystem) -> HomogeneityReport:
    """Exhaustively test each d_l for constancy across index-strictly-
    increasing l-canonical tuples; record the first counterexample pair."""
    if oracle.r != sys.r:
        raise ValueError(f"oracle has r={oracle.r}, system has r={sys.r}")
    reports = []
    for l in range(sys.r + 1):
        first: tuple[CanonicalTuple, int] | None = None
        counterexample = None
        count = 0
        for t in iter_canonical_tuples(sys.families, l, index_strict=True):
            count += 1
            c = level_color(oracle, sys, t)
            if first is None:
                first = (t, c)
            elif c != first[1] and counterexample is None:
                counterexample = (first[0], first[1], t, c)
        if count == 0:
            reports.append(
                LevelReport(level=l, constant=False, color=None, tuple_count=0, counterexample=None)
            )
        else:
            reports.append(
                LevelReport(
                    level=l,
                    constant=counterexample is None,
                    color=first[1] if counterexample is None else None,
                    tuple_count=count,
                    counterexample=counterexample,
                )
            )
    return HomogeneityReport(levels=tuple(reports))


def saturated(sys: FamilySystem, t: CanonicalTuple) -> CanonicalTuple:
    """Replace the primed and single entries by their family tops, keeping
    the unprimed entries of the paired blocks."""
    index = tuple(t.index[:t.l]) + (TOP,) * (sys.r - t.l)
    primed = (TOP,) * t.l
    return canonical_tuple(sys.families, t.l, index, primed)


def verify_saturation(oracle: ColoringOracle, sys: FamilySystem):
    """Check the saturation law on the whole system; None when it holds.

    Returns (level, tuple, color, saturated tuple, color) at the first
    index-strictly-increasing canonical tuple whose color differs from its
    TOP-saturated form.
    """
    for l in range(sys.r + 1):
        for t in iter_canonical_tuples(sys.families, l, index_strict=True):
            sat = saturated(sys, t)
            c_t = level_color(oracle, sys, t)
            c_sat = level_color(oracle, sys, sat)
            if c_t != c_sat:
                return (l, t, c_t, sat, c_sat)
    return None


@dataclass(frozen=True)
class ReplacementFailure:
    reason: str
    candidates_tried: int


def replacement_search(
    oracle: ColoringOracle,
    sys: FamilySystem,
    j: int,
    pools: Sequence[Sequence[Position]],
    lower: int,
) -> int | ReplacementFailure:
    """Least member position of family j that can stand in for its top.

    Candidates are positions strictly above both lower and every finite
    position in the family's own pool.  A candidate is accepted when, for
    every level l and every l-canonical tuple drawn from the pools that
    contains family j's top, trading the top for the candidate leaves the
    tuple's color unchanged.
    """
    if not 0 <= j < sys.r:
        raise ValueError(f"family index {j} out of range")
    for k, pool in enumerate(pools):
        if not any(is_top(p) for p in pool):
            raise ValueError(f"pool {k} must contain its family's top")
    finite_j = [p for p in pools[j] if not is_top(p)]
    floor = max([lower] + finite_j)
    constraints = [
        t
        for l in range(sys.r + 1)
        for t in iter_canonical_tuples(sys.families, l, pools=pools, containing_top_of=j)
    ]
    tried = 0
    for candidate in range(floor + 1, sys.member_count):
        tried += 1
        if all(
            level_color(oracle, sys, t) == _substituted_color(oracle, sys, t, j, candidate)
            for t in constraints
        ):
            return candidate
    return ReplacementFailure(
        reason=f"no position above {floor} in family {j} preserves all "
        f"{len(constraints)} tuple colors",
        candidates_tried=tried,
    )


@dataclass(frozen=True)
class PipelineRFailure:
    stage: str
    reason: str
    round: int | None = None
    family: int | None = None
    level: int | None = None


def shrink(oracle: ColoringOracle, sys: FamilySystem, target: int):
    """Round-robin re-pick of target members per family via replacement_search.

    Round k visits families 0..r-1 in order; each pick must exceed every
    position chosen so far in any family, so the per-family position
    sequences interleave globally.  The resulting system is exhaustively
    re-verified against the saturation law before being returned.
    """
    if target < 1 or target > sys.member_count:
        raise ValueError(f"cannot shrink to {target} members from {sys.member_count}")
    pools: list[list[Position]] = [[TOP] for _ in range(sys.r)]
    lower = -1
    for round_number in range(target):
        for family in range(sys.r):
            picked = replacement_search(oracle, sys, family, pools, lower)
            if isinstance(picked, ReplacementFailure):
                return PipelineRFailure(
                    stage="shrink",
                    reason=picked.reason,
                    round=round_number,
                    family=family,
                )
            finite = [p for p in pools[family] if not is_top(p)]
            pools[family] = sorted(finite + [picked]) + [TOP]
            lower = picked
    positions_by_family = [
        [p for p in pool if not is_top(p)] for pool in pools
    ]
    families = tuple(
        IndexFamily(
            members=tuple(f.members[p] for p in sorted(positions)),
            top=f.top,
        )
        for f, positions in zip(sys.families, positions_by_family)
    )
    shrunk = FamilySystem(families=families)
    violation = verify_saturation(oracle, shrunk)
    if violation is not None:
        level, t, c_t, sat, c_sat = violation
        raise RuntimeError(
            f"shrink output violates the saturation law at level {level}: "
            f"{t.render()} has color {c_t} but {sat.render()} has color {c_sat}"
        )
    return shrunk


def last_step(oracle: ColoringOracle, sys: FamilySystem, final_size: int):
    """Homogenize, level by level, the index coloring through saturated tuples.

    Level l colors a strictly increasing position vector (i_0 .. i_(l-1)) by
    the saturated tuple that pairs member i_k with the top in family k and
    sits at the top elsewhere.  Surviving position sets are nested: when a
    level is not already constant, a monochromatic subset of final_size
    positions is extracted by brute force.  Returns the trimmed system with
    rho attached, re-verified by check_levels.
    """
    if final_size < 1 or final_size > sys.member_count:
        raise ValueError(f"final size {final_size} out of range")
    r = sys.r
    positions = list(range(sys.member_count))
    rho: list[int] = []
    for l in range(r + 1):
        if l == 0:
            tops = tuple(f.top for f in sys.families)
            rho.append(oracle.color(star(make_string(r, 0), tops)))
            continue

        def saturated_color(index_vector: tuple[int, ...], l=l) -> int:
            entries = []
            for k, family in enumerate(sys.families):
                if k < l:
                    entries.extend((family.members[index_vector[k]], family.top))
                else:
                    entries.append(family.top)
            return oracle.color(star(make_string(r, l), tuple(entries)))

        g = TupleColoring(
            arity=l, colors=oracle.r, universe=sys.member_count, evaluate=saturated_color
        )
        seen = {g.color(t) for t in combinations(positions, l)}
        if len(seen) == 1:
            rho.append(seen.pop())
            continue
        found = brute_homogeneous(g, final_size, points=positions)
        if not isinstance(found, HomogeneousSet):
            return PipelineRFailure(
                stage="last_step",
                reason=f"no monochromatic position set of size {final_size} at level {l}",
                level=l,
            )
        positions = list(found.members)
        rho.append(found.color)
    trimmed = select_positions(sys, positions[:final_size], rho=tuple(rho))
    report = check_levels(oracle, trimmed)
    if not report.all_constant or report.colors != tuple(rho):
        raise RuntimeError("level homogenization did not survive re-verification")
    return trimmed


def make_witness_tuples(sys: FamilySystem, l_prime: int, l: int, count: int):
    """Witness frames for a coincidence rho[l_prime] == rho[l].

    a_i pairs member k with the top in families below l_prime, walks the
    stride l - l_prime through families l_prime..l-1 starting at offset i,
    and sits at the top from family l on.  b_(i,j) is the level-l frame
    whose paired middle blocks hold the i-th and j-th walk; the sum of the
    halved patterns on a_i and a_j lands exactly on b_(i,j).
    """
    r, m = sys.r, sys.member_count
    if not 0 <= l_prime < l <= r:
        raise ValueError(f"need 0 <= l' < l <= {r}, got l'={l_prime}, l={l}")
    if m < l:
        raise ValueError(f"need at least {l} members per family, got {m}")
    stride = l - l_prime
    max_count = (m - l) // stride + 1
    if count < 0 or count > max_count:
        raise ValueError(
            f"count {count} infeasible: positions k + i*{stride} must stay below {m} "
            f"(max {max_count})"
        )
    families = sys.families
    a_tuples = []
    for i in range(count):
        index = (
            tuple(range(l_prime))
            + tuple(k + i * stride for k in range(l_prime, l))
            + (TOP,) * (r - l)
        )
        primed = (TOP,) * l_prime
        a = canonical_tuple(families, l_prime, index, primed)
        ok, reason = is_l_canonical(a, families, l_prime)
        assert ok and is_index_strictly_increasing(a), reason
        a_tuples.append(a)
    b_tuples = {}
    for i in range(count):
        for j in range(i + 1, count):
            index = (
                tuple(range(l_prime))
                + tuple(k + i * stride for k in range(l_prime, l))
                + (TOP,) * (r - l)
            )
            primed = (TOP,) * l_prime + tuple(k + j * stride for k in range(l_prime, l))
            b = canonical_tuple(families, l, index, primed)
            ok, reason = is_l_canonical(b, families, l)
            assert ok and is_index_strictly_increasing(b), reason
            b_tuples[(i, j)] = b
    return a_tuples, b_tuples


@dataclass(frozen=True)
class PipelineRCertificate:
    families: FamilySystem
    rho_levels: tuple[int, ...]
    l_prime: int
    l: int
    witness: WitnessCertificate

    @property
    def color(self) -> int:
        return self.witness.color

    def to_payload(self) -> dict:
        return {
            "kind": "construct-r",
            "families": self.families.payload_families(),
            "rho_levels": list(self.rho_levels),
            "l_prime": self.l_prime,
            "l": self.l,
            "rho": self.witness.color,
            "X": [v.serialize() for v in self.witness.vectors],
            "sums": self.witness.sums_payload(),
        }


def pigeonhole_pair(rho: Sequence[int]) -> tuple[int, int]:
    """First (l', l) in lexicographic order with rho[l'] == rho[l]."""
    for l_prime in range(len(rho)):
        for l in range(l_prime + 1, len(rho)):
            if rho[l_prime] == rho[l]:
                return l_prime, l
    raise ValueError(f"no repeated value in {tuple(rho)}; not an r-coloring of r+1 levels?")


def witness_vectors(sys: FamilySystem, l_prime: int, l: int, count: int):
    """Halved level-l' vectors on the a-frames, with exact sum identities
    against the b-frames asserted for every pair."""
    a_tuples, b_tuples = make_witness_tuples(sys, l_prime, l, count)
    s_low = make_string(sys.r, l_prime)
    s_high = make_string(sys.r, l)
    xs = [star(s_low, a.entries).scale("1/2") for a in a_tuples]
    for i, x in enumerate(xs):
        assert x + x == star(s_low, a_tuples[i].entries)
        for j in range(i + 1, len(xs)):
            assert x + xs[j] == star(s_high, b_tuples[(i, j)].entries)
    return xs, a_tuples, b_tuples


def construct_r(
    oracle: ColoringOracle,
    r: int,
    n: int,
    m: int,
    count: int | None = None,
    shrink_size: int | None = None,
):
    """Full general pipeline: layout, level homogenization, witness family.

    A system already constant at every level is trimmed and used as is;
    otherwise shrink and last_step run.  Returns a PipelineRCertificate or
    a PipelineRFailure tagged with the failing stage.
    """
    if oracle.r != r:
        raise ValueError(f"oracle has r={oracle.r}, requested r={r}")
    if m < max(r, 1):
        raise ValueError(f"need m >= max(r, 1) so every level is inhabited, got m={m}")
    sys0 = system_from_universe(r, n)
    if sys0.member_count < m:
        return PipelineRFailure(
            stage="layout",
            reason=f"universe {n} only affords {sys0.member_count} members per family, need {m}",
        )
    report = check_levels(oracle, sys0)
    if report.all_constant:
        ready = trim_members(sys0, m, rho=report.colors)
    else:
        target = shrink_size if shrink_size is not None else sys0.member_count // r
        if target < m:
            return PipelineRFailure(
                stage="shrink",
                reason=f"initial member count {sys0.member_count} cannot interleave "
                f"{r} families down to {m} members each",
            )
        shrunk = shrink(oracle, sys0, target)
        if isinstance(shrunk, PipelineRFailure):
            return shrunk
        stepped = last_step(oracle, shrunk, m)
        if isinstance(stepped, PipelineRFailure):
            return stepped
        ready = stepped
    rho = ready.rho
    l_prime, l = pigeonhole_pair(rho)
    max_count = (m - l) // (l - l_prime) + 1
    chosen = max_count if count is None else count
    if not 1 <= chosen <= max_count:
        return PipelineRFailure(
            stage="witness",
            reason=f"count {chosen} infeasible for l'={l_prime}, l={l}, m={m} (max {max_count})",
        )
    xs, _, _ = witness_vectors(ready, l_prime, l, chosen)
    outcome = verify_witness(oracle, xs)
    if not isinstance(outcome, WitnessCertificate):
        raise RuntimeError(
            f"witness family failed re-verification after homogenization: {outcome.describe()}"
        )
    if outcome.color != rho[l]:
        raise RuntimeError(
            f"witness color {outcome.color} disagrees with the level constants {rho}"
        )
    return PipelineRCertificate(
        families=ready, rho_levels=rho, l_prime=l_prime, l=l, witness=outcome
    )
