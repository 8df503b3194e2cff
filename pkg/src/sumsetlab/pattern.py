"""Pattern strings, the star substitution, and canonical index tuples.

The combinatorial core works with strings over {2, 4}: for 0 <= l <= r the
string s_l has length r + l and consists of 2l twos followed by r - l fours.
Placing a string on an increasing set of coordinate indices (the star
operation) produces a QVec, and these vectors are exactly the shapes taken
by doubles and pairwise sums of the witness vectors built downstream.

Index families model r disjoint blocks of coordinates, each with finitely
many members plus one distinguished top.  Positions inside a family are
either naturals (members, in increasing order) or the symbol TOP.  TOP
compares strictly greater than every natural, which is what the
canonicality conditions below rely on.

A canonical tuple of level l draws an ordered pair from each of the first l
families and a single element from each remaining family.  Writing i_k for
the unprimed position in family k and i_k' for the primed one (k < l), the
tuple is l-canonical when i_k < i_k' <= TOP and every i_k' exceeds the
maximum finite unprimed position of the whole tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .qvec import QVec, RationalLike


class _TopType:
    """Distinguished position symbol, strictly above every natural."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TOP"

    def __lt__(self, other):
        if isinstance(other, (int, _TopType)):
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, _TopType):
            return True
        if isinstance(other, int):
            return False
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, _TopType):
            return False
        if isinstance(other, int):
            return True
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (int, _TopType)):
            return True
        return NotImplemented


TOP = _TopType()

Position = Union[int, _TopType]


def is_top(position: Position) -> bool:
    return isinstance(position, _TopType)


def position_sort_key(position: Position) -> tuple[int, int]:
    return (1, 0) if is_top(position) else (0, position)


@dataclass(frozen=True)
class PatternString:
    """String of nonzero values used by the star operation; s_l = 2^(2l) 4^(r-l)."""

    r: int
    l: int
    values: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, k: int) -> int:
        return self.values[k]


def make_string(r: int, l: int) -> PatternString:
    """Build s_l for the given r: 2l twos followed by r - l fours."""
    if not isinstance(r, int) or r < 1:
        raise ValueError(f"r must be a positive integer, got {r!r}")
    if not isinstance(l, int) or l < 0 or l > r:
        raise ValueError(f"l must lie in [0, {r}], got {l!r}")
    return PatternString(r=r, l=l, values=(2,) * (2 * l) + (4,) * (r - l))


def star(values: Union[PatternString, Sequence[RationalLike]], indices: Iterable[int]) -> QVec:
    """Place values on an index set: the k-th smallest index carries values[k].

    The index set must consist of pairwise distinct naturals and match the
    string in length; all values must be nonzero.
    """
    vals = tuple(values)
    idx = tuple(indices)
    if len(idx) != len(set(idx)):
        raise ValueError(f"indices must be pairwise distinct, got {idx!r}")
    if len(vals) != len(idx):
        raise ValueError(f"length mismatch: {len(vals)} values vs {len(idx)} indices")
    for v in vals:
        if Fraction(v) == 0:
            raise ValueError("star values must be nonzero")
    return QVec(zip(sorted(idx), vals))


@dataclass(frozen=True)
class IndexFamily:
    """Finitely many member indices in increasing order plus one top above them."""

    members: tuple[int, ...]
    top: int

    def __post_init__(self):
        if list(self.members) != sorted(set(self.members)):
            raise ValueError(f"members must be strictly increasing, got {self.members!r}")
        if self.members and self.top <= self.members[-1]:
            raise ValueError(f"top {self.top} must exceed every member")

    @property
    def size(self) -> int:
        return len(self.members)

    def index_at(self, position: Position) -> int:
        if is_top(position):
            return self.top
        return self.members[position]

    def position_of(self, index: int) -> Position:
        if index == self.top:
            return TOP
        try:
            return self.members.index(index)
        except ValueError:
            raise ValueError(f"index {index} not in family") from None

    def __contains__(self, index: int) -> bool:
        return index == self.top or index in self.members

    def all_indices(self) -> tuple[int, ...]:
        return self.members + (self.top,)

    def low(self) -> int:
        return self.members[0] if self.members else self.top

    def high(self) -> int:
        return self.top


def families_are_laid_out(families: Sequence[IndexFamily]) -> bool:
    """True iff the families occupy pairwise disjoint, increasing index ranges."""
    for previous, current in zip(families, families[1:]):
        if previous.high() >= current.low():
            return False
    return True


@dataclass(frozen=True)
class CanonicalTuple:
    """Level-l tuple: a pair from each of the first l families, singles after.

    ``index`` holds the unprimed positions (one per family), ``primed`` the
    primed positions of the paired blocks, and ``blocks`` the resolved
    coordinate indices, one tuple per family in family order.
    """

    l: int
    index: tuple[Position, ...]
    primed: tuple[Position, ...]
    blocks: tuple[tuple[int, ...], ...]

    @property
    def r(self) -> int:
        return len(self.index)

    @property
    def entries(self) -> tuple[int, ...]:
        flat: list[int] = []
        for block in self.blocks:
            flat.extend(block)
        return tuple(flat)

    def render(self) -> str:
        parts = []
        for k, block in enumerate(self.blocks):
            if k < self.l:
                parts.append(f"{self.index[k]!r},{self.primed[k]!r}")
            else:
                parts.append(f"{self.index[k]!r}")
        return "(" + " | ".join(parts) + ")"


def canonical_tuple(
    families: Sequence[IndexFamily],
    l: int,
    index: Sequence[Position],
    primed: Sequence[Position] = (),
) -> CanonicalTuple:
    """Resolve positions against the families and build the tuple.

    Validates shape only (positions exist, paired blocks are ordered);
    canonicality proper is the job of is_l_canonical.
    """
    r = len(families)
    index = tuple(index)
    primed = tuple(primed)
    if not 0 <= l <= r:
        raise ValueError(f"level {l} out of range for {r} families")
    if len(index) != r:
        raise ValueError(f"index vector must have length {r}, got {len(index)}")
    if len(primed) != l:
        raise ValueError(f"primed vector must have length {l}, got {len(primed)}")
    blocks = []
    for k, family in enumerate(families):
        if k < l:
            a, b = index[k], primed[k]
            if not a < b:
                raise ValueError(f"block {k}: positions must satisfy {a!r} < {b!r}")
            blocks.append((family.index_at(a), family.index_at(b)))
        else:
            blocks.append((family.index_at(index[k]),))
    return CanonicalTuple(l=l, index=index, primed=primed, blocks=tuple(blocks))


def is_index_strictly_increasing(t: Union[CanonicalTuple, Sequence[Position]]) -> bool:
    """Nondecreasing index vector, strictly increasing at finite entries.

    TOP may repeat at the tail, but a finite entry must be strictly below
    everything after it.
    """
    index = t.index if isinstance(t, CanonicalTuple) else tuple(t)
    for k in range(len(index)):
        for k2 in range(k + 1, len(index)):
            if not index[k] <= index[k2]:
                return False
            if not is_top(index[k]) and not index[k] < index[k2]:
                return False
    return True


def is_l_canonical(
    t: CanonicalTuple, families: Sequence[IndexFamily], l: int
) -> tuple[bool, str]:
    """Check l-canonicality against the families; returns (ok, reason)."""
    r = len(families)
    if not families_are_laid_out(families):
        return False, "families do not occupy disjoint increasing ranges"
    if t.l != l:
        return False, f"tuple has level {t.l}, expected {l}"
    if len(t.blocks) != r:
        return False, f"tuple has {len(t.blocks)} blocks, expected {r}"
    for k, block in enumerate(t.blocks):
        expected = 2 if k < l else 1
        if len(block) != expected:
            return False, f"block {k} has {len(block)} entries, expected {expected}"
        for entry in block:
            if entry not in families[k]:
                return False, f"entry {entry} not in family {k}"
    # Re-derive positions from the entries so mutated tuples cannot lie.
    index = []
    primed = []
    for k, block in enumerate(t.blocks):
        if k < l:
            a, b = (families[k].position_of(e) for e in block)
            index.append(a)
            primed.append(b)
        else:
            index.append(families[k].position_of(block[0]))
    for k in range(l):
        if not index[k] < primed[k]:
            return False, f"block {k}: need i_{k} < i_{k}', got {index[k]!r}, {primed[k]!r}"
    finite = [p for p in index if not is_top(p)]
    if finite:
        bound = max(finite)
        for k in range(l):
            if not primed[k] > bound:
                return (
                    False,
                    f"primed position {primed[k]!r} in block {k} does not exceed "
                    f"max finite unprimed position {bound}",
                )
    return True, "ok"


def _substitute_plain(entries: Sequence[int], frm: Sequence[int], to: Sequence[int]) -> tuple[int, ...]:
    if len(frm) != len(to):
        raise ValueError("replacement lists must have equal length")
    mapping = dict(zip(frm, to))
    for old in frm:
        if old not in entries:
            raise ValueError(f"entry {old} does not occur in the tuple")
    replaced = [mapping.get(e, e) for e in entries]
    if len(set(replaced)) != len(replaced):
        raise ValueError(f"substitution collapses entries: {replaced!r}")
    return tuple(sorted(replaced))


def substitute(
    t: Union[CanonicalTuple, Sequence[int]],
    frm: Sequence[int],
    to: Sequence[int],
    families: Sequence[IndexFamily] | None = None,
):
    """Simultaneously replace coordinate indices, re-sorting the result.

    Plain index tuples come back as sorted tuples.  Canonical tuples keep
    their block structure: each replacement must stay inside the block's own
    family (pass the families so positions can be recomputed).
    """
    if not isinstance(t, CanonicalTuple):
        return _substitute_plain(tuple(t), frm, to)
    if families is None:
        raise ValueError("substituting in a canonical tuple requires the families")
    if len(frm) != len(to):
        raise ValueError("replacement lists must have equal length")
    mapping = dict(zip(frm, to))
    for old in frm:
        if old not in t.entries:
            raise ValueError(f"entry {old} does not occur in the tuple")
    new_blocks = []
    new_index: list[Position] = []
    new_primed: list[Position] = []
    for k, block in enumerate(t.blocks):
        family = families[k]
        replaced = tuple(sorted(mapping.get(e, e) for e in block))
        if len(set(replaced)) != len(replaced):
            raise ValueError(f"substitution collapses block {k}: {replaced!r}")
        for entry in replaced:
            if entry not in family:
                raise ValueError(f"replacement {entry} leaves family {k}")
        new_blocks.append(replaced)
        if k < t.l:
            new_index.append(family.position_of(replaced[0]))
            new_primed.append(family.position_of(replaced[1]))
        else:
            new_index.append(family.position_of(replaced[0]))
    return CanonicalTuple(
        l=t.l, index=tuple(new_index), primed=tuple(new_primed), blocks=tuple(new_blocks)
    )
