"""Finite coherence checkers for support assignments, and their generator.

A SupportAssignment maps every subset u of a finite index set E with
|u| <= d to a finite support W(u) containing u.  Two combinatorial laws
make such an assignment coherent:

  CL3: W(u) and W(v) intersect exactly in W(u & v), for all u, v;
  CL4: whenever (u2, u1, <) and (u2', u1', <) are isomorphic as ordered
       pairs-of-sets, the order isomorphism of W(u2) onto W(u2') restricts
       on W(u1) to the order isomorphism of W(u1) onto W(u1'); moreover
       the order isomorphism of W(u) onto W(v) carries u to v.

check_cl4 treats CL3 together with type uniformity (|u| = |v| implies
|W(u)| = |W(v)|) as preconditions and reports their failures separately
from genuine restriction-law violations.

generate_canonical builds coherent instances: W(u) is u plus one block of
fresh points per subset w of u, where blocks are consecutive integer runs
above max(E), allocated in a slot order keyed by (rank of max(w), |w|,
colex rank of w) with the empty set first.  The key compares subsets of a
common u the same way it compares their images under any order isomorphism
of u, which is exactly what CL4 needs; blocks never collide, so CL3 holds
by construction.  Both checkers re-verify every generated instance in
tests rather than trusting the argument above.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .qvec import QVec


@dataclass(frozen=True)
class OrderIso:
    """The unique order-preserving bijection between two equal-size index
    sets, realized by matching ranks."""

    source: tuple[int, ...]
    target: tuple[int, ...]

    def __post_init__(self):
        for name, side in (("source", self.source), ("target", self.target)):
            if any(a >= b for a, b in zip(side, side[1:])):
                raise ValueError(f"{name} must be strictly increasing, got {side}")
        if len(self.source) != len(self.target):
            raise ValueError(
                f"size mismatch: |source|={len(self.source)}, |target|={len(self.target)}"
            )

    def __call__(self, index: int) -> int:
        try:
            return self.target[self.source.index(index)]
        except ValueError:
            raise ValueError(f"{index} is not in the source {self.source}") from None

    def inverse(self) -> "OrderIso":
        return OrderIso(source=self.target, target=self.source)

    def map_set(self, indices: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted(self(i) for i in indices))

    def then(self, other: "OrderIso") -> "OrderIso":
        """Composition: first self, then other."""
        if not set(self.target) <= set(other.source):
            raise ValueError("composition undefined: target escapes the next source")
        return OrderIso(source=self.source, target=tuple(other(x) for x in self.target))


def order_iso(source: Iterable[int], target: Iterable[int]) -> OrderIso:
    return OrderIso(source=tuple(sorted(source)), target=tuple(sorted(target)))


def relabel(v: QVec, h: OrderIso) -> QVec:
    """Push a vector along an order isomorphism: result(h(i)) = v(i)."""
    missing = [i for i in v.support if i not in h.source]
    if missing:
        raise ValueError(f"support escapes the source at {missing}")
    return QVec({h(i): v.value(i) for i in v.support})


def _as_subset(u: Iterable[int]) -> frozenset[int]:
    return frozenset(u)


def _sorted_subset(u: frozenset[int]) -> tuple[int, ...]:
    return tuple(sorted(u))


@dataclass(frozen=True)
class SupportAssignment:
    """W: [E]^(<= d) -> finite index sets with u <= W(u), full domain."""

    E: tuple[int, ...]
    d: int
    W: Mapping[frozenset[int], tuple[int, ...]]

    def __post_init__(self):
        if any(a >= b for a, b in zip(self.E, self.E[1:])):
            raise ValueError(f"E must be strictly increasing, got {self.E}")
        if self.d < 0:
            raise ValueError("dimension must be nonnegative")
        table = {_as_subset(u): tuple(sorted(support)) for u, support in self.W.items()}
        expected = set(self.domain_subsets(self.E, self.d))
        if set(table) != expected:
            missing = sorted(map(_sorted_subset, expected - set(table)))
            extra = sorted(map(_sorted_subset, set(table) - expected))
            raise ValueError(f"domain mismatch: missing {missing}, extra {extra}")
        for u, support in table.items():
            if len(set(support)) != len(support):
                raise ValueError(f"support of {_sorted_subset(u)} repeats a point")
            if not u <= set(support):
                raise ValueError(
                    f"{_sorted_subset(u)} escapes its own support {support}"
                )
        object.__setattr__(self, "W", table)

    @staticmethod
    def domain_subsets(E: Sequence[int], d: int) -> list[frozenset[int]]:
        return [
            frozenset(c) for size in range(min(d, len(E)) + 1) for c in combinations(E, size)
        ]

    def domain(self) -> list[tuple[int, ...]]:
        return sorted((_sorted_subset(u) for u in self.W), key=lambda t: (len(t), t))

    def support_of(self, u: Iterable[int]) -> tuple[int, ...]:
        key = _as_subset(u)
        if key not in self.W:
            raise KeyError(f"{tuple(sorted(key))} is outside the domain")
        return self.W[key]

    def with_support(self, u: Iterable[int], support: Iterable[int]) -> "SupportAssignment":
        """A copy with one support replaced; handy for mutation tests."""
        table = dict(self.W)
        table[_as_subset(u)] = tuple(sorted(support))
        return SupportAssignment(E=self.E, d=self.d, W=table)

    def to_payload(self) -> dict:
        return {
            "E": list(self.E),
            "d": self.d,
            "W": [
                {"u": list(u), "support": list(self.W[frozenset(u)])}
                for u in self.domain()
            ],
        }

    @classmethod
    def from_payload(cls, payload: Mapping) -> "SupportAssignment":
        table = {
            frozenset(entry["u"]): tuple(entry["support"]) for entry in payload["W"]
        }
        return cls(E=tuple(payload["E"]), d=int(payload["d"]), W=table)

    def dumps(self) -> str:
        return json.dumps(self.to_payload(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def loads(cls, text: str) -> "SupportAssignment":
        return cls.from_payload(json.loads(text))


@dataclass(frozen=True)
class CheckReport:
    law: str
    violations: tuple[str, ...]
    precondition_failures: tuple[str, ...] = ()
    checks: int = 0

    @property
    def clean(self) -> bool:
        return not self.violations and not self.precondition_failures

    def describe(self) -> str:
        if self.clean:
            return f"{self.law}: clean ({self.checks} checks)"
        lines = [
            f"{self.law}: {len(self.violations)} violations, "
            f"{len(self.precondition_failures)} precondition failures"
        ]
        lines += [f"  precondition: {p}" for p in self.precondition_failures]
        lines += [f"  {v}" for v in self.violations]
        return "\n".join(lines)


def check_cl3(assignment: SupportAssignment) -> CheckReport:
    """Intersection law over every unordered pair of domain sets."""
    violations = []
    checks = 0
    subsets = sorted(assignment.W, key=lambda u: (len(u), sorted(u)))
    for u, v in combinations_with_replacement(subsets, 2):
        checks += 1
        meet = tuple(sorted(set(assignment.W[u]) & set(assignment.W[v])))
        expected = assignment.W[u & v]
        if meet != expected:
            violations.append(
                f"W({_sorted_subset(u)}) & W({_sorted_subset(v)}) = {meet}, "
                f"but W({_sorted_subset(u & v)}) = {expected}"
            )
    return CheckReport(law="CL3", violations=tuple(violations), checks=checks)


def _isomorphic_nested_pairs(assignment: SupportAssignment):
    """All (u1, u2, u1', u2') with u1 inside u2, u1' inside u2', and the
    order isomorphism of u2 onto u2' carrying u1 onto u1'."""
    by_size: dict[int, list[frozenset[int]]] = {}
    for u in assignment.W:
        by_size.setdefault(len(u), []).append(u)
    for size, sets in sorted(by_size.items()):
        ordered = sorted(sets, key=_sorted_subset)
        for u2 in ordered:
            big = _sorted_subset(u2)
            for u2p in ordered:
                bigp = _sorted_subset(u2p)
                for positions_size in range(size + 1):
                    for positions in combinations(range(size), positions_size):
                        u1 = frozenset(big[p] for p in positions)
                        u1p = frozenset(bigp[p] for p in positions)
                        yield u1, u2, u1p, u2p


def check_cl4(assignment: SupportAssignment) -> CheckReport:
    """Restriction law plus h(u) = v, with CL3 and type uniformity as
    separately reported preconditions."""
    preconditions = []
    cl3 = check_cl3(assignment)
    if not cl3.clean:
        preconditions.append(f"CL3 fails first: {len(cl3.violations)} violations")
    sizes_by_type: dict[int, dict[int, list]] = {}
    for u, support in assignment.W.items():
        sizes_by_type.setdefault(len(u), {}).setdefault(len(support), []).append(u)
    for size, groups in sorted(sizes_by_type.items()):
        if len(groups) > 1:
            detail = ", ".join(
                f"|W|={w} for {sorted(map(_sorted_subset, us))}" for w, us in sorted(groups.items())
            )
            preconditions.append(f"type uniformity fails at |u|={size}: {detail}")
    if preconditions:
        return CheckReport(
            law="CL4", violations=(), precondition_failures=tuple(preconditions), checks=0
        )

    violations = []
    checks = 0
    by_size: dict[int, list[frozenset[int]]] = {}
    for u in assignment.W:
        by_size.setdefault(len(u), []).append(u)
    for size, sets in sorted(by_size.items()):
        ordered = sorted(sets, key=_sorted_subset)
        for u in ordered:
            for v in ordered:
                checks += 1
                h = order_iso(assignment.W[u], assignment.W[v])
                image = h.map_set(u)
                if image != _sorted_subset(v):
                    violations.append(
                        f"h(W({_sorted_subset(u)}), W({_sorted_subset(v)})) sends "
                        f"{_sorted_subset(u)} to {image}, not {_sorted_subset(v)}"
                    )
    for u1, u2, u1p, u2p in _isomorphic_nested_pairs(assignment):
        checks += 1
        outer = order_iso(assignment.W[u2], assignment.W[u2p])
        inner = order_iso(assignment.W[u1], assignment.W[u1p])
        restricted = {i: outer(i) for i in assignment.W[u1]}
        law = {i: inner(i) for i in assignment.W[u1]}
        if restricted != law:
            where = sorted(i for i in restricted if restricted[i] != law[i])
            violations.append(
                f"restriction of h(W({_sorted_subset(u2)}), W({_sorted_subset(u2p)})) "
                f"to W({_sorted_subset(u1)}) disagrees with "
                f"h(W({_sorted_subset(u1)}), W({_sorted_subset(u1p)})) at {where}"
            )
    return CheckReport(law="CL4", violations=tuple(violations), checks=checks)


class UniverseExhausted(ValueError):
    """Raised when fresh points would spill past the declared universe."""


def _slot_key(E: Sequence[int], w: frozenset[int]):
    """Allocation order of kernel blocks.

    Compares subsets of any common u the same way it compares their images
    under an order isomorphism of u: by rank of the maximum (empty set
    first), then size, then colex on ranks.
    """
    if not w:
        return (-1, 0, ())
    ranks = sorted(E.index(x) for x in w)
    return (ranks[-1], len(w), tuple(reversed(ranks)))


def generate_canonical(
    E: Iterable[int],
    d: int,
    pad: Mapping[int, int] | Sequence[int],
    universe: int | None = None,
) -> SupportAssignment:
    """Coherent assignment with pad(|w|) fresh points per subset w.

    Fresh points are consecutive integers above max(E), one block per
    domain subset in slot order; W(u) is u together with the blocks of all
    subsets of u.  Raises UniverseExhausted when a block would reach the
    declared universe bound.
    """
    elements = tuple(sorted(E))
    if len(set(elements)) != len(elements):
        raise ValueError("E repeats an element")
    if isinstance(pad, Mapping):
        pad_counts = {int(s): int(c) for s, c in pad.items()}
    else:
        pad_counts = {s: int(c) for s, c in enumerate(pad)}
    if any(c < 0 for c in pad_counts.values()):
        raise ValueError("pad counts must be nonnegative")
    subsets = SupportAssignment.domain_subsets(elements, d)
    kernels: dict[frozenset[int], tuple[int, ...]] = {}
    cursor = (max(elements) + 1) if elements else 0
    for w in sorted(subsets, key=lambda w: _slot_key(elements, w)):
        count = pad_counts.get(len(w), 0)
        block = tuple(range(cursor, cursor + count))
        if universe is not None and cursor + count > universe:
            raise UniverseExhausted(
                f"kernel of {_sorted_subset(w)} needs points {block} beyond universe {universe}"
            )
        kernels[w] = block
        cursor += count
    table = {}
    for u in subsets:
        fresh = [point for w in subsets if w <= u for point in kernels[w]]
        table[u] = tuple(sorted(set(u) | set(fresh)))
    return SupportAssignment(E=elements, d=d, W=table)
