"""Homogeneous-set searches: brute scan, end-agreement greedy, multi-level."""

import random
from itertools import combinations

import pytest

from sumsetlab.oracle import FourCountOracle
from sumsetlab.pipeline2 import derived_tuple_colorings
from sumsetlab.ramsey import (
    HomogeneousSet,
    NoHomogeneousSet,
    TupleColoring,
    brute_homogeneous,
    greedy_end_homogeneous,
    multi_homogeneous,
    verify_homogeneous,
)


def constant_coloring(arity, universe, value=0, colors=2):
    return TupleColoring(arity, colors, universe, lambda t: value)


def pentagon_coloring():
    """2-coloring of pairs from [5] with no monochromatic triangle.

    Color 0 on the five cycle edges |i-j| in {1,4}; both the cycle and its
    complement are triangle-free, which is the R(3,3) > 5 witness.
    """
    return TupleColoring(2, 2, 5, lambda t: 0 if (t[1] - t[0]) in (1, 4) else 1)


def test_tuple_coloring_validates_inputs():
    f = constant_coloring(2, 6)
    assert f.color((0, 5)) == 0
    with pytest.raises(ValueError):
        f.color((0, 1, 2))
    with pytest.raises(ValueError):
        f.color((3, 3))
    with pytest.raises(RuntimeError):
        TupleColoring(1, 2, 4, lambda t: 9).color((0,))


def test_brute_constant_returns_initial_segment():
    found = brute_homogeneous(constant_coloring(2, 8), 4)
    assert isinstance(found, HomogeneousSet)
    assert found.members == (0, 1, 2, 3)
    assert found.top is None
    assert found.color == 0


def test_brute_is_lexicographically_least():
    # Color (0,1) differently so every triple containing both is mixed.
    f = TupleColoring(2, 2, 6, lambda t: 1 if t == (0, 1) else 0)
    found = brute_homogeneous(f, 3)
    assert found.members == (0, 2, 3)


def test_brute_pentagon_has_no_triangle():
    outcome = brute_homogeneous(pentagon_coloring(), 3)
    assert isinstance(outcome, NoHomogeneousSet)
    assert outcome.exhaustive
    # Independent confirmation: every one of the 10 triples is mixed.
    f = pentagon_coloring()
    for triple in combinations(range(5), 3):
        colors = {f.color(p) for p in combinations(triple, 2)}
        assert len(colors) == 2


def test_brute_below_arity_is_rejected():
    with pytest.raises(ValueError):
        brute_homogeneous(constant_coloring(3, 8), 2)


def test_brute_budget_zero_is_not_exhaustive():
    outcome = brute_homogeneous(pentagon_coloring(), 3, budget=0)
    assert isinstance(outcome, NoHomogeneousSet)
    assert not outcome.exhaustive


def test_six_point_pair_colorings_always_have_triangles_sampled():
    rng = random.Random(20260815)
    for _ in range(300):
        bits = rng.getrandbits(15)
        table = {
            pair: (bits >> k) & 1 for k, pair in enumerate(combinations(range(6), 2))
        }
        f = TupleColoring(2, 2, 6, lambda t, table=table: table[t])
        found = brute_homogeneous(f, 3)
        assert isinstance(found, HomogeneousSet)
        assert verify_homogeneous([f], found.members) is None


def test_greedy_constant_takes_least_members_and_first_top():
    found = greedy_end_homogeneous(constant_coloring(2, 10), 3)
    assert isinstance(found, HomogeneousSet)
    assert found.members == (0, 1, 2)
    assert found.top == 9
    assert verify_homogeneous([constant_coloring(2, 10)], found.members, found.top) is None


def test_greedy_needs_arity_at_least_two():
    with pytest.raises(ValueError):
        greedy_end_homogeneous(constant_coloring(1, 6), 2)


def test_greedy_parity_coloring_set_is_fully_constant():
    f = TupleColoring(2, 2, 12, lambda t: (t[0] + t[1]) % 2)
    found = greedy_end_homogeneous(f, 3)
    assert isinstance(found, HomogeneousSet)
    assert verify_homogeneous([f], found.members, found.top) is None
    # End-replacement law: dropping the last slot onto the top fixes colors.
    for pair in combinations(found.members, 2):
        assert f.color(pair) == f.color((pair[0], found.top))


def test_greedy_end_replacement_law_holds_at_arity_three():
    f = TupleColoring(3, 2, 10, lambda t: (t[0] + t[1] + t[2]) % 2)
    found = greedy_end_homogeneous(f, 4)
    assert isinstance(found, HomogeneousSet)
    for tup in combinations(found.members, 3):
        assert f.color(tup) == f.color(tup[:2] + (found.top,))


def test_greedy_adversarial_last_slot_color_reports_diagnostics():
    # The only viable top is 4 (others have too few points below), and the
    # color of any tuple ending at 4 is one the coloring never takes below,
    # so no third chain point can ever agree.
    f = TupleColoring(3, 2, 5, lambda t: 1 if t[2] == 4 else 0)
    outcome = greedy_end_homogeneous(f, 4)
    assert isinstance(outcome, NoHomogeneousSet)
    assert outcome.exhaustive
    assert outcome.top == 4
    assert len(outcome.deepest) == 2
    assert outcome.constraints and all(color == 1 for _, color in outcome.constraints)


def test_greedy_pentagon_notfound_is_exhaustive():
    outcome = greedy_end_homogeneous(pentagon_coloring(), 3)
    assert isinstance(outcome, NoHomogeneousSet)
    assert outcome.exhaustive


def test_multi_all_constant_takes_first_indices():
    fs = [constant_coloring(2, 9), constant_coloring(3, 9, value=1)]
    found = multi_homogeneous(fs, 4)
    assert isinstance(found, HomogeneousSet)
    assert found.members == (0, 1, 2, 3)
    assert found.top == 8
    assert found.colors == (0, 1)


def test_multi_four_count_derived_colorings():
    fs = derived_tuple_colorings(FourCountOracle(2), 12)
    assert [f.arity for f in fs] == [2, 3, 4]
    found = multi_homogeneous(fs, 5)
    assert isinstance(found, HomogeneousSet)
    assert len(found.members) == 5
    assert found.colors == (0, 1, 0)
    assert verify_homogeneous(fs, found.members, found.top) is None


def test_multi_unsatisfiable_reports_first_level_and_is_exhaustive():
    fs = [pentagon_coloring(), constant_coloring(3, 5)]
    outcome = multi_homogeneous(fs, 3)
    assert isinstance(outcome, NoHomogeneousSet)
    assert outcome.exhaustive
    assert outcome.level == 0


def test_multi_requires_shared_universe():
    with pytest.raises(ValueError):
        multi_homogeneous([constant_coloring(2, 5), constant_coloring(2, 6)], 2)
    with pytest.raises(ValueError):
        multi_homogeneous([], 2)


def test_verifier_reports_disagreements_with_both_tuples():
    f = TupleColoring(2, 2, 4, lambda t: 1 if t == (0, 1) else 0)
    report = verify_homogeneous([f], (0, 1, 2))
    assert report is not None
    position, t1, c1, t2, c2 = report
    assert position == 0
    assert {c1, c2} == {0, 1}
    assert f.color(t1) == c1 and f.color(t2) == c2


def test_verifier_accepts_with_top_included():
    f = constant_coloring(2, 6)
    assert verify_homogeneous([f], (0, 1), top=5) is None
