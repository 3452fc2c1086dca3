import itertools
from collections import Counter

import pytest

from designramsey.enumeration import (
    all_completions,
    complete_design,
    complete_growing,
    count_completions,
    divisibility_admissible,
    enumerate_partial_designs,
    labeled_partial_designs,
    unlabeled_count,
)
from designramsey.errors import BudgetExceeded, InvalidDesign
from designramsey.morphisms import canonical_form
from designramsey.structures import PartialDesign, is_complete_design, make_params, validate

from corpus import FANO, P321, P322, P431, all_block_subsets, brute_isomorphic, labeled

# labelled / unlabelled partial (3,2,1)-designs on 0..6 points, from the
# unpruned block-subset filter and pairwise brute-force isomorphism
LABELED_321 = [1, 1, 1, 2, 5, 26, 271]
CLASSES_321 = [1, 1, 1, 2, 2, 3, 6]


def test_census_three_points():
    census = enumerate_partial_designs(P321, 3)
    assert census.unlabeled == 2
    assert [len(d.blocks) for d in census.structures] == [0, 1]


def test_census_four_points():
    # empty and one block; any two triples on 4 points share a pair
    census = enumerate_partial_designs(P321, 4)
    assert census.unlabeled == 2
    assert census.labeled == 5
    assert all(len(b1) - len(set(b1) & set(b2)) < 2
               for b1, b2 in itertools.combinations(itertools.combinations(range(4), 3), 2))


@pytest.mark.parametrize("n", range(7))
def test_census_matches_frozen_oracle(n):
    census = enumerate_partial_designs(P321, n)
    assert census.unlabeled == CLASSES_321[n]
    assert census.labeled == LABELED_321[n]
    assert len(labeled(P321, n)) == LABELED_321[n]


@pytest.mark.parametrize("params,n", [(P321, 5), (P322, 4), (P431, 5), (make_params(3, 3, 1), 5)])
def test_census_matches_naive_filter(params, n):
    raw = all_block_subsets(params, n)
    assert sorted(map(repr, raw)) == sorted(map(repr, labeled_partial_designs(params, n)))
    reps = []
    for d in raw:
        if not any(brute_isomorphic(d, r) for r in reps):
            reps.append(d)
    census = enumerate_partial_designs(params, n)
    assert census.unlabeled == len(reps)
    assert census.labeled == len(raw)


def test_census_soundness():
    census = enumerate_partial_designs(P321, 7)
    forms = [canonical_form(d) for d in census.structures]
    assert len(set(forms)) == len(forms)
    assert all(validate(d).ok for d in census.structures)
    # every class on 7 points restricts to a class on 6 points by deleting a vertex
    smaller = {canonical_form(d) for d in enumerate_partial_designs(P321, 6).structures}
    for d in census.structures:
        assert any(canonical_form(d.induced([v for v in range(7) if v != x])) in smaller for x in range(7))


def test_census_complete_only_sts7():
    census = enumerate_partial_designs(P321, 7, complete_only=True)
    assert census.unlabeled == 1
    assert census.labeled == 30


def test_census_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_partial_designs(P321, 7, budget=20)


# -- completion --------------------------------------------------------------


def test_complete_fano_is_itself():
    assert complete_design(FANO) == FANO
    assert count_completions(FANO) == 1


def test_complete_two_blocks_on_seven():
    partial = PartialDesign.build(P321, 7, [(0, 1, 2), (0, 3, 4)])
    done = complete_design(partial)
    assert done is not None
    assert is_complete_design(done) and partial.blocks <= done.blocks


def test_small_partial_sts7_extends_iff_blocks_meet():
    # lines of the Fano plane pairwise intersect, so two disjoint triples never extend
    for d in labeled(P321, 7):
        if len(d.blocks) > 2:
            continue
        done = complete_design(d)
        meet = len(d.blocks) < 2 or bool(set.intersection(*map(set, d.blocks)))
        assert (done is not None) == meet
        if done is not None:
            assert d.blocks <= done.blocks and is_complete_design(done)


def test_nothing_completes_on_six_points():
    assert not divisibility_admissible(P321, 6)
    for d in enumerate_partial_designs(P321, 6).structures:
        assert complete_design(d) is None
        assert count_completions(d) == 0


def test_count_sts7():
    sols = all_completions(PartialDesign(P321, 7))
    assert len(sols) == 30
    assert unlabeled_count(sols) == 1
    assert len(set(sols)) == 30
    oracle = [d for d in labeled(P321, 7) if len(d.blocks) == 7]
    assert set(sols) == set(oracle)


def test_count_lambda_two():
    # (3,2,2) on 4 points: all four triples are needed
    assert count_completions(PartialDesign(P322, 4)) == 1
    # (3,2,2) on 6 points: compare with brute force over 10-block subsets of the 20 triples
    triples = list(itertools.combinations(range(6), 3))
    oracle = 0
    for blocks in itertools.combinations(triples, 10):
        cover = Counter(ts for b in blocks for ts in itertools.combinations(b, 2))
        if len(cover) == 15 and set(cover.values()) == {2}:
            oracle += 1
    assert count_completions(PartialDesign(P322, 6)) == oracle


def test_completion_rejects_invalid():
    with pytest.raises(InvalidDesign):
        complete_design(PartialDesign.build(P321, 4, [(0, 1, 2), (0, 1, 3)]))


def test_completion_budget():
    with pytest.raises(BudgetExceeded):
        count_completions(PartialDesign(P321, 9), budget=50)


def test_complete_growing_adds_points():
    partial = PartialDesign.build(P321, 5, [(0, 1, 2), (0, 3, 4)])
    done = complete_growing(partial, 9)
    assert done.n == 7 and is_complete_design(done)
    assert complete_growing(partial, 6) is None


def test_admissibility_override():
    assert complete_design(FANO, admissible=lambda p, n: False) is None


@pytest.mark.parametrize(
    "k,t,lam,n,expected",
    [(3, 2, 1, 7, True), (3, 2, 1, 6, False), (3, 2, 1, 1, True), (3, 2, 1, 9, True),
     (3, 2, 1, 13, True), (3, 2, 1, 11, False), (4, 2, 1, 13, True), (4, 2, 1, 16, True),
     (4, 2, 1, 10, False), (4, 3, 1, 8, True), (4, 3, 1, 10, True), (4, 3, 1, 9, False),
     (3, 2, 2, 6, True)],
)
def test_divisibility(k, t, lam, n, expected):
    assert divisibility_admissible(make_params(k, t, lam), n) is expected


def test_completion_divisibility_consistency():
    for params, top in ((P321, 8), (P322, 7), (P431, 8)):
        for n in range(params.t, top + 1):
            if not divisibility_admissible(params, n):
                assert count_completions(PartialDesign(params, n)) == 0


@pytest.mark.slow
def test_count_sts9():
    assert count_completions(PartialDesign(P321, 9)) == 840
