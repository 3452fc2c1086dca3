import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from designramsey.enumeration import enumerate_partial_designs
from designramsey.errors import SizeLimit
from designramsey.morphisms import (
    automorphism_count,
    canonical_digest,
    canonical_form,
    canonical_labeling,
    check_embedding,
    closure_of,
    embedding_violations,
    embeddings,
    enumerate_copies,
    equivalence_iii_iii_prime,
    find_isomorphism_brute,
    induced,
    is_closed,
    is_closed_by_blocks,
)
from designramsey.structures import OrderedDesign, PartialDesign, encode

from corpus import (
    FANO,
    ONE_BLOCK,
    P321,
    P322,
    TWO_POINTS,
    brute_automorphisms,
    brute_isomorphic,
    labeled,
    naive_closure,
    subsets,
)


def reps_up_to(params, n):
    out = []
    for m in range(n + 1):
        out.extend(enumerate_partial_designs(params, m).structures)
    return out


# -- closure -----------------------------------------------------------------


def test_closure_empty_design():
    assert closure_of(PartialDesign(P321, 5), {0, 1}) == {0, 1}


def test_closure_fano_pair():
    assert closure_of(FANO, {0, 1}) == naive_closure(FANO, {0, 1}) == {0, 1, 2}


def test_closure_fano_triangle():
    # 0, 1, 3 are not on a common line
    assert naive_closure(FANO, {0, 1, 3}) == set(range(7))
    assert closure_of(FANO, {0, 1, 3}) == set(range(7))


@pytest.mark.parametrize("params,n", [(P321, 7), (P322, 5)])
def test_closure_operator_laws(params, n):
    for d in reps_up_to(params, n):
        closures = {}
        for sub in subsets(d.n):
            cl = closure_of(d, sub)
            assert cl == naive_closure(d, sub)
            assert set(sub) <= cl
            assert closure_of(d, cl) == cl
            closures[sub] = cl
        for sub, cl in closures.items():
            for v in range(d.n):
                if v not in sub:
                    assert cl <= closures[tuple(sorted(sub + (v,)))]
        closed = [frozenset(s) for s, cl in closures.items() if cl == set(s)]
        for x, y in itertools.combinations(closed, 2):
            assert is_closed(d, x & y)


def test_is_closed_examples():
    assert is_closed(FANO, range(7))
    assert is_closed(FANO, (0, 1, 2))
    assert not is_closed(FANO, (0, 1))


def test_closedness_two_ways_agree():
    for d in reps_up_to(P321, 7) + reps_up_to(P322, 5):
        for sub in subsets(d.n):
            assert is_closed(d, sub) == is_closed_by_blocks(d, sub)


# -- embeddings --------------------------------------------------------------


def test_identity_is_embedding():
    for d in (FANO, ONE_BLOCK, TWO_POINTS):
        assert check_embedding(range(d.n), d, d)
    od = encode(OrderedDesign(FANO, (2, 0, 1, 3, 4, 5, 6)))
    assert check_embedding(range(7), od, od)


def test_block_into_fano():
    assert check_embedding((3, 1, 5), ONE_BLOCK, FANO)
    assert check_embedding({0: 0, 1: 1, 2: 2}, ONE_BLOCK, FANO)


def test_two_points_never_embed_in_fano():
    for f in itertools.permutations(range(7), 2):
        assert embedding_violations(f, TWO_POINTS, FANO) == ["functions", "iii-prime"]


def test_embedding_violation_names():
    assert embedding_violations((0, 0, 1), ONE_BLOCK, FANO) == ["injective"]
    assert embedding_violations((0, 1), ONE_BLOCK, FANO) == ["domain"]
    assert "relation" in embedding_violations((0, 1, 3), ONE_BLOCK, FANO)
    a = OrderedDesign.natural(ONE_BLOCK)
    b = OrderedDesign.natural(FANO)
    assert embedding_violations((0, 1, 2), a, b) == []
    assert embedding_violations((1, 0, 2), a, b) == ["order"]
    # order only matters when both sides carry one
    assert check_embedding((1, 0, 2), ONE_BLOCK, b)


def test_embedding_images_are_closed():
    designs = reps_up_to(P321, 5)
    for a, b in itertools.product(designs, repeat=2):
        if a.n > b.n:
            continue
        for f in embeddings(a, b):
            assert is_closed(b, f)


def test_conditions_ii_and_iii_prime_agree_small():
    assert equivalence_iii_iii_prime(FANO, FANO, range(7))
    assert equivalence_iii_iii_prime(ONE_BLOCK, FANO, (0, 1, 2))
    for n_a, n_b in [(2, 4), (3, 4), (3, 5)]:
        for a in labeled(P321, n_a):
            for b in labeled(P321, n_b):
                for f in itertools.permutations(range(n_b), n_a):
                    if "relation" not in embedding_violations(f, a, b):
                        assert equivalence_iii_iii_prime(a, b, f)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_conditions_agree_lambda_two(rnd):
    from designramsey.amalgamation import random_design

    b = random_design(P322, 6, rnd)
    sub = rnd.sample(range(6), rnd.randint(0, 5))
    a = b.induced(sub)
    f = sorted(sub)
    if "relation" not in embedding_violations(f, a, b):
        assert equivalence_iii_iii_prime(a, b, f)


# -- copies ------------------------------------------------------------------


def naive_copy_sets(a, b):
    """Image sets of all injective maps passing the embedding check."""
    return sorted({tuple(sorted(f)) for f in itertools.permutations(range(b.n), a.n) if check_embedding(f, a, b)})


def test_single_vertex_copies_in_fano():
    assert len(enumerate_copies(PartialDesign(P321, 1), FANO)) == 7


def test_block_copies_in_fano():
    copies = enumerate_copies(ONE_BLOCK, FANO)
    assert [c.vertices for c in copies] == sorted(FANO.blocks)
    # brute force over all 35 triples: closed and carrying a block
    closed_blocks = [s for s in itertools.combinations(range(7), 3) if is_closed(FANO, s) and s in FANO.blocks]
    assert len(closed_blocks) == 7
    assert [c.vertices for c in copies] == naive_copy_sets(ONE_BLOCK, FANO)


def test_two_point_copies_in_fano():
    assert enumerate_copies(TWO_POINTS, FANO) == []
    assert naive_copy_sets(TWO_POINTS, FANO) == []


def test_copies_match_naive_oracle():
    designs = reps_up_to(P321, 5)
    for a, b in itertools.product(designs, repeat=2):
        if a.n > b.n:
            continue
        copies = enumerate_copies(a, b)
        assert [c.vertices for c in copies] == naive_copy_sets(a, b)
        for c in copies:
            assert check_embedding(c.mapping, a, b)
        # every copy carries exactly |Aut(A)| embeddings
        total = sum(1 for f in itertools.permutations(range(b.n), a.n) if check_embedding(f, a, b))
        assert total == len(copies) * brute_automorphisms(a)


def test_ordered_copies_match_naive_oracle():
    rng = random.Random(5)
    designs = reps_up_to(P321, 5)
    for a, b in itertools.product(designs, repeat=2):
        if a.n > b.n:
            continue
        oa = OrderedDesign(a, tuple(rng.sample(range(a.n), a.n)))
        ob = OrderedDesign(b, tuple(rng.sample(range(b.n), b.n)))
        copies = enumerate_copies(oa, ob)
        maps = [f for f in itertools.permutations(range(b.n), a.n) if check_embedding(f, oa, ob)]
        # linear orders are rigid: one embedding per copy
        assert sorted(tuple(sorted(f)) for f in maps) == [c.vertices for c in copies]
        assert len(maps) == len(copies)


def test_copy_substructure():
    c = enumerate_copies(ONE_BLOCK, FANO)[3]
    assert c.substructure(FANO) == ONE_BLOCK


# -- canonical forms ---------------------------------------------------------


def test_relabelled_fano_same_form():
    perm = (3, 6, 0, 2, 5, 1, 4)
    assert canonical_form(FANO) == canonical_form(FANO.relabel(perm))
    assert canonical_digest(FANO) == canonical_digest(FANO.relabel(perm))
    assert len(canonical_digest(FANO)) == 64


def test_fano_vs_empty():
    assert canonical_form(FANO) != canonical_form(PartialDesign(P321, 7))


def test_all_labelled_sts7_share_one_form():
    sts = [d for d in labeled(P321, 7) if len(d.blocks) == 7]
    assert len(sts) == 30
    assert len({canonical_form(d) for d in sts}) == 1
    assert all(find_isomorphism_brute(sts[0], d) is not None for d in sts)


def test_canonical_form_agrees_with_brute_isomorphism():
    rng = random.Random(11)
    for params, n in [(P321, 5), (P321, 6), (P322, 5)]:
        pool = list(labeled(params, n))
        for _ in range(150):
            x, y = rng.choice(pool), rng.choice(pool)
            assert (canonical_form(x) == canonical_form(y)) == brute_isomorphic(x, y)


def test_automorphism_counts():
    assert automorphism_count(FANO) == 168
    for d in reps_up_to(P321, 6) + reps_up_to(P322, 5):
        assert automorphism_count(d) == brute_automorphisms(d)


def test_canonical_labeling_relabels_consistently():
    lab = canonical_labeling(FANO)
    assert FANO.relabel(lab.labels) == lab.design


def test_ordered_canonical_form():
    a = OrderedDesign(ONE_BLOCK, (0, 1, 2))
    b = OrderedDesign(ONE_BLOCK, (2, 0, 1))
    assert canonical_form(a) == canonical_form(b)
    x = OrderedDesign(PartialDesign.build(P321, 4, [(0, 1, 2)]), (0, 1, 2, 3))
    y = OrderedDesign(PartialDesign.build(P321, 4, [(0, 1, 2)]), (3, 0, 1, 2))
    assert canonical_form(x) != canonical_form(y)
    assert canonical_form(x, ordered=False) == canonical_form(y, ordered=False)


def test_canonical_size_limit():
    with pytest.raises(SizeLimit):
        canonical_form(PartialDesign(P321, 13))
    assert canonical_form(PartialDesign(P321, 13), limit=13)


# -- closures tell subsets apart ----------------------------------------------


def test_equal_size_subsets_with_non_isomorphic_closures():
    d = PartialDesign.build(P321, 5, [(0, 1, 2)])
    x, y = {0, 1}, {3, 4}
    cx, cy = closure_of(d, x), closure_of(d, y)
    assert len(x) == len(y)
    assert not brute_isomorphic(induced(d, cx), induced(d, cy))
    # so the pair {0,1} is not closed and cannot be a substructure at all
    assert not is_closed(d, x) and is_closed(d, y)
