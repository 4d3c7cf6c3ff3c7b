import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rauzylab import rauzy
from rauzylab.construction import block_word, h_product
from rauzylab.perm import MarkedPermutation, op_a, op_b
from rauzylab.rauzy import (InductionTieError, determinant, elementary, expansion, identity, induction_step,
                            matrix_from_json, matrix_to_json, matvec, word_matrix)
from rauzylab.verify import oracle_mismatch, random_induction_case

PI0 = MarkedPermutation.standard(4)


def same(A, B):
    return A.shape == B.shape and all(int(x) == int(y) for x, y in zip(A.flat, B.flat))


def test_b_step_on_pi0():
    lam2, mp2, A, label = induction_step((F(1, 5), F(3, 10), F(1, 10), F(2, 5)), PI0)
    assert label == "b"
    assert lam2 == (F(1, 5), F(3, 10), F(1, 10), F(1, 5))
    assert same(A, elementary(4, 4, 1))
    assert mp2 == op_b(PI0)


def test_a_step_on_pi0():
    lam2, mp2, A, label = induction_step((F(2, 5), F(3, 10), F(1, 10), F(1, 5)), PI0)
    assert label == "a"
    assert lam2[0] == F(1, 5)
    assert same(A, elementary(4, 1, 4))
    assert mp2 == op_a(PI0)


def test_tie_is_rejected():
    with pytest.raises(InductionTieError):
        induction_step((1, 2, 3, 1), PI0)


def test_floats_are_read_as_decimals():
    lam2, *_ = induction_step((0.2, 0.3, 0.1, 0.4), PI0)
    assert lam2[3] == F(1, 5)


def test_word_matrix_trivial_and_single():
    end, M = word_matrix(PI0, "")
    assert end == PI0 and same(M, identity(4))
    end, M = word_matrix(PI0, "a")
    assert end == op_a(PI0) and same(M, elementary(4, 1, 4))


def test_expansion_zero_steps():
    e = expansion((1, 2, 3, 4), PI0, 0)
    assert len(e) == 0 and e.word == "" and e.error is None


def test_expansion_stops_at_tie():
    e = expansion((1, 1, 1, 1), PI0, 5)
    assert len(e) == 0 and "outside induction domain" in e.error


def test_expansion_of_h2_image_spells_the_block_words():
    lam = tuple(matvec(h_product(2), (1, 1, 1, 1)))
    s = sum(lam)
    lam = tuple(F(x, s) for x in lam)
    k = len(block_word(1)) + len(block_word(2))
    e = expansion(lam, PI0, k)
    assert e.error is None
    assert e.word == block_word(1) + block_word(2)
    assert e.steps[-1].perm == PI0
    assert same(e.product(), h_product(2))


def test_expansion_lengths_follow_oracle_for_50_steps():
    rng = random.Random(11)
    for _ in range(5):
        lam, mp = random_induction_case(rng, 5)
        for step in expansion(lam, mp, 50).steps:
            assert oracle_mismatch(lam, mp) is None
            lam, mp = step.lengths, step.perm


@settings(max_examples=80, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(2, 6), st.integers(1, 20))
def test_product_maps_final_lengths_back(rnd, m, k):
    rng = random.Random(rnd.random())
    lam, mp = random_induction_case(rng, m)
    e = expansion(lam, mp, k)
    if not e.steps:
        return
    M = e.product()
    assert matvec(M, e.steps[-1].lengths) == lam
    assert determinant(M) == 1
    assert all(x > 0 for x in e.steps[-1].lengths)


def test_matrix_json_round_trip_big_entries():
    M = h_product(12)
    back = matrix_from_json(matrix_to_json(M))
    assert same(back, M)
    assert max(len(x) for row in matrix_to_json(M) for x in row) > 20
