import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from rauzylab import iet
from rauzylab.iet import DomainError, IntervalExchange, NonReturnError, discrepancy, evaluate, first_return, orbit
from rauzylab.perm import MarkedPermutation
from rauzylab import rauzy
from rauzylab.verify import oracle_mismatch, random_induction_case, rauzy_cut

PI0 = MarkedPermutation.standard(4)


def test_evaluate_symmetric_exchange():
    T = IntervalExchange((1, 1, 1, 1), (4, 3, 2, 1))
    assert evaluate(T, F(1, 2)) == F(7, 2)
    assert [T.translation(j) for j in range(1, 5)] == [3, 1, -1, -3]


def test_evaluate_identity():
    T = IntervalExchange((F(1, 3), 2, F(5, 7)), (1, 2, 3))
    for x in (0, F(1, 5), 2, F(30, 11)):
        assert evaluate(T, x) == x


def test_evaluate_two_intervals():
    T = IntervalExchange((2, 1), (2, 1))
    assert evaluate(T, F(5, 2)) == F(1, 2)


def test_evaluate_out_of_domain():
    T = IntervalExchange((2, 1), (2, 1))
    with pytest.raises(DomainError):
        evaluate(T, 3)
    with pytest.raises(DomainError):
        evaluate(T, -F(1, 10))


def test_orbits():
    assert orbit(IntervalExchange((1, 2), (1, 2)), F(1, 3), 3) == [F(1, 3)] * 4
    assert orbit(IntervalExchange((2, 1), (2, 1)), 0, 3) == [0, 1, 2, 0]
    assert orbit(IntervalExchange((1, 1, 1, 1), (4, 3, 2, 1)), F(1, 2), 2) == [F(1, 2), F(7, 2), F(1, 2)]


def test_first_return_rotation():
    R = first_return(IntervalExchange((2, 1), (2, 1)), 2)
    assert R.lengths == (1, 1) and R.pi == (2, 1)


def test_first_return_full_interval_is_identity_operation():
    T = IntervalExchange((F(1, 5), F(3, 10), F(1, 10), F(2, 5)), (4, 3, 2, 1))
    R = first_return(T, T.total)
    assert R.lengths == T.lengths and R.pi == T.pi


def test_first_return_matches_b_step():
    lam = (F(1, 5), F(3, 10), F(1, 10), F(2, 5))
    T = IntervalExchange.from_marked(lam, PI0)
    R = first_return(T, F(4, 5))
    lam2, mp2, _, label = rauzy.induction_step(lam, PI0)
    assert label == "b"
    S = IntervalExchange.from_marked(lam2, mp2)
    assert (R.lengths, R.pi) == (S.lengths, S.pi)


def test_two_a_steps_agree_with_oracle():
    lam = (F(9), F(1), F(1), F(1))
    mp = PI0
    for _ in range(2):
        assert oracle_mismatch(lam, mp) is None
        lam, mp, _, label = rauzy.induction_step(lam, mp)
        assert label == "a"


def test_non_return_cap():
    T = IntervalExchange((F(1), F(1000)), (2, 1))
    with pytest.raises(NonReturnError):
        first_return(T, F(1, 2), max_iter=5)


def test_discrepancy_identity_is_stuck():
    T = IntervalExchange((1, 1, 1), (1, 2, 3))
    assert discrepancy(T, F(1, 2), 1000, 10) == pytest.approx(1 - 1 / 10)


def test_discrepancy_rational_rotation_does_not_decay():
    T = IntervalExchange((2, 1), (2, 1))
    vals = [discrepancy(T, 0, steps, 30) for steps in (3000, 30000, 300000)]
    assert min(vals) > 0.2


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(2, 6))
def test_piecewise_translation_and_tiling(rnd, m):
    rng = random.Random(rnd.random())
    lam, mp = random_induction_case(rng, m)
    T = IntervalExchange.from_marked(lam, mp)
    images = sorted(T.image_interval(j) for j in range(1, m + 1))
    assert images[0][0] == 0 and images[-1][1] == T.total
    assert all(a[1] == b[0] for a, b in zip(images, images[1:]))
    for j in range(1, m + 1):
        lo, hi = T.breakpoints[j - 1], T.breakpoints[j]
        x, y = lo, lo + (hi - lo) * F(rng.randint(1, 99), 100)
        assert evaluate(T, y) - evaluate(T, x) == y - x


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(2, 6))
def test_rauzy_step_equals_first_return(rnd, m):
    rng = random.Random(rnd.random())
    lam, mp = random_induction_case(rng, m)
    assert oracle_mismatch(lam, mp) is None


def test_rauzy_cut_is_the_longer_subinterval():
    lam = (F(1, 5), F(3, 10), F(1, 10), F(2, 5))
    assert rauzy_cut(lam, PI0) == F(4, 5)


def test_float_tables_are_normalised():
    T = IntervalExchange((2, 1), (2, 1))
    breaks, shifts = iet.float_tables(T)
    assert breaks.tolist() == [2 / 3] and shifts.tolist() == [1 / 3, -2 / 3]
