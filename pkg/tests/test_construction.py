from fractions import Fraction as F

import pytest
import sympy

from rauzylab import iet, rauzy
from rauzylab.construction import (C_LEADING, PI0, Construction, ConstructionError, FitFailure, block_word,
                                   block_words, c_matrix, delta_cc, entry_series, exact_polynomial, h_product,
                                   lambda_enclosure, leading_term_fit, leading_term_table, tail_product)
from rauzylab.perm import follow
from rauzylab.zipper import validate

C1 = [[1, 1, 1, 1], [2, 8, 6, 1], [2, 6, 5, 0], [2, 5, 4, 2]]


def mat(M):
    return [[int(x) for x in row] for row in M.tolist()]


def first_return_cut(T):
    """Cut at total length minus the shorter of the two competing last intervals."""
    m = len(T.pi)
    last_top = T.lengths[-1]
    last_bottom = T.lengths[T.pi.index(m)]
    return T.total - min(last_top, last_bottom)


def test_block_words_shape():
    wa, wb = block_words(3)
    assert wa == "babbbabb" and wb == "abaaabaa"
    assert all(len(block_word(n)) == 2 * n + 10 for n in range(1, 40))
    with pytest.raises(ValueError):
        block_words(0)


def test_block_paths_are_closed():
    for n in range(1, 30):
        wa, wb = block_words(n)
        assert follow(PI0, wa) == PI0 and follow(PI0, wb) == PI0


def test_c1_exact():
    assert mat(c_matrix(1)) == C1
    assert rauzy.determinant(c_matrix(1)) == 1


def test_c1_against_first_return_oracle():
    # brute-force induction, independent of the Rauzy move rules
    v = (F(3), F(5), F(7), F(11))
    lam = rauzy.matvec(c_matrix(1), v)
    T = iet.IntervalExchange.from_marked(lam, PI0)
    for _ in range(len(block_word(1))):
        T = iet.first_return(T, first_return_cut(T))
    assert T.lengths == v and T.pi == (4, 3, 2, 1)


def test_c_n_closed_form():
    for n in range(1, 25):
        expect = [[1, 1, 1, 1], [2, 2 * n + 6, 2 * n + 4, 1],
                  [n + 1, n * n + 3 * n + 2, n * n + 2 * n + 2, 0], [2, n + 4, n + 3, 2]]
        assert mat(c_matrix(n)) == expect


def test_h_product_is_cumulative():
    assert mat(h_product(3)) == mat(c_matrix(1).dot(c_matrix(2)).dot(c_matrix(3)))
    assert rauzy.determinant(h_product(6)) == 1


def test_fit_examples():
    assert leading_term_fit([n * n for n in range(1, 6)]) == (2, 1)
    assert leading_term_fit([2 * n ** 3 + n for n in range(1, 7)]) == (3, 2)
    assert leading_term_fit([0] * 5) == (-1, 0)
    assert leading_term_fit(entry_series("C", 2, 2)) == (2, 1)
    with pytest.raises(FitFailure):
        leading_term_fit([2 ** n for n in range(1, 12)])


def test_exact_polynomial():
    n = sympy.Symbol("n")
    assert exact_polynomial(entry_series("C", 2, 1, 10)) == n ** 2 + 3 * n + 2


def test_leading_term_table_reports_every_entry():
    table = leading_term_table(30)
    assert len(table) == 32
    bad = [(r.kind, r.i, r.j) for r in table if not r.ok]
    # the displayed constant 1 at (2, 1) of C_n is 2 in the computed matrix
    assert bad == [("C", 2, 1)]
    assert C_LEADING[1][0] == (0, 1)


def test_delta_cc_tends_to_a_quarter():
    vals = [float(delta_cc(n)) for n in (10, 100, 1000)]
    assert all(v > 1 / 16 for v in vals)
    assert abs(vals[-1] - 0.25) < abs(vals[0] - 0.25)
    assert abs(vals[-1] - 0.25) < 5e-3


def test_lambda_enclosure_shrinks():
    w = [max(hi - lo for lo, hi in lambda_enclosure(N)) for N in (4, 8, 16)]
    assert w[0] > w[1] > w[2] > 0


def test_lambda_tail_window_one():
    con = Construction(2)
    lam, bound = con.lambda_tail(0, 1)
    v = rauzy.matvec(c_matrix(1), (1, 1, 1, 1))
    assert list(v) == [4, 17, 13, 13]
    assert all(lam[i] / lam[0] == F(v[i], v[0]) for i in range(4))
    assert sum(x * y for x, y in zip(lam, con.h(0))) == 1
    assert bound == float("inf")


def test_lambda_tail_is_inside_enclosure_cell():
    con = Construction(3)
    lam, bound = con.lambda_tail(0, 12)
    s = sum(lam)
    for (lo, hi), x in zip(lambda_enclosure(12), lam):
        assert lo <= x / s <= hi
    assert bound < 1e-6


def test_exact_scaling_and_unit_area():
    con = Construction(30)
    assert con.area(0) == 1
    for n in range(1, 31):
        assert rauzy.matvec(c_matrix(n), con.lam(n)) == con.lam(n - 1)
        assert con.h(n) == rauzy.matvec(c_matrix(n).T, con.h(n - 1))
        assert con.area(n) == 1
    assert rauzy.matvec(h_product(30), con.lam(30)) == con.lambda0


def test_heights_sequence_checks_every_block():
    con = Construction(8)
    seq = con.heights_sequence(check_every_step=True)
    assert len(seq) == 9
    z = con.zipper_at(8)
    assert validate(z) == []
    assert z.a == seq[-1][1]


def test_initial_zipper_is_symmetric_datum_scaled():
    con = Construction(2)
    z = con.initial_zipper()
    assert validate(z) == []
    r = z.h[0]
    assert tuple(x / r for x in z.h) == (1, 3, 3, 2)
    assert tuple(x / r for x in z.a) == (2, 2, 2, 1)


def test_heights_sequence_horizon():
    with pytest.raises(ValueError):
        Construction(3).heights_sequence(4)


def test_tail_product_matches_h_ratio():
    assert mat(h_product(2).dot(tail_product(2, 3))) == mat(h_product(5))


def test_logs_match_exact_values():
    import math
    con = Construction(20)
    assert con.lam_log(20, 4) == pytest.approx(math.log(float(con.lam(20)[3])), rel=1e-12)
    assert con.h_log(20, 4) == pytest.approx(math.log(float(con.h(20)[3])), rel=1e-12)


def test_state():
    con = Construction(3)
    st = con.state(2)
    assert st.word_offset == len(block_word(1)) + len(block_word(2))
    assert mat(st.C) == mat(c_matrix(2))
    assert st.lam == con.lam(2)
