from fractions import Fraction

import pytest

from core.matcore import (
    Mat2,
    S,
    T,
    W,
    check_all_identities,
    check_conrey_farmer,
    check_displayed_identities,
    check_level,
    conrey_farmer_matrix,
    format_matrix,
    gamma_qa,
    height,
    identity,
    in_gamma0,
    in_gamma1,
    inv,
    is_elliptic_infinite,
    mul,
    neg,
    neg_identity,
    normalize_entry,
    parse_matrix,
    symmetric_residue,
    twisted_trace,
    upper,
)


def test_products():
    assert mul(neg(T()), inv(W(6))) == Mat2(5, -1, 6, -1)
    assert mul(S(), S()) == neg_identity()
    assert S() ** 4 == identity()
    assert T() ** -3 == upper(-3)


def test_inverse_requires_det_one():
    with pytest.raises(ValueError):
        inv(Mat2(2, 0, 0, 1))
    M = Mat2(5, -2, -12, 5)
    assert M * inv(M) == identity()
    assert (M * M).det() == 1


def test_entries_are_normalized():
    M = Mat2(Fraction(4, 2), "3/6", 0, "-7")
    assert M.a == 2 and isinstance(M.a, int)
    assert M.b == Fraction(1, 2)
    assert normalize_entry("10/5") == 2
    with pytest.raises(TypeError):
        normalize_entry(0.5)
    with pytest.raises(ValueError):
        normalize_entry("1/0")


def test_matrix_literals():
    M = parse_matrix("[[1,-2/3],[16/3,-23/9]]")
    assert M == Mat2(1, Fraction(-2, 3), Fraction(16, 3), Fraction(-23, 9))
    assert format_matrix(M) == "[[1,-2/3],[16/3,-23/9]]"
    with pytest.raises(ValueError):
        parse_matrix("[[1,2],[3]]")


def test_membership():
    assert in_gamma0(Mat2(2, -1, 5, -2), 5)
    assert not in_gamma1(Mat2(2, -1, 5, -2), 5)
    assert in_gamma1(T(), 5) and in_gamma1(W(5), 5)
    assert not in_gamma0(Mat2(1, 0, 1, 1), 5)
    assert not in_gamma0(Mat2(1, Fraction(1, 2), 0, 1), 1)


def test_check_level():
    assert check_level(7) == 7
    for bad in (0, -3):
        with pytest.raises(ValueError):
            check_level(bad)


def test_symmetric_residue():
    assert symmetric_residue(8, 15) == -7
    assert symmetric_residue(3, 6) == 3
    with pytest.raises(ValueError):
        symmetric_residue(1, 0)


def test_gamma_qa_displayed_values():
    assert gamma_qa(5, 2, 1) == Mat2(2, -1, 5, -2)
    assert gamma_qa(23, 10, -3) == Mat2(10, 3, 23, 7)
    assert gamma_qa(15, 2, 1) == Mat2(2, -1, 15, -7)
    assert gamma_qa(15, 11, 4) == Mat2(11, -4, -30, 11)
    assert gamma_qa(7, 1, 0) == identity()


@pytest.mark.parametrize("N,q,a", [(5, 2, 1), (13, 5, 2), (23, 10, -3), (6, 5, 2), (11, 3, -1)])
def test_gamma_qa_lies_in_gamma0(N, q, a):
    M = gamma_qa(N, q, a)
    assert in_gamma0(M, N)
    assert M.top_row() == (q, -a)


def test_gamma_qa_preconditions():
    with pytest.raises(ValueError):
        gamma_qa(5, 0, 1)
    with pytest.raises(ValueError):
        gamma_qa(6, 2, 1)
    with pytest.raises(ValueError):
        gamma_qa(5, 3, 0)


def test_equal_top_rows_differ_by_w_power():
    M = gamma_qa(5, 2, 1)
    M2 = Mat2(2, -1, 15, -7)
    assert M2 * inv(M) == W(5)


def test_height():
    assert height(Mat2(5, -2, -12, 5), 6) == 5
    M = gamma_qa(13, 5, 2)
    assert height(M, 13) == height(inv(M), 13)
    with pytest.raises(ValueError):
        height(Mat2(1, 0, 1, 1), 5)


def test_elliptic_infinite():
    assert is_elliptic_infinite(Mat2(1, Fraction(-2, 3), Fraction(16, 3), Fraction(-23, 9)))
    assert not is_elliptic_infinite(S())
    assert not is_elliptic_infinite(T())


def test_twisted_trace():
    gamma = Mat2(5, -2, -12, 5)
    assert twisted_trace(gamma, Fraction(4, 5)) == Fraction(2, 5)
    assert twisted_trace(Mat2(10, 3, 23, 7), Fraction(-2, 3)) == Fraction(5, 3)


def test_conrey_farmer_matrix():
    M = conrey_farmer_matrix(3, 3)
    assert M == Mat2(1, Fraction(-2, 3), Fraction(16, 3), Fraction(-23, 9))
    assert M.trace() == Fraction(-14, 9)
    assert all(c.holds for c in check_conrey_farmer())


def test_displayed_identities_hold():
    checks = check_displayed_identities()
    assert len(checks) == 8
    assert sum(not c.corrected for c in checks) == 7
    assert [(c.level, c.expected) for c in checks if c.corrected] == [(15, format_matrix(Mat2(8, 3, 45, 17)))]
    assert all(c.holds for c in checks), [c.label for c in checks if not c.holds]


def test_all_identity_checks():
    checks = check_all_identities()
    assert {c.kind for c in checks} == {"identity", "conrey_farmer", "twisted_trace"}
    assert all(c.holds for c in checks)
