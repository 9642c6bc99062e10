import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from vsa.combinatorics import (
    CoeffVector,
    ExactMatrix,
    check_lemma63,
    closed_form_coeff,
    det_s,
    gen_binom,
    l_matrix,
    lemma63_sum,
    pascal_inverse,
    pascal_matrix,
    s_matrix,
    straightening_coeffs,
)
from vsa.errors import DomainError


def binom_oracle(m, k):
    # upper negation for m < 0, math.comb otherwise
    if k < 0:
        return 0
    if m >= 0:
        return math.comb(m, k)
    return (-1) ** k * math.comb(k - m - 1, k)


def leibniz_det(rows):
    n = len(rows)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction((-1) ** inversions)
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return total


@pytest.mark.parametrize("m,k,expected", [(5, 2, 10), (7, 0, 1), (-4, 0, 1), (-1, 2, 1), (3, -1, 0), (2, 5, 0)])
def test_gen_binom_values(m, k, expected):
    assert gen_binom(m, k) == expected


@given(st.integers(-30, 30), st.integers(-5, 15))
def test_gen_binom_matches_upper_negation(m, k):
    assert gen_binom(m, k) == binom_oracle(m, k)


@given(st.integers(-20, 20), st.integers(1, 12))
def test_gen_binom_pascal_rule(m, k):
    assert gen_binom(m + 1, k) == gen_binom(m, k) + gen_binom(m, k - 1)


def test_pascal_small():
    assert pascal_matrix(1).tolist() == [[1]]
    assert pascal_matrix(3).tolist() == [[1, 1, 1], [0, 1, 2], [0, 0, 1]]
    assert pascal_matrix(5).is_upper_triangular()


@pytest.mark.parametrize("N", range(1, 8))
def test_pascal_inverse(N):
    assert pascal_matrix(N) @ pascal_inverse(N) == ExactMatrix.identity(N)


def test_s_matrix_examples():
    assert s_matrix(2, 5).tolist() == [[1, 1], [5, 4]]
    assert s_matrix(3, 2).tolist() == [[1, 1, 1], [2, 1, 0], [1, 0, 0]]
    for m in range(0, 6):
        assert s_matrix(1, m).tolist() == [[1]]


@given(st.integers(1, 40))
def test_s_matrix_two_by_two_formula(m):
    assert s_matrix(2, m).tolist() == [[1, 1], [m, m - 1]]


def test_l_matrix_example():
    # entry (2,2) is -gen_binom(4,4) = -1
    assert l_matrix(2, 5).tolist() == [[1, 0], [5, -1]]
    assert l_matrix(3, 2) @ s_matrix(3, 2) == pascal_matrix(3)


@pytest.mark.parametrize("N", range(1, 7))
def test_l_matrix_diagonal_and_shape(N):
    L = l_matrix(N, N + 3)
    assert L.is_lower_triangular()
    assert [L.entry(j, j) for j in range(1, N + 1)] == [(-1) ** (j - 1) for j in range(1, N + 1)]


@pytest.mark.parametrize("N", range(1, 6))
@pytest.mark.parametrize("dm", [0, 1, 4, 9])
def test_det_matches_leibniz(N, dm):
    m = N - 1 + dm
    S = s_matrix(N, m)
    assert det_s(N, m) == leibniz_det(S.tolist()) == (-1) ** (N * (N - 1) // 2)


def test_det_examples_and_domain():
    assert det_s(2, 5) == -1
    assert det_s(3, 2) == -1
    assert det_s(1, 0) == 1
    with pytest.raises(DomainError):
        det_s(3, 1)


def test_coefficients_two_and_three():
    for n in range(-12, 0):
        assert straightening_coeffs(2, n).values == (n + 1, 1)
    for n in range(-12, -1):
        assert straightening_coeffs(3, n).values == (Fraction(n * n + 3 * n + 2, 2), n + 2, 1)
    for n in range(-8, 0):
        assert straightening_coeffs(1, n).values == (1,)


@pytest.mark.parametrize("N", range(1, 7))
def test_coefficients_are_first_row_of_inverse(N):
    k = N // 2
    n = -k - 4
    S = s_matrix(N, -n + k - 1)
    assert list(straightening_coeffs(N, n).values) == list(S.inverse().row(1))
    assert [closed_form_coeff(N, r, n) for r in range(N)] == list(S.inverse().row(1))


def test_coefficient_range():
    with pytest.raises(DomainError):
        straightening_coeffs(2, 0)
    with pytest.raises(DomainError):
        straightening_coeffs(3, -1)


def test_coeff_vector_json():
    c = straightening_coeffs(3, -5)
    assert isinstance(c, CoeffVector)
    assert c.to_json() == {"N": 3, "n": -5, "values": ["6", "-3", "1"]}


def test_matrix_json_round_trip():
    M = ExactMatrix.from_rows([[Fraction(1, 2), 3], [0, -1]])
    assert ExactMatrix.from_json(M.to_json()) == M
    assert M.to_json()["entries"] == [["1/2", "3"], ["0", "-1"]]


def test_row_identity_examples():
    assert lemma63_sum(3, 2, 1) == 0 and check_lemma63(3, 2, 1)
    assert lemma63_sum(4, 3, 3) == 1 and check_lemma63(4, 3, 3)
    for m in range(0, 8):
        for j in range(1, m + 2):
            assert check_lemma63(m, 1, j)


def test_row_identity_domain():
    for args in [(-1, 1, 1), (3, 0, 1), (1, 4, 1), (3, 2, 0), (3, 2, 5)]:
        with pytest.raises(DomainError):
            check_lemma63(*args)


@given(st.data())
def test_row_identity_random(data):
    k = data.draw(st.integers(1, 10))
    m = data.draw(st.integers(k - 1, 25))
    j = data.draw(st.integers(1, m + 1))
    assert check_lemma63(m, k, j)
