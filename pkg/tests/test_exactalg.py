from fractions import Fraction

import mpmath
import numpy as np
import pytest

from core.exactalg import (
    CycloNumber,
    EmptyDiagonalError,
    ExpSumMatrix,
    KeyLemmaPreconditionError,
    PrimeDividesMNError,
    PrimesNotDistinctError,
    SubsetOverlapError,
    SubsetRangeError,
    basis_size,
    block_form_holds,
    cyclo_from_reduced,
    exact_det,
    hall_block_form,
    hall_block_form_bruteforce,
    is_tight_minimal,
    key_det_nonzero,
    numeric_det,
    permutation_sign,
    random_exp_sum_matrix,
    reduce_group_ring,
)
from core.settings import DEFAULT_SETTINGS


def z(M, k=1):
    return CycloNumber.zeta(M, k)


def test_cyclotomic_arithmetic():
    assert z(4) * z(4) == -1
    assert sum((z(5, a) for a in range(1, 5)), CycloNumber.rational(0)) == -1
    assert z(3).embed(6) == z(6, 2)
    assert z(12, 12) == 1
    assert (z(8) + z(8, 5)).is_zero()
    assert CycloNumber.e(Fraction(1, 4)) == z(4)


def test_embed_requires_multiple():
    with pytest.raises(ValueError):
        z(3).embed(4)


def test_homomorphisms():
    x = z(5) + 2 * z(5, 3) - Fraction(1, 2)
    y = z(3) - 3
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x + y).embed(30) == x.embed(30) + y.embed(30)
    assert (x * y).embed(60) == x.embed(60) * y.embed(60)


def test_inverse_and_division():
    x = 1 + z(7) + 3 * z(7, 4)
    assert x * x.inverse() == 1
    assert (x / x) == 1
    with pytest.raises(ZeroDivisionError):
        CycloNumber(5).inverse()


def test_power_coeffs():
    assert z(4, 2).power_coeffs() == [-1, 0]
    assert z(5, 4).power_coeffs() == [-1, -1, -1, -1]
    assert len(CycloNumber(12).power_coeffs()) == 4


def test_complex_value():
    value = (z(8) + z(8, 7)).to_complex()
    assert abs(value - mpmath.sqrt(2)) < mpmath.mpf(10) ** -25


def test_group_ring_reduction():
    M = 15
    vec = np.ones(M, dtype=np.int64)
    assert not np.any(reduce_group_ring(vec, M))
    vec = np.zeros(M, dtype=np.int64)
    vec[4] = 3
    reduced = reduce_group_ring(vec, M)
    assert reduced.size == basis_size(M) == 8
    assert cyclo_from_reduced(reduced, M) == 3 * z(15, 4)


def test_exact_det_integers():
    A = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    assert exact_det(A) == 18
    assert exact_det([]) == 1
    assert exact_det([[0, 1], [1, 0]]) == -1
    with pytest.raises(ValueError):
        exact_det([[1, 2]])


def test_exact_det_matches_numeric(rng):
    n = 4
    A = [[z(35, int(rng.integers(0, 35))) + int(rng.integers(-2, 3)) for _ in range(n)] for _ in range(n)]
    exact = exact_det(A).to_complex(40)
    numeric = numeric_det(A)
    assert abs(exact - numeric) < mpmath.mpf(10) ** -20


def test_key_determinant_single_prime():
    spec = ExpSumMatrix(m=1, n=1, primes=[5], subsets=[[[1, 2, 3, 4]]])
    det, nonzero = key_det_nonzero(spec)
    assert nonzero
    assert det == -1


def test_key_determinant_matches_exact_det():
    spec = ExpSumMatrix(m=2, n=3, primes=[5, 7],
                        subsets=[[[1, 2], [3]], [[4], [1, 5, 6]]])
    det, nonzero = key_det_nonzero(spec)
    assert nonzero
    assert det == exact_det(spec.matrix())


def test_key_determinant_random(rng):
    for _ in range(25):
        spec = random_exp_sum_matrix(rng)
        det, nonzero = key_det_nonzero(spec)
        assert nonzero, spec.model_dump()
        if spec.h <= 2:
            assert det == exact_det(spec.matrix())


@pytest.mark.slow
def test_key_determinant_thousand_instances():
    rng = np.random.default_rng(0)
    assert all(key_det_nonzero(random_exp_sum_matrix(rng))[1] for _ in range(1000))


@pytest.mark.parametrize("spec,error", [
    (dict(m=1, n=1, primes=[5, 5], subsets=[[[1], [2]], [[3], [4]]]), PrimesNotDistinctError),
    (dict(m=1, n=1, primes=[4], subsets=[[[1]]]), PrimesNotDistinctError),
    (dict(m=5, n=1, primes=[5], subsets=[[[1]]]), PrimeDividesMNError),
    (dict(m=1, n=1, primes=[5], subsets=[[[0, 1]]]), SubsetRangeError),
    (dict(m=1, n=1, primes=[3, 5], subsets=[[[1], [1]], [[1], [2]]]), SubsetOverlapError),
    (dict(m=1, n=1, primes=[3, 5], subsets=[[[1], [1]], [[2], []]]), EmptyDiagonalError),
])
def test_key_determinant_preconditions(spec, error):
    with pytest.raises(error):
        key_det_nonzero(ExpSumMatrix(**spec))
    assert issubclass(error, KeyLemmaPreconditionError)
    assert issubclass(error, ValueError)


def test_hall_examples():
    assert hall_block_form(np.eye(3))[0] == 3
    m, P, Q = hall_block_form([[0, 1], [1, 0]])
    assert m == 2 and Q == [1, 0]
    assert hall_block_form([[1, 0], [1, 0]])[0] == 1
    with pytest.raises(ValueError):
        hall_block_form([[1, 1], [0, 0]])
    with pytest.raises(ValueError):
        hall_block_form([[1, 1]])


def test_hall_bruteforce_limit():
    limit = DEFAULT_SETTINGS["exactalg"]["bruteforce_max_n"]
    with pytest.raises(ValueError):
        hall_block_form_bruteforce(np.ones((limit + 1, limit + 1)))
    with pytest.raises(ValueError):
        hall_block_form_bruteforce(np.eye(5), max_n=4)
    assert hall_block_form_bruteforce(np.eye(5), max_n=5)[0] == 5


def test_hall_random_patterns(rng):
    for _ in range(60):
        n = int(rng.integers(1, 8))
        a = rng.random((n, n)) < 0.3
        a[np.arange(n), rng.integers(0, n, size=n)] = True
        form = hall_block_form(a)
        assert block_form_holds(a, form)
        assert block_form_holds(a, hall_block_form_bruteforce(a))
        m, P, _ = form
        if m < n:
            assert is_tight_minimal(a, P[:m])


@pytest.mark.slow
def test_hall_thousand_patterns(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 13))
        a = rng.random((n, n)) < float(rng.uniform(0.1, 0.5))
        a[np.arange(n), rng.integers(0, n, size=n)] = True
        form = hall_block_form(a)
        assert block_form_holds(a, form)
        assert block_form_holds(a, hall_block_form_bruteforce(a))
        m, P, _ = form
        if m < n:
            assert is_tight_minimal(a, P[:m])


def test_permutation_signs_and_determinants(rng):
    A = rng.integers(-3, 4, size=(4, 4))
    P = [int(x) for x in rng.permutation(4)]
    Q = [int(x) for x in rng.permutation(4)]
    permuted = A[np.ix_(P, Q)]
    det = exact_det(A.tolist())
    assert exact_det(permuted.tolist()) == det * permutation_sign(P) * permutation_sign(Q)
    assert permutation_sign([1, 0, 2]) == -1
