from fractions import Fraction

import numpy as np
import pytest
from sympy import Matrix, isprime

from hyperbanana.linalg import (PRIME_HIGH, PRIME_LOW, RATIONALS, Field, FieldError, ModularEchelon, ScalarMatrix,
                                ShapeError, augment_row, random_prime, rank_exact, rank_mod_p, stack)


P = 1_000_000_007


def identity(k, field=RATIONALS):
    return ScalarMatrix.from_rows([[int(i == j) for j in range(k)] for i in range(k)], k, field)


def zeros(rows, cols):
    return ScalarMatrix(rows, cols, (0,) * (rows * cols))


def _random_matrix(rng, rows, cols, rank, bound=50):
    left = rng.integers(-bound, bound, size=(rows, rank), endpoint=True).astype(object)
    right = rng.integers(-bound, bound, size=(rank, cols), endpoint=True).astype(object)
    return ScalarMatrix.from_array(left @ right)


def setup_module():
    print(f" == Setting up tests for {__name__}")


def teardown_module():
    print(f" == Tearing down tests for {__name__}")


# Tests

def test_field_validates_modulus():
    assert str(Field.mod(7)) == 'GF(7)'
    assert str(RATIONALS) == 'Q'
    with pytest.raises(FieldError):
        Field.mod(15)
    with pytest.raises(FieldError):
        Field.mod(1)


def test_shape_checks():
    with pytest.raises(ShapeError):
        ScalarMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(ShapeError):
        ScalarMatrix(2, 2, (1, 2, 3))
    with pytest.raises(ShapeError):
        stack(identity(2), identity(3))


def test_rank_of_simple_matrices():
    assert rank_exact(identity(4)) == 4
    assert rank_exact(zeros(3, 5)) == 0
    assert rank_exact(ScalarMatrix.from_rows([])) == 0
    assert rank_exact(ScalarMatrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])) == 2
    assert rank_mod_p(ScalarMatrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]]), P) == 2


def test_rank_exact_handles_fractions():
    matrix = ScalarMatrix.from_rows([[Fraction(1, 2), Fraction(1, 3)], [3, 2]])
    assert rank_exact(matrix) == 1
    assert rank_mod_p(matrix, P) == 1


def test_rank_exact_matches_sympy():
    rng = np.random.default_rng(7)
    for rows, cols, rank in [(6, 8, 4), (9, 5, 5), (12, 12, 7)]:
        left = rng.integers(-50, 50, size=(rows, rank))
        right = rng.integers(-50, 50, size=(rank, cols))
        array = (left.astype(object) @ right.astype(object))
        matrix = ScalarMatrix.from_array(array)
        expected = Matrix(array.tolist()).rank()
        assert rank_exact(matrix) == expected
        assert rank_mod_p(matrix, P) == expected


def test_rank_exact_with_large_entries():
    big = 2 ** 80
    matrix = ScalarMatrix.from_rows([[big, 1], [big + 1, 1], [2 * big + 1, 2]])
    assert rank_exact(matrix) == 2


def test_rank_mod_p_can_drop():
    # determinant 14 vanishes modulo 7
    matrix = ScalarMatrix.from_rows([[3, 1], [1, 5]])
    assert rank_exact(matrix) == 2
    assert rank_mod_p(matrix, 7) == 1
    assert rank_mod_p(matrix, 11) == 2


def test_reduce_mod():
    matrix = ScalarMatrix.from_rows([[-1, Fraction(1, 2)]])
    reduced = matrix.reduce_mod(7)
    assert reduced.entries == (6, 4)
    assert reduced.reduce_mod(7) is reduced
    with pytest.raises(FieldError):
        reduced.reduce_mod(11)
    with pytest.raises(FieldError):
        ScalarMatrix.from_rows([[Fraction(1, 7)]]).reduce_mod(7)


def test_modular_echelon_membership():
    matrix = ScalarMatrix.from_rows([[1, 0, 2], [0, 1, 3]])
    echelon = ModularEchelon.build(matrix, P)
    assert echelon.rank == 2
    assert echelon.contains([2, 5, 19])
    assert not echelon.contains([0, 0, 1])
    with pytest.raises(ShapeError):
        echelon.contains([1, 0])


def test_augment_row_and_stack():
    matrix = identity(2)
    assert rank_exact(augment_row(matrix, [1, 1])) == 2
    assert augment_row(matrix, [1, 1]).rows == 3
    with pytest.raises(FieldError):
        stack(identity(2), identity(2, Field.mod(7)))


def test_random_prime_range_and_reproducibility():
    first = random_prime(np.random.default_rng(3))
    second = random_prime(np.random.default_rng(3))
    assert first == second
    assert PRIME_LOW <= first < PRIME_HIGH + 2 ** 20
    assert isprime(first)


def test_inexact_entries_are_rejected():
    with pytest.raises(FieldError):
        ScalarMatrix.from_rows([[1, 0.5]])
    with pytest.raises(FieldError):
        rank_exact(ScalarMatrix(1, 2, (1, 2.7)))
    assert ScalarMatrix.from_rows([[np.int64(3), Fraction(1, 2)]]).entries == (3, Fraction(1, 2))


def test_rank_mod_p_never_exceeds_rank_exact():
    rng = np.random.default_rng(11)
    for _ in range(20):
        rows, cols = (int(x) for x in rng.integers(1, 8, size=2))
        matrix = ScalarMatrix.from_array(rng.integers(-6, 6, size=(rows, cols), endpoint=True).astype(object))
        exact = rank_exact(matrix)
        for p in (2, 3, 7, P):
            assert rank_mod_p(matrix, p) <= exact


def test_appending_a_row_raises_rank_by_at_most_one():
    rng = np.random.default_rng(5)
    for matrix in [zeros(6, 7)] + [_random_matrix(rng, 6, 7, rank) for rank in range(1, 6)]:
        before = rank_exact(matrix)
        for _ in range(5):
            row = rng.integers(-9, 9, size=7, endpoint=True).tolist()
            assert rank_exact(augment_row(matrix, row)) in (before, before + 1)
        assert rank_exact(augment_row(matrix, list(matrix.row(0)))) == before


def test_rank_invariant_under_permutation_and_scaling():
    rng = np.random.default_rng(9)
    matrix = _random_matrix(rng, 8, 9, 5)
    array = matrix.to_array()
    expected = rank_exact(matrix)
    assert expected == 5
    permuted = array[rng.permutation(8)][:, rng.permutation(9)]
    assert rank_exact(ScalarMatrix.from_array(permuted)) == expected
    assert rank_mod_p(ScalarMatrix.from_array(permuted), P) == expected
    factors = [int(x) for x in rng.integers(1, 20, size=8)]
    scaled = [[factor * (-1) ** i * x for x in array[i]] for i, factor in enumerate(factors)]
    assert rank_exact(ScalarMatrix.from_rows(scaled)) == expected


def test_random_prime_rank_matches_exact_rank():
    rng = np.random.default_rng(2024)
    full = ScalarMatrix.from_array(rng.integers(-1000, 1000, size=(10, 10), endpoint=True).astype(object))
    deficient = _random_matrix(rng, 10, 10, 6, bound=1000)
    for matrix in (full, deficient):
        p = random_prime(rng)
        assert p > 2 ** 50
        assert rank_mod_p(matrix, p) == rank_exact(matrix)
    assert rank_exact(deficient) == 6
