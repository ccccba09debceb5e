"""Exact and modular rank computation on small dense matrices.

Entries are Python integers (or Fractions on the rational side) held in numpy
object arrays, so intermediate values never overflow.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import lcm
from numbers import Integral
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime, nextprime


COMPOSITE_MODULUS_MESSAGE = "Modulus is not prime"
FIELD_MISMATCH_MESSAGE = "Matrices live over different fields"
INEXACT_ENTRY_MESSAGE = "Entries must be integers or Fractions"

PRIME_LOW = 2 ** 62
PRIME_HIGH = 2 ** 63 - 2 ** 20


class FieldError(ValueError):
    pass


class ShapeError(ValueError):
    pass


class FieldKind(Enum):
    RATIONAL = 'rational'
    MODP = 'mod-p'


@dataclass(frozen=True)
class Field:
    kind: FieldKind
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind is FieldKind.MODP:
            if self.p is None or self.p < 2 or not isprime(self.p):
                raise FieldError(f'{COMPOSITE_MODULUS_MESSAGE}: {self.p}')
        elif self.p is not None:
            raise FieldError('The rational field takes no modulus')

    @classmethod
    def mod(cls, p: int) -> 'Field':
        return cls(FieldKind.MODP, int(p))

    def __str__(self):
        return 'Q' if self.kind is FieldKind.RATIONAL else f'GF({self.p})'


RATIONALS = Field(FieldKind.RATIONAL)


def _exact_scalar(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Integral):
        return int(value)
    raise FieldError(f'{INEXACT_ENTRY_MESSAGE}: {value!r}')


def _reduce_scalar(value, p: int) -> int:
    if isinstance(value, Fraction):
        if value.denominator % p == 0:
            raise FieldError(f'Denominator {value.denominator} vanishes modulo {p}')
        return value.numerator * pow(value.denominator, -1, p) % p
    return int(value) % p


@dataclass(frozen=True)
class ScalarMatrix:
    """Dense ``rows x cols`` matrix stored row-major, tagged with its field."""

    rows: int
    cols: int
    entries: Tuple
    field: Field = RATIONALS

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError(f'Negative shape {self.rows}x{self.cols}')
        if len(self.entries) != self.rows * self.cols:
            raise ShapeError(f'Expected {self.rows * self.cols} entries, got {len(self.entries)}')
        if self.field.kind is FieldKind.MODP:
            p = self.field.p
            if any(not (0 <= x < p) for x in self.entries):
                raise FieldError(f'Entries of a matrix over {self.field} must lie in [0, p)')

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None,
                  field: Field = RATIONALS) -> 'ScalarMatrix':
        rows = [list(row) for row in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise ShapeError(f'Row {i} has {len(row)} entries, expected {cols}')
        entries = [_exact_scalar(x) for row in rows for x in row]
        if field.kind is FieldKind.MODP:
            entries = [_reduce_scalar(x, field.p) for x in entries]
        return cls(len(rows), cols, tuple(entries), field)

    @classmethod
    def from_array(cls, array: np.ndarray, field: Field = RATIONALS) -> 'ScalarMatrix':
        rows, cols = array.shape
        return cls.from_rows(array.tolist(), cols, field)

    def row(self, i: int) -> Tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> List[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def to_array(self) -> np.ndarray:
        array = np.empty((self.rows, self.cols), dtype=object)
        for i in range(self.rows):
            array[i, :] = self.row(i)
        return array

    def reduce_mod(self, p: int) -> 'ScalarMatrix':
        """The same matrix over GF(p); integer and fractional entries are mapped into [0, p)."""
        field = Field.mod(p)
        if self.field.kind is FieldKind.MODP:
            if self.field.p != field.p:
                raise FieldError(f'{FIELD_MISMATCH_MESSAGE}: {self.field} vs {field}')
            return self
        return ScalarMatrix(self.rows, self.cols, tuple(_reduce_scalar(x, p) for x in self.entries), field)


def _integer_rows(matrix: ScalarMatrix) -> np.ndarray:
    """Object array of the matrix with every row scaled to integers (rank is unchanged)."""
    array = matrix.to_array()
    for i in range(matrix.rows):
        denominators = [x.denominator for x in array[i] if isinstance(x, Fraction)]
        scale = lcm(*denominators) if denominators else 1
        array[i] = [int(_exact_scalar(x) * scale) for x in array[i]]
    return array


def rank_exact(matrix: ScalarMatrix) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination with row pivoting.

    After each step every active entry is a minor of the input, so the division
    by the previous pivot is exact.
    """
    if matrix.field.kind is not FieldKind.RATIONAL:
        raise FieldError(f'Exact rank needs a rational matrix, got one over {matrix.field}')
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    a = _integer_rows(matrix)
    rows, cols = a.shape
    rank = 0
    previous = 1
    for col in range(cols):
        if rank == rows:
            break
        candidates = np.flatnonzero(a[rank:, col] != 0)
        if candidates.size == 0:
            continue
        pivot_row = rank + int(candidates[0])
        if pivot_row != rank:
            a[[rank, pivot_row]] = a[[pivot_row, rank]]
        pivot = a[rank, col]
        if rank + 1 < rows:
            a[rank + 1:, col + 1:] = (pivot * a[rank + 1:, col + 1:]
                                      - np.outer(a[rank + 1:, col], a[rank, col + 1:])) // previous
            a[rank + 1:, col] = 0
        previous = pivot
        rank += 1
    return rank


class ModularEchelon:
    """Row echelon basis of a matrix over GF(p), pivots normalised to 1."""

    def __init__(self, p: int, cols: int, basis: np.ndarray, pivots: List[int]):
        self.p = p
        self.cols = cols
        self.basis = basis
        self.pivots = pivots

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @classmethod
    def build(cls, matrix: ScalarMatrix, p: int) -> 'ModularEchelon':
        reduced = matrix.reduce_mod(p)
        a = reduced.to_array()
        rows, cols = reduced.rows, reduced.cols
        pivots = []
        rank = 0
        for col in range(cols):
            if rank == rows:
                break
            candidates = np.flatnonzero(a[rank:, col] != 0)
            if candidates.size == 0:
                continue
            pivot_row = rank + int(candidates[0])
            if pivot_row != rank:
                a[[rank, pivot_row]] = a[[pivot_row, rank]]
            inverse = pow(int(a[rank, col]), -1, p)
            a[rank, col:] = (a[rank, col:] * inverse) % p
            if rank + 1 < rows:
                a[rank + 1:, col:] = (a[rank + 1:, col:] - np.outer(a[rank + 1:, col], a[rank, col:])) % p
            pivots.append(col)
            rank += 1
        return cls(p, cols, a[:rank].copy(), pivots)

    def contains(self, row: Sequence) -> bool:
        """Whether ``row`` lies in the row space spanned by the basis."""
        if len(row) != self.cols:
            raise ShapeError(f'Row has {len(row)} entries, expected {self.cols}')
        p = self.p
        r = np.array([_reduce_scalar(x, p) for x in row], dtype=object)
        for basis_row, col in zip(self.basis, self.pivots):
            coefficient = r[col]
            if coefficient:
                r = (r - coefficient * basis_row) % p
        return not any(r)


def rank_mod_p(matrix: ScalarMatrix, p: int) -> int:
    """Rank over GF(p); never larger than the rank over Q of an integer preimage."""
    if matrix.rows == 0 or matrix.cols == 0:
        Field.mod(p)
        return 0
    return ModularEchelon.build(matrix, p).rank


def _check_compatible(first: ScalarMatrix, second_cols: int, second_field: Field) -> None:
    if first.cols != second_cols:
        raise ShapeError(f'Column counts differ: {first.cols} vs {second_cols}')
    if first.field != second_field:
        raise FieldError(f'{FIELD_MISMATCH_MESSAGE}: {first.field} vs {second_field}')


def stack(first: ScalarMatrix, second: ScalarMatrix) -> ScalarMatrix:
    """Vertical concatenation."""
    _check_compatible(first, second.cols, second.field)
    return ScalarMatrix(first.rows + second.rows, first.cols, first.entries + second.entries, first.field)


def augment_row(matrix: ScalarMatrix, row: Sequence) -> ScalarMatrix:
    extra = ScalarMatrix.from_rows([row], matrix.cols, matrix.field)
    return stack(matrix, extra)


def random_prime(rng: np.random.Generator) -> int:
    """A prime in [2^62, 2^63) found by searching upwards from a random start."""
    start = int(rng.integers(PRIME_LOW, PRIME_HIGH))
    return int(nextprime(start))

