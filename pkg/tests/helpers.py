"""Small constructors shared by the test modules."""

import random

from mnderive.algebra import Algebra, find_invertible_shift
from mnderive.exactlin import Matrix
from mnderive.fixtures import unit_matrix


def matrix_algebra(n: int, positions) -> Algebra:
    units = [unit_matrix(n, i, j) for i, j in positions]
    labels = [f"E{i + 1}{j + 1}" for i, j in positions]
    return Algebra.from_matrices(units, basis_labels=labels)


def full(n: int) -> Algebra:
    return matrix_algebra(n, [(i, j) for i in range(n) for j in range(n)])


def triangular(n: int) -> Algebra:
    return matrix_algebra(n, [(i, j) for i in range(n) for j in range(n) if i <= j])


def random_element(a: Algebra, rng: random.Random, bound: int = 3):
    return a.element(rng.randint(-bound, bound) for _ in range(a.dim))


def random_invertible(a: Algebra, rng: random.Random):
    x = random_element(a, rng)
    return x + a.unit * find_invertible_shift(x)


def mat(rows):
    return Matrix.from_rows(rows)
