"""Finite-dimensional unital associative algebras over Q.

An algebra is presented by structure constants ``e_i e_j = sum_k c[i][j][k] e_k``
together with a unit vector. Associativity and the unit laws are checked
exhaustively on basis triples when the algebra is built.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactlin import (
    Matrix,
    Subspace,
    format_scalar,
    is_zero,
    nullspace,
    rank,
    solve_affine,
    unit_vector,
    vec,
    zero_vector,
)

MAX_DIM = 32


class AlgebraError(ValueError):
    """Raised when a structure tensor fails the algebra axioms."""

    def __init__(self, message: str, triple: tuple | None = None):
        super().__init__(message)
        self.triple = triple


class NotInvertibleError(ArithmeticError):
    pass


class Algebra:
    """Unital associative algebra given by a structure tensor.

    ``basis_matrices`` is set for algebras ingested from a matrix presentation
    and enables :meth:`to_matrix` / :meth:`from_matrix`.
    """

    def __init__(self, structure, unit, name: str = "", basis_labels=None,
                 basis_matrices=None):
        dim = len(unit)
        if dim > MAX_DIM:
            raise AlgebraError(f"dimension {dim} exceeds the cap of {MAX_DIM}")
        if len(structure) != dim or any(len(row) != dim for row in structure):
            raise AlgebraError("structure tensor must be dim x dim x dim")
        table = []
        for i, row in enumerate(structure):
            trow = []
            for j, prod in enumerate(row):
                if len(prod) != dim:
                    raise AlgebraError(f"structure[{i}][{j}] has length {len(prod)}, expected {dim}",
                                       (i, j, None))
                trow.append({k: Fraction(c) for k, c in enumerate(prod) if c})
            table.append(trow)
        self.dim = dim
        self.name = name
        self._table = table
        self.unit_coords = vec(unit)
        self.basis_labels = tuple(basis_labels) if basis_labels else tuple(f"e{i}" for i in range(dim))
        self.basis_matrices = tuple(basis_matrices) if basis_matrices is not None else None
        self._validate()

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_matrices(cls, basis: Sequence[Matrix], name: str = "", basis_labels=None) -> "Algebra":
        """Ingest a matrix subalgebra given by a linearly independent basis.

        Products must stay inside the span and the identity matrix must lie in it.
        """
        if not basis:
            raise AlgebraError("empty basis")
        size = basis[0].nrows
        flat = Matrix.from_columns([b.flatten() for b in basis], size * size)
        if rank(flat) != len(basis):
            raise AlgebraError("basis matrices are linearly dependent")

        def coords(mat: Matrix):
            sol = solve_affine(flat, mat.flatten())
            if sol is None:
                return None
            return sol[0]

        structure = []
        for i, x in enumerate(basis):
            row = []
            for j, y in enumerate(basis):
                c = coords(x @ y)
                if c is None:
                    raise AlgebraError(f"product of basis matrices {i},{j} leaves the span", (i, j, None))
                row.append(c)
            structure.append(row)
        unit = coords(Matrix.identity(size))
        if unit is None:
            raise AlgebraError("identity matrix is not in the span")
        return cls(structure, unit, name=name, basis_labels=basis_labels, basis_matrices=basis)

    # -- validation ------------------------------------------------------------

    def _validate(self) -> None:
        d = self.dim
        for i in range(d):
            ei = self.basis_element(i)
            if self.unit * ei != ei:
                raise AlgebraError(f"unit is not a left identity on basis element {i}", (i, None, None))
            if ei * self.unit != ei:
                raise AlgebraError(f"unit is not a right identity on basis element {i}", (i, None, None))
        for i in range(d):
            for j in range(d):
                ij = self._table[i][j]
                for k in range(d):
                    left: dict = {}
                    for p, c in ij.items():
                        for q, cc in self._table[p][k].items():
                            left[q] = left.get(q, 0) + c * cc
                    right: dict = {}
                    for p, c in self._table[j][k].items():
                        for q, cc in self._table[i][p].items():
                            right[q] = right.get(q, 0) + c * cc
                    if {q: v for q, v in left.items() if v} != {q: v for q, v in right.items() if v}:
                        raise AlgebraError(
                            f"associativity fails on basis triple ({i},{j},{k})", (i, j, k))

    # -- elements ----------------------------------------------------------------

    def element(self, coords: Iterable) -> "Element":
        return Element(self, vec(coords))

    def basis_element(self, i: int) -> "Element":
        return Element(self, unit_vector(self.dim, i))

    def basis(self) -> list:
        return [self.basis_element(i) for i in range(self.dim)]

    @property
    def zero(self) -> "Element":
        return Element(self, zero_vector(self.dim))

    @property
    def unit(self) -> "Element":
        return Element(self, self.unit_coords)

    def product_coords(self, x: Sequence, y: Sequence) -> tuple:
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            row = self._table[i]
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = a * b
                for k, c in row[j].items():
                    out[k] += ab * c
        return tuple(out)

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        return self._table[i][j].get(k, Fraction(0))

    def structure(self) -> list:
        return [[[self.structure_constant(i, j, k) for k in range(self.dim)]
                 for j in range(self.dim)] for i in range(self.dim)]

    def left_matrix(self, x: "Element") -> Matrix:
        """Matrix of ``y -> x y``."""
        cols = [self.product_coords(x.coords, unit_vector(self.dim, j)) for j in range(self.dim)]
        return Matrix.from_columns(cols, self.dim)

    def right_matrix(self, x: "Element") -> Matrix:
        """Matrix of ``y -> y x``."""
        cols = [self.product_coords(unit_vector(self.dim, j), x.coords) for j in range(self.dim)]
        return Matrix.from_columns(cols, self.dim)

    def to_matrix(self, x: "Element") -> Matrix:
        if self.basis_matrices is None:
            raise ValueError(f"algebra {self.name!r} has no matrix presentation")
        size = self.basis_matrices[0].nrows
        out = Matrix.zeros(size, size)
        for c, b in zip(x.coords, self.basis_matrices):
            if c:
                out = out + b.scale(c)
        return out

    def from_matrix(self, mat: Matrix) -> "Element":
        if self.basis_matrices is None:
            raise ValueError(f"algebra {self.name!r} has no matrix presentation")
        flat = Matrix.from_columns([b.flatten() for b in self.basis_matrices], mat.nrows * mat.ncols)
        sol = solve_affine(flat, mat.flatten())
        if sol is None:
            raise ValueError("matrix does not lie in the algebra")
        return self.element(sol[0])

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "unit": [format_scalar(x) for x in self.unit_coords],
            "basis_labels": list(self.basis_labels),
            "structure": [[[format_scalar(c) for c in prod] for prod in row] for row in self.structure()],
        }

    def __repr__(self) -> str:
        return f"Algebra({self.name!r}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class Element:
    algebra: Algebra
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.algebra.dim:
            raise ValueError("coordinate length does not match algebra dimension")

    def _same(self, other: "Element") -> None:
        if not isinstance(other, Element) or other.algebra is not self.algebra:
            raise ValueError("elements belong to different algebras")

    def __eq__(self, other) -> bool:
        return isinstance(other, Element) and other.algebra is self.algebra and other.coords == self.coords

    def __hash__(self) -> int:
        return hash((id(self.algebra), self.coords))

    def __add__(self, other: "Element") -> "Element":
        self._same(other)
        return Element(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Element") -> "Element":
        self._same(other)
        return Element(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Element":
        return Element(self.algebra, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, Element):
            self._same(other)
            return Element(self.algebra, self.algebra.product_coords(self.coords, other.coords))
        c = Fraction(other)
        return Element(self.algebra, tuple(c * a for a in self.coords))

    def __rmul__(self, other):
        c = Fraction(other)
        return Element(self.algebra, tuple(c * a for a in self.coords))

    def is_zero(self) -> bool:
        return is_zero(self.coords)

    def __repr__(self) -> str:
        return "Element(" + ", ".join(format_scalar(c) for c in self.coords) + ")"


def mul(x: Element, y: Element) -> Element:
    return x * y


def commutator(x: Element, y: Element) -> Element:
    return x * y - y * x


def jordan(x: Element, y: Element) -> Element:
    return x * y + y * x


def center(a: Algebra) -> Subspace:
    """Coordinates of elements commuting with every basis element."""
    rows = []
    for e in a.basis():
        diff = a.right_matrix(e) - a.left_matrix(e)  # z e - e z as a function of z
        rows.extend(diff.entries)
    if not rows:
        return Subspace.full(a.dim)
    return nullspace(Matrix(len(rows), a.dim, tuple(rows)))


def is_invertible(x: Element) -> bool:
    return rank(x.algebra.left_matrix(x)) == x.algebra.dim


def _shift_order():
    yield 0
    k = 1
    while True:
        yield k
        yield -k
        k += 1


def find_invertible_shift(x: Element) -> int:
    """First k in the order 0, 1, -1, 2, -2, ... with ``k*1 + x`` invertible."""
    unit = x.algebra.unit
    for k in _shift_order():
        if is_invertible(unit * k + x):
            return k
    raise AssertionError("unreachable")  # pragma: no cover


def inverse(x: Element) -> Element:
    a = x.algebra
    sol = solve_affine(a.left_matrix(x), a.unit_coords)
    if sol is None:
        raise NotInvertibleError(f"{x!r} is not invertible")
    y = a.element(sol[0])
    if x * y != a.unit or y * x != a.unit:
        raise NotInvertibleError(f"{x!r} has no two-sided inverse")
    return y


def is_idempotent(x: Element) -> bool:
    return x * x == x


def idempotents_sample(a: Algebra, budget: int = 16, seed: int = 0) -> list:
    """A verified, duplicate-free list of idempotents.

    Always starts with 0, the unit and every idempotent basis element, then
    grows by the deterministic constructions ``P + P X (1-P)`` and
    ``P + (1-P) X P`` over basis X, and finally by random conjugates
    ``u P u^-1`` and random corner perturbations until ``budget`` is reached.
    """
    rng = random.Random(seed)
    out: list = []
    seen: set = set()

    def offer(p: Element, force: bool = False) -> bool:
        if (not force and len(out) >= budget) or p.coords in seen or not is_idempotent(p):
            return False
        seen.add(p.coords)
        out.append(p)
        return True

    one = a.unit
    offer(a.zero, force=True)
    offer(one, force=True)
    for e in a.basis():
        offer(e, force=True)
    for p in list(out):
        for x in a.basis():
            offer(p + p * x * (one - p))
            offer(p + (one - p) * x * p)
    attempts = 0
    while len(out) < budget and attempts < 50 * budget:
        attempts += 1
        p = rng.choice(out)
        x = a.element(rng.randint(-2, 2) for _ in range(a.dim))
        if rng.random() < 0.5:
            offer(p + p * x * (one - p))
        else:
            u = x + one * find_invertible_shift(x)
            offer(u * p * inverse(u))
    return out
