"""Linear self-maps of an algebra and derivation-type classifiers.

A map is stored as its matrix on coordinate vectors; its coordinates in
"map space" are the row-major flattening of that matrix, so a space of maps
is a :class:`~mnderive.exactlin.Subspace` of dimension ``dim**2``.

Two independent routes compute derivation-type spaces:

* :func:`mn_derivation_space` stacks the Kronecker-form rows of
  :func:`mn_constraint_rows` for every basis pair;
* :func:`derivation_space`, :func:`jordan_derivation_space` and
  :func:`lie_derivation_space` evaluate each defining identity on the
  elementary maps ``E_pq`` and use linearity in the map.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .algebra import Algebra, Element, commutator, jordan
from .exactlin import Matrix, RowReducer, Subspace, format_scalar, parse_scalar


@dataclass(frozen=True, eq=False)
class LinearMap:
    algebra: Algebra
    matrix: Matrix

    def __post_init__(self):
        d = self.algebra.dim
        if (self.matrix.nrows, self.matrix.ncols) != (d, d):
            raise ValueError(f"map matrix must be {d}x{d}")

    @classmethod
    def zero(cls, algebra: Algebra) -> "LinearMap":
        return cls(algebra, Matrix.zeros(algebra.dim, algebra.dim))

    @classmethod
    def identity(cls, algebra: Algebra) -> "LinearMap":
        return cls(algebra, Matrix.identity(algebra.dim))

    @classmethod
    def from_vector(cls, algebra: Algebra, v: Sequence) -> "LinearMap":
        d = algebra.dim
        if len(v) != d * d:
            raise ValueError(f"map vector must have length {d * d}")
        return cls(algebra, Matrix.from_rows([v[i * d:(i + 1) * d] for i in range(d)], d))

    @classmethod
    def from_images(cls, algebra: Algebra, images: Sequence[Element]) -> "LinearMap":
        """The map sending basis element ``i`` to ``images[i]``."""
        return cls(algebra, Matrix.from_columns([x.coords for x in images], algebra.dim))

    @classmethod
    def inner(cls, x: Element) -> "LinearMap":
        """``ad(x): t -> x t - t x``."""
        a = x.algebra
        return cls(a, a.left_matrix(x) - a.right_matrix(x))

    @classmethod
    def random(cls, algebra: Algebra, rng: random.Random, bound: int = 3) -> "LinearMap":
        d = algebra.dim
        return cls(algebra, Matrix.from_rows(
            [[rng.randint(-bound, bound) for _ in range(d)] for _ in range(d)], d))

    def __call__(self, x: Element) -> Element:
        if x.algebra is not self.algebra:
            raise ValueError("element from a different algebra")
        return Element(self.algebra, self.matrix.apply(x.coords))

    def vector(self) -> tuple:
        return self.matrix.flatten()

    def __add__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.algebra, self.matrix + other.matrix)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.algebra, self.matrix - other.matrix)

    def __mul__(self, c) -> "LinearMap":
        return LinearMap(self.algebra, self.matrix.scale(c))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearMap) and other.algebra is self.algebra and other.matrix == self.matrix

    def __hash__(self) -> int:
        return hash((id(self.algebra), self.matrix))

    def to_dict(self) -> dict:
        return {"algebra": self.algebra.name, "matrix": self.matrix.to_strings()}

    @classmethod
    def from_dict(cls, algebra: Algebra, data: dict) -> "LinearMap":
        rows = [[parse_scalar(x) for x in r] for r in data["matrix"]]
        return cls(algebra, Matrix.from_rows(rows, algebra.dim))


def basis_maps(space: Subspace, algebra: Algebra) -> list:
    return [LinearMap.from_vector(algebra, v) for v in space.basis]


def random_map_in(space: Subspace, algebra: Algebra, rng: random.Random, bound: int = 3) -> LinearMap:
    d2 = algebra.dim ** 2
    v = [Fraction(0)] * d2
    for b in space.basis:
        c = rng.randint(-bound, bound)
        if c:
            v = [x + c * y for x, y in zip(v, b)]
    return LinearMap.from_vector(algebra, v)


# ---------------------------------------------------------------------------
# identities


def mn_residual(delta: LinearMap, s: Element, t: Element, m, n) -> Element:
    """``m d(st) + n d(ts) - m d(s)t - m s d(t) - n d(t)s - n t d(s)``."""
    ds, dt = delta(s), delta(t)
    return (m * delta(s * t) + n * delta(t * s)
            - m * (ds * t) - m * (s * dt) - n * (dt * s) - n * (t * ds))


def derivation_residual(delta: LinearMap, x: Element, y: Element) -> Element:
    return delta(x * y) - delta(x) * y - x * delta(y)


def jordan_residual(delta: LinearMap, x: Element, y: Element) -> Element:
    return delta(jordan(x, y)) - jordan(delta(x), y) - jordan(x, delta(y))


def lie_residual(delta: LinearMap, x: Element, y: Element) -> Element:
    return delta(commutator(x, y)) - commutator(delta(x), y) - commutator(x, delta(y))


def first_failure(delta: LinearMap, residual: Callable) -> tuple | None:
    """First basis pair ``(i, j)`` whose residual is nonzero, or None."""
    basis = delta.algebra.basis()
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            if not residual(delta, x, y).is_zero():
                return (i, j)
    return None


def is_derivation(delta: LinearMap) -> bool:
    return first_failure(delta, derivation_residual) is None


def is_jordan_derivation(delta: LinearMap) -> bool:
    return first_failure(delta, jordan_residual) is None


def is_lie_derivation(delta: LinearMap) -> bool:
    return first_failure(delta, lie_residual) is None


def is_mn_derivation(delta: LinearMap, m: int, n: int) -> bool:
    if m == 0 and n == 0:
        raise ValueError("m and n must not both be zero")
    return first_failure(delta, lambda d, x, y: mn_residual(d, x, y, m, n)) is None


# ---------------------------------------------------------------------------
# spaces


def mn_constraint_rows(s: Element, t: Element, m, n) -> list:
    """The ``dim`` linear equations on the map matrix ``D`` for one pair.

    Row k is ``e_k (x) (m st + n ts) - (m R_t + n L_t)[k] (x) s - (m L_s + n R_s)[k] (x) t``
    in row-major map coordinates, where ``L``/``R`` are left/right multiplication.
    """
    a = s.algebra
    d = a.dim
    m, n = Fraction(m), Fraction(n)
    w = tuple(m * x + n * y for x, y in zip((s * t).coords, (t * s).coords))
    on_s = (a.right_matrix(t).scale(m) + a.left_matrix(t).scale(n)).entries
    on_t = (a.left_matrix(s).scale(m) + a.right_matrix(s).scale(n)).entries
    sc, tc = s.coords, t.coords
    rows = []
    for k in range(d):
        row = [Fraction(0)] * (d * d)
        for q, x in enumerate(w):
            if x:
                row[k * d + q] += x
        ks, kt = on_s[k], on_t[k]
        for p in range(d):
            cs, ct = ks[p], kt[p]
            if not cs and not ct:
                continue
            base = p * d
            for q in range(d):
                v = cs * sc[q] + ct * tc[q]
                if v:
                    row[base + q] -= v
        rows.append(row)
    return rows


def mn_derivation_space(a: Algebra, m: int, n: int) -> Subspace:
    if m == 0 and n == 0:
        raise ValueError("m and n must not both be zero")
    red = RowReducer(a.dim ** 2)
    basis = a.basis()
    for x in basis:
        for y in basis:
            red.add_rows(mn_constraint_rows(x, y, m, n))
    return red.nullspace()


def _space_from_residual(a: Algebra, residual: Callable) -> Subspace:
    d = a.dim
    basis = a.basis()
    pairs = [(x, y) for x in basis for y in basis]
    columns = []
    for p in range(d):
        for q in range(d):
            elementary = LinearMap(a, Matrix(d, d, tuple(
                tuple(Fraction(1) if (i, j) == (p, q) else Fraction(0) for j in range(d))
                for i in range(d))))
            col = []
            for x, y in pairs:
                col.extend(residual(elementary, x, y).coords)
            columns.append(col)
    red = RowReducer(d * d)
    red.add_rows(zip(*columns))
    return red.nullspace()


def derivation_space(a: Algebra) -> Subspace:
    return _space_from_residual(a, derivation_residual)


def jordan_derivation_space(a: Algebra) -> Subspace:
    return _space_from_residual(a, jordan_residual)


def lie_derivation_space(a: Algebra) -> Subspace:
    return _space_from_residual(a, lie_residual)


def inner_derivation_space(a: Algebra) -> Subspace:
    return Subspace.span([LinearMap.inner(e).vector() for e in a.basis()], a.dim ** 2)


def unit_annihilating_space(a: Algebra) -> Subspace:
    """Maps with ``d(1) = 0``."""
    d = a.dim
    rows = []
    for k in range(d):
        row = [Fraction(0)] * (d * d)
        for q, u in enumerate(a.unit_coords):
            row[k * d + q] = u
        rows.append(row)
    red = RowReducer(d * d)
    red.add_rows(rows)
    return red.nullspace()


def format_map(delta: LinearMap) -> list:
    return [[format_scalar(x) for x in r] for r in delta.matrix.entries]
