"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`. Matrices are small immutable dense
grids, and linear subspaces are kept in a canonical reduced row-echelon form
so that equality of subspaces is a plain comparison of their bases.

Elimination is done fraction-free on integer rows (each row is scaled to
primitive integer content), and only the final echelon form is normalised to
rationals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Scalar = Fraction
Vector = tuple  # tuple[Fraction, ...]

_SCALAR_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class ScalarParseError(ValueError):
    pass


def parse_scalar(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction. Integers are accepted as-is."""
    if isinstance(text, bool):
        raise ScalarParseError(f"invalid scalar {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ScalarParseError(f"invalid scalar {text!r}")
    match = _SCALAR_RE.match(text)
    if match is None:
        raise ScalarParseError(f"invalid scalar {text!r}")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) is not None else 1
    if den == 0:
        raise ScalarParseError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_scalar(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def vec(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vector(n: int, i: int) -> Vector:
    out = [Fraction(0)] * n
    out[i] = Fraction(1)
    return tuple(out)


def is_zero(v: Sequence) -> bool:
    return not any(v)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), Fraction(0))


@dataclass(frozen=True)
class Matrix:
    nrows: int
    ncols: int
    entries: tuple  # tuple of row tuples

    def __post_init__(self):
        if len(self.entries) != self.nrows or any(len(r) != self.ncols for r in self.entries):
            raise ValueError("entry count does not match shape")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], ncols: int | None = None) -> "Matrix":
        grid = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if ncols is None:
            if not grid:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(grid[0])
        return cls(len(grid), ncols, grid)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        row = (Fraction(0),) * ncols
        return cls(nrows, ncols, (row,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(unit_vector(n, i) for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        return cls.from_rows(zip(*columns), len(columns)) if columns else cls.zeros(nrows, 0)

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "Matrix":
        if self.nrows == 0:
            return Matrix.zeros(self.ncols, 0)
        return Matrix(self.ncols, self.nrows, tuple(zip(*self.entries)))

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.ncols:
            raise ValueError(f"vector length {len(v)} != {self.ncols} columns")
        return tuple(dot(r, v) for r in self.entries)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = [other.column(j) for j in range(other.ncols)]
            return Matrix(self.nrows, other.ncols,
                          tuple(tuple(dot(r, c) for c in cols) for r in self.entries))
        return self.apply(other)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.nrows, self.ncols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.nrows, self.ncols, tuple(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def scale(self, c) -> "Matrix":
        c = Fraction(c)
        return Matrix(self.nrows, self.ncols, tuple(tuple(c * a for a in r) for r in self.entries))

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise ValueError("column mismatch")
        return Matrix(self.nrows + other.nrows, self.ncols, self.entries + other.entries)

    def flatten(self) -> Vector:
        return tuple(x for r in self.entries for x in r)

    def _same_shape(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")

    def to_strings(self) -> list:
        return [[format_scalar(x) for x in r] for r in self.entries]


# ---------------------------------------------------------------------------
# fraction-free elimination


def _primitive(row: list) -> list:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                break
    if g > 1:
        row = [x // g for x in row]
    for x in row:
        if x:
            if x < 0:
                row = [-y for y in row]
            break
    return row


def _integer_row(values: Sequence) -> list:
    """Scale a rational row to a primitive integer row with positive leading entry."""
    den = 1
    for x in values:
        x = Fraction(x)
        if x.denominator != 1:
            den = den * x.denominator // gcd(den, x.denominator)
    out = []
    for x in values:
        x = Fraction(x)
        out.append(x.numerator * (den // x.denominator))
    return _primitive(out)


class RowReducer:
    """Incremental integer echelon form of a growing row set.

    Rows are reduced one at a time against the current pivot rows; the row
    space only ever grows. ``echelon()`` normalises to RREF on demand.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._pivots: dict[int, list] = {}
        self._order: list[int] = []  # sorted pivot columns

    @property
    def rank(self) -> int:
        return len(self._order)

    def add_row(self, values: Sequence) -> bool:
        """Add one row. Returns True when the rank increased."""
        if len(values) != self.ncols:
            raise ValueError(f"row length {len(values)} != {self.ncols}")
        row = _integer_row(values)
        for pc in self._order:
            x = row[pc]
            if not x:
                continue
            prow = self._pivots[pc]
            p = prow[pc]
            g = gcd(p, x)
            a, b = p // g, x // g
            row = [a * r - b * s for r, s in zip(row, prow)]
            row = _primitive(row)
        for lead, x in enumerate(row):
            if x:
                break
        else:
            return False
        self._pivots[lead] = row
        # keep pivot order sorted
        lo, hi = 0, len(self._order)
        while lo < hi:
            mid = (lo + hi) // 2
            if self._order[mid] < lead:
                lo = mid + 1
            else:
                hi = mid
        self._order.insert(lo, lead)
        return True

    def add_rows(self, rows: Iterable[Sequence]) -> None:
        for r in rows:
            self.add_row(r)

    def echelon(self) -> tuple:
        """Reduced row-echelon rows (rational), one per pivot."""
        rows = {pc: [Fraction(x, self._pivots[pc][pc]) for x in self._pivots[pc]]
                for pc in self._order}
        for idx in range(len(self._order) - 1, -1, -1):
            pc = self._order[idx]
            prow = rows[pc]
            for other in self._order[:idx]:
                orow = rows[other]
                f = orow[pc]
                if f:
                    rows[other] = [a - f * b for a, b in zip(orow, prow)]
        return tuple(tuple(rows[pc]) for pc in self._order)

    def pivot_columns(self) -> tuple:
        return tuple(self._order)

    def nullspace(self) -> "Subspace":
        return _nullspace_from_rref(self.echelon(), self.pivot_columns(), self.ncols)


def rref(m: Matrix) -> tuple:
    """Return ``(R, rank)`` with R the reduced row-echelon form of ``m`` (same shape)."""
    red = RowReducer(m.ncols)
    red.add_rows(m.entries)
    rows = red.echelon()
    pad = (Fraction(0),) * m.ncols
    full = rows + (pad,) * (m.nrows - len(rows))
    return Matrix(m.nrows, m.ncols, full), len(rows)


def rank(m: Matrix) -> int:
    red = RowReducer(m.ncols)
    red.add_rows(m.entries)
    return red.rank


def _nullspace_from_rref(rows, pivots, ncols) -> "Subspace":
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(rows, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    # vectors indexed by free columns are already independent; canonicalise
    return Subspace.span(basis, ncols)


def nullspace(m: Matrix) -> "Subspace":
    """Basis of ``{x : m x = 0}`` as a canonical Subspace."""
    red = RowReducer(m.ncols)
    red.add_rows(m.entries)
    return red.nullspace()


def solve_affine(m: Matrix, rhs: Sequence):
    """Solve ``m x = rhs``.

    Returns ``None`` when inconsistent, otherwise ``(particular, homogeneous)``
    where the particular solution has zeros in all free coordinates.
    """
    if len(rhs) != m.nrows:
        raise ValueError("rhs length must equal row count")
    aug = RowReducer(m.ncols + 1)
    for r, b in zip(m.entries, rhs):
        aug.add_row(tuple(r) + (Fraction(b),))
    if m.ncols in aug.pivot_columns():
        return None
    rows = aug.echelon()
    x = [Fraction(0)] * m.ncols
    for row, pc in zip(rows, aug.pivot_columns()):
        x[pc] = row[m.ncols]
    homogeneous = _nullspace_from_rref([r[:m.ncols] for r in rows],
                                       aug.pivot_columns(), m.ncols)
    return tuple(x), homogeneous


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^n stored by its RREF basis."""

    ambient_dim: int
    basis: tuple

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        red = RowReducer(ambient_dim)
        red.add_rows(vectors)
        return cls(ambient_dim, red.echelon())

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(unit_vector(n, i) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(f"ambient dimension mismatch: {self.ambient_dim} != {other.ambient_dim}")

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise ValueError("vector length does not match ambient dimension")
        # reduce v against the RREF basis using its pivots
        residual = list(Fraction(x) for x in v)
        for row in self.basis:
            pc = next(i for i, x in enumerate(row) if x)
            f = residual[pc]
            if f:
                residual = [a - f * b for a, b in zip(residual, row)]
        return not any(residual)

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return self.dim <= other.dim and all(other.contains(b) for b in self.basis)

    def __ge__(self, other: "Subspace") -> bool:
        return other <= self

    def __lt__(self, other: "Subspace") -> bool:
        return self <= other and self.dim < other.dim

    def __gt__(self, other: "Subspace") -> bool:
        return other < self

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def annihilator(self) -> "Subspace":
        """``{x : <b, x> = 0 for all basis vectors b}``."""
        if not self.basis:
            return Subspace.full(self.ambient_dim)
        return nullspace(Matrix(len(self.basis), self.ambient_dim, self.basis))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        constraints = self.annihilator().basis + other.annihilator().basis
        if not constraints:
            return Subspace.full(self.ambient_dim)
        return nullspace(Matrix(len(constraints), self.ambient_dim, constraints))

    def to_strings(self) -> list:
        return [[format_scalar(x) for x in b] for b in self.basis]

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str]], ambient_dim: int) -> "Subspace":
        return cls.span([[parse_scalar(x) for x in r] for r in rows], ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    return a.intersect(b)


def contains(a: Subspace, v: Sequence) -> bool:
    return a.contains(v)


def subspace_leq(a: Subspace, b: Subspace) -> bool:
    return a <= b
