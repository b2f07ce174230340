"""Compiled-in instances.

Each fixture is built from scratch and re-validated on every load.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .algebra import Algebra
from .exactlin import Matrix
from .maps import LinearMap
from .morita import (
    CSLattice,
    GMAlgebra,
    MoritaContext,
    assemble,
    csl_algebra,
    matrix_context,
    peirce_context,
)


def unit_matrix(n: int, i: int, j: int) -> Matrix:
    """The matrix unit with a single 1 at ``(i, j)`` (0-based)."""
    return Matrix.from_rows([[1 if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)], n)


@dataclass
class Fixture:
    name: str
    description: str
    context: MoritaContext | None = None
    gma: GMAlgebra | None = None
    lattice: CSLattice | None = None
    maps: dict = field(default_factory=dict)

    @property
    def algebra(self) -> Algebra:
        return self.gma.algebra


def _one() -> list:
    return [Matrix.from_rows([[1]])]


def t2_context() -> MoritaContext:
    """Upper triangular 2x2 matrices: A = B = M = Q, N = 0."""
    return matrix_context(_one(), _one(), _one(), [], name="t2")


def gm2x2_context() -> MoritaContext:
    """Full 2x2 matrices: A = B = M = N = Q with multiplication as pairings."""
    return matrix_context(_one(), _one(), _one(), _one(), name="gm2x2")


def orthogonal_modules_context() -> MoritaContext:
    """A = B = scalar 2x2 matrices, M = Q e11, N = Q e22, so that MN = NM = 0."""
    eye = [Matrix.identity(2)]
    return matrix_context(eye, eye, [unit_matrix(2, 0, 0)], [unit_matrix(2, 1, 1)], name="remark2")


def orthogonal_modules_diagonal_context() -> MoritaContext:
    """The same modules over the 2-dim diagonal algebras (M is not faithful)."""
    diag = [unit_matrix(2, 0, 0), unit_matrix(2, 1, 1)]
    return matrix_context(diag, diag, [unit_matrix(2, 0, 0)], [unit_matrix(2, 1, 1)],
                          name="remark2_diagonal")


def m_to_n_slot_map(u: GMAlgebra) -> LinearMap:
    """Send the M coordinate to the N slot and everything else to 0."""
    d = u.algebra.dim
    rows = [[Fraction(0)] * d for _ in range(d)]
    m_idx = u.corner_slice("M")[0]
    n_idx = u.corner_slice("N")[0]
    rows[n_idx][m_idx] = Fraction(1)
    return LinearMap(u.algebra, Matrix.from_rows(rows, d))


def m2_algebra() -> Algebra:
    units = [unit_matrix(2, i, j) for i in range(2) for j in range(2)]
    return Algebra.from_matrices(units, name="m2", basis_labels=["E11", "E12", "E21", "E22"])


def m2_context() -> MoritaContext:
    a = m2_algebra()
    return peirce_context(a, a.basis_element(0), name="m2")


CSL3_CHAIN = CSLattice.from_lists(3, [(0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1)])


def csl3_context() -> tuple:
    a = csl_algebra(CSL3_CHAIN, name="csl3_chain")
    return a, peirce_context(a, a.basis_element(0), name="csl3_chain")


def _gm(ctx: MoritaContext, name: str, description: str, **extra) -> Fixture:
    return Fixture(name, description, context=ctx, gma=assemble(ctx, name), **extra)


@lru_cache(maxsize=None)
def load(name: str) -> Fixture:
    if name == "t2":
        return _gm(t2_context(), "t2", "2x2 upper triangular matrices (N = 0)")
    if name == "gm2x2":
        return _gm(gm2x2_context(), "gm2x2", "A = B = M = N = Q; the full 2x2 matrix algebra")
    if name == "m2":
        return _gm(m2_context(), "m2", "2x2 matrices split at the idempotent E11")
    if name == "remark2":
        fx = _gm(orthogonal_modules_context(), "remark2",
                 "scalar corners, M and N with MN = NM = 0; carries a proper Jordan derivation")
        fx.maps["delta"] = m_to_n_slot_map(fx.gma)
        return fx
    if name == "remark2_diagonal":
        return _gm(orthogonal_modules_diagonal_context(), "remark2_diagonal",
                   "remark2 modules over diagonal corners; M is not left faithful")
    if name == "csl3_chain":
        _, ctx = csl3_context()
        return _gm(ctx, "csl3_chain", "alg of the chain 0 < e1 < e1+e2 < I on Q^3",
                   lattice=CSL3_CHAIN)
    raise KeyError(name)


NAMES = ("t2", "m2", "gm2x2", "remark2", "remark2_diagonal", "csl3_chain")
