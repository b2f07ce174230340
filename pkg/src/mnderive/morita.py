"""Morita contexts, generalized matrix algebras and finite CSL algebras.

A generalized matrix algebra ``[[A, M], [N, B]]`` is assembled from a Morita
context into a single structure-constant algebra whose basis is the
concatenation of the A, M, N and B bases, in that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .algebra import Algebra, AlgebraError, Element, is_idempotent
from .exactlin import (
    Matrix,
    Subspace,
    format_scalar,
    nullspace,
    rank,
    solve_affine,
    unit_vector,
    vec,
    zero_vector,
)

CORNERS = ("A", "M", "N", "B")


class ContextError(ValueError):
    """Raised when an invalid Morita context is assembled."""

    def __init__(self, violations):
        self.violations = list(violations)
        first = self.violations[0] if self.violations else None
        super().__init__(f"invalid Morita context: {first}")


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple

    def __str__(self) -> str:
        return f"{self.axiom} at {self.witness}"


def _lin(tensor, x: Sequence, y: Sequence, out_dim: int) -> tuple:
    """Bilinear evaluation of ``tensor[i][j] -> coords`` on coordinate vectors."""
    out = [Fraction(0)] * out_dim
    for i, a in enumerate(x):
        if not a:
            continue
        for j, b in enumerate(y):
            if not b:
                continue
            ab = a * b
            for k, c in enumerate(tensor[i][j]):
                if c:
                    out[k] += ab * c
    return tuple(out)


def _tensor(data, shape: tuple) -> tuple:
    d0, d1, d2 = shape
    if len(data) != d0 or any(len(r) != d1 for r in data) or any(
            len(c) != d2 for r in data for c in r):
        raise ValueError(f"tensor must have shape {shape}")
    return tuple(tuple(vec(c) for c in r) for r in data)


class Bimodule:
    """A (left, right)-bimodule of finite dimension.

    ``left_action[a][m]`` holds the module coordinates of ``e_a . f_m`` and
    ``right_action[m][b]`` those of ``f_m . e_b``. Axioms are reported by
    :meth:`violations` rather than enforced here, so that invalid contexts
    can be described in a validation report.
    """

    def __init__(self, left: Algebra, right: Algebra, dim: int, left_action, right_action, name: str = ""):
        self.left_algebra = left
        self.right_algebra = right
        self.dim = dim
        self.name = name
        self.left_action = _tensor(left_action, (left.dim, dim, dim))
        self.right_action = _tensor(right_action, (dim, right.dim, dim))

    def act_left(self, a: Sequence, m: Sequence) -> tuple:
        return _lin(self.left_action, a, m, self.dim)

    def act_right(self, m: Sequence, b: Sequence) -> tuple:
        return _lin(self.right_action, m, b, self.dim)

    def violations(self, label: str) -> list:
        A, B = self.left_algebra, self.right_algebra
        out = []
        basis = [unit_vector(self.dim, i) for i in range(self.dim)]
        for i, m in enumerate(basis):
            if self.act_left(A.unit_coords, m) != m:
                out.append(Violation(f"{label}:left_unit", (i,)))
            if self.act_right(m, B.unit_coords) != m:
                out.append(Violation(f"{label}:right_unit", (i,)))
        for p, q, i in product(range(A.dim), range(A.dim), range(self.dim)):
            ap, aq = unit_vector(A.dim, p), unit_vector(A.dim, q)
            lhs = self.act_left(A.product_coords(ap, aq), basis[i])
            rhs = self.act_left(ap, self.act_left(aq, basis[i]))
            if lhs != rhs:
                out.append(Violation(f"{label}:left_associative", (p, q, i)))
        for i, p, q in product(range(self.dim), range(B.dim), range(B.dim)):
            bp, bq = unit_vector(B.dim, p), unit_vector(B.dim, q)
            lhs = self.act_right(basis[i], B.product_coords(bp, bq))
            rhs = self.act_right(self.act_right(basis[i], bp), bq)
            if lhs != rhs:
                out.append(Violation(f"{label}:right_associative", (i, p, q)))
        for p, i, q in product(range(A.dim), range(self.dim), range(B.dim)):
            ap, bq = unit_vector(A.dim, p), unit_vector(B.dim, q)
            if self.act_right(self.act_left(ap, basis[i]), bq) != self.act_left(ap, self.act_right(basis[i], bq)):
                out.append(Violation(f"{label}:actions_commute", (p, i, q)))
        return out

    def to_dict(self) -> dict:
        f = format_scalar
        return {
            "dim": self.dim,
            "left_action": [[[f(c) for c in v] for v in r] for r in self.left_action],
            "right_action": [[[f(c) for c in v] for v in r] for r in self.right_action],
        }


class MoritaContext:
    """``(A, B, M, N, phi, psi)`` with ``phi: M x N -> A`` and ``psi: N x M -> B``."""

    def __init__(self, A: Algebra, B: Algebra, M: Bimodule, N: Bimodule, phi, psi, name: str = ""):
        if M.left_algebra is not A or M.right_algebra is not B:
            raise ValueError("M must be an (A, B)-bimodule")
        if N.left_algebra is not B or N.right_algebra is not A:
            raise ValueError("N must be a (B, A)-bimodule")
        self.A, self.B, self.M, self.N = A, B, M, N
        self.phi = _tensor(phi, (M.dim, N.dim, A.dim))
        self.psi = _tensor(psi, (N.dim, M.dim, B.dim))
        self.name = name

    def mn(self, m: Sequence, n: Sequence) -> tuple:
        return _lin(self.phi, m, n, self.A.dim)

    def nm(self, n: Sequence, m: Sequence) -> tuple:
        return _lin(self.psi, n, m, self.B.dim)

    def to_dict(self) -> dict:
        f = format_scalar
        return {
            "name": self.name,
            "A": self.A.to_dict(),
            "B": self.B.to_dict(),
            "M": self.M.to_dict(),
            "N": self.N.to_dict(),
            "phi": [[[f(c) for c in v] for v in r] for r in self.phi],
            "psi": [[[f(c) for c in v] for v in r] for r in self.psi],
        }


def validate_context(ctx: MoritaContext) -> list:
    """Every violated axiom with its witnessing basis tuple; empty iff valid."""
    A, B, M, N = ctx.A, ctx.B, ctx.M, ctx.N
    out = M.violations("M") + N.violations("N")
    ea = [unit_vector(A.dim, i) for i in range(A.dim)]
    eb = [unit_vector(B.dim, i) for i in range(B.dim)]
    em = [unit_vector(M.dim, i) for i in range(M.dim)]
    en = [unit_vector(N.dim, i) for i in range(N.dim)]
    for i, m in enumerate(em):
        for j, n in enumerate(en):
            mn = ctx.mn(m, n)
            nm = ctx.nm(n, m)
            for p, a in enumerate(ea):
                if ctx.mn(M.act_left(a, m), n) != A.product_coords(a, mn):
                    out.append(Violation("phi:left_linear", (p, i, j)))
                if ctx.mn(m, N.act_right(n, a)) != A.product_coords(mn, a):
                    out.append(Violation("phi:right_linear", (i, j, p)))
                if ctx.nm(N.act_right(n, a), m) != ctx.nm(n, M.act_left(a, m)):
                    out.append(Violation("psi:balanced", (j, p, i)))
            for q, b in enumerate(eb):
                if ctx.nm(N.act_left(b, n), m) != B.product_coords(b, nm):
                    out.append(Violation("psi:left_linear", (q, j, i)))
                if ctx.nm(n, M.act_right(m, b)) != B.product_coords(nm, b):
                    out.append(Violation("psi:right_linear", (j, i, q)))
                if ctx.mn(M.act_right(m, b), n) != ctx.mn(m, N.act_left(b, n)):
                    out.append(Violation("phi:balanced", (i, q, j)))
            for k, m2 in enumerate(em):
                if M.act_left(mn, m2) != M.act_right(m, ctx.nm(n, m2)):
                    out.append(Violation("compatibility:MNM", (i, j, k)))
            for k, n2 in enumerate(en):
                if N.act_left(nm, n2) != N.act_right(n, ctx.mn(m, n2)):
                    out.append(Violation("compatibility:NMN", (j, i, k)))
    return out


@dataclass
class GMAlgebra:
    """A generalized matrix algebra with its corner bookkeeping."""

    context: MoritaContext
    algebra: Algebra
    corner_index: tuple
    offsets: dict = field(default_factory=dict)
    sizes: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.algebra.name

    def corner_slice(self, corner: str) -> range:
        start = self.offsets[corner]
        return range(start, start + self.sizes[corner])

    def embed(self, corner: str, coords: Sequence) -> Element:
        out = list(zero_vector(self.algebra.dim))
        if len(coords) != self.sizes[corner]:
            raise ValueError(f"{corner} coordinates must have length {self.sizes[corner]}")
        for i, c in zip(self.corner_slice(corner), coords):
            out[i] = Fraction(c)
        return self.algebra.element(out)

    def coords(self, x: Element, corner: str) -> tuple:
        return tuple(x.coords[i] for i in self.corner_slice(corner))

    def project(self, x: Element, corner: str) -> Element:
        return self.embed(corner, self.coords(x, corner))

    def corner_basis(self, corner: str) -> list:
        return [self.algebra.basis_element(i) for i in self.corner_slice(corner)]

    def corner_subspace(self, corner: str) -> Subspace:
        d = self.algebra.dim
        return Subspace.span([unit_vector(d, i) for i in self.corner_slice(corner)], d)

    def block(self, a=None, m=None, n=None, b=None) -> Element:
        """Element ``[[a, m], [n, b]]`` from (embedded) corner elements; missing slots are 0."""
        x = self.algebra.zero
        for part in (a, m, n, b):
            if part is not None:
                x = x + part
        return x

    @property
    def IA(self) -> Element:
        return self.embed("A", self.context.A.unit_coords)

    @property
    def IB(self) -> Element:
        return self.embed("B", self.context.B.unit_coords)

    @property
    def P(self) -> Element:
        return self.IA


def assemble(ctx: MoritaContext, name: str | None = None) -> GMAlgebra:
    """Structure constants of ``[[A, M], [N, B]]`` with block multiplication."""
    problems = validate_context(ctx)
    if problems:
        raise ContextError(problems)
    A, B, M, N = ctx.A, ctx.B, ctx.M, ctx.N
    sizes = {"A": A.dim, "M": M.dim, "N": N.dim, "B": B.dim}
    offsets, pos = {}, 0
    for c in CORNERS:
        offsets[c] = pos
        pos += sizes[c]
    dim = pos
    corner_index = tuple(c for c in CORNERS for _ in range(sizes[c]))
    local = [None] * dim
    for c in CORNERS:
        for i in range(sizes[c]):
            local[offsets[c] + i] = unit_vector(sizes[c], i)

    def place(corner, coords):
        out = [Fraction(0)] * dim
        for i, x in enumerate(coords):
            out[offsets[corner] + i] = x
        return out

    zero = [Fraction(0)] * dim
    structure = []
    for i in range(dim):
        row = []
        ci, xi = corner_index[i], local[i]
        for j in range(dim):
            cj, xj = corner_index[j], local[j]
            key = ci + cj
            if key == "AA":
                prod = place("A", A.product_coords(xi, xj))
            elif key == "AM":
                prod = place("M", M.act_left(xi, xj))
            elif key == "MB":
                prod = place("M", M.act_right(xi, xj))
            elif key == "MN":
                prod = place("A", ctx.mn(xi, xj))
            elif key == "NA":
                prod = place("N", N.act_right(xi, xj))
            elif key == "BN":
                prod = place("N", N.act_left(xi, xj))
            elif key == "NM":
                prod = place("B", ctx.nm(xi, xj))
            elif key == "BB":
                prod = place("B", B.product_coords(xi, xj))
            else:
                prod = zero
            row.append(prod)
        structure.append(row)
    unit = place("A", A.unit_coords)
    for i, x in enumerate(B.unit_coords):
        unit[offsets["B"] + i] = x
    labels = [f"{c}{i}" for c in CORNERS for i in range(sizes[c])]
    algebra = Algebra(structure, unit, name=name or ctx.name, basis_labels=labels)
    return GMAlgebra(ctx, algebra, corner_index, offsets, sizes)


@dataclass(frozen=True)
class Faithfulness:
    M_left_faithful: bool
    M_right_faithful: bool
    N_left_faithful: bool
    N_right_faithful: bool

    def as_dict(self) -> dict:
        return {
            "M_left_faithful": self.M_left_faithful,
            "M_right_faithful": self.M_right_faithful,
            "N_left_faithful": self.N_left_faithful,
            "N_right_faithful": self.N_right_faithful,
        }

    @property
    def M_faithful(self) -> bool:
        return self.M_left_faithful and self.M_right_faithful

    @property
    def N_faithful(self) -> bool:
        return self.N_left_faithful and self.N_right_faithful

    def hypothesis_flags(self) -> dict:
        """Which of the faithfulness alternatives hold for this context."""
        flags = {
            "M_faithful_bimodule": self.M_faithful,
            "alt_N_faithful_bimodule": self.N_faithful,
            "alt_left_faithful_M_and_N": self.M_left_faithful and self.N_left_faithful,
            "alt_right_faithful_M_and_N": self.M_right_faithful and self.N_right_faithful,
        }
        flags["faithfulness_hypothesis"] = any(flags.values())
        return flags


def _acting_rank(algebra_dim: int, module_dim: int, act) -> int:
    cols = []
    for p in range(algebra_dim):
        a = unit_vector(algebra_dim, p)
        img = []
        for i in range(module_dim):
            img.extend(act(a, unit_vector(module_dim, i)))
        cols.append(img)
    if module_dim == 0:
        return 0
    return rank(Matrix.from_columns(cols, module_dim * module_dim))


def faithfulness(ctx: MoritaContext) -> Faithfulness:
    """Injectivity of each algebra into the endomorphisms of each module."""
    M, N = ctx.M, ctx.N
    A, B = ctx.A, ctx.B
    return Faithfulness(
        M_left_faithful=_acting_rank(A.dim, M.dim, M.act_left) == A.dim,
        M_right_faithful=_acting_rank(B.dim, M.dim, lambda b, m: M.act_right(m, b)) == B.dim,
        N_left_faithful=_acting_rank(B.dim, N.dim, N.act_left) == B.dim,
        N_right_faithful=_acting_rank(A.dim, N.dim, lambda a, n: N.act_right(n, a)) == A.dim,
    )


# ---------------------------------------------------------------------------
# concrete builders


def _coords_in(basis: Sequence[Matrix], mat: Matrix, what: str) -> tuple:
    if not basis:
        if any(mat.flatten()):
            raise AlgebraError(f"{what}: product is nonzero but the target space is 0")
        return ()
    flat = Matrix.from_columns([b.flatten() for b in basis], mat.nrows * mat.ncols)
    sol = solve_affine(flat, mat.flatten())
    if sol is None:
        raise AlgebraError(f"{what}: product leaves the target span")
    return sol[0]


def matrix_context(a_basis, b_basis, m_basis, n_basis, name: str = "") -> MoritaContext:
    """Morita context whose actions and pairings are ordinary matrix products.

    ``A`` and ``B`` are spans of square matrices, ``M`` and ``N`` spans of
    matrices of compatible shapes; all products must close up.
    """
    A = Algebra.from_matrices(a_basis, name=f"{name}.A")
    B = Algebra.from_matrices(b_basis, name=f"{name}.B")

    def action(left_basis, right_basis, target, what):
        return [[_coords_in(target, x @ y, what) for y in right_basis] for x in left_basis]

    M = Bimodule(A, B, len(m_basis), action(a_basis, m_basis, m_basis, "A.M"),
                 action(m_basis, b_basis, m_basis, "M.B"), name="M")
    N = Bimodule(B, A, len(n_basis), action(b_basis, n_basis, n_basis, "B.N"),
                 action(n_basis, a_basis, n_basis, "N.A"), name="N")
    phi = action(m_basis, n_basis, a_basis, "M.N")
    psi = action(n_basis, m_basis, b_basis, "N.M")
    return MoritaContext(A, B, M, N, phi, psi, name=name)


def peirce_context(algebra: Algebra, idempotent: Element, name: str = "") -> MoritaContext:
    """The Morita context ``(PUP, QUQ, PUQ, QUP)`` of an idempotent ``P``, ``Q = 1 - P``."""
    if not is_idempotent(idempotent):
        raise ValueError("Peirce decomposition needs an idempotent")
    P = idempotent
    Q = algebra.unit - P
    d = algebra.dim

    def corner_basis(left, right):
        space = Subspace.span([(left * e * right).coords for e in algebra.basis()], d)
        return [algebra.element(v) for v in space.basis]

    corners = {"A": corner_basis(P, P), "M": corner_basis(P, Q),
               "N": corner_basis(Q, P), "B": corner_basis(Q, Q)}
    solvers = {}
    for key, basis in corners.items():
        solvers[key] = Matrix.from_columns([b.coords for b in basis], d)

    def coords(key, x: Element) -> tuple:
        if not corners[key]:
            if not x.is_zero():
                raise AlgebraError(f"element {x!r} not in empty corner {key}")
            return ()
        sol = solve_affine(solvers[key], x.coords)
        if sol is None:
            raise AlgebraError(f"element {x!r} is not in corner {key}")
        return sol[0]

    def table(left, right, target):
        return [[coords(target, x * y) for y in corners[right]] for x in corners[left]]

    A = Algebra(table("A", "A", "A"), coords("A", P), name=f"{name}.A")
    B = Algebra(table("B", "B", "B"), coords("B", Q), name=f"{name}.B")
    M = Bimodule(A, B, len(corners["M"]), table("A", "M", "M"), table("M", "B", "M"), name="M")
    N = Bimodule(B, A, len(corners["N"]), table("B", "N", "N"), table("N", "A", "N"), name="N")
    return MoritaContext(A, B, M, N, table("M", "N", "A"), table("N", "M", "B"), name=name)


# ---------------------------------------------------------------------------
# commutative subspace lattices of coordinate projections


@dataclass(frozen=True)
class CSLattice:
    n: int
    projections: tuple  # tuple of 0/1 diagonal tuples

    @classmethod
    def from_lists(cls, n: int, projections) -> "CSLattice":
        return cls(n, tuple(tuple(int(x) for x in p) for p in projections))

    def problems(self) -> list:
        out = []
        for idx, p in enumerate(self.projections):
            if len(p) != self.n:
                out.append(f"projection {idx} has length {len(p)}, expected {self.n}")
            elif any(x not in (0, 1) for x in p):
                out.append(f"projection {idx} is not a 0/1 diagonal")
        if out:
            return out
        members = set(self.projections)
        if (0,) * self.n not in members:
            out.append("lattice does not contain 0")
        if (1,) * self.n not in members:
            out.append("lattice does not contain I")
        for p, q in product(self.projections, repeat=2):
            meet = tuple(min(a, b) for a, b in zip(p, q))
            join = tuple(max(a, b) for a, b in zip(p, q))
            if meet not in members:
                out.append(f"not closed under meet: {p} ^ {q} = {meet}")
            if join not in members:
                out.append(f"not closed under join: {p} v {q} = {join}")
        return out

    def is_valid(self) -> bool:
        return not self.problems()

    def projection_matrices(self) -> list:
        return [Matrix.from_rows([[Fraction(p[i]) if i == j else 0 for j in range(self.n)]
                                  for i in range(self.n)]) for p in self.projections]


def csl_algebra(lattice: CSLattice, name: str = "") -> Algebra:
    """``{T : (I - P) T P = 0 for all P}`` as a matrix algebra with unit I."""
    problems = lattice.problems()
    if problems:
        raise ValueError(f"invalid lattice: {problems[0]}")
    n = lattice.n
    rows = []
    for p in lattice.projections:
        # entry (i, j) of (I-P) T P is (1 - p_i) T_ij p_j
        for i in range(n):
            for j in range(n):
                if (1 - p[i]) * p[j]:
                    rows.append(unit_vector(n * n, i * n + j))
    if rows:
        space = nullspace(Matrix(len(rows), n * n, tuple(rows)))
    else:
        space = Subspace.full(n * n)
    basis = [Matrix.from_rows([v[i * n:(i + 1) * n] for i in range(n)]) for v in space.basis]
    labels = []
    for idx, v in enumerate(space.basis):
        nz = [k for k, x in enumerate(v) if x]
        labels.append(f"E{nz[0] // n + 1}{nz[0] % n + 1}" if len(nz) == 1 else f"T{idx}")
    return Algebra.from_matrices(basis, name=name, basis_labels=labels)
