"""Solution spaces of the (m,n)-derivable-at-Z constraint.

The set of pairs ``(S, T)`` with ``ST = Z`` is a variety, not a finite list,
so the solver works with a finite family of verified pairs. Since every
derivation satisfies the identity on every pair, the computed space always
contains the derivation space and contains the true solution space; when
its dimension drops to a reference dimension the two coincide.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .algebra import Algebra, Element, find_invertible_shift, inverse
from .exactlin import RowReducer, Subspace, solve_affine
from .maps import LinearMap, mn_constraint_rows
from .morita import GMAlgebra
from .structure import Report, _Checker

GRID = ((1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 3), (3, -1))


class PairError(ValueError):
    """A pair does not multiply to the session's point."""


class HypothesisError(ValueError):
    """A required hypothesis on the map does not hold."""


@dataclass(frozen=True)
class PointSpec:
    kind: str  # "zero" | "corner" | "identity"
    element: Element


def point(u, kind: str) -> PointSpec:
    """The point of the given kind in a GMAlgebra (or, for zero/identity, any Algebra)."""
    algebra = u.algebra if isinstance(u, GMAlgebra) else u
    if kind == "zero":
        return PointSpec(kind, algebra.zero)
    if kind == "identity":
        return PointSpec(kind, algebra.unit)
    if kind == "corner":
        if not isinstance(u, GMAlgebra):
            raise ValueError("the corner point I_A + 0 needs a generalized matrix algebra")
        return PointSpec(kind, u.P)
    raise ValueError(f"unknown point kind {kind!r}")


@dataclass
class PairFamily:
    z: Element
    pairs: list = field(default_factory=list)
    labels: list = field(default_factory=list)
    seed: int | None = None
    budget: dict = field(default_factory=dict)

    def add(self, s: Element, t: Element, label: str) -> None:
        if s * t != self.z:
            raise PairError(f"pair from {label!r} does not multiply to the point")
        self.pairs.append((s, t))
        self.labels.append(label)

    def extend(self, other: "PairFamily") -> "PairFamily":
        if other.z != self.z:
            raise PairError("families for different points")
        for (s, t), label in zip(other.pairs, other.labels):
            self.add(s, t, label)
        return self

    def counts(self) -> dict:
        out: dict = {}
        for label in self.labels:
            out[label] = out.get(label, 0) + 1
        return out

    def __len__(self) -> int:
        return len(self.pairs)


def constraint_for_pair(s: Element, t: Element, m, n, z: Element | None = None) -> list:
    """Linear equations on the map matrix encoding the identity for ``(s, t)``."""
    if z is not None and s * t != z:
        raise PairError("pair does not multiply to the point")
    return mn_constraint_rows(s, t, m, n)


# ---------------------------------------------------------------------------
# pair families from the block constructions


def _with_zero(basis: list, zero: Element) -> list:
    return [zero] + basis


def _invertible_shifts(u: GMAlgebra, corner: str) -> list:
    """``I`` together with ``k I + e`` for each basis element ``e`` of the corner."""
    sub = u.context.A if corner == "A" else u.context.B
    unit = u.IA if corner == "A" else u.IB
    out = [(unit, unit)]
    for i in range(sub.dim):
        e_sub = sub.basis_element(i)
        k = find_invertible_shift(e_sub)
        x_sub = sub.unit * k + e_sub
        inv_sub = inverse(x_sub)
        x = u.embed(corner, x_sub.coords)
        x_inv = u.embed(corner, inv_sub.coords)
        if (x, x_inv) not in out:
            out.append((x, x_inv))
    return out


def pairs_at_zero(u: GMAlgebra, basis_sweep: bool = True, seed: int = 0, sample: int = 0) -> PairFamily:
    """The six block families with product 0, over basis choices of A, M, N, B.

    With ``basis_sweep=False`` a deterministic random subset of ``sample``
    pairs is kept.
    """
    fam = PairFamily(point(u, "zero").element, seed=seed)
    zero = u.algebra.zero
    As, Ms, Ns, Bs = (u.corner_basis(c) for c in "AMNB")
    IA, IB = u.IA, u.IB
    cands = []
    for A, M, B in product(As, _with_zero(Ms, zero), _with_zero(Bs, zero)):
        cands.append((M + B, A, "zero:1"))
    for B, M in product(Bs, Ms):
        cands.append((B, M, "zero:2"))
    for N, B in product(Ns, Bs):
        cands.append((N, B, "zero:3"))
    for A, N in product(As, Ns):
        cands.append((A, N, "zero:4"))
    for M, N in product(_with_zero(Ms, zero), _with_zero(Ns, zero)):
        cands.append((M - M * N, IA + N, "zero:5"))
    for N, M in product(_with_zero(Ns, zero), _with_zero(Ms, zero)):
        cands.append((N + IB, M - N * M, "zero:6"))
    cands = [(s, t, lab) for s, t, lab in cands if not s.is_zero() and not t.is_zero()]
    if not basis_sweep:
        rng = random.Random(seed)
        keep = sorted(rng.sample(range(len(cands)), min(sample, len(cands))))
        cands = [cands[i] for i in keep]
    for s, t, lab in cands:
        fam.add(s, t, lab)
    fam.budget = {"basis_sweep": basis_sweep, "candidates": len(cands)}
    return fam


def pairs_at_corner(u: GMAlgebra) -> PairFamily:
    """Block families with product ``I_A + 0``; A runs over invertible shifts."""
    fam = PairFamily(u.P)
    zero = u.algebra.zero
    Ms, Ns, Bs = (_with_zero(u.corner_basis(c), zero) for c in "MNB")
    IA = u.IA
    for (A, Ai), B in product(_invertible_shifts(u, "A"), Bs):
        fam.add(A + B, Ai, "corner:1")
        for M in Ms:
            fam.add(A + A * M, Ai - M * B + B, "corner:2")
        for N in Ns:
            fam.add(A - B * N + B, Ai + N * Ai, "corner:3")
    for M, N in product(Ms, Ns):
        fam.add(IA - M * N + M, IA + N, "corner:4")
        fam.add(IA + M, IA - M * N + N, "corner:5")
    return fam


def pairs_at_identity(u: GMAlgebra) -> PairFamily:
    """Block families with product ``I``; A and B run over invertible shifts."""
    unit = u.algebra.unit
    fam = PairFamily(unit)
    zero = u.algebra.zero
    Ms, Ns = (_with_zero(u.corner_basis(c), zero) for c in "MN")
    IA, IB = u.IA, u.IB
    for (A, Ai), (B, Bi) in product(_invertible_shifts(u, "A"), _invertible_shifts(u, "B")):
        fam.add(A + B, Ai + Bi, "identity:1")
        for M in Ms:
            fam.add(A + A * M + B, Ai - M * Bi + Bi, "identity:2")
        for N in Ns:
            fam.add(A + N * A + B, Ai - Bi * N + Bi, "identity:3")
    for M, N in product(Ms, Ns):
        fam.add(-IA - M * N - M + N + IB, -IA - M + N + IB + N * M, "identity:4")
    return fam


def pairs_idempotent(algebra: Algebra, idempotents: Sequence[Element]) -> PairFamily:
    """Pairs with product 0 built from idempotents P: ``(P, (1-P)X)``, ``(XP, 1-P)``,
    ``(1-P, PX)`` and ``(X(1-P), P)`` over basis X."""
    fam = PairFamily(algebra.zero)
    one = algebra.unit
    for p in idempotents:
        q = one - p
        if p.is_zero() or q.is_zero():
            continue
        for x in algebra.basis():
            for s, t in ((p, q * x), (x * p, q), (q, p * x), (x * q, p)):
                if not s.is_zero() and not t.is_zero():
                    fam.add(s, t, "idempotent")
    return fam


def pairs_zero_products(algebra: Algebra) -> PairFamily:
    """Basis pairs ``(e_i, e_j)`` with ``e_i e_j = 0``."""
    fam = PairFamily(algebra.zero)
    basis = algebra.basis()
    for s in basis:
        for t in basis:
            if (s * t).is_zero():
                fam.add(s, t, "basis")
    return fam


def pairs_random(algebra: Algebra, z: PointSpec | Element, count: int, seed: int = 0,
                 bound: int = 2) -> PairFamily:
    """Random verified pairs: S has sparse coefficients in ``[-bound, bound]``,
    T is drawn from the affine solution set of ``S T = Z``.

    Pairs are skipped when ``S T = Z`` is inconsistent; for ``Z = 0`` the
    trivial solution ``T = 0`` is skipped as uninformative.
    """
    zel = z.element if isinstance(z, PointSpec) else z
    rng = random.Random(seed)
    fam = PairFamily(zel, seed=seed, budget={"random": count})
    d = algebra.dim
    attempts = 0
    while len(fam) < count and attempts < 50 * max(count, 1):
        attempts += 1
        density = rng.choice((0.25, 0.5, 0.75))
        s = algebra.element(rng.randint(-bound, bound) if rng.random() < density else 0
                            for _ in range(d))
        sol = solve_affine(algebra.left_matrix(s), zel.coords)
        if sol is None:
            continue
        particular, hom = sol
        t = list(particular)
        for b in hom.basis:
            c = rng.randint(-bound, bound)
            if c:
                t = [x + c * y for x, y in zip(t, b)]
        t = algebra.element(t)
        if zel.is_zero() and t.is_zero():
            continue
        fam.add(s, t, "random")
    return fam


# ---------------------------------------------------------------------------
# solving


@dataclass
class SolutionSpace:
    space: Subspace
    pair_count: int
    m: int
    n: int
    point_kind: str
    hypothesis_flags: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.space.dim

    def maps(self, algebra: Algebra) -> list:
        return [LinearMap.from_vector(algebra, v) for v in self.space.basis]


def solve(u, z: PointSpec | Element, m: int, n: int, family: PairFamily,
          hypothesis_flags: dict | None = None, workers: int = 1,
          restrict: Subspace | None = None) -> SolutionSpace:
    """Nullspace of the stacked constraints of every pair in ``family``.

    ``restrict`` intersects the result with an extra subspace of map space
    (used for the ``d(1) = 0`` restriction). Rows are fed to the eliminator
    in family order whatever the worker count.
    """
    if m == 0 and n == 0:
        raise ValueError("m and n must not both be zero")
    algebra = u.algebra if isinstance(u, GMAlgebra) else u
    zel = z.element if isinstance(z, PointSpec) else z
    kind = z.kind if isinstance(z, PointSpec) else "custom"
    if family.z != zel:
        raise PairError("family was generated for a different point")
    for s, t in family.pairs:
        if s * t != zel:
            raise PairError("family contains an unverified pair")
    red = RowReducer(algebra.dim ** 2)

    def rows_for(pair):
        return mn_constraint_rows(pair[0], pair[1], m, n)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for rows in pool.map(rows_for, family.pairs):
                red.add_rows(rows)
    else:
        for pair in family.pairs:
            red.add_rows(rows_for(pair))
    space = red.nullspace()
    if restrict is not None:
        space = space.intersect(restrict)
    return SolutionSpace(space, len(family), m, n, kind, dict(hypothesis_flags or {}))


VERDICTS = ("Equal", "StrictSuperset", "StrictSubset", "Incomparable")


@dataclass(frozen=True)
class Comparison:
    verdict: str
    dim: int
    reference_dim: int
    intersection_dim: int

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "dim": self.dim, "reference_dim": self.reference_dim,
                "intersection_dim": self.intersection_dim}


def compare(s, reference: Subspace) -> Comparison:
    """How ``s`` (a SolutionSpace or Subspace) relates to ``reference``."""
    space = s.space if isinstance(s, SolutionSpace) else s
    inter = space.intersect(reference)
    if inter.dim == space.dim == reference.dim:
        verdict = "Equal"
    elif inter.dim == reference.dim:
        verdict = "StrictSuperset"
    elif inter.dim == space.dim:
        verdict = "StrictSubset"
    else:
        verdict = "Incomparable"
    return Comparison(verdict, space.dim, reference.dim, inter.dim)


# ---------------------------------------------------------------------------
# identities on algebras of the form alg L


def csl_identity_suite(a: Algebra, delta: LinearMap, idempotents: Sequence[Element],
                       projections: Sequence[Element], m: int, n: int) -> Report:
    """Identities forced on maps (m,n)-derivable at 0 with ``d(1) = 0``.

    * ``idempotent``: ``d(P) = d(P)P + Pd(P)``
    * ``idempotent_jordan``: ``d(PA + AP) = d(P)A + Pd(A) + d(A)P + Ad(P)``
    * ``idempotent_sandwich``: ``d(PAP) = d(P)AP + Pd(A)P + PAd(P)``
    * ``idempotent_products``: the Jordan identity for ``T = P1 P2``
    * ``lattice_left`` / ``lattice_right``: the product rules through
      ``P T (1-P)`` for lattice projections P
    """
    one = a.unit
    if not delta(one).is_zero():
        raise HypothesisError("the identity suite requires d(I) = 0")
    if m + n == 0:
        raise HypothesisError("the identity suite requires m + n != 0")
    report = Report(f"identity suite for (m,n) = ({m},{n})")
    chk = _Checker(report, a)
    basis = a.basis()
    d = delta
    for P in idempotents:
        chk.equal("idempotent", d(P), d(P) * P + P * d(P), "d(P)", (P,))
    for P in idempotents:
        for A in basis:
            chk.equal("idempotent_jordan", d(P * A + A * P),
                      d(P) * A + P * d(A) + d(A) * P + A * d(P), "d(PA+AP)", (P, A))
            chk.equal("idempotent_sandwich", d(P * A * P),
                      d(P) * A * P + P * d(A) * P + P * A * d(P), "d(PAP)", (P, A))
    for P1 in idempotents:
        for P2 in idempotents:
            T = P1 * P2
            for A in basis:
                chk.equal("idempotent_products", d(T * A + A * T),
                          d(T) * A + T * d(A) + d(A) * T + A * d(T), "d(TA+AT)", (P1, P2, A))
    for P in projections:
        Q = one - P
        for S in basis:
            for T in basis:
                x = P * T * Q
                chk.equal("lattice_left", d(S * x), d(S) * x + S * d(x), "d(SPT(I-P))", (S, P, T))
                y = P * S * Q
                chk.equal("lattice_right", d(y * T), d(y) * T + y * d(T), "d(PS(I-P)T)", (P, S, T))
    report.notes["idempotents"] = len(idempotents)
    report.notes["projections"] = len(projections)
    return report

