"""Corner decomposition of maps on a generalized matrix algebra and the
structure conditions characterising Lie derivations, Jordan derivations,
derivations and maps derivable at 0, ``I_A + 0`` and ``I``.

Every component map is written ``xij`` where the letter gives the source
corner (a: A, b: B, c: M, d: N) and ``ij`` the target corner (11: A, 12: M,
21: N, 22: B). All conditions are multilinear in their arguments and are
checked on basis tuples; the quadratic conditions ``c21(M)M = 0`` and the
like are checked in polarised form on basis pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Element, commutator, jordan
from .exactlin import Matrix, Subspace, format_scalar
from .maps import LinearMap
from .morita import GMAlgebra

SOURCE = {"a": "A", "b": "B", "c": "M", "d": "N"}
TARGET = {"11": "A", "12": "M", "21": "N", "22": "B"}
COMPONENTS = tuple(f"{s}{t}" for s in "abcd" for t in ("11", "12", "21", "22"))


@dataclass
class BlockDecomposition:
    gma: GMAlgebra
    components: dict  # name -> Matrix (target corner dim x source corner dim)
    M0: Element
    N0: Element

    def apply(self, name: str, x: Element) -> Element:
        """Component ``name`` applied to a U-element lying in its source corner."""
        src, tgt = SOURCE[name[0]], TARGET[name[1:]]
        return self.gma.embed(tgt, self.components[name].apply(self.gma.coords(x, src)))

    def reassemble(self) -> LinearMap:
        u = self.gma
        d = u.algebra.dim
        grid = [[Fraction(0)] * d for _ in range(d)]
        for name, mat in self.components.items():
            src, tgt = SOURCE[name[0]], TARGET[name[1:]]
            for r, i in enumerate(u.corner_slice(tgt)):
                for c, j in enumerate(u.corner_slice(src)):
                    grid[i][j] = mat[r, c]
        return LinearMap(u.algebra, Matrix.from_rows(grid, d))

    def nonzero_components(self) -> list:
        return [name for name, mat in self.components.items() if any(mat.flatten())]


def block_decompose(delta: LinearMap, u: GMAlgebra) -> BlockDecomposition:
    if delta.algebra is not u.algebra:
        raise ValueError("map does not act on this generalized matrix algebra")
    comps = {}
    for name in COMPONENTS:
        src, tgt = SOURCE[name[0]], TARGET[name[1:]]
        rows = [[delta.matrix[i, j] for j in u.corner_slice(src)] for i in u.corner_slice(tgt)]
        comps[name] = Matrix.from_rows(rows, u.sizes[src])
    bd = BlockDecomposition(u, comps, u.algebra.zero, u.algebra.zero)
    IA = u.IA
    bd.M0 = bd.apply("a12", IA)
    bd.N0 = bd.apply("a21", IA)
    return bd


# ---------------------------------------------------------------------------
# reports


@dataclass
class Condition:
    id: str
    passed: bool = True
    checks: int = 0
    witness: str | None = None

    def to_dict(self) -> dict:
        return {"id": self.id, "passed": self.passed, "checks": self.checks, "witness": self.witness}


@dataclass
class Report:
    title: str
    conditions: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.conditions)

    def failed(self) -> list:
        return [c for c in self.conditions if not c.passed]

    def first_failure(self) -> Condition | None:
        bad = self.failed()
        return bad[0] if bad else None

    def __getitem__(self, cid: str) -> Condition:
        for c in self.conditions:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def to_dict(self) -> dict:
        return {"title": self.title, "ok": self.ok,
                "conditions": [c.to_dict() for c in self.conditions], "notes": dict(self.notes)}

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        conds = [Condition(c["id"], c["passed"], c["checks"], c["witness"]) for c in data["conditions"]]
        return cls(data["title"], conds, dict(data.get("notes", {})))

    def table(self) -> str:
        lines = [self.title]
        for c in self.conditions:
            mark = "pass" if c.passed else "FAIL"
            extra = f"  witness: {c.witness}" if c.witness else ""
            lines.append(f"  {c.id:<32} {mark}{extra}")
        return "\n".join(lines)


class _Checker:
    """Accumulates equalities under condition ids, remembering the first failure."""

    def __init__(self, report: Report, host):
        self.report = report
        self.algebra = host.algebra if isinstance(host, GMAlgebra) else host
        self._by_id: dict = {}

    def condition(self, cid: str) -> Condition:
        if cid not in self._by_id:
            cond = Condition(cid)
            self._by_id[cid] = cond
            self.report.conditions.append(cond)
        return self._by_id[cid]

    def equal(self, cid: str, lhs: Element, rhs: Element, label: str, witness: tuple) -> None:
        cond = self.condition(cid)
        cond.checks += 1
        if lhs != rhs and cond.passed:
            cond.passed = False
            names = self.algebra.basis_labels
            wit = ", ".join(_describe(w, names) for w in witness)
            cond.witness = f"{label} with ({wit})"

    def zero(self, cid: str, value: Element, label: str, witness: tuple) -> None:
        self.equal(cid, value, self.algebra.zero, label, witness)


def _describe(x, names) -> str:
    if isinstance(x, Element):
        nz = [(c, names[i]) for i, c in enumerate(x.coords) if c]
        if len(nz) == 1 and nz[0][0] == 1:
            return nz[0][1]
        if not nz:
            return "0"
        return " + ".join(f"{format_scalar(c)}*{n}" for c, n in nz)
    return str(x)


class _Corners:
    """Basis lists and component shorthands for one decomposition."""

    def __init__(self, bd: BlockDecomposition):
        u = bd.gma
        self.bd = bd
        self.u = u
        self.A = u.corner_basis("A")
        self.M = u.corner_basis("M")
        self.N = u.corner_basis("N")
        self.B = u.corner_basis("B")
        self.M0, self.N0 = bd.M0, bd.N0

    def __getattr__(self, name):
        if name in COMPONENTS:
            return lambda x: self.bd.apply(name, x)
        raise AttributeError(name)


def _corner_forms(chk: _Checker, k: _Corners, cid: str) -> None:
    """``a12(A) = AM0``, ``b12(B) = -M0B``, ``a21(A) = N0A``, ``b21(B) = -BN0``,
    ``c11(M) = -MN0``, ``c22(M) = N0M``, ``d11(N) = -M0N``, ``d22(N) = NM0``."""
    M0, N0 = k.M0, k.N0
    for A in k.A:
        chk.equal(cid, k.a12(A), A * M0, "a12(A) = A M0", (A,))
        chk.equal(cid, k.a21(A), N0 * A, "a21(A) = N0 A", (A,))
    for B in k.B:
        chk.equal(cid, k.b12(B), -(M0 * B), "b12(B) = -M0 B", (B,))
        chk.equal(cid, k.b21(B), -(B * N0), "b21(B) = -B N0", (B,))
    for M in k.M:
        chk.equal(cid, k.c11(M), -(M * N0), "c11(M) = -M N0", (M,))
        chk.equal(cid, k.c22(M), N0 * M, "c22(M) = N0 M", (M,))
    for N in k.N:
        chk.equal(cid, k.d11(N), -(M0 * N), "d11(N) = -M0 N", (N,))
        chk.equal(cid, k.d22(N), N * M0, "d22(N) = N M0", (N,))


def _vanish(chk: _Checker, k: _Corners, cid: str, names: str) -> None:
    for name in names.split():
        src = {"a": k.A, "b": k.B, "c": k.M, "d": k.N}[name[0]]
        for x in src:
            chk.zero(cid, getattr(k, name)(x), f"{name} = 0", (x,))


def _leibniz_on_corner(chk, k, cid, comp: str, basis, kind: str) -> None:
    f = getattr(k, comp)
    for x in basis:
        for y in basis:
            if kind == "lie":
                chk.equal(cid, f(commutator(x, y)), commutator(f(x), y) + commutator(x, f(y)),
                          f"{comp} Lie derivation", (x, y))
            elif kind == "jordan":
                chk.equal(cid, f(jordan(x, y)), jordan(f(x), y) + jordan(x, f(y)),
                          f"{comp} Jordan derivation", (x, y))
            else:
                chk.equal(cid, f(x * y), f(x) * y + x * f(y), f"{comp} derivation", (x, y))


def _quadratic_zero(chk, k, cid, comp: str, basis, side: str) -> None:
    """``comp(X) X = 0`` (side 'right') or ``X comp(X) = 0`` (side 'left'), polarised."""
    f = getattr(k, comp)
    for i, x in enumerate(basis):
        for y in basis[i:]:
            if side == "right":
                val = f(x) * y + f(y) * x
                label = f"{comp}(X)X = 0"
            else:
                val = x * f(y) + y * f(x)
                label = f"X{comp}(X) = 0"
            chk.zero(cid, val, label, (x, y))


def _mn_condition_i_ii(chk, k, cid_i, cid_ii, w: dict) -> None:
    """The weighted families shared by the at-0 and at-(I_A + 0) lists.

    ``w`` maps slot names to the integer weights appearing in each identity.
    """
    for A in k.A:
        for M in k.M:
            chk.equal(cid_i, w["c12A"][0] * k.c12(A * M),
                      w["c12A"][1] * (M * k.a22(A)) + w["c12A"][2] * (k.a11(A) * M)
                      + w["c12A"][3] * (A * k.c12(M)),
                      "c12(AM)", (A, M))
            chk.equal(cid_i, w["c21A"][0] * k.c21(A * M), w["c21A"][1] * (k.c21(M) * A),
                      "c21(AM)", (A, M))
        for N in k.N:
            chk.equal(cid_i, w["d21A"][0] * k.d21(N * A),
                      w["d21A"][1] * (k.a22(A) * N) + w["d21A"][2] * (N * k.a11(A))
                      + w["d21A"][3] * (k.d21(N) * A),
                      "d21(NA)", (A, N))
            chk.equal(cid_i, w["d12A"][0] * k.d12(N * A), w["d12A"][1] * (A * k.d12(N)),
                      "d12(NA)", (A, N))
        for B in k.B:
            chk.zero(cid_i, w["a22c"][0] * (B * k.a22(A)) + w["a22c"][1] * (k.a22(A) * B),
                     "m B a22(A) + n a22(A) B = 0", (A, B))
    for B in k.B:
        for M in k.M:
            chk.equal(cid_ii, w["c12B"][0] * k.c12(M * B),
                      w["c12B"][1] * (k.b11(B) * M) + w["c12B"][2] * (M * k.b22(B))
                      + w["c12B"][3] * (k.c12(M) * B),
                      "c12(MB)", (M, B))
            chk.equal(cid_ii, w["c21B"][0] * k.c21(M * B), w["c21B"][1] * (B * k.c21(M)),
                      "c21(MB)", (M, B))
        for N in k.N:
            chk.equal(cid_ii, w["d21B"][0] * k.d21(B * N),
                      w["d21B"][1] * (N * k.b11(B)) + w["d21B"][2] * (k.b22(B) * N)
                      + w["d21B"][3] * (B * k.d21(N)),
                      "d21(BN)", (B, N))
            chk.equal(cid_ii, w["d12B"][0] * k.d12(B * N), w["d12B"][1] * (k.d12(N) * B),
                      "d12(BN)", (B, N))
        for A in k.A:
            chk.zero(cid_ii, w["b11c"][0] * (k.b11(B) * A) + w["b11c"][1] * (A * k.b11(B)),
                     "m b11(B) A + n A b11(B) = 0", (B, A))


def _mixed_products(chk, k, cid, with_cross: bool) -> None:
    """``a11(MN) = c12(M)N + M d21(N) [+ b11(NM)]`` and
    ``b22(NM) = N c12(M) + d21(N)M [+ a22(MN)]``."""
    for M in k.M:
        for N in k.N:
            rhs_a = k.c12(M) * N + M * k.d21(N)
            rhs_b = k.d21(N) * M + N * k.c12(M)
            if with_cross:
                rhs_a = rhs_a + k.b11(N * M)
                rhs_b = rhs_b + k.a22(M * N)
            chk.equal(cid, k.a11(M * N), rhs_a, "a11(MN)", (M, N))
            chk.equal(cid, k.b22(N * M), rhs_b, "b22(NM)", (M, N))


def _centre_valued(chk, k, cid) -> None:
    for B in k.B:
        v = k.b11(B)
        for A in k.A:
            chk.equal(cid, v * A, A * v, "b11(B) in Z(A)", (B, A))
    for A in k.A:
        v = k.a22(A)
        for B in k.B:
            chk.equal(cid, v * B, B * v, "a22(A) in Z(B)", (A, B))


# ---------------------------------------------------------------------------
# public checkers


def check_lie_structure(delta: LinearMap, u: GMAlgebra) -> Report:
    """Corner form and conditions (1)-(3) characterising Lie derivations."""
    bd = block_decompose(delta, u)
    k = _Corners(bd)
    report = Report("lie structure")
    chk = _Checker(report, u)
    _corner_forms(chk, k, "lie:form")
    _vanish(chk, k, "lie:form", "c21 d12")
    _centre_valued(chk, k, "lie:form")
    _leibniz_on_corner(chk, k, "lie:(1)", "a11", k.A, "lie")
    for A in k.A:
        for A2 in k.A:
            chk.zero("lie:(1)", k.a22(commutator(A, A2)), "a22([A,A']) = 0", (A, A2))
        for M in k.M:
            chk.equal("lie:(1)", k.c12(A * M), k.a11(A) * M - M * k.a22(A) + A * k.c12(M),
                      "c12(AM)", (A, M))
        for N in k.N:
            chk.equal("lie:(1)", k.d21(N * A), N * k.a11(A) - k.a22(A) * N + k.d21(N) * A,
                      "d21(NA)", (A, N))
    _leibniz_on_corner(chk, k, "lie:(2)", "b22", k.B, "lie")
    for B in k.B:
        for B2 in k.B:
            chk.zero("lie:(2)", k.b11(commutator(B, B2)), "b11([B,B']) = 0", (B, B2))
        for M in k.M:
            chk.equal("lie:(2)", k.c12(M * B), M * k.b22(B) - k.b11(B) * M + k.c12(M) * B,
                      "c12(MB)", (M, B))
        for N in k.N:
            chk.equal("lie:(2)", k.d21(B * N), k.b22(B) * N - N * k.b11(B) + B * k.d21(N),
                      "d21(BN)", (B, N))
    _mixed_products(chk, k, "lie:(3)", with_cross=True)
    return report


def check_jordan_structure(delta: LinearMap, u: GMAlgebra) -> Report:
    """Corner form and conditions (1)-(3) characterising Jordan derivations."""
    bd = block_decompose(delta, u)
    k = _Corners(bd)
    report = Report("jordan structure")
    chk = _Checker(report, u)
    _corner_forms(chk, k, "jordan:form")
    _vanish(chk, k, "jordan:form", "b11 a22")
    _leibniz_on_corner(chk, k, "jordan:(1)", "a11", k.A, "jordan")
    _leibniz_on_corner(chk, k, "jordan:(2)", "b22", k.B, "jordan")
    _jordan_module_conditions(chk, k, "jordan:(1)", "jordan:(2)")
    _mixed_products(chk, k, "jordan:(3)", with_cross=False)
    return report


def _jordan_module_conditions(chk, k, cid_m, cid_n) -> None:
    for M in k.M:
        for A in k.A:
            chk.equal(cid_m, k.c12(A * M), k.a11(A) * M + A * k.c12(M), "c12(AM)", (A, M))
            chk.equal(cid_m, k.c21(A * M), k.c21(M) * A, "c21(AM)", (A, M))
        for B in k.B:
            chk.equal(cid_m, k.c12(M * B), M * k.b22(B) + k.c12(M) * B, "c12(MB)", (M, B))
            chk.equal(cid_m, k.c21(M * B), B * k.c21(M), "c21(MB)", (M, B))
    _quadratic_zero(chk, k, cid_m, "c21", k.M, "right")
    _quadratic_zero(chk, k, cid_m, "c21", k.M, "left")
    for N in k.N:
        for A in k.A:
            chk.equal(cid_n, k.d21(N * A), N * k.a11(A) + k.d21(N) * A, "d21(NA)", (A, N))
            chk.equal(cid_n, k.d12(N * A), A * k.d12(N), "d12(NA)", (A, N))
        for B in k.B:
            chk.equal(cid_n, k.d21(B * N), k.b22(B) * N + B * k.d21(N), "d21(BN)", (B, N))
            chk.equal(cid_n, k.d12(B * N), k.d12(N) * B, "d12(BN)", (B, N))
    _quadratic_zero(chk, k, cid_n, "d12", k.N, "right")
    _quadratic_zero(chk, k, cid_n, "d12", k.N, "left")


def check_derivation_structure(delta: LinearMap, u: GMAlgebra) -> Report:
    """Corner form and conditions (1)-(3) characterising derivations."""
    bd = block_decompose(delta, u)
    k = _Corners(bd)
    report = Report("derivation structure")
    chk = _Checker(report, u)
    _corner_forms(chk, k, "derivation:form")
    _vanish(chk, k, "derivation:form", "b11 a22 c21 d12")
    _leibniz_on_corner(chk, k, "derivation:(1)", "a11", k.A, "assoc")
    for A in k.A:
        for M in k.M:
            chk.equal("derivation:(1)", k.c12(A * M), k.a11(A) * M + A * k.c12(M), "c12(AM)", (A, M))
        for N in k.N:
            chk.equal("derivation:(1)", k.d21(N * A), N * k.a11(A) + k.d21(N) * A, "d21(NA)", (A, N))
    _leibniz_on_corner(chk, k, "derivation:(2)", "b22", k.B, "assoc")
    for B in k.B:
        for M in k.M:
            chk.equal("derivation:(2)", k.c12(M * B), M * k.b22(B) + k.c12(M) * B, "c12(MB)", (M, B))
        for N in k.N:
            chk.equal("derivation:(2)", k.d21(B * N), k.b22(B) * N + B * k.d21(N), "d21(BN)", (B, N))
    _mixed_products(chk, k, "derivation:(3)", with_cross=False)
    return report


POINT_KINDS = ("zero", "corner", "identity")


def check_lemma_conditions(delta: LinearMap, u: GMAlgebra, point: str, m: int, n: int) -> Report:
    """Corner form plus conditions (i)-(iii) satisfied by maps (m,n)-derivable
    at ``0`` (``point='zero'``), at ``I_A + 0`` (``'corner'``) or at ``I``
    (``'identity'``)."""
    if point not in POINT_KINDS:
        raise ValueError(f"unknown point kind {point!r}")
    bd = block_decompose(delta, u)
    k = _Corners(bd)
    prefix = f"at_{point}"
    report = Report(f"conditions at {point} for (m,n) = ({m},{n})")
    chk = _Checker(report, u)
    _corner_forms(chk, k, f"{prefix}:form")
    if point == "zero":
        w = {
            "c12A": (n, m, n, n), "c21A": (n, m), "d21A": (n, m, n, n), "d12A": (n, m),
            "a22c": (m, n),
            "c12B": (n, m, n, n), "c21B": (n, m), "d21B": (n, m, n, n), "d12B": (n, m),
            "b11c": (m, n),
        }
        _mn_condition_i_ii(chk, k, f"{prefix}:(i)", f"{prefix}:(ii)", w)
        _mixed_products(chk, k, f"{prefix}:(iii)", with_cross=True)
    elif point == "corner":
        w = {
            "c12A": (1, 1, 1, 1), "c21A": (m, n), "d21A": (1, 1, 1, 1), "d12A": (m, n),
            "a22c": (m, n),
            "c12B": (m, n, m, m), "c21B": (m, n), "d21B": (m, n, m, m), "d12B": (m, n),
            "b11c": (m, n),
        }
        _mn_condition_i_ii(chk, k, f"{prefix}:(i)", f"{prefix}:(ii)", w)
        _mixed_products(chk, k, f"{prefix}:(iii)", with_cross=True)
    else:
        _vanish(chk, k, f"{prefix}:form", "b11 a22")
        chk.zero(f"{prefix}:form", k.a11(u.IA), "a11(I_A) = 0", (u.IA,))
        chk.zero(f"{prefix}:form", k.b22(u.IB), "b22(I_B) = 0", (u.IB,))
        _jordan_module_conditions(chk, k, f"{prefix}:(i)", f"{prefix}:(ii)")
        _mixed_products(chk, k, f"{prefix}:(iii)", with_cross=False)
    return report


def lie_side_conditions(delta: LinearMap, u: GMAlgebra) -> dict:
    """Whether ``d([A,A])`` meets the B corner and ``d([B,B])`` the A corner only in 0."""
    d = u.algebra.dim

    def image_of_commutators(basis):
        return Subspace.span([delta(commutator(x, y)).coords for x in basis for y in basis], d)

    A_comm = image_of_commutators(u.corner_basis("A"))
    B_comm = image_of_commutators(u.corner_basis("B"))
    return {
        "commutators_of_A_avoid_B": A_comm.intersect(u.corner_subspace("B")).dim == 0,
        "commutators_of_B_avoid_A": B_comm.intersect(u.corner_subspace("A")).dim == 0,
    }
