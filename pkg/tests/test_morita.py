import pytest

from mnderive.algebra import Algebra
from mnderive.exactlin import Matrix
from mnderive.fixtures import (
    CSL3_CHAIN,
    gm2x2_context,
    load,
    orthogonal_modules_context,
    orthogonal_modules_diagonal_context,
    t2_context,
    unit_matrix,
)
from mnderive.morita import (
    Bimodule,
    ContextError,
    CSLattice,
    MoritaContext,
    assemble,
    csl_algebra,
    faithfulness,
    peirce_context,
    validate_context,
)
from helpers import full, triangular
import oracles


def scaled_phi_context(factor):
    ctx = gm2x2_context()
    phi = [[[c * factor for c in v] for v in row] for row in ctx.phi]
    return MoritaContext(ctx.A, ctx.B, ctx.M, ctx.N, phi, ctx.psi, name="scaled")


def zero_pairing_context():
    ctx = gm2x2_context()
    return MoritaContext(ctx.A, ctx.B, ctx.M, ctx.N, [[[0]]], [[[0]]], name="zero pairings")


class TestValidateContext:
    def test_zero_pairings_valid(self):
        assert validate_context(zero_pairing_context()) == []

    def test_orthogonal_module_context_valid(self):
        assert validate_context(orthogonal_modules_context()) == []
        assert validate_context(orthogonal_modules_diagonal_context()) == []

    def test_scaled_phi_breaks_compatibility(self):
        violations = validate_context(scaled_phi_context(2))
        axioms = {v.axiom for v in violations}
        assert "compatibility:MNM" in axioms
        witness = next(v.witness for v in violations if v.axiom == "compatibility:MNM")
        assert witness == (0, 0, 0)

    def test_assemble_refuses_invalid(self):
        with pytest.raises(ContextError) as info:
            assemble(scaled_phi_context(2))
        assert info.value.violations

    def test_bimodule_axioms_reported(self):
        ctx = t2_context()
        bad_m = Bimodule(ctx.A, ctx.B, 1, [[[2]]], [[[1]]], name="M")
        bad = MoritaContext(ctx.A, ctx.B, bad_m, ctx.N, ctx.phi, ctx.psi)
        assert any(v.axiom == "M:left_unit" for v in validate_context(bad))


class TestAssemble:
    def test_triangular_degenerate_case(self):
        u = assemble(t2_context())
        t2 = triangular(2)
        assert u.sizes == {"A": 1, "M": 1, "N": 0, "B": 1}
        assert u.algebra.structure() == t2.structure()
        assert u.algebra.unit_coords == t2.unit_coords

    def test_full_matrix_context(self):
        u = assemble(gm2x2_context())
        m2 = full(2)
        assert u.algebra.structure() == m2.structure()

    def test_orthogonal_module_matrix_display(self):
        # basis order a, m, n, b matches the 4x4 display spanned by
        # E11+E22, E13, E42, E33+E44
        u = load("remark2").gma
        disp = oracles.orthogonal_module_algebra()
        shown = Algebra.from_matrices([Matrix.from_rows(b) for b in disp.basis])
        assert u.algebra.structure() == shown.structure()

    @pytest.mark.parametrize("name", ["t2", "gm2x2", "m2", "remark2", "remark2_diagonal", "csl3_chain"])
    def test_corner_products(self, name):
        u = load(name).gma
        a = u.algebra
        P = u.P
        assert P * P == P
        assert a.unit == u.IA + u.IB
        ctx = u.context
        # P U P reproduces A
        for i, x in enumerate(u.corner_basis("A")):
            for j, y in enumerate(u.corner_basis("A")):
                assert u.coords(x * y, "A") == ctx.A.product_coords(
                    ctx.A.basis_element(i).coords, ctx.A.basis_element(j).coords)
        Ms, Ns = u.corner_basis("M"), u.corner_basis("N")
        for m in Ms:
            assert (m * m).is_zero()
            for n in Ns:
                assert u.project(m * n, "A") == m * n
                for m2 in Ms:
                    assert (m * n) * m2 == m * (n * m2)
                for n2 in Ns:
                    assert (n2 * m) * n == n2 * (m * n)
        for n in Ns:
            assert (n * n).is_zero()


class TestFaithfulness:
    def test_scalar_module(self):
        f = faithfulness(t2_context())
        assert f.M_left_faithful and f.M_right_faithful

    def test_zero_module(self):
        f = faithfulness(t2_context())
        assert not f.N_left_faithful and not f.N_right_faithful

    def test_diagonal_corners_not_faithful(self):
        # diag(0, 1) kills M = Q e11
        f = faithfulness(orthogonal_modules_diagonal_context())
        assert not f.M_left_faithful
        assert not f.hypothesis_flags()["faithfulness_hypothesis"]

    def test_scalar_corner_context_is_faithful(self):
        flags = faithfulness(orthogonal_modules_context()).hypothesis_flags()
        assert flags["M_faithful_bimodule"] and flags["alt_N_faithful_bimodule"]


class TestCsl:
    def test_trivial_lattice(self):
        a = csl_algebra(CSLattice.from_lists(2, [(0, 0), (1, 1)]))
        assert a.dim == 4 == oracles.csl_dim(2, [(0, 0), (1, 1)])

    def test_one_step(self):
        lat = [(0, 0), (1, 0), (1, 1)]
        a = csl_algebra(CSLattice.from_lists(2, lat))
        assert a.dim == 3 == oracles.csl_dim(2, lat)
        assert a.basis_labels == ("E11", "E12", "E22")

    def test_chain(self):
        a = csl_algebra(CSL3_CHAIN)
        assert a.dim == 6 == oracles.csl_dim(3, CSL3_CHAIN.projections)

    def test_non_chain_lattice(self):
        lat = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 1, 1)]
        a = csl_algebra(CSLattice.from_lists(3, lat))
        assert a.dim == oracles.csl_dim(3, lat) == 5

    def test_contains_diagonals_and_closed(self):
        a = csl_algebra(CSL3_CHAIN)
        for i in range(3):
            a.from_matrix(unit_matrix(3, i, i))
        for x in a.basis():
            for y in a.basis():
                a.from_matrix(a.to_matrix(x) @ a.to_matrix(y))

    def test_lattice_problems(self):
        assert not CSLattice.from_lists(2, [(0, 0), (1, 0), (0, 1)]).is_valid()
        assert not CSLattice.from_lists(2, [(1, 0), (1, 1)]).is_valid()
        with pytest.raises(ValueError):
            csl_algebra(CSLattice.from_lists(2, [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0)]))


class TestPeirce:
    def test_full_matrices_at_e11(self):
        a = full(2)
        u = assemble(peirce_context(a, a.basis_element(0)))
        assert u.sizes == {"A": 1, "M": 1, "N": 1, "B": 1}

    def test_requires_idempotent(self):
        a = full(2)
        with pytest.raises(ValueError):
            peirce_context(a, a.basis_element(1))
