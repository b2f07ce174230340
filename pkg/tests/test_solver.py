import random

import pytest
from hypothesis import given, settings, strategies as st

from mnderive.algebra import idempotents_sample, is_idempotent
from mnderive.exactlin import Subspace, subspace_leq
from mnderive.fixtures import NAMES, load
from mnderive.maps import (
    LinearMap,
    derivation_space,
    jordan_derivation_space,
    lie_derivation_space,
    mn_derivation_space,
    mn_residual,
    random_map_in,
    unit_annihilating_space,
)
from mnderive.morita import csl_algebra
from mnderive.fixtures import CSL3_CHAIN
from mnderive.session import lattice_projections
from mnderive.solver import (
    GRID,
    HypothesisError,
    PairError,
    PairFamily,
    compare,
    constraint_for_pair,
    csl_identity_suite,
    pairs_at_corner,
    pairs_at_identity,
    pairs_at_zero,
    pairs_idempotent,
    pairs_random,
    pairs_zero_products,
    point,
    solve,
)


def family_for(u, kind):
    return {"zero": pairs_at_zero, "corner": pairs_at_corner, "identity": pairs_at_identity}[kind](u)


class TestConstraints:
    def test_zero_operand_gives_zero_rows(self):
        a = load("gm2x2").algebra
        rows = constraint_for_pair(a.zero, a.basis_element(1), 1, 2)
        assert all(all(x == 0 for x in r) for r in rows)

    @pytest.mark.parametrize("mn", [(1, 2), (2, 3), (1, 0), (3, -1)])
    def test_unit_pair_forces_unit_annihilation(self, mn):
        a = load("gm2x2").algebra
        fam = PairFamily(a.unit)
        fam.add(a.unit, a.unit, "unit")
        sol = solve(a, a.unit, *mn, fam)
        assert sol.space == unit_annihilating_space(a)

    def test_unit_pair_is_vacuous_for_lie_type(self):
        a = load("t2").algebra
        fam = PairFamily(a.unit)
        fam.add(a.unit, a.unit, "unit")
        assert solve(a, a.unit, 1, -1, fam).dim == a.dim ** 2

    def test_wrong_pair_rejected(self):
        a = load("t2").algebra
        fam = PairFamily(a.zero)
        with pytest.raises(PairError):
            fam.add(a.unit, a.unit, "bad")
        with pytest.raises(PairError):
            constraint_for_pair(a.unit, a.unit, 1, 2, z=a.zero)

    def test_family_for_other_point_rejected(self):
        u = load("t2").gma
        with pytest.raises(PairError):
            solve(u, point(u, "identity"), 1, 2, pairs_at_zero(u))

    def test_both_zero_rejected(self):
        u = load("t2").gma
        with pytest.raises(ValueError):
            solve(u, point(u, "zero"), 0, 0, pairs_at_zero(u))

    @pytest.mark.parametrize("mn", [(1, 2), (1, 1), (2, -3)])
    def test_rows_match_residual(self, mn):
        a = load("csl3_chain").algebra
        rng = random.Random(3)
        for _ in range(5):
            s = a.element(rng.randint(-2, 2) for _ in range(a.dim))
            t = a.element(rng.randint(-2, 2) for _ in range(a.dim))
            delta = LinearMap.random(a, rng)
            rows = constraint_for_pair(s, t, *mn)
            v = delta.vector()
            evaluated = [sum(x * y for x, y in zip(r, v)) for r in rows]
            assert evaluated == list(mn_residual(delta, s, t, *mn).coords)


class TestPairFamilies:
    def test_t2_zero_sweep_counts(self):
        fam = pairs_at_zero(load("t2").gma)
        assert len(fam) == 6
        assert fam.counts() == {"zero:1": 3, "zero:2": 1, "zero:5": 1, "zero:6": 1}

    @pytest.mark.parametrize("name", NAMES)
    @pytest.mark.parametrize("kind", ["zero", "corner", "identity"])
    def test_every_pair_verified(self, name, kind):
        u = load(name).gma
        fam = family_for(u, kind)
        z = point(u, kind).element
        assert len(fam) > 0
        assert all(s * t == z for s, t in fam.pairs)

    def test_trivial_pairs_present(self):
        u = load("gm2x2").gma
        corner = pairs_at_corner(u)
        assert (u.IA, u.IA) in corner.pairs
        ident = pairs_at_identity(u)
        assert (u.algebra.unit, u.algebra.unit) in ident.pairs

    def test_sampled_zero_family(self):
        u = load("gm2x2").gma
        full = pairs_at_zero(u)
        part = pairs_at_zero(u, basis_sweep=False, seed=5, sample=4)
        assert len(part) == 4
        assert set(part.pairs) <= set(full.pairs)
        assert part.pairs == pairs_at_zero(u, basis_sweep=False, seed=5, sample=4).pairs

    @pytest.mark.parametrize("kind", ["zero", "identity", "corner"])
    def test_random_pairs_verified(self, kind):
        u = load("gm2x2").gma
        z = point(u, kind)
        fam = pairs_random(u.algebra, z, 30, seed=11)
        assert len(fam) == 30
        assert all(s * t == z.element for s, t in fam.pairs)

    def test_random_pairs_reproducible(self):
        a = load("csl3_chain").algebra
        one = pairs_random(a, a.zero, 25, seed=7)
        two = pairs_random(a, a.zero, 25, seed=7)
        other = pairs_random(a, a.zero, 25, seed=8)
        assert one.pairs == two.pairs
        assert one.pairs != other.pairs

    def test_random_pairs_at_identity_are_inverses(self):
        a = load("m2").algebra
        fam = pairs_random(a, a.unit, 10, seed=2)
        assert all(t * s == a.unit for s, t in fam.pairs)

    def test_zero_product_and_idempotent_pairs(self):
        a = csl_algebra(CSL3_CHAIN)
        idem = idempotents_sample(a, budget=12, seed=0)
        assert all(is_idempotent(p) for p in idem)
        for fam in (pairs_zero_products(a), pairs_idempotent(a, idem)):
            assert len(fam) > 0
            assert all((s * t).is_zero() for s, t in fam.pairs)


class TestSolve:
    def test_empty_family_gives_everything(self):
        u = load("t2").gma
        fam = PairFamily(u.algebra.zero)
        assert solve(u, point(u, "zero"), 1, 2, fam).dim == u.algebra.dim ** 2

    def test_more_pairs_never_grow(self):
        u = load("gm2x2").gma
        z = point(u, "zero")
        fam = pairs_at_zero(u)
        prev = u.algebra.dim ** 2
        partial = PairFamily(z.element)
        for (s, t), label in zip(fam.pairs, fam.labels):
            partial.add(s, t, label)
            cur = solve(u, z, 1, 2, partial).space
            assert cur.dim <= prev
            prev = cur.dim
        assert prev == derivation_space(u.algebra).dim

    def test_worker_count_irrelevant(self):
        u = load("csl3_chain").gma
        z = point(u, "zero")
        fam = pairs_at_zero(u)
        one = solve(u, z, 2, 3, fam, workers=1)
        four = solve(u, z, 2, 3, fam, workers=4)
        assert one.space == four.space
        assert one.space.basis == four.space.basis

    @pytest.mark.parametrize("k", [2, -3])
    def test_scaling_m_n_together(self, k):
        u = load("gm2x2").gma
        z = point(u, "zero")
        fam = pairs_at_zero(u)
        assert solve(u, z, 1, 2, fam).space == solve(u, z, k, 2 * k, fam).space

    def test_swap_at_zero_matches_reversed_pairs(self):
        u = load("t2").gma
        z = point(u, "zero")
        fam = pairs_at_zero(u)
        rev = PairFamily(z.element)
        for s, t in fam.pairs:
            if (t * s).is_zero():
                rev.add(t, s, "swap")
        # (n, m) on (t, s) is the same equation as (m, n) on (s, t)
        fam_common = PairFamily(z.element)
        for s, t in rev.pairs:
            fam_common.add(t, s, "orig")
        assert solve(u, z, 1, 2, fam_common).space == solve(u, z, 2, 1, rev).space

    @pytest.mark.parametrize("name", NAMES)
    @pytest.mark.parametrize("kind", ["zero", "corner", "identity"])
    def test_soundness_over_grid(self, name, kind):
        u = load(name).gma
        fam = family_for(u, kind)
        d_space = derivation_space(u.algebra)
        for m, n in GRID:
            sol = solve(u, point(u, kind), m, n, fam)
            assert subspace_leq(d_space, sol.space), (m, n)

    @pytest.mark.parametrize("name", ["t2", "gm2x2", "remark2"])
    def test_global_solutions_solve_at_zero(self, name):
        u = load(name).gma
        fam = pairs_at_zero(u)
        for m, n in [(1, 2), (1, 1), (1, -1)]:
            sol = solve(u, point(u, "zero"), m, n, fam)
            assert subspace_leq(mn_derivation_space(u.algebra, m, n), sol.space)

    def test_solution_maps_satisfy_family(self):
        u = load("remark2").gma
        z = point(u, "zero")
        fam = pairs_at_zero(u)
        sol = solve(u, z, 1, 1, fam)
        for delta in sol.maps(u.algebra):
            for s, t in fam.pairs:
                assert mn_residual(delta, s, t, 1, 1).is_zero()


class TestCompare:
    def test_verdicts(self):
        a = load("remark2").algebra
        d, j = derivation_space(a), jordan_derivation_space(a)
        assert compare(j, d).verdict == "StrictSuperset"
        assert compare(d, j).verdict == "StrictSubset"
        assert compare(d, d).verdict == "Equal"
        n = a.dim ** 2
        x = Subspace.span([[1 if i == 0 else 0 for i in range(n)]], n)
        y = Subspace.span([[1 if i == 1 else 0 for i in range(n)]], n)
        c = compare(x, y)
        assert c.verdict == "Incomparable" and c.intersection_dim == 0

    def test_lie_contains_derivations(self):
        a = load("csl3_chain").algebra
        c = compare(lie_derivation_space(a), derivation_space(a))
        assert c.verdict == "StrictSuperset"
        assert c.to_dict()["intersection_dim"] == derivation_space(a).dim


class TestIdentitySuite:
    def setup_method(self):
        self.a = csl_algebra(CSL3_CHAIN)
        self.idem = idempotents_sample(self.a, budget=12, seed=0)
        self.proj = lattice_projections(self.a, CSL3_CHAIN)

    def test_derivation_passes(self):
        rng = random.Random(0)
        delta = random_map_in(derivation_space(self.a), self.a, rng)
        rep = csl_identity_suite(self.a, delta, self.idem, self.proj, 1, 2)
        assert rep.ok
        assert rep.notes["idempotents"] == len(self.idem)

    def test_idempotent_rule_violation(self):
        # d(E11) = E11, d(E33) = -E11, zero elsewhere: d(I) = 0 but d(P)P + Pd(P) = 2 d(P) for P = E11
        a = self.a
        e11 = a.basis_element(0)
        images = [a.zero] * a.dim
        images[0] = e11
        images[a.dim - 1] = -e11
        delta = LinearMap.from_images(a, images)
        assert delta(a.unit).is_zero()
        rep = csl_identity_suite(a, delta, [e11, a.unit - e11], self.proj, 1, 2)
        assert not rep["idempotent"].passed
        assert rep.first_failure().id == "idempotent"

    def test_requires_unit_annihilation(self):
        delta = LinearMap.identity(self.a)
        with pytest.raises(HypothesisError):
            csl_identity_suite(self.a, delta, self.idem, self.proj, 1, 2)

    def test_requires_nonzero_sum(self):
        delta = LinearMap.zero(self.a)
        with pytest.raises(HypothesisError):
            csl_identity_suite(self.a, delta, self.idem, self.proj, 1, -1)


@settings(max_examples=15)
@given(seed=st.integers(0, 10_000), m=st.integers(-3, 3), n=st.integers(-3, 3))
def test_derivations_satisfy_any_random_family(seed, m, n):
    if m == 0 and n == 0:
        return
    u = load("gm2x2").gma
    fam = pairs_random(u.algebra, u.algebra.zero, 10, seed=seed)
    sol = solve(u, u.algebra.zero, m, n, fam)
    assert subspace_leq(derivation_space(u.algebra), sol.space)
    assert sol.pair_count == 10
