import random

import pytest
from hypothesis import given, strategies as st

from mnderive.fixtures import NAMES, load
from mnderive.maps import (
    LinearMap,
    derivation_space,
    inner_derivation_space,
    is_derivation,
    is_jordan_derivation,
    is_lie_derivation,
    is_mn_derivation,
    jordan_derivation_space,
    lie_derivation_space,
    mn_derivation_space,
    mn_residual,
    random_map_in,
    unit_annihilating_space,
)
from helpers import full, triangular
import oracles

GRID = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 3), (3, -1)]


class TestClassifiers:
    def test_shipped_map(self):
        fx = load("remark2")
        delta = fx.maps["delta"]
        assert oracles.shipped_map_residuals() == (True, False)
        assert is_jordan_derivation(delta)
        assert not is_derivation(delta)

    @pytest.mark.parametrize("name", NAMES)
    def test_zero_map(self, name):
        z = LinearMap.zero(load(name).algebra)
        assert is_derivation(z) and is_jordan_derivation(z) and is_lie_derivation(z)
        assert all(is_mn_derivation(z, m, n) for m, n in GRID)

    def test_inner_derivation_of_matrix_unit(self):
        m2 = full(2)
        ad = LinearMap.inner(m2.basis_element(1))
        assert is_derivation(ad) and is_jordan_derivation(ad) and is_lie_derivation(ad)
        assert all(is_mn_derivation(ad, m, n) for m, n in GRID)

    def test_identity_map_is_not_a_derivation(self):
        ident = LinearMap.identity(full(2))
        assert not is_derivation(ident)
        assert not is_mn_derivation(ident, 1, 2)

    def test_both_zero_rejected(self):
        with pytest.raises(ValueError):
            is_mn_derivation(LinearMap.zero(full(2)), 0, 0)
        with pytest.raises(ValueError):
            mn_derivation_space(full(2), 0, 0)

    @given(st.integers(0, 10**6), st.sampled_from(["t2", "gm2x2", "remark2", "csl3_chain"]))
    def test_derivation_implies_everything(self, seed, name):
        a = load(name).algebra
        rng = random.Random(seed)
        delta = random_map_in(derivation_space(a), a, rng)
        assert is_jordan_derivation(delta) and is_lie_derivation(delta)
        assert all(is_mn_derivation(delta, m, n) for m, n in GRID)


class TestSpaces:
    def test_full_matrices(self):
        # all derivations inner: 4 - 1
        assert derivation_space(full(2)).dim == 3 == oracles.identity_space_dim(
            oracles.full_matrices(2), "derivation")

    def test_triangular(self):
        assert derivation_space(triangular(2)).dim == 2 == oracles.identity_space_dim(
            oracles.upper_triangular(2), "derivation")

    def test_shipped_map_is_proper_jordan(self):
        a = load("remark2").algebra
        d, j = derivation_space(a), jordan_derivation_space(a)
        assert d < j and j.dim >= d.dim + 1
        assert (d.dim, j.dim) == (4, 6)

    @pytest.mark.parametrize("name,oracle", [
        ("t2", oracles.upper_triangular(2)), ("gm2x2", oracles.full_matrices(2)),
        ("remark2", oracles.orthogonal_module_algebra()), ("csl3_chain", oracles.upper_triangular(3))])
    def test_dimensions_against_oracle(self, name, oracle):
        a = load(name).algebra
        assert derivation_space(a).dim == oracles.identity_space_dim(oracle, "derivation")
        assert jordan_derivation_space(a).dim == oracles.identity_space_dim(oracle, "jordan")
        assert lie_derivation_space(a).dim == oracles.identity_space_dim(oracle, "lie")
        for m, n in [(1, 2), (1, 1), (1, -1)]:
            assert mn_derivation_space(a, m, n).dim == oracles.identity_space_dim(oracle, "mn", m, n)

    @pytest.mark.parametrize("name", NAMES)
    def test_cross_validation(self, name):
        a = load(name).algebra
        d = derivation_space(a)
        assert mn_derivation_space(a, 1, 0) == d == mn_derivation_space(a, 0, 1)
        assert mn_derivation_space(a, 1, 1) == jordan_derivation_space(a)
        assert mn_derivation_space(a, 1, -1) == lie_derivation_space(a)
        assert d <= jordan_derivation_space(a) and d <= lie_derivation_space(a)
        assert inner_derivation_space(a) <= d

    @pytest.mark.parametrize("name", ["t2", "remark2", "csl3_chain"])
    @pytest.mark.parametrize("k", [2, -1, 7])
    def test_scaling_invariance(self, name, k):
        a = load(name).algebra
        for m, n in [(1, 2), (1, 1), (3, -1)]:
            assert mn_derivation_space(a, m, n) == mn_derivation_space(a, k * m, k * n)

    @pytest.mark.parametrize("name", ["gm2x2", "remark2"])
    def test_space_members_satisfy_identity(self, name):
        a = load(name).algebra
        rng = random.Random(3)
        for m, n in [(1, 2), (1, 1)]:
            delta = random_map_in(mn_derivation_space(a, m, n), a, rng)
            for s in a.basis():
                for t in a.basis():
                    assert mn_residual(delta, s, t, m, n).is_zero()

    def test_unit_annihilating(self):
        a = full(2)
        space = unit_annihilating_space(a)
        assert space.dim == 16 - 4
        assert derivation_space(a) <= space


class TestLinearMap:
    def test_dict_round_trip(self):
        a = load("remark2").algebra
        delta = LinearMap.random(a, random.Random(2))
        assert LinearMap.from_dict(a, delta.to_dict()) == delta

    def test_from_images(self):
        a = full(2)
        imgs = [a.basis_element(3), a.zero, a.zero, a.basis_element(0)]
        f = LinearMap.from_images(a, imgs)
        assert f(a.basis_element(0)) == a.basis_element(3)
        assert f(a.unit) == a.unit

    def test_shape_checked(self):
        with pytest.raises(ValueError):
            LinearMap.from_vector(full(2), [0] * 9)
