import pytest

from mnderive.fixtures import NAMES, load
from mnderive.session import describe, predicted_reference, solve_session
from mnderive.solver import GRID


@pytest.mark.parametrize("point,m,n,expected", [
    ("zero", 1, 2, "derivation"), ("corner", 2, 3, "derivation"), ("identity", 1, 2, "jordan"),
    ("zero", 1, 1, "jordan"), ("corner", 1, 1, None), ("identity", 2, 2, None),
    ("zero", 1, -1, "lie"), ("corner", 3, -3, "lie"), ("identity", 1, -1, None),
    ("zero", 1, 0, None), ("identity", 0, 3, None),
])
def test_prediction_table(point, m, n, expected):
    assert predicted_reference(point, m, n) == expected


def test_describe():
    eq = {"verdict": "Equal"}
    sup = {"verdict": "StrictSuperset"}
    sub = {"verdict": "StrictSubset"}
    assert describe({"derivation": eq, "jordan": eq, "lie": sub}, "jordan") == \
        "Equal to Jordan derivation space = derivation space"
    assert describe({"derivation": sup, "jordan": sup, "lie": sub}, "derivation") == \
        "Inconclusive; strictly contains derivation space, Jordan derivation space"
    assert describe({"derivation": sub, "jordan": sub, "lie": sub}, None) == \
        "Inconclusive; equals no reference space"


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("point", ["zero", "corner", "identity"])
def test_full_grid_converges(name, point):
    rep = solve_session(load(name).gma, point, grid=GRID, budget=40, seed=1)
    assert rep.ok
    for r in rep.results:
        assert r.sound
        if r.expected is None:
            assert r.status == "no_prediction"
        elif r.expected == "lie":
            assert r.status == "contained"
        else:
            assert r.status == "verified", (r.m, r.n, r.verdict)
            assert r.lemma_conditions["passed"] == r.lemma_conditions["basis_maps"]


def test_small_random_budget_without_sweep_is_inconclusive_not_wrong():
    rep = solve_session(load("gm2x2").gma, "zero", grid=[(1, 2)], budget=1, basis_sweep=False)
    (r,) = rep.results
    assert r.sound and r.status == "inconclusive"
    assert r.verdict.startswith("Inconclusive; strictly contains derivation space")
