"""Sessions: run the solver over an (m,n) grid and collect a serializable report."""

from __future__ import annotations

import hashlib
import time
from dataclasses import asdict, dataclass

from .algebra import Algebra, idempotents_sample
from .exactlin import Subspace
from .maps import (
    basis_maps,
    derivation_space,
    jordan_derivation_space,
    lie_derivation_space,
    unit_annihilating_space,
)
from .morita import CSLattice, GMAlgebra, csl_algebra, faithfulness
from .solver import (
    GRID,
    compare,
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
from .structure import check_lemma_conditions, check_lie_structure, lie_side_conditions

REFERENCE_LABELS = {"derivation": "derivation space", "jordan": "Jordan derivation space",
                    "lie": "Lie derivation space"}
FAILING = ("failed", "unsound")


def predicted_reference(point_kind: str, m: int, n: int) -> str | None:
    """The reference space a converged solution is expected to match.

    Over Q a characteristic condition ``char != |k|`` amounts to ``k != 0``.
    """
    if m + n == 0:
        return "lie" if point_kind in ("zero", "corner") else None
    if m == n:
        return "jordan" if point_kind == "zero" else None
    if m * n == 0:
        return None
    return "jordan" if point_kind == "identity" else "derivation"


def space_digest(space: Subspace) -> str:
    h = hashlib.sha256()
    for row in space.to_strings():
        h.update((",".join(row) + "\n").encode())
    return h.hexdigest()


@dataclass
class GridResult:
    m: int
    n: int
    pair_count: int
    pair_labels: dict
    solution_dim: int
    comparisons: dict
    expected: str | None
    status: str
    verdict: str
    sound: bool
    lemma_conditions: dict
    space: list
    digest: str
    lie_side: dict | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "GridResult":
        return cls(**data)


@dataclass
class SessionReport:
    config: dict
    subject: dict
    references: dict
    hypothesis_flags: dict
    results: list
    ok: bool
    kind: str = "solve"
    timing: dict | None = None

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "config": self.config,
            "subject": self.subject,
            "references": self.references,
            "hypothesis_flags": self.hypothesis_flags,
            "results": [r.to_dict() for r in self.results],
            "ok": self.ok,
        }
        if self.timing is not None:
            out["timing"] = self.timing
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SessionReport":
        row = GridResult if data.get("kind", "solve") == "solve" else CslResult
        return cls(config=data["config"], subject=data["subject"], references=data["references"],
                   hypothesis_flags=data["hypothesis_flags"],
                   results=[row.from_dict(r) for r in data["results"]], ok=data["ok"],
                   kind=data.get("kind", "solve"), timing=data.get("timing"))

    def table(self) -> str:
        lines = [f"{self.kind}: {self.subject.get('name', '')} (dim {self.subject.get('dim')})"]
        refs = ", ".join(f"{k} {v}" for k, v in self.references.items())
        lines.append(f"reference dims: {refs}")
        flags = ", ".join(k for k, v in self.hypothesis_flags.items() if v)
        lines.append(f"hypotheses holding: {flags or 'none'}")
        if self.kind == "solve":
            lines.append(f"{'(m,n)':>8} {'pairs':>6} {'dim':>4}  {'status':<13} verdict")
            for r in self.results:
                lines.append(f"{f'({r.m},{r.n})':>8} {r.pair_count:>6} {r.solution_dim:>4}  "
                             f"{r.status:<13} {r.verdict}")
        else:
            lines.append(f"{'(m,n)':>8} {'pairs':>6} {'dim':>4} {'d(1)=0':>7}  {'status':<13} verdict")
            for r in self.results:
                lines.append(f"{f'({r.m},{r.n})':>8} {r.pair_count:>6} {r.solution_dim:>4} "
                             f"{r.restricted_dim:>7}  {r.status:<13} {r.verdict}")
                for cid, counts in r.identities.items():
                    lines.append(f"{'':>10}{cid:<22} {counts['passed']}/{counts['maps']} maps")
        if self.timing is not None:
            lines.append(f"elapsed: {self.timing.get('total_seconds')} s")
        lines.append("overall: " + ("ok" if self.ok else "FAILED"))
        return "\n".join(lines)


def describe(comparisons: dict, expected: str | None) -> str:
    equal = [k for k in REFERENCE_LABELS if comparisons[k]["verdict"] == "Equal"]
    contains = [k for k in REFERENCE_LABELS if comparisons[k]["verdict"] == "StrictSuperset"]
    if equal:
        if expected in equal:
            equal.remove(expected)
            equal.insert(0, expected)
        text = "Equal to " + " = ".join(REFERENCE_LABELS[k] for k in equal)
        if contains:
            text += "; strictly contains " + ", ".join(REFERENCE_LABELS[k] for k in contains)
        return text
    if contains:
        return "Inconclusive; strictly contains " + ", ".join(REFERENCE_LABELS[k] for k in contains)
    return "Inconclusive; equals no reference space"


def _status(comparisons: dict, expected: str | None, sound: bool, lie_side: dict | None) -> str:
    if not sound:
        return "unsound"
    if expected is None:
        return "no_prediction"
    verdict = comparisons[expected]["verdict"]
    if expected == "lie":
        if verdict not in ("Equal", "StrictSuperset"):
            return "failed"
        if lie_side and lie_side["lie_structure_ok"] < lie_side["satisfying"]:
            return "failed"
        return "contained"
    if verdict == "Equal":
        return "verified"
    if verdict == "StrictSuperset":
        return "inconclusive"
    return "failed"


def _family(u: GMAlgebra, kind: str, basis_sweep: bool, budget: int, seed: int):
    z = point(u, kind)
    if kind == "zero":
        fam = pairs_at_zero(u, basis_sweep=basis_sweep, seed=seed, sample=budget)
    elif kind == "corner":
        fam = pairs_at_corner(u)
    else:
        fam = pairs_at_identity(u)
    fam.extend(pairs_random(u.algebra, z, budget, seed=seed))
    fam.seed = seed
    return z, fam


def solve_session(u: GMAlgebra, point_kind: str, grid=GRID, budget: int = 200, seed: int = 0,
                  basis_sweep: bool = True, workers: int = 1, timing: bool = False,
                  config: dict | None = None) -> SessionReport:
    start = time.perf_counter()
    a = u.algebra
    refs = {"derivation": derivation_space(a), "jordan": jordan_derivation_space(a),
            "lie": lie_derivation_space(a)}
    flags = faithfulness(u.context).hypothesis_flags()
    flags["rational_scalars"] = True
    flags["invertible_shifts_exist"] = True
    z, fam = _family(u, point_kind, basis_sweep, budget, seed)
    results = []
    per_grid = {}
    for m, n in grid:
        t0 = time.perf_counter()
        sol = solve(u, z, m, n, fam, hypothesis_flags=flags, workers=workers)
        comps = {k: compare(sol, ref).to_dict() for k, ref in refs.items()}
        sound = refs["derivation"] <= sol.space
        expected = predicted_reference(point_kind, m, n)
        maps = sol.maps(a)
        lemma_ok = sum(check_lemma_conditions(d, u, point_kind, m, n).ok for d in maps)
        lie_side = None
        if m + n == 0:
            satisfying = [d for d in maps if all(lie_side_conditions(d, u).values())]
            lie_side = {"basis_maps": len(maps), "satisfying": len(satisfying),
                        "lie_structure_ok": sum(check_lie_structure(d, u).ok for d in satisfying)}
        results.append(GridResult(
            m=m, n=n, pair_count=sol.pair_count, pair_labels=fam.counts(),
            solution_dim=sol.dim, comparisons=comps, expected=expected,
            status=_status(comps, expected, sound, lie_side), verdict=describe(comps, expected),
            sound=sound, lemma_conditions={"basis_maps": len(maps), "passed": lemma_ok},
            space=sol.space.to_strings(), digest=space_digest(sol.space), lie_side=lie_side))
        per_grid[f"{m},{n}"] = round(time.perf_counter() - t0, 3)
    report = SessionReport(
        config=dict(config or {}, point=point_kind, grid=[list(g) for g in grid], budget=budget,
                    seed=seed, basis_sweep=basis_sweep),
        subject={"name": a.name, "dim": a.dim, "corner_dims": dict(u.sizes)},
        references={k: v.dim for k, v in refs.items()},
        hypothesis_flags=flags, results=results,
        ok=not any(r.status in FAILING for r in results))
    if timing:
        report.timing = {"total_seconds": round(time.perf_counter() - start, 3), "per_grid": per_grid}
    return report


# ---------------------------------------------------------------------------
# alg L


SUITE_IDS = ("idempotent", "idempotent_jordan", "idempotent_sandwich", "idempotent_products",
             "lattice_left", "lattice_right")


@dataclass
class CslResult:
    m: int
    n: int
    pair_count: int
    solution_dim: int
    restricted_dim: int
    comparison: dict
    identities: dict
    status: str
    verdict: str
    space: list
    digest: str

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "CslResult":
        return cls(**data)


def lattice_projections(a: Algebra, lattice: CSLattice) -> list:
    return [a.from_matrix(p) for p in lattice.projection_matrices()]


def csl_session(lattice: CSLattice, grid=((1, 2),), budget: int = 200, seed: int = 0,
                idempotent_budget: int = 16, name: str = "", timing: bool = False,
                config: dict | None = None) -> SessionReport:
    """Solve at 0 on alg L with ``d(1) = 0`` and run the identity suite on
    every basis map of the restricted solution (finite analog)."""
    start = time.perf_counter()
    a = csl_algebra(lattice, name=name)
    der = derivation_space(a)
    restrict = unit_annihilating_space(a)
    idem = idempotents_sample(a, idempotent_budget, seed)
    projections = lattice_projections(a, lattice)
    z = a.zero
    fam = pairs_zero_products(a)
    fam.extend(pairs_idempotent(a, idem))
    fam.extend(pairs_random(a, z, budget, seed=seed))
    results = []
    for m, n in grid:
        sol = solve(a, z, m, n, fam)
        restricted = sol.space.intersect(restrict)
        comp = compare(restricted, der).to_dict()
        counts = {cid: {"maps": 0, "passed": 0} for cid in SUITE_IDS}
        suite_ok = True
        if m + n != 0:
            for d in basis_maps(restricted, a):
                rep = csl_identity_suite(a, d, idem, projections, m, n)
                for cond in rep.conditions:
                    counts[cond.id]["maps"] += 1
                    counts[cond.id]["passed"] += cond.passed
                suite_ok &= rep.ok
        if not suite_ok or not der <= restricted:
            status = "failed"
        elif m + n == 0:
            status = "no_prediction"
        elif comp["verdict"] == "Equal":
            status = "verified"
        else:
            status = "inconclusive"
        verdict = ("finite analog: restricted solution equals derivation space"
                   if comp["verdict"] == "Equal"
                   else f"finite analog: restricted solution is {comp['verdict']} of derivation space")
        results.append(CslResult(m=m, n=n, pair_count=len(fam), solution_dim=sol.dim,
                                 restricted_dim=restricted.dim, comparison=comp, identities=counts,
                                 status=status, verdict=verdict, space=restricted.to_strings(),
                                 digest=space_digest(restricted)))
    report = SessionReport(
        config=dict(config or {}, grid=[list(g) for g in grid], budget=budget, seed=seed,
                    idempotent_budget=idempotent_budget),
        subject={"name": name, "dim": a.dim, "lattice": [list(p) for p in lattice.projections],
                 "idempotents": len(idem), "projections": len(projections)},
        references={"derivation": der.dim},
        hypothesis_flags={"rational_scalars": True},
        results=results, ok=not any(r.status == "failed" for r in results), kind="csl")
    if timing:
        report.timing = {"total_seconds": round(time.perf_counter() - start, 3)}
    return report

