"""Command-line entry point.

Exit codes: 0 success, 1 domain-level failure (invalid object or failed
check), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import fixtures
from .algebra import AlgebraError
from .formats import (
    POINTS,
    FormatError,
    algebra_from_dict,
    config_grid,
    context_from_dict,
    dump_json,
    kind_of,
    lattice_from_dict,
    lattice_to_dict,
    map_from_dict,
    map_to_dict,
    parse_grid,
    read_json,
    scalars,
)
from .maps import (
    derivation_residual,
    first_failure,
    jordan_residual,
    lie_residual,
    mn_residual,
)
from .morita import ContextError, assemble, faithfulness, validate_context
from .session import csl_session, solve_session
from .solver import GRID
from .structure import (
    check_derivation_structure,
    check_jordan_structure,
    check_lie_structure,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    p.add_argument("--seed", type=int, default=d(None), help="random seed (default 0)")
    p.add_argument("--budget", type=int, default=d(None),
                   help="random pairs per session (default 200, or the config value)")
    p.add_argument("--grid", default=d(None), help='(m,n) pairs, e.g. "1,2;2,3;3,-1"')
    p.add_argument("--format", choices=("table", "structured"), default=d("table"))
    p.add_argument("--out", default=d(None), help="write the report here instead of stdout")
    p.add_argument("--timing", action="store_true", default=d(False),
                   help="include elapsed times in reports")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mnderive", parents=[_global_flags(False)], allow_abbrev=False,
        description="Exact verification of (m,n)-derivable maps at a point.")
    sub = parser.add_subparsers(dest="command", required=True)
    flags = _global_flags(True)

    p = sub.add_parser("validate", parents=[flags], allow_abbrev=False,
                       help="validate an algebra, context, lattice or map file")
    p.add_argument("path", nargs="?")
    p.add_argument("--fixture")

    p = sub.add_parser("solve", parents=[flags], allow_abbrev=False,
                       help="solve the derivable-at-Z constraint over an (m,n) grid")
    p.add_argument("config", nargs="?", help="session config file")
    p.add_argument("--fixture")
    p.add_argument("--context", help="context file")
    p.add_argument("--point", choices=POINTS)
    p.add_argument("--no-basis-sweep", action="store_true")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("classify", parents=[flags], allow_abbrev=False,
                       help="classify a linear map")
    p.add_argument("algebra", nargs="?", help="algebra or context file")
    p.add_argument("map", nargs="?", help="map file")
    p.add_argument("--fixture")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=1)

    p = sub.add_parser("csl", parents=[flags], allow_abbrev=False,
                       help="identity suite and finite analog on alg L")
    p.add_argument("lattice", nargs="?", help="lattice file")
    p.add_argument("--fixture")
    p.add_argument("--idempotents", type=int, default=16, help="idempotent sample size")

    p = sub.add_parser("export", parents=[flags], allow_abbrev=False,
                       help="write a compiled-in fixture as a file")
    p.add_argument("name", choices=fixtures.NAMES)
    p.add_argument("--what", choices=("context", "algebra", "lattice", "map"), default="context")

    sub.add_parser("fixtures", parents=[flags], allow_abbrev=False, help="list compiled-in fixtures")
    return parser


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load_fixture(name: str):
    try:
        return fixtures.load(name)
    except KeyError:
        raise UsageError(f"unknown fixture {name!r}; known: {', '.join(fixtures.NAMES)}") from None


def _grid(args, default) -> list:
    return parse_grid(args.grid) if args.grid else list(default)


# ---------------------------------------------------------------------------
# validate


def cmd_validate(args) -> int:
    if args.fixture:
        fx = _load_fixture(args.fixture)
        data, base, name = fx.context.to_dict(), Path("."), fx.name
    elif args.path:
        data, base, name = read_json(args.path), Path(args.path).parent, args.path
    else:
        raise UsageError("validate needs a path or --fixture")
    kind = kind_of(data)
    out = {"subject": name, "kind": kind, "valid": True, "violations": []}
    try:
        if kind == "algebra":
            a = algebra_from_dict(data)
            out["dim"] = a.dim
        elif kind == "context":
            ctx = context_from_dict(data, base)
            out["violations"] = [str(v) for v in validate_context(ctx)]
            out["faithfulness"] = faithfulness(ctx).as_dict()
        elif kind == "lattice":
            out["violations"] = lattice_from_dict(data).problems()
        else:
            rows = data["matrix"]
            if not isinstance(rows, list) or any(not isinstance(r, list) or len(r) != len(rows)
                                                 for r in rows):
                raise FormatError("map.matrix", "expected a square list of rows")
            scalars(rows, (len(rows), len(rows)), "map.matrix")
    except AlgebraError as exc:
        out["violations"] = [str(exc)]
    out["valid"] = not out["violations"]
    if args.format == "structured":
        _emit(args, dump_json(out))
    else:
        lines = [f"{name}: {kind} {'valid' if out['valid'] else 'INVALID'}"]
        lines += [f"  violation: {v}" for v in out["violations"]]
        for k, v in out.get("faithfulness", {}).items():
            lines.append(f"  {k}: {'yes' if v else 'no'}")
        _emit(args, "\n".join(lines))
    return EXIT_OK if out["valid"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# solve


def cmd_solve(args) -> int:
    config = read_json(args.config) if args.config else {}
    base = Path(args.config).parent if args.config else Path(".")
    fixture = args.fixture or config.get("fixture")
    context = args.context or config.get("context")
    if fixture and context:
        raise UsageError("give either a fixture or a context file, not both")
    if fixture:
        u = _load_fixture(fixture).gma
        subject = {"fixture": fixture}
    elif context:
        path = Path(context) if args.context else base / context
        u = assemble(context_from_dict(read_json(path), path.parent))
        subject = {"context": str(context)}
    else:
        raise UsageError("solve needs --fixture, --context or a config naming one")
    point_kind = args.point or config.get("point", "zero")
    if point_kind not in POINTS:
        raise FormatError("config.point", f"expected one of {', '.join(POINTS)}")
    grid = parse_grid(args.grid) if args.grid else (
        config_grid(config["grid"]) if "grid" in config else list(GRID))
    budget = args.budget if args.budget is not None else config.get("budget", 200)
    seed = args.seed if args.seed is not None else config.get("seed", 0)
    sweep = not args.no_basis_sweep and config.get("basis_sweep", True)
    report = solve_session(u, point_kind, grid, budget=budget, seed=seed, basis_sweep=sweep,
                           workers=args.workers, timing=args.timing, config=subject)
    _emit(args, dump_json(report.to_dict()) if args.format == "structured" else report.table())
    return EXIT_OK if report.ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# classify


def _witness(delta, residual) -> str:
    hit = first_failure(delta, residual)
    if hit is None:
        return "yes"
    labels = delta.algebra.basis_labels
    return f"no  (first failure at basis pair ({labels[hit[0]]}, {labels[hit[1]]}))"


def cmd_classify(args) -> int:
    gma = None
    if args.fixture:
        fx = _load_fixture(args.fixture)
        gma, algebra = fx.gma, fx.gma.algebra
        if args.map:
            raise UsageError("with --fixture give the map as the first positional argument")
        map_path = args.algebra
        if map_path is None:
            if "delta" not in fx.maps:
                raise UsageError(f"fixture {fx.name!r} ships no map; pass a map file")
            delta = fx.maps["delta"]
        else:
            delta = map_from_dict(read_json(map_path), algebra)
    else:
        if not (args.algebra and args.map):
            raise UsageError("classify needs an algebra/context file and a map file")
        data = read_json(args.algebra)
        if kind_of(data) == "context":
            gma = assemble(context_from_dict(data, Path(args.algebra).parent))
            algebra = gma.algebra
        else:
            algebra = algebra_from_dict(data)
        mdata = read_json(args.map)
        rows = mdata.get("matrix")
        if not isinstance(rows, list) or len(rows) != algebra.dim:
            raise UsageError(f"map dimension does not match algebra dimension {algebra.dim}")
        delta = map_from_dict(mdata, algebra)
    m, n = args.m, args.n
    if m == 0 and n == 0:
        raise UsageError("m and n must not both be zero")
    result = {
        "derivation": _witness(delta, derivation_residual),
        "jordan": _witness(delta, jordan_residual),
        "lie": _witness(delta, lie_residual),
        "mn": _witness(delta, lambda d, x, y: mn_residual(d, x, y, m, n)),
    }
    reports = []
    if gma is not None:
        reports = [check_lie_structure(delta, gma), check_jordan_structure(delta, gma),
                   check_derivation_structure(delta, gma)]
    if args.format == "structured":
        _emit(args, dump_json({
            "map": map_to_dict(delta), "m": m, "n": n,
            "classification": {k: v == "yes" for k, v in result.items()},
            "witnesses": {k: v for k, v in result.items() if v != "yes"},
            "structure": [r.to_dict() for r in reports]}))
    else:
        lines = [f"Derivation: {result['derivation']}", f"Jordan: {result['jordan']}",
                 f"Lie: {result['lie']}", f"({m},{n})-derivation: {result['mn']}"]
        lines += [r.table() for r in reports]
        _emit(args, "\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------------------
# csl


def cmd_csl(args) -> int:
    if args.fixture:
        fx = _load_fixture(args.fixture)
        if fx.lattice is None:
            raise UsageError(f"fixture {fx.name!r} has no lattice")
        lattice, name = fx.lattice, fx.name
    elif args.lattice:
        data = read_json(args.lattice)
        lattice, name = lattice_from_dict(data), str(data.get("name", Path(args.lattice).stem))
    else:
        raise UsageError("csl needs a lattice file or --fixture")
    problems = lattice.problems()
    if problems:
        for p in problems:
            print(f"invalid lattice: {p}", file=sys.stderr)
        return EXIT_FAIL
    budget = 200 if args.budget is None else args.budget
    report = csl_session(lattice, _grid(args, [(1, 2)]), budget=budget, seed=args.seed or 0,
                         idempotent_budget=args.idempotents, name=name, timing=args.timing)
    _emit(args, dump_json(report.to_dict()) if args.format == "structured" else report.table())
    return EXIT_OK if report.ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# export / fixtures


def cmd_export(args) -> int:
    fx = _load_fixture(args.name)
    if args.what == "context":
        data = fx.context.to_dict()
    elif args.what == "algebra":
        data = fx.algebra.to_dict()
    elif args.what == "lattice":
        if fx.lattice is None:
            raise UsageError(f"fixture {fx.name!r} has no lattice")
        data = lattice_to_dict(fx.lattice, fx.name)
    else:
        if "delta" not in fx.maps:
            raise UsageError(f"fixture {fx.name!r} ships no map")
        data = map_to_dict(fx.maps["delta"])
    _emit(args, dump_json(data))
    return EXIT_OK


def cmd_fixtures(args) -> int:
    lines = []
    for name in fixtures.NAMES:
        fx = fixtures.load(name)
        lines.append(f"{name:<18} dim {fx.algebra.dim:>2}  {fx.description}")
    _emit(args, "\n".join(lines))
    return EXIT_OK


COMMANDS = {"validate": cmd_validate, "solve": cmd_solve, "classify": cmd_classify,
            "csl": cmd_csl, "export": cmd_export, "fixtures": cmd_fixtures}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (FormatError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AlgebraError, ContextError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
