"""JSON file formats for algebras, contexts, lattices, maps and session configs.

Malformed input raises :class:`FormatError` with a location string. Domain
problems (non-associative tensors, invalid contexts) surface as the
exceptions of the modules that detect them.
"""

from __future__ import annotations

import json
from pathlib import Path

from .algebra import Algebra
from .exactlin import Matrix, ScalarParseError, format_scalar, parse_scalar
from .maps import LinearMap
from .morita import Bimodule, CSLattice, MoritaContext


class FormatError(ValueError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


def read_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(str(path), f"cannot read file ({exc.strerror})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from exc
    if not isinstance(data, dict):
        raise FormatError(str(path), "top level must be an object")
    return data


def dump_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def kind_of(data: dict) -> str:
    if "structure" in data:
        return "algebra"
    if "phi" in data or "psi" in data:
        return "context"
    if "projections" in data:
        return "lattice"
    if "matrix" in data:
        return "map"
    raise FormatError("<root>", "cannot tell the object kind from its keys")


def _require(data: dict, key: str, where: str):
    if not isinstance(data, dict):
        raise FormatError(where, "expected an object")
    if key not in data:
        raise FormatError(where, f"missing key {key!r}")
    return data[key]


def _scalar(x, where: str):
    try:
        return parse_scalar(x)
    except ScalarParseError as exc:
        raise FormatError(where, str(exc)) from exc


def _count(x, where: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool) or x < 0:
        raise FormatError(where, "expected a non-negative integer")
    return x


def scalars(data, shape: tuple, where: str):
    """Nested list of scalar strings with the given shape, parsed to Fractions."""
    if not shape:
        return _scalar(data, where)
    if not isinstance(data, list) or len(data) != shape[0]:
        raise FormatError(where, f"expected a list of length {shape[0]}")
    return [scalars(x, shape[1:], f"{where}[{i}]") for i, x in enumerate(data)]


def algebra_from_dict(data: dict, where: str = "algebra") -> Algebra:
    dim = _count(_require(data, "dim", where), f"{where}.dim")
    unit = scalars(_require(data, "unit", where), (dim,), f"{where}.unit")
    structure = scalars(_require(data, "structure", where), (dim, dim, dim), f"{where}.structure")
    labels = data.get("basis_labels")
    return Algebra(structure, unit, name=str(data.get("name", "")), basis_labels=labels)


def _algebra_ref(data, base: Path, where: str) -> Algebra:
    if isinstance(data, dict) and "file" in data:
        path = base / data["file"]
        return algebra_from_dict(read_json(path), str(path))
    return algebra_from_dict(data, where)


def _bimodule(data, left: Algebra, right: Algebra, where: str) -> Bimodule:
    dim = _count(_require(data, "dim", where), f"{where}.dim")
    la = scalars(_require(data, "left_action", where), (left.dim, dim, dim), f"{where}.left_action")
    ra = scalars(_require(data, "right_action", where), (dim, right.dim, dim), f"{where}.right_action")
    return Bimodule(left, right, dim, la, ra, name=where)


def context_from_dict(data: dict, base: Path | str = ".") -> MoritaContext:
    """Algebras may be inline objects or ``{"file": relative path}``.

    ``phi`` and ``psi`` are always required; no default pairing is assumed.
    """
    base = Path(base)
    A = _algebra_ref(_require(data, "A", "context"), base, "A")
    B = _algebra_ref(_require(data, "B", "context"), base, "B")
    M = _bimodule(_require(data, "M", "context"), A, B, "M")
    N = _bimodule(_require(data, "N", "context"), B, A, "N")
    phi = scalars(_require(data, "phi", "context"), (M.dim, N.dim, A.dim), "phi")
    psi = scalars(_require(data, "psi", "context"), (N.dim, M.dim, B.dim), "psi")
    return MoritaContext(A, B, M, N, phi, psi, name=str(data.get("name", "")))


def lattice_from_dict(data: dict) -> CSLattice:
    n = _count(_require(data, "n", "lattice"), "lattice.n")
    projections = _require(data, "projections", "lattice")
    if not isinstance(projections, list):
        raise FormatError("lattice.projections", "expected a list")
    out = []
    for i, p in enumerate(projections):
        if not isinstance(p, list) or len(p) != n:
            raise FormatError(f"lattice.projections[{i}]", f"expected a list of length {n}")
        for j, x in enumerate(p):
            if x not in (0, 1) or isinstance(x, bool):
                raise FormatError(f"lattice.projections[{i}][{j}]", "entries must be 0 or 1")
        out.append(p)
    return CSLattice.from_lists(n, out)


def lattice_to_dict(lattice: CSLattice, name: str = "") -> dict:
    return {"name": name, "n": lattice.n, "projections": [list(p) for p in lattice.projections]}


def map_from_dict(data: dict, algebra: Algebra) -> LinearMap:
    rows = _require(data, "matrix", "map")
    d = algebra.dim
    if not isinstance(rows, list) or len(rows) != d:
        raise FormatError("map.matrix", f"expected {d} rows to match the algebra dimension")
    parsed = scalars(rows, (d, d), "map.matrix")
    return LinearMap(algebra, Matrix.from_rows(parsed, d))


def map_to_dict(delta: LinearMap) -> dict:
    return {"algebra": delta.algebra.name,
            "matrix": [[format_scalar(x) for x in r] for r in delta.matrix.entries]}


POINTS = ("zero", "corner", "identity")


def parse_grid(text: str) -> list:
    """``"1,2;2,3;3,-1"`` -> ``[(1, 2), (2, 3), (3, -1)]``."""
    out = []
    for chunk in text.replace(" ", "").split(";"):
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise FormatError("--grid", f"expected m,n pairs separated by ';', got {chunk!r}")
        try:
            m, n = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise FormatError("--grid", f"non-integer entry in {chunk!r}") from exc
        if m == 0 and n == 0:
            raise FormatError("--grid", "m and n must not both be zero")
        out.append((m, n))
    if not out:
        raise FormatError("--grid", "empty grid")
    return out


def config_grid(raw, where: str = "config.grid") -> list:
    if not isinstance(raw, list):
        raise FormatError(where, "expected a list of [m, n] pairs")
    out = []
    for i, pair in enumerate(raw):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)):
            raise FormatError(f"{where}[{i}]", "expected [m, n] integers")
        if pair == [0, 0]:
            raise FormatError(f"{where}[{i}]", "m and n must not both be zero")
        out.append((pair[0], pair[1]))
    return out
