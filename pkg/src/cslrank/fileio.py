"""JSON files for lattices, maps and implementations.

Scalars are stored as strings in the ``p/q+r/s i`` format so files stay
exact.  Loaders report the offending field path on malformed input.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .errors import InputError
from .exactlin import Matrix, format_scalar, parse_scalar
from .lattice import SubspaceLattice, closure
from .rankmap import MapSpec, Tag
from .reconstruct import Block, Implementation


def _fail(where: str, msg: str):
    raise InputError(f"{where}: {msg}")


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(where, f"expected an integer, got {value!r}")
    return value


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        _fail(where, f"expected a list, got {type(value).__name__}")
    return value


def _field(obj, key: str, where: str):
    if not isinstance(obj, dict):
        _fail(where, f"expected an object, got {type(obj).__name__}")
    if key not in obj:
        _fail(where, f"missing field {key!r}")
    return obj[key]


def _scalar(text, where: str):
    try:
        return parse_scalar(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        _fail(where, f"malformed scalar {text!r} ({exc})")


def _matrix(rows, where: str) -> Matrix:
    rows = _list(rows, where)
    parsed = []
    for r, row in enumerate(rows):
        row = _list(row, f"{where}[{r}]")
        parsed.append([_scalar(x, f"{where}[{r}][{c}]") for c, x in enumerate(row)])
    if parsed and any(len(row) != len(parsed[0]) for row in parsed):
        _fail(where, "rows have different lengths")
    return Matrix(parsed, cols=len(parsed[0]) if parsed else 0)


def _matrix_out(A: Matrix) -> list:
    return [[format_scalar(x) for x in row] for row in A.entries]


def _load(source) -> Any:
    """Parse a path, a JSON string or an already-decoded object."""
    if isinstance(source, (dict, list)):
        return source
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"{path}: cannot read ({exc.strerror})") from None
        label = str(path)
    else:
        text, label = source, "<string>"
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{label}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _dump(obj, path=None) -> str:
    text = json.dumps(obj, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


# --- lattices ---------------------------------------------------------------


def lattice_to_dict(L: SubspaceLattice) -> dict:
    gens = [list(E) for E in L.elements if E and E != L.full]
    return {"n": L.n, "generators": gens}


def lattice_from_dict(obj, where: str = "lattice") -> SubspaceLattice:
    n = _int(_field(obj, "n", where), f"{where}.n")
    if n < 0:
        _fail(f"{where}.n", "must be nonnegative")
    gens = []
    for k, g in enumerate(_list(_field(obj, "generators", where), f"{where}.generators")):
        here = f"{where}.generators[{k}]"
        members = [_int(x, f"{here}[{t}]") for t, x in enumerate(_list(g, here))]
        for x in members:
            if not 1 <= x <= n:
                _fail(here, f"coordinate {x} outside 1..{n}")
        gens.append(members)
    return closure(n, gens)


def load_lattice(source) -> SubspaceLattice:
    return lattice_from_dict(_load(source))


def save_lattice(L: SubspaceLattice, path=None) -> str:
    return _dump(lattice_to_dict(L), path)


# --- maps -------------------------------------------------------------------


def map_to_dict(spec: MapSpec) -> dict:
    images = [
        {"from": [i, j], "to": _matrix_out(spec.images[(i, j)])}
        for i, j in sorted(spec.images)
    ]
    return {"source": lattice_to_dict(spec.source), "target": lattice_to_dict(spec.target), "images": images}


def map_from_dict(obj) -> MapSpec:
    source = lattice_from_dict(_field(obj, "source", "map"), "source")
    target = lattice_from_dict(_field(obj, "target", "map"), "target")
    images = {}
    for k, item in enumerate(_list(_field(obj, "images", "map"), "images")):
        here = f"images[{k}]"
        frm = _list(_field(item, "from", here), f"{here}.from")
        if len(frm) != 2:
            _fail(f"{here}.from", "expected [i, j]")
        i, j = (_int(x, f"{here}.from") for x in frm)
        if (i, j) in images:
            _fail(f"{here}.from", f"duplicate entry for {[i, j]}")
        B = _matrix(_field(item, "to", here), f"{here}.to")
        if B.shape != (target.n, target.n):
            _fail(f"{here}.to", f"expected {target.n}x{target.n}, got {B.rows}x{B.cols}")
        images[(i, j)] = B
    return MapSpec(source, target, images)


def load_map(source) -> MapSpec:
    return map_from_dict(_load(source))


def save_map(spec: MapSpec, path=None) -> str:
    return _dump(map_to_dict(spec), path)


# --- implementations --------------------------------------------------------


def implementation_to_dict(impl: Implementation) -> dict:
    return {
        "n_source": impl.n_source,
        "n_target": impl.n_target,
        "blocks": [
            {
                "coords_G": list(b.coords_G),
                "coords_F": list(b.coords_F),
                "mode": str(b.mode),
                "U": _matrix_out(b.U),
                "V": _matrix_out(b.V),
            }
            for b in impl.blocks
        ],
        "certificate": impl.certificate,
        "flags": list(impl.flags),
    }


def implementation_from_dict(obj) -> Implementation:
    """Rebuild an implementation; the stored certificate is not trusted, re-run ``verify``."""
    blocks = []
    for k, item in enumerate(_list(_field(obj, "blocks", "implementation"), "blocks")):
        here = f"blocks[{k}]"
        G = tuple(_int(x, f"{here}.coords_G") for x in _list(_field(item, "coords_G", here), f"{here}.coords_G"))
        F = tuple(_int(x, f"{here}.coords_F") for x in _list(_field(item, "coords_F", here), f"{here}.coords_F"))
        mode = _field(item, "mode", here)
        if mode not in ("consistent", "twisted"):
            _fail(f"{here}.mode", f"expected 'consistent' or 'twisted', got {mode!r}")
        mode = Tag(mode)
        U = _matrix(_field(item, "U", here), f"{here}.U")
        V = _matrix(_field(item, "V", here), f"{here}.V")
        b = Block(G, F, mode, U, V)
        if U.cols != len(b.u_coords) or V.cols != len(b.v_coords):
            _fail(here, "factor column counts do not match the block coordinates")
        blocks.append(b)
    n_target = obj.get("n_target") if isinstance(obj, dict) else None
    if n_target is None:
        n_target = blocks[0].U.rows if blocks else 0
    n_source = obj.get("n_source")
    if n_source is None:
        n_source = max((max(b.coords_G + b.coords_F, default=0) for b in blocks), default=0)
    n_source = _int(n_source, "n_source")
    n_target = _int(n_target, "n_target")
    for k, b in enumerate(blocks):
        if b.U.rows != n_target or b.V.rows != n_target:
            _fail(f"blocks[{k}]", f"factors must have {n_target} rows")
        if any(not 1 <= x <= n_source for x in b.coords_G + b.coords_F):
            _fail(f"blocks[{k}]", f"coordinates outside 1..{n_source}")
    flags = [str(f) for f in _list(obj.get("flags", []), "flags")]
    return Implementation(blocks, n_source, n_target, flags)


def load_implementation(source) -> Implementation:
    return implementation_from_dict(_load(source))


def save_implementation(impl: Implementation, path=None) -> str:
    return _dump(implementation_to_dict(impl), path)
