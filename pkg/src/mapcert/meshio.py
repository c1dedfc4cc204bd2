"""Reader and writer for the ASCII MCMESH format.

    MCMESH v1 dim=<2|3> vertices=<V> cells=<C>
    <V coordinate lines>            # the ``default`` realization
    <C lines: kind v0 ... vk>
    realization <name>              # optional, repeated
    <V coordinate lines>

Lines starting with ``#`` are comments, except ``# meta {...}`` which carries
fixture metadata as JSON. Coordinates are written with 17 significant digits,
so a write/read cycle reproduces every double exactly.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .errors import MeshFormatError
from .fixtures import Fixture
from .topology.complex import KINDS, build_complex

HEADER = re.compile(r"^MCMESH\s+v1\s+dim=(\d+)\s+vertices=(\d+)\s+cells=(\d+)\s*$")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def dumps(fx: Fixture) -> str:
    cx = fx.complex
    if "default" not in fx.realizations:
        raise MeshFormatError("a mesh file needs a realization named 'default'")
    out = []
    if fx.meta:
        out.append("# meta " + json.dumps(fx.meta, sort_keys=True, default=_json_default))
    out.append(f"MCMESH v1 dim={cx.dim} vertices={cx.n_vertices} cells={cx.n_cells}")
    out.extend(" ".join(map(_fmt, p)) for p in np.asarray(fx.default, dtype=float))
    out.extend(f"{k} " + " ".join(map(str, c)) for k, c in zip(cx.kinds, cx.cells))
    for name, coords in fx.realizations.items():
        if name == "default":
            continue
        out.append(f"realization {name}")
        out.extend(" ".join(map(_fmt, p)) for p in np.asarray(coords, dtype=float))
    return "\n".join(out) + "\n"


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(type(o).__name__)


def write_mesh(fx: Fixture, path) -> None:
    Path(path).write_text(dumps(fx))


def _coords(lines, start, count, width, where):
    rows = []
    for k in range(count):
        if start + k >= len(lines):
            raise MeshFormatError(f"{where}: expected {count} coordinate lines, found {k}")
        lineno, text = lines[start + k]
        try:
            row = [float(t) for t in text.split()]
        except ValueError:
            raise MeshFormatError(f"line {lineno}: bad coordinate line {text!r}") from None
        if width is None:
            width = len(row)
        if len(row) != width:
            raise MeshFormatError(f"line {lineno}: expected {width} coordinates, got {len(row)}")
        rows.append(row)
    return np.array(rows, dtype=float).reshape(count, width or 0), width


def loads(text: str) -> Fixture:
    lines, meta = [], {}
    for i, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if s.startswith("# meta "):
            try:
                meta = json.loads(s[len("# meta "):])
            except json.JSONDecodeError as e:
                raise MeshFormatError(f"line {i}: bad meta record: {e}") from None
            continue
        s = s.split("#", 1)[0].strip()
        if s:
            lines.append((i, s))
    if not lines:
        raise MeshFormatError("empty mesh file")
    m = HEADER.match(lines[0][1])
    if not m:
        raise MeshFormatError(f"line {lines[0][0]}: bad header {lines[0][1]!r}")
    dim, nv, nc = (int(g) for g in m.groups())
    if dim not in (2, 3):
        raise MeshFormatError(f"unsupported dimension {dim}")
    default, width = _coords(lines, 1, nv, None, "default realization")
    if nv and width not in (dim, dim + 1) or (width or 0) > 3:
        raise MeshFormatError(f"{width}-coordinate vertices for a {dim}-dimensional mesh")
    pos = 1 + nv
    cells, kinds = [], []
    for k in range(nc):
        if pos + k >= len(lines):
            raise MeshFormatError(f"expected {nc} cell lines, found {k}")
        lineno, s = lines[pos + k]
        parts = s.split()
        kind = parts[0]
        if kind not in KINDS or KINDS[kind].dim != dim:
            raise MeshFormatError(f"line {lineno}: cell kind {kind!r} invalid for dim={dim}")
        try:
            verts = tuple(int(t) for t in parts[1:])
        except ValueError:
            raise MeshFormatError(f"line {lineno}: bad vertex index") from None
        if len(verts) != KINDS[kind].nverts:
            raise MeshFormatError(f"line {lineno}: {kind} needs {KINDS[kind].nverts} vertices")
        cells.append(verts)
        kinds.append(kind)
    pos += nc
    realizations = {"default": default}
    while pos < len(lines):
        lineno, s = lines[pos]
        parts = s.split()
        if len(parts) != 2 or parts[0] != "realization":
            raise MeshFormatError(f"line {lineno}: expected 'realization <name>', got {s!r}")
        name = parts[1]
        if name in realizations:
            raise MeshFormatError(f"line {lineno}: duplicate realization {name!r}")
        realizations[name], _ = _coords(lines, pos + 1, nv, width, f"realization {name}")
        pos += 1 + nv
    complex_ = build_complex(cells, dim, nv, kinds)
    return Fixture(complex_, realizations, meta)


def read_mesh(path) -> Fixture:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise MeshFormatError(f"cannot read {path}: {e}") from None
    return loads(text)
