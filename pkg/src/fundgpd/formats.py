"""Input formats: poset text and simplicial-complex JSON."""
from __future__ import annotations

import json
import re
from pathlib import Path

from .errors import FormatError
from .finspace import FinSpace, from_relations
from .simplicial import SimplicialComplex

_IDENT = re.compile(r"^[A-Za-z0-9_.:'+-]+$")


def parse_poset(text: str, t0: bool = False) -> FinSpace:
    """Lines ``x < y`` (chains ``x < y < z`` allowed), ``point x``, ``#`` comments."""
    pairs, points = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("point ") or line == "point":
            names = line.split()[1:]
            if not names:
                raise FormatError(f"line {lineno}: 'point' needs a name")
            for name in names:
                _check_ident(name, lineno)
                points.append(name)
            continue
        parts = [p.strip() for p in line.split("<")]
        if len(parts) < 2:
            raise FormatError(f"line {lineno}: expected 'x < y' or 'point x'")
        for p in parts:
            _check_ident(p, lineno)
        pairs.extend(zip(parts, parts[1:]))
    if not pairs and not points:
        raise FormatError("empty poset")
    return from_relations(pairs, points, t0=t0)


def _check_ident(name, lineno):
    if not _IDENT.match(name):
        raise FormatError(f"line {lineno}: bad identifier {name!r}")


def dump_poset(X: FinSpace) -> str:
    lines = [f"point {p}" for p in X.points]
    lines += [f"{a} < {b}" for a, b in X.relations()]
    return "\n".join(lines) + "\n"


def parse_complex(text: str) -> SimplicialComplex:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("facets"), list):
        raise FormatError("expected an object with a 'facets' list")
    facets = []
    for f in data["facets"]:
        if not isinstance(f, list) or not f or not all(isinstance(v, (str, int)) for v in f):
            raise FormatError(f"bad facet {f!r}")
        facets.append([str(v) for v in f])
    try:
        return SimplicialComplex.from_facets(facets, vertices=[str(v) for v in data.get("vertices", [])])
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def load(path, fmt: str | None = None):
    """Return a FinSpace or SimplicialComplex depending on format/extension."""
    path = Path(path)
    if fmt is None:
        fmt = "complex" if path.suffix.lower() == ".json" else "poset"
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise FormatError(str(exc)) from None
    if fmt == "poset":
        return parse_poset(text)
    if fmt == "complex":
        return parse_complex(text)
    raise FormatError(f"unknown format {fmt!r}")
