"""Groupoid JSON (schema 1) and DOT export."""
from __future__ import annotations

import json

import numpy as np

from .errors import FormatError
from .finspace import FinSpace, bits, mask_of
from .gpdbuild import FinTopGroupoid

SCHEMA = 1


def groupoid_to_dict(G: FinTopGroupoid) -> dict:
    a, b = G.composable_pairs
    ab = G.mult[a, b]
    return {
        "schema": SCHEMA,
        "arrows": list(G.arrows),
        "units": G.is_unit.tolist(),
        "r": G.r.tolist(),
        "s": G.s.tolist(),
        "inv": G.inv.tolist(),
        "mult": np.stack([a, b, ab], axis=1).tolist(),
        "topology": {"minimal_opens": [list(bits(G.space.up[i])) for i in range(G.n)]},
    }


def dumps(G: FinTopGroupoid) -> str:
    return json.dumps(groupoid_to_dict(G), sort_keys=True, separators=(",", ":"))


def groupoid_from_dict(d: dict) -> FinTopGroupoid:
    try:
        if d.get("schema") != SCHEMA:
            raise FormatError(f"unsupported schema {d.get('schema')!r}")
        arrows = [str(x) for x in d["arrows"]]
        n = len(arrows)
        ups = [mask_of(int(i) for i in row) for row in d["topology"]["minimal_opens"]]
        if len(ups) != n:
            raise FormatError("topology does not list one minimal open per arrow")
        mult = np.full((n, n), -1, dtype=np.int64)
        for x, y, xy in d["mult"]:
            mult[int(x), int(y)] = int(xy)
        vecs = [np.asarray(d[k], dtype=np.int64) for k in ("r", "s", "inv")]
        for v in vecs:
            if v.shape != (n,) or (n and (v.min() < 0 or v.max() >= n)):
                raise FormatError("r, s and inv must be arrow indices")
        G = FinTopGroupoid(FinSpace(arrows, ups), *vecs, mult, basis="imported")
        if "units" in d and list(map(bool, d["units"])) != G.is_unit.tolist():
            raise FormatError("units flags disagree with r")
        return G
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise FormatError(f"malformed groupoid JSON: {exc}") from None


def loads(text: str) -> FinTopGroupoid:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(str(exc)) from None
    if not isinstance(d, dict):
        raise FormatError("groupoid JSON must be an object")
    return groupoid_from_dict(d)


def load_groupoid(path) -> FinTopGroupoid:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise FormatError(str(exc)) from None


def to_dot(G: FinTopGroupoid) -> str:
    """Units are nodes; each non-unit arrow is an edge ``s -> r`` labelled
    ``r←s [k]`` with ``k`` its index among arrows sharing that range and source."""
    names = G.arrows
    lines = ["digraph groupoid {"]
    for u in G.units.tolist():
        lines.append(f"  {json.dumps(names[u])};")
    seen: dict[tuple[int, int], int] = {}
    for a in range(G.n):
        key = (int(G.r[a]), int(G.s[a]))
        k = seen.get(key, 0)
        seen[key] = k + 1
        if G.is_unit[a]:
            continue
        r, s = names[key[0]], names[key[1]]
        lines.append(f"  {json.dumps(s)} -> {json.dumps(r)} [label={json.dumps(f'{r}←{s} [{k}]', ensure_ascii=False)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
