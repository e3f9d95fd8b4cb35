"""Simplicial complexes and the two bridges to finite spaces."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .errors import NotT0
from .finspace import FinSpace, bits


@dataclass(frozen=True)
class SimplicialComplex:
    vertices: tuple[str, ...]
    facets: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        for f in self.facets:
            if not f:
                raise ValueError("empty facet")
            if set(f) - set(self.vertices):
                raise ValueError(f"facet {f} uses undeclared vertices")
        sets = [frozenset(f) for f in self.facets]
        for a in range(len(sets)):
            for b in range(len(sets)):
                if a != b and sets[a] <= sets[b]:
                    raise ValueError(f"facet {self.facets[a]} lies in {self.facets[b]}")

    @classmethod
    def from_facets(cls, facets, vertices=()):
        """Normalise: sort vertices inside facets, drop non-maximal ones."""
        fs = {tuple(sorted(set(f))) for f in facets}
        fs = [f for f in fs if not any(set(f) < set(g) for g in fs)]
        verts = set(vertices)
        for f in fs:
            verts.update(f)
        return cls(tuple(sorted(verts)), tuple(sorted(fs, key=lambda f: (len(f), f))))

    @cached_property
    def simplices(self) -> tuple[tuple[str, ...], ...]:
        """All nonempty faces, sorted by dimension then lexicographically."""
        out = set()
        for v in self.vertices:
            out.add((v,))
        for f in self.facets:
            for k in range(1, len(f) + 1):
                out.update(combinations(f, k))
        return tuple(sorted(out, key=lambda s: (len(s), s)))

    def faces_of_dim(self, d: int) -> list[tuple[str, ...]]:
        return [s for s in self.simplices if len(s) == d + 1]

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.facets), default=1) - 1


def face_name(face: tuple[str, ...]) -> str:
    return "".join(face) if all(len(v) == 1 for v in face) else "|".join(face)


def face_poset(K: SimplicialComplex) -> FinSpace:
    """Face poset with ``s <= t`` iff ``s ⊇ t``.

    Opens are up-sets, so the minimal open of a face is the set of its own
    faces, which has the face itself as least element.
    """
    faces = K.simplices
    names = [face_name(f) for f in faces]
    order = sorted(range(len(faces)), key=lambda k: names[k])
    faces = [faces[k] for k in order]
    names = [names[k] for k in order]
    if len(set(names)) != len(names):
        names = ["|".join(f) for f in faces]
    sets = [frozenset(f) for f in faces]
    up = []
    for i, s in enumerate(sets):
        m = 0
        for j, t in enumerate(sets):
            if t <= s:
                m |= 1 << j
        up.append(m)
    return FinSpace(names, up, t0=True)


def order_complex(X: FinSpace) -> SimplicialComplex:
    """Simplices are chains of the order; facets are the maximal chains."""
    if not X.is_t0:
        raise NotT0("order complex needs an antisymmetric order")
    facets = []

    def extend(chain, top):
        above = X.up[top] & ~(1 << top)
        if not above:
            facets.append(tuple(X.points[i] for i in chain))
            return
        # only cover relations keep chains maximal
        for j in bits(above):
            if not any((X.up[k] >> j) & 1 for k in bits(above) if k != j):
                extend(chain + [j], j)

    for i in range(X.n):
        if X.down[i] == 1 << i:
            extend([i], i)
    return SimplicialComplex.from_facets(facets, vertices=X.points)
