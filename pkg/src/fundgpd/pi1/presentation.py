"""Edge-path presentations of pi_1 of a simplicial complex.

Words are tuples of nonzero ints: ``k`` is generator ``k - 1`` and ``-k``
its inverse. Words are read left to right in path order.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..errors import Disconnected, UnknownPoint
from ..simplicial import SimplicialComplex

Word = tuple[int, ...]


def free_reduce(word) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word) -> Word:
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def invert(word) -> Word:
    return tuple(-x for x in reversed(word))


@dataclass(frozen=True)
class Presentation:
    n_generators: int
    relators: tuple[Word, ...]

    def __post_init__(self):
        for r in self.relators:
            if any(x == 0 or abs(x) > self.n_generators for x in r):
                raise ValueError(f"relator {r} mentions an undeclared generator")


@dataclass(frozen=True)
class EdgePathPresentation:
    base: str
    vertices: tuple[str, ...]
    tree_edges: frozenset[tuple[str, str]]
    generators: tuple[tuple[str, str], ...]   # oriented non-tree edges
    relators: tuple[Word, ...]
    _gen_of: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_gen_of", {e: k for k, e in enumerate(self.generators)})
        Presentation(len(self.generators), self.relators)

    @property
    def presentation(self) -> Presentation:
        return Presentation(len(self.generators), self.relators)

    def edge_word(self, u: str, v: str) -> Word:
        """Word of the edge traversed from ``u`` to ``v``."""
        if (u, v) in self._gen_of:
            return (self._gen_of[(u, v)] + 1,)
        if (v, u) in self._gen_of:
            return (-(self._gen_of[(v, u)] + 1),)
        if (u, v) in self.tree_edges or (v, u) in self.tree_edges:
            return ()
        raise KeyError(f"{u}-{v} is not an edge")


def presentation_from_complex(K: SimplicialComplex, base: str) -> EdgePathPresentation:
    """BFS spanning tree, one generator per non-tree edge, one relator per triangle."""
    if base not in K.vertices:
        raise UnknownPoint(base)
    edges = [e for e in K.faces_of_dim(1)]
    adj: dict[str, list[str]] = {v: [] for v in K.vertices}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    for v in adj:
        adj[v].sort()
    seen = {base}
    tree = set()
    queue = deque([base])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                tree.add(tuple(sorted((u, v))))
                queue.append(v)
    if len(seen) != len(K.vertices):
        raise Disconnected(f"{len(K.vertices) - len(seen)} vertices unreachable from {base!r}")
    gens = tuple(e for e in edges if e not in tree)
    P = EdgePathPresentation(base, K.vertices, frozenset(tree), gens, ())
    rels = []
    for a, b, c in K.faces_of_dim(2):
        rels.append(free_reduce(P.edge_word(a, b) + P.edge_word(b, c) + P.edge_word(c, a)))
    return EdgePathPresentation(base, K.vertices, frozenset(tree), gens, tuple(rels))


@dataclass(frozen=True)
class Simplified:
    presentation: Presentation
    # expression of every original generator as a word in the kept ones
    substitution: tuple[Word, ...]


def simplify(P: Presentation, max_length: int = 4) -> Simplified:
    """Tietze elimination of generators occurring once in a short relator."""
    n = P.n_generators
    subst: dict[int, Word] = {}
    rels = [cyclic_reduce(r) for r in P.relators]
    while True:
        rels = sorted({cyclic_reduce(r) for r in rels if cyclic_reduce(r)},
                      key=lambda r: (len(r), r))
        pick = None
        for r in rels:
            if len(r) > max_length:
                break
            counts: dict[int, int] = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            once = [g for g in sorted(counts) if counts[g] == 1]
            if once:
                pick = (r, once[0])
                break
        if pick is None:
            break
        r, g = pick
        k = next(i for i, x in enumerate(r) if abs(x) == g)
        rot = r[k:] + r[:k]          # g^e * w = 1
        w = rot[1:]
        value = invert(w) if rot[0] > 0 else w
        subst[g] = value
        rels = [_substitute(x, g, value) for x in rels]
        subst = {h: free_reduce(_substitute(v, g, value)) for h, v in subst.items()}

    kept = [g for g in range(1, n + 1) if g not in subst]
    renum = {g: i + 1 for i, g in enumerate(kept)}

    def rename(word):
        return tuple(renum[abs(x)] * (1 if x > 0 else -1) for x in word)

    expr = []
    for g in range(1, n + 1):
        expr.append(rename(subst[g]) if g in subst else (renum[g],))
    return Simplified(Presentation(len(kept), tuple(rename(r) for r in rels)), tuple(expr))


def _substitute(word, g, value) -> Word:
    out = []
    for x in word:
        if abs(x) == g:
            out.extend(value if x > 0 else invert(value))
        else:
            out.append(x)
    return free_reduce(out)
