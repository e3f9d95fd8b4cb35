"""Fundamental group, universal cover and deck action of a finite T0 space."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import Disconnected, InvalidPreorder, LiftInconsistency, NotT0
from ..finspace import (FinSpace, SpaceMap, bits, is_continuous, is_hausdorff,
                        path_components, subspace)
from ..simplicial import order_complex
from .presentation import EdgePathPresentation, presentation_from_complex, simplify
from .todd_coxeter import DEFAULT_MAX_COSETS, FiniteGroupTable, todd_coxeter


@dataclass(frozen=True, eq=False)
class EdgePathGroup:
    """pi_1 of one path component, with the group element of every edge."""

    space: FinSpace
    base: str
    presentation: EdgePathPresentation
    group: FiniteGroupTable

    def edge_element(self, u: str, v: str) -> int:
        return self.group.value(self.presentation.edge_word(u, v))


def component_of(X: FinSpace, x: str) -> FinSpace:
    i = X.idx(x)
    comp = next(m for m in path_components(X) if (m >> i) & 1)
    return X if comp == X.full else subspace(X, comp)


def edge_path_group(X: FinSpace, base: str,
                    max_cosets: int = DEFAULT_MAX_COSETS) -> EdgePathGroup:
    if not X.is_t0:
        raise NotT0("pi_1 is computed on T0 spaces")
    Xc = component_of(X, base)
    P = presentation_from_complex(order_complex(Xc), base)
    S = simplify(P.presentation)
    H = todd_coxeter(S.presentation, max_cosets)
    G = FiniteGroupTable(H.mul, tuple(H.value(w) for w in S.substitution))
    if not G.satisfies(P.relators):
        raise AssertionError("edge-path relators fail in the enumerated group")
    return EdgePathGroup(Xc, base, P, G)


def fundamental_group(X: FinSpace, base: str,
                      max_cosets: int = DEFAULT_MAX_COSETS) -> FiniteGroupTable:
    """order complex -> edge-path presentation -> coset enumeration."""
    return edge_path_group(X, base, max_cosets).group


@dataclass(frozen=True, eq=False)
class UniversalCover:
    """Total space point ``(x, g)`` has index ``base.idx(x) * |deck| + g``."""

    total: FinSpace
    base: FinSpace
    projection: SpaceMap
    deck: FiniteGroupTable
    base_point: str
    pi1: EdgePathGroup

    @property
    def m(self) -> int:
        return self.deck.n

    def point(self, x: str, g: int) -> int:
        return self.base.idx(x) * self.m + g

    def coords(self, p: int) -> tuple[int, int]:
        return divmod(p, self.m)

    @cached_property
    def action(self) -> np.ndarray:
        """``action[p, h]`` = index of ``p · h`` (right multiplication)."""
        m = self.m
        xs = np.arange(self.total.n) // m
        gs = np.arange(self.total.n) % m
        return xs[:, None] * m + self.deck.mul[gs]

    def act(self, p: int, h: int) -> int:
        x, g = self.coords(p)
        return x * self.m + self.deck.op(g, h)

    def fiber(self, x: str) -> list[int]:
        i = self.base.idx(x)
        return list(range(i * self.m, (i + 1) * self.m))

    def lift_step(self, p: int, y: int) -> int:
        """The unique point over base index ``y`` comparable to ``p``.

        ``y`` must be comparable to ``p``'s base point.
        """
        nb = self.total.up[p] | self.total.down[p]
        hits = [q for q in bits(nb) if q // self.m == y]
        if len(hits) != 1:
            raise LiftInconsistency(f"{len(hits)} lifts of {self.base.points[y]!r} near {p}")
        return hits[0]


def universal_cover(X: FinSpace, base: str | None = None,
                    max_cosets: int = DEFAULT_MAX_COSETS) -> UniversalCover:
    """Lift the order along edge-path group elements.

    ``(x, g) <= (y, e(x, y)^-1 g)`` for ``x <= y``, where ``e(x, y)`` is the
    group element of the edge traversed from ``x`` to ``y``. Triangle
    relators make the lifted relation transitive; deck transformations act
    by right multiplication on the group coordinate.
    """
    if len(path_components(X)) != 1:
        raise Disconnected("universal cover needs a path connected space")
    base = X.points[0] if base is None else base
    E = edge_path_group(X, base, max_cosets)
    G = E.group
    m = G.n
    up = []
    names = []
    for i, x in enumerate(X.points):
        mus = [(j, G.inv[E.edge_element(x, X.points[j])] if j != i else 0)
               for j in bits(X.up[i])]
        for g in range(m):
            names.append(f"{x}@{g}" if m > 1 else x)
            mask = 0
            for j, mu in mus:
                mask |= 1 << (j * m + G.op(mu, g))
            up.append(mask)
    try:
        total = FinSpace(names, up, t0=True)
    except InvalidPreorder as exc:
        raise LiftInconsistency(str(exc)) from None
    proj = SpaceMap(total, X, tuple(p // m for p in range(total.n)))
    C = UniversalCover(total, X, proj, G, base, E)
    verify_cover(C)
    return C


def verify_cover(C: UniversalCover) -> None:
    """Even covering, deck action by free fibre-transitive homeomorphisms."""
    T, B, m = C.total, C.base, C.m
    if not is_continuous(C.projection):
        raise LiftInconsistency("projection is not continuous")
    if set(C.projection.assignment) != set(range(B.n)):
        raise LiftInconsistency("projection is not surjective")
    for p in range(T.n):
        U = T.up[p]
        img = C.projection.image(U)
        if img != B.up[p // m] or U.bit_count() != img.bit_count():
            raise LiftInconsistency(f"projection is not bijective on up({T.points[p]})")
        for q in bits(U):
            for r in bits(U):
                if bool((T.up[q] >> r) & 1) != bool((B.up[q // m] >> (r // m)) & 1):
                    raise LiftInconsistency("projection is not an order isomorphism locally")
    if len(path_components(T)) != 1:
        raise LiftInconsistency("total space is not connected")
    act = C.action
    for h in range(m):
        for p in range(T.n):
            if C.projection.assignment[act[p, h]] != C.projection.assignment[p]:
                raise LiftInconsistency("deck transformation does not commute with projection")
            image_up = 0
            for q in bits(T.up[p]):
                image_up |= 1 << int(act[q, h])
            if image_up != T.up[int(act[p, h])]:
                raise LiftInconsistency("deck transformation is not a homeomorphism")
    for x in B.points:
        fib = C.fiber(x)
        if sorted(int(act[fib[0], h]) for h in range(m)) != fib:
            raise LiftInconsistency("deck action is not simply transitive on a fibre")


PROPER_JUSTIFICATION = (
    "the deck group is finite and discrete, so for any compact K, L the set "
    "{g : gK meets L} is a finite subset of a discrete group, hence compact")


def deck_action_report(C: UniversalCover) -> dict:
    T, m = C.total, C.m
    act = C.action
    witness = {}
    free = all(int(act[p, h]) != p for p in range(T.n) for h in range(1, m))
    if not free:
        witness["free"] = next([T.points[p], h] for p in range(T.n)
                               for h in range(1, m) if int(act[p, h]) == p)

    def translate(mask, h):
        out = 0
        for q in bits(mask):
            out |= 1 << int(act[q, h])
        return out

    # any open containing p contains up(p), so the minimal open decides
    csa = True
    for p in range(T.n):
        U = T.up[p]
        bad = next((h for h in range(1, m) if translate(U, h) & U), None)
        if bad is not None:
            csa = False
            witness["covering_space_action"] = [T.points[p], bad]
            break

    orbit = [p // m for p in range(T.n)]
    crit = True
    for p in range(T.n):
        for q in range(T.n):
            if orbit[p] == orbit[q]:
                continue
            if any(translate(T.up[p], h) & T.up[q] for h in range(m)):
                crit = False
                witness["hausdorff_criterion"] = [T.points[p], T.points[q]]
                break
        if not crit:
            break
    base_haus = is_hausdorff(C.base)
    report = {
        "free": free,
        "covering_space_action": csa,
        "hausdorff_criterion": crit,
        "base_hausdorff": base_haus,
        "criterion_matches_base": crit == base_haus,
        "proper": True,
        "proper_justification": PROPER_JUSTIFICATION,
        "deck_order": m,
    }
    if witness:
        report["witness"] = witness
    return report
