"""Finite topological groupoids and the constructions that produce them."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (MismatchedProvenance, NotAnAction, NotContinuous,
                     SearchCapExceeded)
from .finspace import (FinSpace, SpaceMap, bits, is_continuous, mask_of,
                       path_components, product_space, quotient_space, subspace)
from .pi1.cover import UniversalCover, universal_cover
from .pi1.todd_coxeter import DEFAULT_MAX_COSETS, FiniteGroupTable


@dataclass(frozen=True, eq=False)
class FinTopGroupoid:
    """Arrows are the points of ``space``; units are arrows with ``r[a] == a``.

    ``mult[a, b]`` is ``a·b`` (``b`` first, then ``a``) when ``s(a) == r(b)``
    and -1 otherwise.
    """

    space: FinSpace
    r: np.ndarray
    s: np.ndarray
    inv: np.ndarray
    mult: np.ndarray
    basis: str = "given"
    isotropy_discrete: bool | None = None
    provenance: tuple = ()
    coords: tuple | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = self.space.n
        for name in ("r", "s", "inv"):
            if getattr(self, name).shape != (n,):
                raise ValueError(f"{name} has the wrong shape")
        if self.mult.shape != (n, n):
            raise ValueError("mult has the wrong shape")
        composable = self.s[:, None] == self.r[None, :]
        if not np.array_equal(composable, self.mult >= 0):
            raise ValueError("mult is not defined exactly on composable pairs")
        units = self.units
        if not (np.array_equal(self.r[units], units) and np.array_equal(self.s[units], units)):
            raise ValueError("range/source of a unit is not itself")

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def arrows(self) -> tuple[str, ...]:
        return self.space.points

    @cached_property
    def units(self) -> np.ndarray:
        return np.unique(self.r)

    @cached_property
    def is_unit(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=bool)
        out[self.units] = True
        return out

    @cached_property
    def unit_space(self) -> FinSpace:
        return subspace(self.space, mask_of(self.units.tolist()))

    @cached_property
    def composable_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        a, b = np.nonzero(self.mult >= 0)
        return a, b

    def fibre_r(self, u: int) -> np.ndarray:
        return np.flatnonzero(self.r == u)

    def fibre_s(self, u: int) -> np.ndarray:
        return np.flatnonzero(self.s == u)

    def isotropy(self, u: int) -> np.ndarray:
        return np.flatnonzero((self.r == u) & (self.s == u))

    @cached_property
    def leq(self) -> np.ndarray:
        return self.space.leq_matrix()


def _groupoid(points, up, r, s, inv, mult, **kw) -> FinTopGroupoid:
    return FinTopGroupoid(FinSpace(points, up), np.asarray(r, dtype=np.int64),
                          np.asarray(s, dtype=np.int64), np.asarray(inv, dtype=np.int64),
                          np.asarray(mult, dtype=np.int64), **kw)


# --- quotient groupoid (X~ x X~) / pi_1 -----------------------------------------

def quotient_groupoid(C: UniversalCover) -> FinTopGroupoid:
    """Orbits of the diagonal deck action on ``total x total``.

    Each orbit is named by its lexicographically least pair ``(x@0, y@g)``.
    Composition ``[x, y][y·h, w] = [x, w·h^-1]`` with ``h`` found by freeness.
    """
    T, m = C.total, C.m
    nT = T.n
    act = C.action
    canon = {}
    reps = []
    for p in range(nT):
        for q in range(nT):
            if (p, q) in canon:
                continue
            orbit = [(int(act[p, h]), int(act[q, h])) for h in range(m)]
            rep = min(orbit)
            reps.append(rep)
            for pq in orbit:
                canon[pq] = rep
    reps.sort()
    expected = C.base.n ** 2 * m
    if len(reps) != expected:
        raise AssertionError(f"{len(reps)} orbits, expected |X|^2 |pi_1| = {expected}")
    arrow_of = {rep: k for k, rep in enumerate(reps)}
    orbit_index = {pq: arrow_of[rep] for pq, rep in canon.items()}
    N = len(reps)

    names = [f"[{T.points[p]},{T.points[q]}]" for p, q in reps]
    unit = [arrow_of[(x * m, x * m)] for x in range(C.base.n)]
    r = [unit[p // m] for p, _ in reps]
    s = [unit[q // m] for _, q in reps]
    inv = [orbit_index[(q, p)] for p, q in reps]

    inv_g = C.deck.inv
    mult = np.full((N, N), -1, dtype=np.int64)
    by_r: dict[int, list[int]] = {}
    for b, u in enumerate(r):
        by_r.setdefault(u, []).append(b)
    for a, (x, y) in enumerate(reps):
        for b in by_r[s[a]]:
            z, w = reps[b]
            h = next(h for h in range(m) if act[y, h] == z)
            mult[a, b] = orbit_index[(x, int(act[w, inv_g[h]]))]

    P = product_space(T, T)
    partition = [0] * N
    for (p, q), k in orbit_index.items():
        partition[k] |= 1 << (p * nT + q)
    Q = quotient_space(P, partition, names=names)

    G = FinTopGroupoid(Q.space, np.array(r), np.array(s), np.array(inv), mult,
                       basis="quotient of the product order on total x total",
                       provenance=(C,),
                       coords=tuple((0, p // m, q // m, q % m) for p, q in reps),
                       meta={"projection_open": Q.projection_open,
                             "relation_closed": Q.relation_closed,
                             "orbit_reps": tuple(reps)})
    object.__setattr__(G, "isotropy_discrete", _isotropy_discrete(G))
    return G


def _isotropy_discrete(G: FinTopGroupoid) -> bool:
    for u in G.units:
        iso = G.isotropy(int(u)).tolist()
        m = mask_of(iso)
        if any(G.space.up[a] & m != 1 << a for a in iso):
            return False
    return True


def _provenance_index(G: FinTopGroupoid, C: UniversalCover) -> int:
    for k, c in enumerate(G.provenance):
        if c is C:
            return k
    raise MismatchedProvenance("groupoid was not built from this cover")


def _component_arrows(G: FinTopGroupoid, k: int) -> dict[tuple[int, int, int], int]:
    return {(i, j, g): a for a, (c, i, j, g) in enumerate(G.coords) if c == k}


def uc_basic_set(G: FinTopGroupoid, C: UniversalCover, p: int, q: int) -> int:
    """Arrows ``[x', y']`` with ``x'`` in up(p) and ``y'`` in up(q), as a bitset."""
    lookup = _component_arrows(G, _provenance_index(G, C))
    return _basic(C, lookup, p, q)


def _basic(C, lookup, p, q) -> int:
    out = 0
    for p2 in bits(C.total.up[p]):
        for q2 in bits(C.total.up[q]):
            out |= 1 << _arrow_of_pair(C, lookup, p2, q2)
    return out


def _arrow_of_pair(C, lookup, p, q) -> int:
    m = C.m
    x, a = divmod(p, m)
    y, b = divmod(q, m)
    # translate by a^-1 so the first coordinate carries the identity
    return lookup[(x, y, C.deck.op(b, C.deck.inv[a]))]


@dataclass(frozen=True)
class UCTopology:
    space: FinSpace
    basic_sets: tuple[int, ...]         # N(a) for every arrow a
    general_sets_open: bool
    containment_ok: bool


def uc_topology(G: FinTopGroupoid, C: UniversalCover) -> UCTopology:
    """Topology generated by the sets N(a) built from minimal opens of the cover.

    Also checks that N(a, U, V) is open for every pair of minimal opens
    U, V of the base around r(a), s(a), and that it contains N(a).
    """
    k = _provenance_index(G, C)
    lookup = _component_arrows(G, k)
    B, m = C.base, C.m
    arrows = {a: (i, j, g) for (i, j, g), a in lookup.items()}
    basic = {}
    memo: dict[tuple[int, int], int] = {}

    def N(p, q):
        if (p, q) not in memo:
            memo[(p, q)] = _basic(C, lookup, p, q)
        return memo[(p, q)]

    for a, (i, j, g) in arrows.items():
        basic[a] = N(i * m, j * m + g)
    # generated topology: intersection of all basic sets containing each arrow
    containing: dict[int, int] = {a: -1 for a in arrows}
    for a, Na in basic.items():
        for b in bits(Na):
            containing[b] &= Na
    full_idx = sorted(arrows)
    pos = {a: t for t, a in enumerate(full_idx)}
    up = [mask_of(pos[b] for b in bits(containing[a])) for a in full_idx]
    space = FinSpace([G.arrows[a] for a in full_idx], up)

    general_open = True
    containment = True
    checked = set()
    for a, (i, j, g) in arrows.items():
        p, q = i * m, j * m + g
        for u in bits(B.down[i]):
            pu = C.lift_step(p, u) if u != i else p
            for v in bits(B.down[j]):
                qv = C.lift_step(q, v) if v != j else q
                Nuv = N(pu, qv)
                if (pu, qv) not in checked:
                    checked.add((pu, qv))
                    if not space.is_open_mask(mask_of(pos[b] for b in bits(Nuv))):
                        general_open = False
                if basic[a] & ~Nuv:
                    containment = False
    return UCTopology(space, tuple(basic[a] for a in full_idx), general_open, containment)


@dataclass(frozen=True)
class TopologyComparison:
    equal: bool
    projection_open: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.equal


def topologies_equal(G: FinTopGroupoid, uc: UCTopology | FinSpace) -> TopologyComparison:
    other = uc.space if isinstance(uc, UCTopology) else uc
    mine = G.space
    if len(G.provenance) == 1 and other.n == mine.n:
        sub = mine
    else:
        sub = subspace(mine, mine.mask(other.points))
    if sub.points != other.points:
        raise ValueError("topologies live on different arrow sets")
    witness = None
    for a in range(sub.n):
        if sub.up[a] != other.up[a]:
            diff = next(bits(sub.up[a] ^ other.up[a]))
            witness = (sub.points[a], sub.points[diff])
            break
    return TopologyComparison(witness is None, bool(G.meta.get("projection_open", True)), witness)


# --- other groupoids ------------------------------------------------------------

def trivial_pair_groupoid(X: FinSpace) -> FinTopGroupoid:
    """Pair groupoid X x X: ``(x, y)(y, w) = (x, w)``; arrow (i, j) at i*n + j."""
    n = X.n
    P = product_space(X, X)
    idx = np.arange(n * n)
    i, j = idx // n, idx % n
    r = i * n + i
    s = j * n + j
    inv = j * n + i
    mult = np.full((n * n, n * n), -1, dtype=np.int64)
    for a in range(n * n):
        ia, ja = divmod(a, n)
        for w in range(n):
            mult[a, ja * n + w] = ia * n + w
    return FinTopGroupoid(P, r, s, inv, mult, basis="product order",
                          isotropy_discrete=True,
                          coords=tuple((0, int(a), int(b), 0) for a, b in zip(i, j)))


def _check_action(X: FinSpace, H: FiniteGroupTable, act: np.ndarray):
    if act.shape != (X.n, H.n):
        raise NotAnAction("action table has the wrong shape")
    if not np.array_equal(act[:, 0], np.arange(X.n)):
        raise NotAnAction("identity does not act trivially")
    for g in range(H.n):
        for t in range(H.n):
            if not np.array_equal(act[act[:, g], t], act[:, H.op(g, t)]):
                raise NotAnAction(f"(x·{g})·{t} != x·({g}{t})")
    for g in range(H.n):
        f = SpaceMap(X, X, tuple(int(v) for v in act[:, g]))
        finv = SpaceMap(X, X, tuple(int(v) for v in act[:, H.inv[g]]))
        if not (is_continuous(f) and is_continuous(finv)):
            raise NotAnAction(f"translation by {g} is not a homeomorphism")


def transformation_groupoid(X: FinSpace, H: FiniteGroupTable, action) -> FinTopGroupoid:
    """X ⋊ H for a right action: ``(x, g)(x·g, t) = (x, gt)``; arrow (x, g) at i*m + g.

    ``action[i][g]`` is the index of ``x_i · g``. H is discrete, so the
    groupoid is étale; that is recorded in ``meta``.
    """
    act = np.asarray(action, dtype=np.int64)
    _check_action(X, H, act)
    n, m = X.n, H.n
    names = [f"({x},{g})" for x in X.points for g in range(m)]
    up = []
    for i in range(n):
        for g in range(m):
            up.append(mask_of(j * m + g for j in bits(X.up[i])))
    idx = np.arange(n * m)
    xi, gi = idx // m, idx % m
    r = xi * m
    s = act[xi, gi] * m
    inv = act[xi, gi] * m + np.array(H.inv)[gi]
    mult = np.full((n * m, n * m), -1, dtype=np.int64)
    for a in range(n * m):
        x, g = divmod(a, m)
        y = int(act[x, g])
        for t in range(m):
            mult[a, y * m + t] = x * m + H.op(g, t)
    return FinTopGroupoid(FinSpace(names, up), r, s, inv, mult,
                          basis="product order, discrete group",
                          isotropy_discrete=True,
                          meta={"etale_recorded": True})


def disjoint_union(parts: Sequence[FinTopGroupoid]) -> FinTopGroupoid:
    if len(parts) == 1:
        return parts[0]
    names, up, r, s, inv, coords, prov = [], [], [], [], [], [], []
    N = sum(G.n for G in parts)
    mult = np.full((N, N), -1, dtype=np.int64)
    off = 0
    for k, G in enumerate(parts):
        names += list(G.arrows)
        up += [u << off for u in G.space.up]
        r += (G.r + off).tolist()
        s += (G.s + off).tolist()
        inv += (G.inv + off).tolist()
        block = np.where(G.mult >= 0, G.mult + off, -1)
        mult[off:off + G.n, off:off + G.n] = block
        base = len(prov)
        prov += list(G.provenance)
        if G.coords is not None:
            coords += [(c + base, i, j, g) for c, i, j, g in G.coords]
        off += G.n
    iso = all(G.isotropy_discrete for G in parts) if all(
        G.isotropy_discrete is not None for G in parts) else None
    meta = {"projection_open": all(G.meta.get("projection_open", True) for G in parts),
            "relation_closed": all(G.meta.get("relation_closed", True) for G in parts)}
    return FinTopGroupoid(FinSpace(names, up), np.array(r), np.array(s), np.array(inv), mult,
                          basis=parts[0].basis, isotropy_discrete=iso,
                          provenance=tuple(prov), coords=tuple(coords) or None, meta=meta)


@dataclass(frozen=True, eq=False)
class FundamentalGroupoid:
    """Pi_1 of a finite T0 space, one universal cover per path component."""

    space: FinSpace
    groupoid: FinTopGroupoid
    covers: tuple[UniversalCover, ...]

    def unit_point(self, u: int) -> str:
        c, i, _, _ = self.groupoid.coords[u]
        return self.covers[c].base.points[i]


def fundamental_groupoid(X: FinSpace, max_cosets: int = DEFAULT_MAX_COSETS,
                         basepoints: dict[int, str] | None = None) -> FundamentalGroupoid:
    covers = []
    parts = []
    for k, comp in enumerate(path_components(X)):
        sub = X if comp == X.full else subspace(X, comp)
        base = (basepoints or {}).get(k, sub.points[0])
        C = universal_cover(sub, base, max_cosets)
        covers.append(C)
        parts.append(quotient_groupoid(C))
    return FundamentalGroupoid(X, disjoint_union(parts), tuple(covers))


# --- morphisms ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GroupoidMorphism:
    source: FinTopGroupoid
    target: FinTopGroupoid
    assignment: np.ndarray

    def is_homomorphism(self) -> bool:
        f = self.assignment
        G, H = self.source, self.target
        if not np.array_equal(f[G.r], H.r[f]) or not np.array_equal(f[G.s], H.s[f]):
            return False
        if not np.array_equal(f[G.inv], H.inv[f]):
            return False
        a, b = G.composable_pairs
        return bool(np.array_equal(f[G.mult[a, b]], H.mult[f[a], f[b]]))

    def is_continuous(self) -> bool:
        f = tuple(int(v) for v in self.assignment)
        return is_continuous(SpaceMap(self.source.space, self.target.space, f))

    def is_bijective(self) -> bool:
        return (self.source.n == self.target.n
                and len(set(self.assignment.tolist())) == self.source.n)

    def compose(self, first: "GroupoidMorphism") -> "GroupoidMorphism":
        return GroupoidMorphism(first.source, self.target, self.assignment[first.assignment])


def _lift_map(Cx: UniversalCover, Cy: UniversalCover, f: SpaceMap) -> list[int]:
    """Lift ``f ∘ p`` to the covers by transport along edges from the base point."""
    Tx, mx, my = Cx.total, Cx.m, Cy.m
    start = Cx.point(Cx.base_point, 0)
    image = {start: Cy.point(f(Cx.base_point), 0)}
    frontier = [start]
    while frontier:
        nxt = []
        for p in frontier:
            cur = image[p]
            for q in bits(Tx.up[p] | Tx.down[p]):
                target = f.assignment[q // mx]
                lifted = cur if target == cur // my else Cy.lift_step(cur, target)
                if q in image:
                    if image[q] != lifted:
                        raise AssertionError("lift of f is not well defined")
                else:
                    image[q] = lifted
                    nxt.append(q)
        frontier = nxt
    return [image[p] for p in range(Tx.n)]


def induced_morphism(f: SpaceMap, Gdom: FundamentalGroupoid,
                     Gcod: FundamentalGroupoid) -> GroupoidMorphism:
    """``f_*[x~, y~] = [F x~, F y~]`` with ``F`` the lift of f to the covers."""
    if not is_continuous(f):
        raise NotContinuous("f does not preserve the order")
    G, H = Gdom.groupoid, Gcod.groupoid
    assignment = np.empty(G.n, dtype=np.int64)
    lookups = [_component_arrows(H, k) for k in range(len(Gcod.covers))]
    arrows_of = [_component_arrows(G, k) for k in range(len(Gdom.covers))]
    for k, Cx in enumerate(Gdom.covers):
        x0 = f(Cx.base_point)
        ky = next(c for c, Cy in enumerate(Gcod.covers) if x0 in Cy.base.index)
        Cy = Gcod.covers[ky]
        sub_f = SpaceMap(Cx.base, Cy.base,
                         tuple(Cy.base.idx(f(x)) for x in Cx.base.points))
        F = _lift_map(Cx, Cy, sub_f)
        m = Cx.m
        for (i, j, g), a in arrows_of[k].items():
            assignment[a] = _arrow_of_pair(Cy, lookups[ky], F[i * m], F[j * m + g])
    phi = GroupoidMorphism(G, H, assignment)
    if not phi.is_homomorphism():
        raise AssertionError("induced map is not a groupoid homomorphism")
    if not phi.is_continuous():
        raise AssertionError("induced map is not continuous")
    return phi


# --- isomorphism ----------------------------------------------------------------

DEFAULT_SEARCH_CAP = 200_000


@dataclass(frozen=True)
class IsoResult:
    isomorphic: bool
    certificate: tuple[int, ...] | None = None
    reason: str = ""

    def __bool__(self):
        return self.isomorphic


def check_candidate(G: FinTopGroupoid, H: FinTopGroupoid, phi: GroupoidMorphism) -> IsoResult:
    if not phi.is_bijective():
        return IsoResult(False, reason="not bijective")
    if not phi.is_homomorphism():
        return IsoResult(False, reason="not a homomorphism")
    f = phi.assignment
    # composability must be reflected, not only preserved
    if not np.array_equal(G.mult >= 0, (H.mult >= 0)[np.ix_(f, f)]):
        return IsoResult(False, reason="composability not reflected")
    if not np.array_equal(G.leq, H.leq[np.ix_(f, f)]):
        return IsoResult(False, reason="not a homeomorphism")
    return IsoResult(True, tuple(int(v) for v in f))


def _signature(G: FinTopGroupoid, a: int) -> tuple:
    return (bool(G.is_unit[a]), G.space.up[a].bit_count(), G.space.down[a].bit_count(),
            len(G.isotropy(int(G.r[a]))), len(G.fibre_r(int(G.r[a]))),
            len(G.fibre_s(int(G.s[a]))), bool(G.r[a] == G.s[a]))


def groupoid_iso_check(G: FinTopGroupoid, H: FinTopGroupoid,
                       candidate: GroupoidMorphism | None = None,
                       search_cap: int = DEFAULT_SEARCH_CAP) -> IsoResult:
    """Verify a candidate, or search for an isomorphism of topological groupoids.

    The search assigns units first, then the remaining arrows, checking
    range/source, inverses, products and order relations against
    everything already assigned.
    """
    if candidate is not None:
        return check_candidate(G, H, candidate)
    if G.n != H.n or len(G.units) != len(H.units):
        return IsoResult(False, reason="arrow or unit counts differ")
    sg = [_signature(G, a) for a in range(G.n)]
    sh = [_signature(H, b) for b in range(H.n)]
    if sorted(sg) != sorted(sh):
        return IsoResult(False, reason="arrow invariants differ")
    order = list(G.units.tolist()) + [a for a in range(G.n) if not G.is_unit[a]]
    cands = {a: [b for b in range(H.n) if sh[b] == sg[a]] for a in order}
    Lg, Lh = G.leq, H.leq
    phi = [-1] * G.n
    used = [False] * H.n
    nodes = 0

    def consistent(a, b):
        if not G.is_unit[a]:
            if phi[G.r[a]] != H.r[b] or phi[G.s[a]] != H.s[b]:
                return False
        for c in range(G.n):
            d = phi[c]
            if d < 0:
                continue
            if Lg[a, c] != Lh[b, d] or Lg[c, a] != Lh[d, b]:
                return False
            if G.inv[a] == c and H.inv[b] != d:
                return False
            ac = G.mult[a, c]
            if (ac >= 0) != (H.mult[b, d] >= 0):
                return False
            if ac >= 0 and phi[ac] >= 0 and phi[ac] != H.mult[b, d]:
                return False
            ca = G.mult[c, a]
            if (ca >= 0) != (H.mult[d, b] >= 0):
                return False
            if ca >= 0 and phi[ca] >= 0 and phi[ca] != H.mult[d, b]:
                return False
        return True

    def search(k):
        nonlocal nodes
        if k == len(order):
            return True
        a = order[k]
        for b in cands[a]:
            if used[b]:
                continue
            nodes += 1
            if nodes > search_cap:
                raise SearchCapExceeded(f"more than {search_cap} search nodes")
            if consistent(a, b):
                phi[a], used[b] = b, True
                if search(k + 1):
                    return True
                phi[a], used[b] = -1, False
        return False

    if not search(0):
        return IsoResult(False, reason="no isomorphism exists")
    result = check_candidate(G, H, GroupoidMorphism(G, H, np.array(phi)))
    if not result:
        raise AssertionError("search produced an invalid isomorphism")
    return result


def r_times_s_morphism(G: FinTopGroupoid, X: FinSpace,
                       unit_point) -> tuple[FinTopGroupoid, GroupoidMorphism]:
    """``a -> (r(a), s(a))`` into the pair groupoid of X."""
    pair = trivial_pair_groupoid(X)
    n = X.n
    assignment = np.array([X.idx(unit_point(int(G.r[a]))) * n + X.idx(unit_point(int(G.s[a])))
                           for a in range(G.n)], dtype=np.int64)
    return pair, GroupoidMorphism(G, pair, assignment)
