"""Finite topological spaces as preorders.

A finite space is stored as its specialization preorder: a set is open iff
it is an up-set, so the minimal open neighbourhood of ``x`` is ``up(x)``.
Subsets of points are Python ints used as bitsets over point indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BadPartition, CycleWithT0Flag, InvalidPreorder, UnknownPoint


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


class FinSpace:
    """A finite (Alexandrov) space given by minimal opens.

    ``up[i]`` is the bitset of ``{j : i <= j}``. The point order is kept
    exactly as given; :func:`from_relations` sorts names lexicographically.
    """

    __slots__ = ("points", "up", "index", "t0_flag", "__dict__")

    def __init__(self, points: Sequence[str], up: Sequence[int], t0: bool = False):
        self.points = tuple(points)
        self.up = tuple(up)
        if len(self.points) != len(self.up):
            raise InvalidPreorder("points and up-sets differ in length")
        self.index = {p: i for i, p in enumerate(self.points)}
        if len(self.index) != len(self.points):
            raise InvalidPreorder("duplicate point identifiers")
        full = (1 << len(self.points)) - 1
        for i, u in enumerate(self.up):
            if not (u >> i) & 1:
                raise InvalidPreorder(f"not reflexive at {self.points[i]!r}")
            if u & ~full:
                raise InvalidPreorder("up-set mentions unknown points")
            for j in bits(u):
                if self.up[j] & ~u:
                    raise InvalidPreorder(
                        f"not transitive: {self.points[i]!r} <= {self.points[j]!r}")
        self.t0_flag = t0
        if t0 and not self.is_t0:
            raise InvalidPreorder("T0 flag set on a non-antisymmetric preorder")

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"FinSpace({len(self)} points)"

    def __eq__(self, other):
        return (isinstance(other, FinSpace) and self.points == other.points
                and self.up == other.up)

    def __hash__(self):
        return hash((self.points, self.up))

    @property
    def n(self) -> int:
        return len(self.points)

    @cached_property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def down(self) -> tuple[int, ...]:
        down = [0] * self.n
        for i, u in enumerate(self.up):
            for j in bits(u):
                down[j] |= 1 << i
        return tuple(down)

    @cached_property
    def is_t0(self) -> bool:
        return all(self.up[i] & self.down[i] == 1 << i for i in range(self.n))

    def idx(self, x: str) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise UnknownPoint(x) from None

    def leq(self, x: str, y: str) -> bool:
        return bool((self.up[self.idx(x)] >> self.idx(y)) & 1)

    def mask(self, names: Iterable[str]) -> int:
        return mask_of(self.idx(x) for x in names)

    def names(self, mask: int) -> list[str]:
        return [self.points[i] for i in bits(mask)]

    def up_closure(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.up[i]
        return out

    def down_closure(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.down[i]
        return out

    def is_open_mask(self, mask: int) -> bool:
        return self.up_closure(mask) == mask

    def is_closed_mask(self, mask: int) -> bool:
        return self.down_closure(mask) == mask

    def leq_matrix(self) -> np.ndarray:
        """Dense boolean matrix ``L[i, j] = (i <= j)``."""
        return _masks_to_matrix(self.up, self.n)

    def relations(self) -> list[tuple[str, str]]:
        """Strict relations ``x < y`` (x <= y, x != y), in index order."""
        return [(self.points[i], self.points[j])
                for i in range(self.n) for j in bits(self.up[i]) if j != i]


def _masks_to_matrix(masks: Sequence[int], n: int) -> np.ndarray:
    if n == 0:
        return np.zeros((0, 0), dtype=bool)
    nbytes = (n + 7) // 8
    raw = b"".join(m.to_bytes(nbytes, "little") for m in masks)
    arr = np.frombuffer(raw, dtype=np.uint8).reshape(len(masks), nbytes)
    return np.unpackbits(arr, axis=1, bitorder="little")[:, :n].astype(bool)


@dataclass(frozen=True)
class OpenSet:
    space: FinSpace
    mask: int

    def __post_init__(self):
        if not self.space.is_open_mask(self.mask):
            raise InvalidPreorder("not an up-set")

    @property
    def members(self) -> frozenset[str]:
        return frozenset(self.space.names(self.mask))

    def __contains__(self, x):
        return bool((self.mask >> self.space.idx(x)) & 1)

    def __len__(self):
        return self.mask.bit_count()


@dataclass(frozen=True, eq=False)
class SpaceMap:
    domain: FinSpace
    codomain: FinSpace
    assignment: tuple[int, ...]   # codomain index of each domain point

    def __post_init__(self):
        if len(self.assignment) != self.domain.n:
            raise ValueError("assignment is not total")
        if any(not 0 <= a < self.codomain.n for a in self.assignment):
            raise ValueError("assignment leaves the codomain")

    @classmethod
    def from_dict(cls, domain, codomain, mapping):
        missing = [x for x in domain.points if x not in mapping]
        if missing:
            raise ValueError(f"assignment is not total: {missing[:3]}")
        return cls(domain, codomain,
                   tuple(codomain.idx(mapping[x]) for x in domain.points))

    @classmethod
    def identity(cls, X):
        return cls(X, X, tuple(range(X.n)))

    def __call__(self, x: str) -> str:
        return self.codomain.points[self.assignment[self.domain.idx(x)]]

    def image(self, mask: int) -> int:
        return mask_of(self.assignment[i] for i in bits(mask))

    def preimage(self, mask: int) -> int:
        return mask_of(i for i, a in enumerate(self.assignment) if (mask >> a) & 1)

    def compose(self, first: "SpaceMap") -> "SpaceMap":
        """``self ∘ first``."""
        if first.codomain is not self.domain and first.codomain != self.domain:
            raise ValueError("maps are not composable")
        return SpaceMap(first.domain, self.codomain,
                        tuple(self.assignment[a] for a in first.assignment))


# --- construction -----------------------------------------------------------

def from_relations(pairs: Iterable[tuple[str, str]], points: Iterable[str] = (),
                   t0: bool = False) -> FinSpace:
    """Reflexive-transitive closure of ``pairs``; points sorted lexicographically."""
    pairs = list(pairs)
    names = set(points)
    for a, b in pairs:
        names.add(a)
        names.add(b)
    order = sorted(names)
    index = {p: i for i, p in enumerate(order)}
    up = [1 << i for i in range(len(order))]
    for a, b in pairs:
        up[index[a]] |= 1 << index[b]
    # Warshall on bitsets
    for k in range(len(order)):
        bk = 1 << k
        uk = up[k]
        for i in range(len(order)):
            if up[i] & bk:
                up[i] |= uk
    if t0:
        for i in range(len(order)):
            for j in bits(up[i]):
                if j != i and (up[j] >> i) & 1:
                    raise CycleWithT0Flag(f"{order[i]!r} and {order[j]!r} lie on a cycle")
    return FinSpace(order, up, t0=t0)


def discrete_space(points: Iterable[str]) -> FinSpace:
    pts = sorted(set(points))
    return FinSpace(pts, [1 << i for i in range(len(pts))])


def subspace(X: FinSpace, mask: int) -> FinSpace:
    """Subspace on the points of ``mask``, keeping their relative order."""
    keep = list(bits(mask))
    pos = {old: new for new, old in enumerate(keep)}
    up = [mask_of(pos[j] for j in bits(X.up[i] & mask)) for i in keep]
    return FinSpace([X.points[i] for i in keep], up, t0=X.t0_flag)


def minimal_open(X: FinSpace, x: str) -> OpenSet:
    return OpenSet(X, X.up[X.idx(x)])


def is_open(X: FinSpace, S: Iterable[str]) -> bool:
    return X.is_open_mask(X.mask(S))


def enumerate_opens(X: FinSpace) -> list[int]:
    """All up-sets by brute force over subsets; only for small spaces."""
    if X.n > 20:
        raise ValueError("brute-force open enumeration is limited to 20 points")
    return [m for m in range(1 << X.n) if X.is_open_mask(m)]


def is_continuous(f: SpaceMap) -> bool:
    """Order preservation, cross-checked against preimages of minimal opens."""
    X, Y = f.domain, f.codomain
    monotone = all((Y.up[f.assignment[i]] >> f.assignment[j]) & 1
                   for i in range(X.n) for j in bits(X.up[i]))
    by_preimage = all(X.is_open_mask(f.preimage(Y.up[k])) for k in range(Y.n))
    if monotone != by_preimage:
        raise AssertionError("continuity criteria disagree")
    return monotone


def is_open_map(f: SpaceMap) -> bool:
    """Images of minimal opens are open (they generate all opens under union)."""
    return all(f.codomain.is_open_mask(f.image(u)) for u in f.domain.up)


def is_homeomorphism(f: SpaceMap) -> bool:
    if f.domain.n != f.codomain.n or len(set(f.assignment)) != f.domain.n:
        return False
    X, Y = f.domain, f.codomain
    return all(f.image(X.up[i]) == Y.up[f.assignment[i]] for i in range(X.n))


def product_space(A: FinSpace, B: FinSpace) -> FinSpace:
    """Product order; point ``(a_i, b_j)`` sits at index ``i * |B| + j``."""
    nb = B.n
    points = [f"({a},{b})" for a in A.points for b in B.points]
    up = []
    for i in range(A.n):
        for j in range(nb):
            m = 0
            for i2 in bits(A.up[i]):
                m |= B.up[j] << (i2 * nb)
            up.append(m)
    return FinSpace(points, up, t0=A.t0_flag and B.t0_flag)


def product_projections(A: FinSpace, B: FinSpace, P: FinSpace) -> tuple[SpaceMap, SpaceMap]:
    nb = B.n
    return (SpaceMap(P, A, tuple(k // nb for k in range(P.n))),
            SpaceMap(P, B, tuple(k % nb for k in range(P.n))))


def path_components(X: FinSpace) -> list[int]:
    """Components of the comparability graph as bitsets, ordered by least index."""
    seen = 0
    comps = []
    for i in range(X.n):
        if (seen >> i) & 1:
            continue
        comp, frontier = 0, 1 << i
        while frontier:
            comp |= frontier
            nxt = 0
            for j in bits(frontier):
                nxt |= X.up[j] | X.down[j]
            frontier = nxt & ~comp
        seen |= comp
        comps.append(comp)
    return comps


def is_hausdorff(X: FinSpace) -> bool:
    """Pairwise disjoint minimal opens of distinct points."""
    for i in range(X.n):
        for j in range(i + 1, X.n):
            if X.up[i] & X.up[j]:
                return False
    return True


def is_discrete(X: FinSpace) -> bool:
    return all(u == 1 << i for i, u in enumerate(X.up))


def is_locally_compact(X: FinSpace) -> bool:
    """Every point has a quasicompact Hausdorff neighbourhood.

    Any neighbourhood of ``x`` contains ``up(x)`` and Hausdorffness passes to
    subspaces, so it suffices to test the subspace ``up(x)``.
    """
    return all(is_hausdorff(subspace(X, X.up[i])) for i in range(X.n))


# --- quotients --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Quotient:
    space: FinSpace
    projection: SpaceMap
    classes: tuple[int, ...]          # member bitset of each class
    relation_closed: bool
    projection_open: bool
    hausdorff: bool

    @property
    def lemma_holds(self) -> bool | None:
        """Closed relation <=> Hausdorff quotient, when the projection is open."""
        if not self.projection_open:
            return None
        return self.relation_closed == self.hausdorff


def quotient_space(X: FinSpace, partition: Sequence[Iterable[str]] | Sequence[int],
                   names: Sequence[str] | None = None,
                   check_relation: bool = True) -> Quotient:
    """Quotient topology computed by definition.

    A set of classes is open iff its preimage is an up-set, so the minimal
    open of a class is the least saturated up-set containing it: alternate
    up-closure and saturation until stable.
    """
    classes = []
    for block in partition:
        m = block if isinstance(block, int) else X.mask(block)
        if m == 0:
            raise BadPartition("empty class")
        classes.append(m)
    union = 0
    for m in classes:
        if union & m:
            raise BadPartition("classes overlap")
        union |= m
    if union != X.full:
        raise BadPartition("classes do not cover the space")

    cls_of = [0] * X.n
    for k, m in enumerate(classes):
        for i in bits(m):
            cls_of[i] = k
    q_up = []
    for m in classes:
        S = m
        while True:
            U = X.up_closure(S)
            sat = 0
            for i in bits(U):
                sat |= classes[cls_of[i]]
            if sat == S:
                break
            S = sat
        q_up.append(mask_of({cls_of[i] for i in bits(S)}))
    if names is None:
        names = ["{" + ",".join(sorted(X.names(m))) + "}" for m in classes]
    Q = FinSpace(names, q_up)
    proj = SpaceMap(X, Q, tuple(cls_of))
    if not is_continuous(proj):
        raise AssertionError("quotient projection is not continuous")

    relation_closed = True
    if check_relation:
        # the relation is closed in X x X iff it is a down-set of the product order
        for m in classes:
            for i in bits(m):
                for j in bits(m):
                    for i2 in bits(X.down[i]):
                        for j2 in bits(X.down[j]):
                            if cls_of[i2] != cls_of[j2]:
                                relation_closed = False
                                break
                        if not relation_closed:
                            break
                    if not relation_closed:
                        break
                if not relation_closed:
                    break
            if not relation_closed:
                break
    return Quotient(Q, proj, tuple(classes), relation_closed,
                    is_open_map(proj), is_hausdorff(Q))


# --- reports ----------------------------------------------------------------

CONTRACTIBLE_WITNESS = ("every minimal open up(x) has x as its least point, "
                        "hence is contractible")


def space_report(X: FinSpace) -> dict:
    haus = is_hausdorff(X)
    comps = path_components(X)
    return {
        "points": X.n,
        "t0": X.is_t0,
        "hausdorff": haus,
        "locally_compact": is_locally_compact(X),
        "second_countable": True,
        "paracompact": haus,
        "path_components": len(comps),
        "components": [X.names(m) for m in comps],
        "hypotheses_certificate": {
            "locally_path_connected": all(_has_least(X, i) for i in range(X.n)),
            "semilocally_simply_connected": all(_has_least(X, i) for i in range(X.n)),
            "witness": CONTRACTIBLE_WITNESS,
        },
    }


def _has_least(X: FinSpace, i: int) -> bool:
    """x lies below every point of its minimal open (read off the down-sets)."""
    return all((X.down[j] >> i) & 1 for j in bits(X.up[i]))
