"""HLT coset enumeration over the trivial subgroup, and finite group tables."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import Exceeded
from .presentation import Presentation, Word, cyclic_reduce

DEFAULT_MAX_COSETS = 10_000


class CosetTable:
    """Coset table with union-find coincidence processing.

    Column ``2i`` is generator ``i``, column ``2i + 1`` its inverse. Coset 0
    is the subgroup coset. ``parent[c] == c`` marks a live coset.
    """

    def __init__(self, n_generators: int, max_cosets: int):
        if max_cosets < 1:
            raise ValueError("max_cosets must be positive")
        self.ncols = 2 * n_generators
        self.max_cosets = max_cosets
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.parent = [0]

    @staticmethod
    def column(letter: int) -> int:
        return 2 * (abs(letter) - 1) + (letter < 0)

    def live(self, c: int) -> bool:
        return self.parent[c] == c

    def define(self, c: int, x: int) -> int:
        if len(self.table) >= self.max_cosets:
            raise Exceeded(self.max_cosets)
        d = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(d)
        self.table[c][x] = d
        self.table[d][x ^ 1] = c
        return d

    def rep(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def _merge(self, k, l, queue):
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        if k > l:
            k, l = l, k
        self.parent[l] = k
        queue.append(l)

    def coincidence(self, a: int, b: int):
        queue: list[int] = []
        self._merge(a, b, queue)
        i = 0
        table = self.table
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(self.ncols):
                f = table[e][x]
                if f < 0:
                    continue
                table[f][x ^ 1] = -1
                e1, f1 = self.rep(e), self.rep(f)
                if table[e1][x] >= 0:
                    self._merge(f1, table[e1][x], queue)
                elif table[f1][x ^ 1] >= 0:
                    self._merge(e1, table[f1][x ^ 1], queue)
                else:
                    table[e1][x] = f1
                    table[f1][x ^ 1] = e1

    def scan_and_fill(self, c: int, word: list[int]):
        table = self.table
        f, i = c, 0
        b, j = c, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] >= 0:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] >= 0:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            self.define(f, word[i])

    def run(self, relators):
        words = [[self.column(x) for x in cyclic_reduce(r)] for r in relators]
        words = [w for w in words if w]
        c = 0
        while c < len(self.table):
            if self.live(c):
                for w in words:
                    if not self.live(c):
                        break
                    self.scan_and_fill(c, w)
                if self.live(c):
                    for x in range(self.ncols):
                        if self.table[c][x] < 0:
                            self.define(c, x)
            c += 1
        return self.compressed()

    def compressed(self) -> list[list[int]]:
        live = [c for c in range(len(self.table)) if self.live(c)]
        new = {c: k for k, c in enumerate(live)}
        return [[new[self.rep(e)] for e in self.table[c]] for c in live]


@dataclass(frozen=True, eq=False)
class FiniteGroupTable:
    """A finite group by its multiplication table; element 0 is the identity."""

    mul: np.ndarray                 # mul[a, b] = a * b
    gen_images: tuple[int, ...]

    def __post_init__(self):
        n = self.n
        m = self.mul
        if m.shape != (n, n):
            raise ValueError("multiplication table must be square")
        if not (np.array_equal(m[0], np.arange(n)) and np.array_equal(m[:, 0], np.arange(n))):
            raise AssertionError("element 0 is not a two-sided identity")
        for row in m:
            if len(set(row.tolist())) != n:
                raise AssertionError("table is not a Latin square")
        if n <= 400:
            idx = np.arange(n)
            lhs = m[m]                                   # (a*b)*c
            rhs = m[idx[:, None, None], m[None, :, :]]   # a*(b*c)
            if not np.array_equal(lhs, rhs):
                raise AssertionError("multiplication is not associative")
        else:
            rng = np.random.default_rng(0)
            a, b, c = rng.integers(0, n, size=(3, 20000))
            if not np.array_equal(m[m[a, b], c], m[a, m[b, c]]):
                raise AssertionError("multiplication is not associative")

    @property
    def n(self) -> int:
        return self.mul.shape[0]

    order = n
    identity = 0

    @cached_property
    def inv(self) -> tuple[int, ...]:
        return tuple(int(np.flatnonzero(self.mul[a] == 0)[0]) for a in range(self.n))

    def op(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def value(self, word: Word) -> int:
        g = 0
        for x in word:
            h = self.gen_images[abs(x) - 1]
            g = int(self.mul[g, h if x > 0 else self.inv[h]])
        return g

    def satisfies(self, relators) -> bool:
        return all(self.value(r) == 0 for r in relators)

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def subgroup_generated(self, elements) -> frozenset[int]:
        sub = {0}
        frontier = list(sub)
        gens = sorted(set(elements))
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    c = int(self.mul[a, g])
                    if c not in sub:
                        sub.add(c)
                        nxt.append(c)
            frontier = nxt
        return frozenset(sub)

    @cached_property
    def abelianization_order(self) -> int:
        inv = self.inv
        comms = {int(self.mul[self.mul[inv[a], inv[b]], self.mul[a, b]])
                 for a in range(self.n) for b in range(self.n)}
        return self.n // len(self.subgroup_generated(comms))

    @classmethod
    def trivial(cls, n_generators: int = 0) -> "FiniteGroupTable":
        return cls(np.zeros((1, 1), dtype=np.int64), (0,) * n_generators)


def group_from_coset_table(table: list[list[int]], n_generators: int) -> FiniteGroupTable:
    """Right regular representation: element ``c`` is the coset ``0 * w_c``."""
    n = len(table)
    order, parent = [0], {0: None}
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for x in range(2 * n_generators):
            d = table[c][x]
            if d not in parent:
                parent[d] = (c, x)
                order.append(d)
                queue.append(d)
    if len(order) != n:
        raise AssertionError("coset table is not connected")
    cols = np.array(table, dtype=np.int64).reshape(n, 2 * n_generators)
    mul = np.empty((n, n), dtype=np.int64)
    mul[:, 0] = np.arange(n)
    for d in order[1:]:
        p, x = parent[d]
        mul[:, d] = cols[mul[:, p], x]
    return FiniteGroupTable(mul, tuple(int(table[0][2 * i]) for i in range(n_generators)))


def todd_coxeter(P: Presentation, max_cosets: int = DEFAULT_MAX_COSETS) -> FiniteGroupTable:
    """Enumerate cosets of the trivial subgroup; raises Exceeded at the cap."""
    if hasattr(P, "presentation"):
        P = P.presentation
    if P.n_generators == 0:
        return FiniteGroupTable.trivial()
    ct = CosetTable(P.n_generators, max_cosets)
    table = ct.run(P.relators)
    G = group_from_coset_table(table, P.n_generators)
    if not G.satisfies(P.relators):
        raise AssertionError("enumerated group violates a relator")
    return G
