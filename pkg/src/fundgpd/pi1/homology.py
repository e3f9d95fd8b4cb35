"""Integral simplicial homology by Smith normal form.

Used as an independent oracle: H_1 must agree with the abelianization of
the enumerated fundamental group.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..simplicial import SimplicialComplex


def smith_diagonal(matrix: list[list[int]]) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    A = [list(map(int, row)) for row in matrix]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    diag = []
    t = 0
    while t < rows and t < cols:
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = A[i][j]
                if v and (best is None or abs(v) < abs(A[best[0]][best[1]])):
                    best = (i, j)
                    if abs(v) == 1:
                        break
            if best and abs(A[best[0]][best[1]]) == 1:
                break
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, rows):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    done = False
            if done:
                # divisibility of the remaining block by the pivot
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if A[i][j] % p), None)
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                continue
            # a smaller remainder appeared; move it to the pivot position
            best = min(((i, t) for i in range(t + 1, rows) if A[i][t]),
                       default=None, key=lambda ij: abs(A[ij[0]][ij[1]]))
            best2 = min(((t, j) for j in range(t + 1, cols) if A[t][j]),
                        default=None, key=lambda ij: abs(A[ij[0]][ij[1]]))
            cand = [c for c in (best, best2) if c is not None]
            i, j = min(cand, key=lambda ij: abs(A[ij[0]][ij[1]]))
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def boundary_matrix(K: SimplicialComplex, d: int) -> list[list[int]]:
    """Matrix of the boundary C_d -> C_{d-1}; rows index (d-1)-faces."""
    lower = K.faces_of_dim(d - 1)
    upper = K.faces_of_dim(d)
    pos = {f: i for i, f in enumerate(lower)}
    M = [[0] * len(upper) for _ in lower]
    for j, s in enumerate(upper):
        for k in range(len(s)):
            M[pos[s[:k] + s[k + 1:]]][j] = -1 if k % 2 else 1
    return M


@dataclass(frozen=True)
class HomologyGroup:
    rank: int
    torsion: tuple[int, ...]

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    @property
    def order(self) -> int | None:
        if self.rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def __str__(self):
        parts = ["Z"] * (self.rank > 0)
        if self.rank > 1:
            parts = [f"Z^{self.rank}"]
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


def homology(K: SimplicialComplex, d: int) -> HomologyGroup:
    n_d = len(K.faces_of_dim(d))
    rank_out = len(smith_diagonal(boundary_matrix(K, d))) if d > 0 and n_d else 0
    inc = smith_diagonal(boundary_matrix(K, d + 1)) if K.faces_of_dim(d + 1) else []
    return HomologyGroup(n_d - rank_out - len(inc), tuple(x for x in inc if x > 1))
