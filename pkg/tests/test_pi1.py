import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group
from sympy.matrices.normalforms import invariant_factors

from fundgpd.errors import Disconnected, Exceeded, UnknownPoint
from fundgpd.finspace import from_relations
from fundgpd.pi1.homology import HomologyGroup, boundary_matrix, homology, smith_diagonal
from fundgpd.pi1.presentation import (Presentation, cyclic_reduce, free_reduce, invert,
                                      presentation_from_complex, simplify)
from fundgpd.pi1.todd_coxeter import FiniteGroupTable, todd_coxeter
from fundgpd.pi1.cover import component_of, fundamental_group
from fundgpd.simplicial import SimplicialComplex, face_poset, order_complex

from helpers import RP2_FACETS, corpus, random_poset

RP2 = SimplicialComplex.from_facets([list(f) for f in RP2_FACETS])


def _fp_order(n, relators):
    Fr = free_group(" ".join(f"g{i}" for i in range(n)))
    F, gens = Fr[0], Fr[1:]
    words = []
    for r in relators:
        w = F.identity
        for x in r:
            w = w * (gens[abs(x) - 1] if x > 0 else gens[abs(x) - 1] ** -1)
        words.append(w)
    return FpGroup(F, words).order()


def test_word_helpers():
    assert free_reduce((1, -1, 2, 3, -3)) == (2,)
    assert cyclic_reduce((-2, 1, 3, 2)) == (1, 3)
    assert invert((1, -2)) == (2, -1)


def test_edge_path_examples():
    circle = SimplicialComplex.from_facets([["a", "b"], ["b", "c"], ["a", "c"]])
    P = presentation_from_complex(circle, "a")
    assert len(P.generators) == 1 and P.relators == ()
    tri = SimplicialComplex.from_facets([["a", "b", "c"]])
    P = presentation_from_complex(tri, "a")
    assert len(P.generators) == 1 and len(P.relators) == 1
    P = presentation_from_complex(RP2, "1")
    assert len(P.generators) == 10 and len(P.relators) == 10
    with pytest.raises(Disconnected):
        presentation_from_complex(SimplicialComplex.from_facets([["a"], ["b"]]), "a")
    with pytest.raises(UnknownPoint):
        presentation_from_complex(tri, "z")


@pytest.mark.parametrize("n, rels, order", [
    (1, [(1, 1)], 2),
    (2, [(1, 1), (2, 2), (1, 2, 1, 2)], 4),
    (2, [(1, 1), (2, 2, 2), (1, 2, 1, 2)], 6),
    (2, [(1, 1), (2, 2, 2), (1, 2, 1, 2, 1, 2)], 12),
    (2, [(1, 1), (2, 2, 2, 2, 2), (1, 2, 1, 2)], 10),
    (2, [(1, 1), (2, 2, 2), (1, 2, 1, 2, 1, 2, 1, 2, 1, 2)], 60),
])
def test_todd_coxeter_orders(n, rels, order):
    G = todd_coxeter(Presentation(n, tuple(rels)))
    assert G.order == order == _fp_order(n, rels)
    assert G.satisfies(rels)


def test_klein_four_is_abelian_and_s3_is_not():
    V = todd_coxeter(Presentation(2, ((1, 1), (2, 2), (1, 2, 1, 2))))
    assert V.is_abelian and V.abelianization_order == 4
    S3 = todd_coxeter(Presentation(2, ((1, 1), (2, 2, 2), (1, 2, 1, 2))))
    assert not S3.is_abelian and S3.abelianization_order == 2


def test_exceeded():
    with pytest.raises(Exceeded):
        todd_coxeter(Presentation(1, ()), max_cosets=100)
    with pytest.raises(ValueError):
        todd_coxeter(Presentation(1, ((1, 1),)), max_cosets=0)


def test_group_table_validation():
    with pytest.raises(AssertionError):
        FiniteGroupTable(np.array([[0, 1], [1, 1]]), ())
    assert FiniteGroupTable.trivial().order == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=6),
                min_size=2, max_size=4))
def test_random_presentations_against_sympy(rels):
    P = Presentation(2, tuple(tuple(r) for r in rels) + ((1, 1, 1, 1), (2, 2, 2)))
    try:
        G = todd_coxeter(P, max_cosets=2000)
    except Exceeded:
        return
    assert G.satisfies(P.relators)
    assert G.subgroup_generated(G.gen_images) == frozenset(range(G.order))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), min_size=1, max_size=5),
                min_size=3, max_size=5))
def test_simplify_preserves_group(rels):
    P = Presentation(3, tuple(tuple(r) for r in rels) + ((1, 1), (2, 2), (3, 3)))
    S = simplify(P)
    try:
        G = todd_coxeter(P, max_cosets=3000)
        H = todd_coxeter(S.presentation, max_cosets=3000)
    except Exceeded:
        return
    assert G.order == H.order
    images = FiniteGroupTable(H.mul, tuple(H.value(w) for w in S.substitution))
    assert images.satisfies(P.relators)


# --- homology oracle ------------------------------------------------------------

def test_smith_against_sympy():
    rng = random.Random(3)
    for _ in range(200):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        M = [[rng.randint(-4, 4) for _ in range(c)] for _ in range(r)]
        ref = [abs(int(x)) for x in invariant_factors(Matrix(M)) if x != 0]
        assert smith_diagonal(M) == ref


def test_homology_examples():
    assert homology(RP2, 1) == HomologyGroup(0, (2,))
    assert homology(order_complex(face_poset(RP2)), 1) == HomologyGroup(0, (2,))
    assert str(homology(order_complex(corpus("pseudocircle.poset")), 1)) == "Z"
    assert homology(order_complex(corpus("sphere.poset")), 2) == HomologyGroup(1, ())
    assert str(homology(order_complex(corpus("sphere.poset")), 1)) == "0"


def test_boundary_squares_to_zero():
    B1 = np.array(boundary_matrix(RP2, 1))
    B2 = np.array(boundary_matrix(RP2, 2))
    assert not (B1 @ B2).any()


def test_fundamental_group_examples():
    assert fundamental_group(from_relations([("a", "b")]), "a").order == 1
    with pytest.raises(Exceeded):
        fundamental_group(corpus("pseudocircle.poset"), "a")
    G = fundamental_group(face_poset(RP2), "1")
    assert G.order == 2
    assert G.order == homology(order_complex(face_poset(RP2)), 1).order


def test_hurewicz_on_random_posets():
    rng = random.Random(11)
    checked = 0
    while checked < 60:
        X = random_poset(rng, 8)
        x = X.points[0]
        try:
            G = fundamental_group(X, x, max_cosets=2000)
        except Exceeded:
            continue
        H1 = homology(order_complex(component_of(X, x)), 1)
        assert H1.order == G.abelianization_order
        checked += 1


def test_unreduced_relators():
    # c a a^-1 c^-1 is trivial, so this is Z/2 generated by c
    P = Presentation(3, ((1,), (2,), (3, 1, -1, -3), (3, 3)))
    assert todd_coxeter(P).order == 2
    assert todd_coxeter(Presentation(2, ((1, 1, -1, 1), (2, 2, 2), (1, 2, -2, 2, 1, 2)))).order == 6
