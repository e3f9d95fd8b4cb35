import random

import numpy as np
import pytest

from fundgpd.errors import MismatchedProvenance, NotAnAction, NotContinuous, SearchCapExceeded
from fundgpd.finspace import SpaceMap, bits, discrete_space, from_relations, is_hausdorff
from fundgpd.gpdbuild import (GroupoidMorphism, fundamental_groupoid, groupoid_iso_check,
                              induced_morphism, quotient_groupoid, r_times_s_morphism,
                              topologies_equal, transformation_groupoid,
                              trivial_pair_groupoid, uc_topology)
from fundgpd.pi1.cover import deck_action_report, universal_cover
from fundgpd.pi1.todd_coxeter import FiniteGroupTable, Presentation, todd_coxeter

from helpers import corpus, random_monotone_map, random_poset

Z2 = todd_coxeter(Presentation(1, ((1, 1),)))


@pytest.fixture(scope="module")
def rp2():
    X = corpus("rp2.json")
    C = universal_cover(X)
    return X, C, quotient_groupoid(C)


def test_cover_examples(rp2):
    X, C, _ = rp2
    assert C.total.n == 62 and C.m == 2
    assert all(len(C.fiber(x)) == 2 for x in X.points)
    S = corpus("sphere.poset")
    CS = universal_cover(S)
    assert CS.m == 1 and CS.total.up == S.up
    chain = from_relations([("a", "b")])
    assert universal_cover(chain).total.n == 2


def test_deck_reports(rp2):
    _, C, _ = rp2
    rep = deck_action_report(C)
    assert rep["free"] and rep["covering_space_action"] and rep["proper"]
    assert rep["hausdorff_criterion"] is False and rep["criterion_matches_base"]
    rep = deck_action_report(universal_cover(from_relations([], points=["p"])))
    assert rep["free"] and rep["covering_space_action"] and rep["hausdorff_criterion"]


def test_cover_lifts_order(rp2):
    X, C, _ = rp2
    for p in range(C.total.n):
        for q in bits(C.total.up[p]):
            assert X.up[p // C.m] >> (q // C.m) & 1
    for p in range(C.total.n):
        for y in bits(X.up[p // C.m]):
            assert C.lift_step(p, y) // C.m == y


def test_quotient_groupoid_examples(rp2):
    X, C, G = rp2
    assert G.n == 31 * 31 * 2 == 1922
    assert len(G.units) == 31
    assert G.meta["projection_open"]
    assert G.isotropy_discrete
    pt = quotient_groupoid(universal_cover(from_relations([], points=["p"])))
    assert pt.n == 1 and pt.r[0] == pt.s[0] == pt.inv[0] == pt.mult[0, 0] == 0
    S = quotient_groupoid(universal_cover(corpus("sphere.poset")))
    assert S.n == 36 and all(len(S.isotropy(int(u))) == 1 for u in S.units)


def test_quotient_groupoid_composition_law(rp2):
    _, C, G = rp2
    # [x, y][y·h, w] = [x, w·h^-1] checked on named representatives
    name = {a: n for a, n in enumerate(G.arrows)}
    assert len(set(name.values())) == G.n
    a, b = G.composable_pairs
    assert len(a) == sum(len(G.fibre_r(int(u))) * len(G.fibre_s(int(u))) for u in G.units)


def test_uc_topology(rp2):
    X, C, G = rp2
    uc = uc_topology(G, C)
    assert uc.general_sets_open and uc.containment_ok
    cmp = topologies_equal(G, uc)
    assert cmp.equal and cmp.projection_open
    # N(a) is parametrised bijectively by up(x~) x up(y~)
    m = C.m
    for a, Na in zip(range(G.n), uc.basic_sets):
        _, i, j, g = G.coords[a]
        assert Na.bit_count() == C.total.up[i * m].bit_count() * C.total.up[j * m + g].bit_count()


def test_uc_topology_small_cases():
    chain = from_relations([("a", "b")])
    F = fundamental_groupoid(chain)
    uc = uc_topology(F.groupoid, F.covers[0])
    bb = F.groupoid.arrows.index("[b,b]")
    assert F.groupoid.space.names(uc.basic_sets[bb]) == ["[b,b]"]
    assert topologies_equal(F.groupoid, uc)
    S = fundamental_groupoid(corpus("sphere.poset"))
    assert topologies_equal(S.groupoid, uc_topology(S.groupoid, S.covers[0]))
    with pytest.raises(MismatchedProvenance):
        uc_topology(S.groupoid, F.covers[0])


def test_pair_groupoid():
    assert trivial_pair_groupoid(from_relations([], points=["p"])).n == 1
    D = trivial_pair_groupoid(discrete_space("pq"))
    assert D.n == 4 and is_hausdorff(D.space)
    C = trivial_pair_groupoid(from_relations([("a", "b")]))
    assert C.n == 4 and C.space.leq("(a,a)", "(b,b)")


def test_transformation_groupoids(rp2):
    X = from_relations([("a", "b")])
    T = transformation_groupoid(X, FiniteGroupTable.trivial(), [[0], [1]])
    assert T.n == 2 and len(T.units) == 2
    D = discrete_space("pq")
    T = transformation_groupoid(D, Z2, [[0, 1], [1, 0]])
    assert T.n == 4 and len(T.units) == 2 and T.meta["etale_recorded"]
    _, C, _ = rp2
    T = transformation_groupoid(C.total, C.deck, C.action)
    assert T.n == 124
    with pytest.raises(NotAnAction):
        transformation_groupoid(D, Z2, [[0, 1], [1, 1]])
    with pytest.raises(NotAnAction):
        transformation_groupoid(X, Z2, [[0, 1], [1, 0]])   # swapping a<b is not continuous


def test_iso_checks(rp2):
    chain = from_relations([("a", "b")])
    F = fundamental_groupoid(chain)
    G = F.groupoid
    ident = GroupoidMorphism(G, G, np.arange(G.n))
    assert groupoid_iso_check(G, G, ident)
    pair, phi = r_times_s_morphism(G, chain, F.unit_point)
    assert groupoid_iso_check(G, pair, phi)
    assert groupoid_iso_check(G, pair)
    _, _, R = rp2
    P = trivial_pair_groupoid(corpus("rp2.json"))
    res = groupoid_iso_check(R, P)
    assert not res and "counts" in res.reason
    S = fundamental_groupoid(corpus("sphere.poset")).groupoid
    with pytest.raises(SearchCapExceeded):
        groupoid_iso_check(S, S, search_cap=3)


def test_iso_detects_wrong_topology():
    D = trivial_pair_groupoid(discrete_space("ab"))
    C = trivial_pair_groupoid(from_relations([("a", "b")]))
    assert not groupoid_iso_check(D, C)
    assert not groupoid_iso_check(D, C, GroupoidMorphism(D, C, np.arange(4)))


def test_induced_identity_and_constant():
    S = corpus("sphere.poset")
    F = fundamental_groupoid(S)
    phi = induced_morphism(SpaceMap.identity(S), F, F)
    assert np.array_equal(phi.assignment, np.arange(F.groupoid.n))
    chain = from_relations([("a", "b")])
    Fc = fundamental_groupoid(chain)
    const = SpaceMap.from_dict(S, chain, {x: "b" for x in S.points})
    phi = induced_morphism(const, F, Fc)
    target = Fc.groupoid.arrows.index("[b,b]")
    assert set(phi.assignment.tolist()) == {target}
    bad = SpaceMap.from_dict(chain, discrete_space("ab"), {"a": "a", "b": "b"})
    with pytest.raises(NotContinuous):
        induced_morphism(bad, Fc, fundamental_groupoid(discrete_space("ab")))


def test_induced_on_rp2_cover_projection(rp2):
    X, C, _ = rp2
    F = fundamental_groupoid(X)
    phi = induced_morphism(SpaceMap.identity(X), F, F)
    assert np.array_equal(phi.assignment, np.arange(F.groupoid.n))


def test_functoriality_random():
    rng = random.Random(5)
    done = 0
    while done < 25:
        X, Y, Z = (random_poset(rng, 6) for _ in range(3))
        f = random_monotone_map(rng, X, Y)
        g = random_monotone_map(rng, Y, Z)
        if f is None or g is None:
            continue
        try:
            FX, FY, FZ = (fundamental_groupoid(W, 2000) for W in (X, Y, Z))
        except Exception as exc:   # infinite pi_1 somewhere
            if type(exc).__name__ != "Exceeded":
                raise
            continue
        fm, gm = SpaceMap(X, Y, f), SpaceMap(Y, Z, g)
        lhs = induced_morphism(gm.compose(fm), FX, FZ)
        rhs = induced_morphism(gm, FY, FZ).compose(induced_morphism(fm, FX, FY))
        assert np.array_equal(lhs.assignment, rhs.assignment)
        done += 1


def test_functoriality_on_rp2_automorphisms(rp2):
    import itertools
    from helpers import RP2_FACETS
    X, _, _ = rp2
    facets = {frozenset(f) for f in RP2_FACETS}
    autos = []
    for perm in itertools.permutations("123456"):
        sigma = dict(zip("123456", perm))
        if {frozenset(sigma[v] for v in f) for f in facets} == facets:
            autos.append(sigma)
    assert len(autos) == 60

    def face_map(sigma):
        return SpaceMap.from_dict(X, X, {x: "".join(sorted(sigma[v] for v in x)) for x in X.points})

    F = fundamental_groupoid(X)
    f, g = face_map(autos[7]), face_map(autos[23])
    lhs = induced_morphism(g.compose(f), F, F)
    rhs = induced_morphism(g, F, F).compose(induced_morphism(f, F, F))
    assert np.array_equal(lhs.assignment, rhs.assignment)
    assert lhs.is_bijective()
