import pytest
from hypothesis import given, strategies as st

from fundgpd.errors import FormatError, NotT0
from fundgpd.finspace import from_relations
from fundgpd.formats import dump_poset, load, parse_complex, parse_poset
from fundgpd.simplicial import SimplicialComplex, face_poset, order_complex

from helpers import DATA, RP2_FACETS


def test_face_counts():
    assert face_poset(SimplicialComplex.from_facets([["a", "b", "c"]])).n == 7
    circle = SimplicialComplex.from_facets([["a", "b"], ["b", "c"], ["a", "c"]])
    assert face_poset(circle).n == 6
    rp2 = SimplicialComplex.from_facets([list(f) for f in RP2_FACETS])
    counts = [len(rp2.faces_of_dim(d)) for d in range(3)]
    assert counts == [6, 15, 10]
    assert counts[0] - counts[1] + counts[2] == 1
    X = face_poset(rp2)
    assert X.n == 31 and X.is_t0


def test_face_orientation():
    X = face_poset(SimplicialComplex.from_facets([["a", "b", "c"]]))
    # the minimal open of a face is the set of its faces, with the face least
    assert set(X.names(X.up[X.idx("abc")])) == {"a", "b", "c", "ab", "ac", "bc", "abc"}
    assert X.up[X.idx("a")] == 1 << X.idx("a")


def test_complex_validation():
    with pytest.raises(ValueError):
        SimplicialComplex(("a", "b", "c"), (("a", "b", "c"), ("a", "b")))
    assert SimplicialComplex.from_facets([["a", "b", "c"], ["a", "b"]]).facets == (("a", "b", "c"),)
    with pytest.raises(ValueError):
        SimplicialComplex.from_facets([[]])


def test_order_complex_examples():
    K = order_complex(from_relations([("a", "b")]))
    assert K.facets == (("a", "b"),)
    K = order_complex(from_relations([("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]))
    assert len(K.faces_of_dim(1)) == 4 and not K.faces_of_dim(2)
    K = order_complex(from_relations([("a", "b"), ("b", "c")]))
    assert K.facets == (("a", "b", "c"),)
    with pytest.raises(NotT0):
        order_complex(from_relations([("a", "b"), ("b", "a")]))


def test_parse_poset():
    X = parse_poset("# comment\na < b < c\npoint z\n")
    assert X.points == ("a", "b", "c", "z") and X.leq("a", "c")
    for bad in ["", "a <", "a b", "point", "a < b c"]:
        with pytest.raises(FormatError):
            parse_poset(bad)


def test_parse_complex():
    K = parse_complex('{"facets": [[1, 2], [2, 3]]}')
    assert K.vertices == ("1", "2", "3")
    for bad in ["[", "[]", '{"facets": [[]]}']:
        with pytest.raises(FormatError):
            parse_complex(bad)


def test_load_by_extension(tmp_path):
    assert isinstance(load(DATA / "rp2.json"), SimplicialComplex)
    assert load(DATA / "pseudocircle.poset").n == 4
    with pytest.raises(FormatError):
        load(tmp_path / "missing.poset")


@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)).filter(lambda t: t[0] < t[1]),
                min_size=1, max_size=10))
def test_dump_roundtrip(pairs):
    X = from_relations([(f"v{i}", f"v{j}") for i, j in pairs])
    Y = parse_poset(dump_poset(X))
    assert Y.points == X.points and Y.up == X.up


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)).filter(lambda t: t[0] < t[1]),
                max_size=10))
def test_order_complex_simplices_are_chains(pairs):
    X = from_relations([(f"v{i}", f"v{j}") for i, j in pairs], points=[f"v{i}" for i in range(6)])
    K = order_complex(X)
    for s in K.simplices:
        for u in s:
            for v in s:
                assert X.leq(u, v) or X.leq(v, u)
