import json

import numpy as np
import pytest

from fundgpd.errors import FormatError
from fundgpd.finspace import from_relations
from fundgpd.gpdbuild import fundamental_groupoid, groupoid_iso_check, trivial_pair_groupoid
from fundgpd.serialize import dumps, groupoid_to_dict, loads, to_dot

from helpers import corpus


def test_roundtrip():
    G = fundamental_groupoid(corpus("sphere.poset")).groupoid
    H = loads(dumps(G))
    assert H.arrows == G.arrows and H.space.up == G.space.up
    for k in ("r", "s", "inv", "mult"):
        assert np.array_equal(getattr(H, k), getattr(G, k))
    assert dumps(H) == dumps(G)
    assert groupoid_iso_check(G, H, None)


def test_schema_field_and_units():
    d = groupoid_to_dict(trivial_pair_groupoid(from_relations([("a", "b")])))
    assert d["schema"] == 1 and d["units"] == [True, False, False, True]


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(schema=2),
    lambda d: d.pop("mult"),
    lambda d: d.update(r=[0]),
    lambda d: d.update(units=[False] * len(d["units"])),
    lambda d: d["topology"].update(minimal_opens=[[0]]),
    lambda d: d["mult"].pop(),
])
def test_schema_errors(mutate):
    d = groupoid_to_dict(trivial_pair_groupoid(from_relations([("a", "b")])))
    mutate(d)
    with pytest.raises(FormatError):
        loads(json.dumps(d))
    with pytest.raises(FormatError):
        loads("not json")


def test_dot_labels():
    G = fundamental_groupoid(from_relations([("a", "b")])).groupoid
    dot = to_dot(G)
    assert dot.startswith("digraph")
    assert '"[a,a]" -> "[b,b]" [label="[b,b]←[a,a] [0]"]' in dot
    assert dot.count("->") == 2
