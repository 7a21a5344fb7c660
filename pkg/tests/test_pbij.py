import json

import pytest
from hypothesis import given, settings, strategies as st

from ampleamalgam.errors import InputError, ParseError
from ampleamalgam.families import symmetric_inverse_monoid
from ampleamalgam.pbij import (
    PartialBijection,
    conjugate,
    direct_sum,
    embed,
    format_pbij,
    natural_leq,
    natural_leq_by_idempotents,
    order_class,
    parse_pbij,
    partial_identities,
    pbij_from_json,
    pbij_to_json,
    reversal,
)

I3 = symmetric_inverse_monoid(3).elements
elements3 = st.sampled_from(I3)


def dict_compose(a, b):
    # oracle: plain dicts, left-to-right
    da, db = dict(a.graph), dict(b.graph)
    return {x: db[y] for x, y in da.items() if y in db}


def P(text, n=3):
    return parse_pbij(text, n)


def test_compose_left_to_right():
    a = P("{(1,2)}")
    b = P("{(2,3)}")
    assert a * b == P("{(1,3)}")
    assert b * a == P("{}")


def test_inverse_and_idempotents():
    a = P("{(1,2),(3,1)}")
    assert a.inverse() == P("{(2,1),(1,3)}")
    assert a * a.inverse() == P("{(1,1),(3,3)}")
    assert not a.is_idempotent()
    assert P("{(2,2)}").is_idempotent()
    assert len(partial_identities(3)) == 8
    assert all(e.is_idempotent() for e in partial_identities(3))


def test_parse_errors():
    with pytest.raises(ParseError, match="duplicate first"):
        P("{(1,2),(1,3)}")
    with pytest.raises(ParseError, match="duplicate second"):
        P("{(1,2),(3,2)}")
    with pytest.raises(ParseError, match="out of range"):
        P("{(1,4)}")
    with pytest.raises(ParseError, match="malformed"):
        P("{(1,2}")
    with pytest.raises(InputError):
        PartialBijection(0)


def test_canonical_text_and_json():
    a = P(" { (3,1) , (1,2) } ")
    assert format_pbij(a) == "{(1,2),(3,1)}"
    assert str(PartialBijection.empty(2)) == "{}"
    js = pbij_to_json(a)
    assert js == {"degree": 3, "graph": [[1, 2], [3, 1]]}
    assert pbij_from_json(json.loads(json.dumps(js))) == a


def test_order_classes():
    c = order_class(P("{(2,1),(3,2)}"))
    assert c.order_preserving and c.order_decreasing and not c.order_increasing
    c = order_class(P("{(2,2),(3,1)}"))
    assert c.order_decreasing and not c.order_preserving
    assert order_class(PartialBijection.identity(3)).total


def test_constructions():
    a = PartialBijection(2, [(1, 2)])
    b = PartialBijection(1, [(1, 1)])
    assert direct_sum(a, b) == P("{(1,2),(3,3)}")
    assert embed(a, 4) == PartialBijection(4, [(1, 2)])
    r = reversal(3)
    assert r == P("{(1,3),(2,2),(3,1)}")
    # conjugating by the reversal turns decreasing maps into increasing ones
    d = P("{(2,1),(3,2)}")
    assert conjugate(d, r) == P("{(1,2),(2,3)}")


@given(elements3, elements3)
def test_product_matches_dict_oracle(a, b):
    assert dict((a * b).graph) == dict_compose(a, b)


@given(elements3, elements3, elements3)
def test_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(elements3)
def test_inverse_axioms(a):
    ai = a.inverse()
    assert a * ai * a == a
    assert ai * a * ai == ai
    assert ai.inverse() == a


@given(elements3)
def test_text_round_trip(a):
    assert parse_pbij(format_pbij(a), 3) == a


@settings(max_examples=200)
@given(elements3, elements3)
def test_natural_order_is_graph_inclusion(a, b):
    assert natural_leq(a, b) == natural_leq_by_idempotents(a, b)
    assert natural_leq(a, b) == set(a.graph).issubset(b.graph)


def test_idempotents_commute():
    E = partial_identities(3)
    assert all(e * f == f * e for e in E for f in E)


def test_canonical_order_is_total():
    assert sorted(I3) == list(I3)
    assert I3[0] == PartialBijection.empty(3)
