import json

import pytest

from ampleamalgam import family
from ampleamalgam.ample import (
    Classification,
    PropertyReport,
    classify,
    dominion_of,
    dual_union,
    is_ample,
    is_left_ample,
    is_rich_ample,
    is_rich_left_ample,
    is_rich_right_ample,
    is_right_ample,
    is_ultra_rich_ample,
    is_ultra_rich_left_ample,
    is_ultra_rich_right_ample,
    rich_decomposition,
    verify_witness,
)
from ampleamalgam.census import exhaustive_subsemigroups, generated_subsemigroups
from ampleamalgam.errors import InputError
from ampleamalgam.pbij import PartialBijection, parse_pbij
from ampleamalgam.semigroup import FiniteSemigroup, closure, dual, inverse_hull


def P(text, n):
    return parse_pbij(text, n)


# -- an independent oracle on raw graphs -------------------------------------


def g_mul(a, b):
    db = dict(b)
    return frozenset((x, db[y]) for x, y in a if y in db)


def g_inv(a):
    return frozenset((y, x) for x, y in a)


def oracle(S):
    G = {frozenset(s.graph) for s in S}
    U = G | {g_inv(a) for a in G}
    return {
        "right": all(g_mul(g_inv(s), s) in G for s in G),
        "left": all(g_mul(s, g_inv(s)) in G for s in G),
        "rich_right": all(g_mul(g_inv(x), y) in U for x in G for y in G),
        "rich_left": all(g_mul(x, g_inv(y)) in U for x in G for y in G),
    }


def test_hierarchy_against_oracle_on_I2():
    I2 = family("I@2")
    for S in exhaustive_subsemigroups(2):
        o = oracle(S)
        assert is_right_ample(S, I2).holds == o["right"]
        assert is_left_ample(S, I2).holds == o["left"]
        assert is_rich_right_ample(S, I2).holds == o["rich_right"]
        assert is_rich_left_ample(S, I2).holds == o["rich_left"]


def test_hierarchy_against_oracle_on_families():
    for n in (3, 4):
        T = family(f"I@{n}")
        for tag in ("DI", "DI+", "OI", "ODI", "SYM"):
            S = family(f"{tag}@{n}")
            o = oracle(S)
            assert is_rich_right_ample(S, T).holds == o["rich_right"], (tag, n)
            assert is_rich_left_ample(S, T).holds == o["rich_left"], (tag, n)
            assert is_ample(S, T).holds == (o["right"] and o["left"])


# -- the displayed pair in DI_4 ---------------------------------------------------


def test_di4_displayed_pair():
    DI4, I4 = family("DI@4"), family("I@4")
    u, v = P("{(4,3),(3,2)}", 4), P("{(4,4),(3,1)}", 4)
    assert u in DI4 and v in DI4
    p = u.inverse() * v
    assert p == P("{(3,4),(2,1)}", 4)
    assert p not in dual_union(DI4)
    rep = is_rich_right_ample(DI4, I4)
    assert not rep.holds
    assert verify_witness(rep, DI4, I4)
    # the reported witness is the first failure in canonical order
    assert str(rep.witness["x"]) == "{(1,1),(2,2),(4,3)}"
    assert str(rep.witness["y"]) == "{(2,1),(3,2),(4,4)}"
    doctored = PropertyReport("rich-right-ample", False, {"x": u, "y": v, "product": p})
    assert verify_witness(doctored, DI4, I4)


def test_di_ample_up_to_five():
    for n in range(2, 6):
        assert is_ample(family(f"DI@{n}"), family(f"I@{n}")).holds


def test_di3_is_not_rich_ample():
    # DI_3 (all order-decreasing maps) already fails; its order-preserving
    # part ODI_3 is the rich one
    DI3, I3 = family("DI@3"), family("I@3")
    x, y = P("{(2,1),(3,2)}", 3), P("{(2,2),(3,1)}", 3)
    assert x.inverse() * y == P("{(1,2),(2,1)}", 3)
    rep = is_rich_right_ample(DI3, I3)
    assert not rep.holds
    assert (rep.witness["x"], rep.witness["y"]) == (x, y)
    assert not is_rich_left_ample(DI3, I3).holds
    assert is_rich_ample(family("DI@2"), family("I@2")).holds
    assert is_rich_ample(family("ODI@3"), I3).holds
    assert not is_rich_ample(family("ODI@4"), family("I@4")).holds


def test_ample_examples():
    for n in (2, 3, 4):
        assert is_ample(family(f"SYM@{n}"), family(f"I@{n}")).holds
    u = P("{(4,3),(3,2)}", 4)
    S, I4 = closure([u]), family("I@4")
    rep = is_right_ample(S, I4)
    assert not rep.holds
    assert rep.witness["s"] == u
    assert rep.witness["product"] == P("{(2,2),(3,3)}", 4)
    assert verify_witness(rep, S, I4)


def test_oi_rich_ample():
    for n in range(2, 5):
        OI, I = family(f"OI@{n}"), family(f"I@{n}")
        assert is_rich_ample(OI, I).holds
        assert not is_ultra_rich_ample(OI, I).holds
        assert not is_ultra_rich_ample(OI, I, definition=True).holds


def test_rich_decomposition_examples():
    OI3 = family("OI@3")
    for x in OI3.elements[::3]:
        for y in OI3.elements[::4]:
            assert x.inverse() * y in rich_decomposition(x, y, OI3)
            assert x * y.inverse() in rich_decomposition(x, y, OI3, side="left")
    S3 = family("SYM@3")
    for x in S3:
        for y in S3:
            assert len(rich_decomposition(x, y, S3)) == 1
            assert len(rich_decomposition(x, y, S3, side="left")) == 1
    DI3 = family("DI@3")
    z = PartialBijection.empty(3)
    assert sorted(rich_decomposition(z, z, DI3)) == sorted(dual_union(DI3))
    with pytest.raises(InputError):
        rich_decomposition(P("{(1,2)}", 3), z, DI3)


def test_ultra_examples():
    for n in range(1, 6):
        G, I = family(f"SYM@{n}"), family(f"I@{n}")
        assert is_ultra_rich_ample(G, I).holds
    assert not is_ultra_rich_ample(family("OI@3"), family("I@3")).holds
    cyc = family("MONO@3:{(1,2),(2,3),(3,1)}")
    I3 = family("I@3")
    for f in (is_ultra_rich_right_ample, is_ultra_rich_left_ample, is_ultra_rich_ample):
        assert f(cyc, I3).holds
        assert f(cyc, I3, definition=True).holds


def test_ultra_definition_agrees_with_shortcut():
    I3 = family("I@3")
    for S in generated_subsemigroups(3, 2)[::5]:
        for f in (is_ultra_rich_right_ample, is_ultra_rich_left_ample, is_ultra_rich_ample):
            assert f(S, I3).holds == f(S, I3, definition=True).holds


def test_classify_examples():
    c = classify(family("DI@4"), family("I@4"))
    assert c.two_sided == "ample"
    c = classify(family("DI@3"), family("I@3"))
    assert (c.right, c.left, c.two_sided) == ("right-ample", "left-ample", "ample")
    assert not c.unipotent
    c = classify(FiniteSemigroup([PartialBijection.identity(3)]), family("I@3"))
    assert c.two_sided == "ultra-rich-ample" and c.group
    c = classify(family("ODI@3"), family("I@3"))
    assert c.two_sided == "rich-ample" and c.rank() == 2
    assert Classification.from_json(json.loads(json.dumps(c.to_json()))) == c


def test_dominion_examples():
    S3, I3 = family("SYM@3"), family("I@3")
    assert dominion_of(S3, I3).semigroup == S3
    assert not dominion_of(family("DI@4"), family("I@4")).known
    assert not dominion_of(family("DI@3"), I3).known
    ODI3 = family("ODI@3")
    d = dominion_of(ODI3, I3)
    assert d.semigroup.element_set == ODI3.element_set | dual(ODI3).element_set
    with pytest.raises(InputError):
        dominion_of(closure([P("{(1,2)}", 3), P("{(2,3)}", 3)]), I3)


def test_duality_on_generated_universe():
    I3 = family("I@3")
    for S in generated_subsemigroups(3, 2):
        D = dual(S)
        assert is_right_ample(S, I3).holds == is_left_ample(D, I3).holds
        assert is_rich_right_ample(S, I3).holds == is_rich_left_ample(D, I3).holds
        assert is_ultra_rich_right_ample(S, I3).holds == is_ultra_rich_left_ample(D, I3).holds


def test_rich_iff_hull_is_union():
    I3 = family("I@3")
    for S in generated_subsemigroups(3, 2):
        rich = is_rich_ample(S, I3).holds
        assert rich == (inverse_hull(S).element_set == dual_union(S))


def test_requires_containment_and_inverse_ambient():
    with pytest.raises(InputError):
        is_ample(family("SYM@3"), family("DI@3"))
    with pytest.raises(InputError):
        is_ample(family("ODI@3"), family("DI@3"))


def test_report_json_round_trip():
    rep = is_rich_ample(family("DI@4"), family("I@4"))
    js = json.loads(json.dumps(rep.to_json()))
    assert js["witness"]["x"] == "{(1,1),(2,2),(4,3)}"
    assert js["witness"]["side"] == "right"
    assert PropertyReport.from_json(js) == rep
    rep = is_ultra_rich_right_ample(family("OI@2"), family("I@2"))
    assert PropertyReport.from_json(json.loads(json.dumps(rep.to_json()))) == rep
