import itertools
import json
import math

import pytest

from ampleamalgam import family
from ampleamalgam.errors import ConsistencyError, InputError, ResourceError
from ampleamalgam.pbij import PartialBijection, parse_pbij
from ampleamalgam.semigroup import (
    CayleyPresentation,
    FiniteSemigroup,
    closure,
    dual,
    idempotents,
    intersection_report,
    inverse_hull,
    is_down_closed,
    is_full,
    is_group,
    is_inverse_closed,
    is_unipotent,
    min_left_idempotent,
    natural_leq_in,
    set_cache_dir,
    set_closure_cap,
    wagner_preston,
)


def P(text, n):
    return parse_pbij(text, n)


def brute_closure(gens):
    # oracle: saturate by all pairwise products until nothing new appears
    S = set(gens)
    while True:
        new = {a * b for a in S for b in S} - S
        if not new:
            return S
        S |= new


def test_closure_examples():
    assert closure([PartialBijection.identity(2)]).element_set == {PartialBijection.identity(2)}
    DI2 = family("DI@2")
    assert closure(DI2.elements) == DI2
    u = P("{(4,3),(3,2)}", 4)
    assert closure([u]).element_set == {u, P("{(4,2)}", 4), PartialBijection.empty(4)}


@pytest.mark.parametrize("gens", [
    ["{(1,2),(2,3)}", "{(3,3)}"],
    ["{(1,2),(2,1)}", "{(1,1)}"],
    ["{(1,2),(2,3),(3,1)}"],
    ["{(1,3)}", "{(2,2),(3,1)}", "{(1,1),(2,3)}"],
])
def test_closure_matches_saturation(gens):
    gs = [P(g, 3) for g in gens]
    assert closure(gs).element_set == brute_closure(gs)


def test_non_closed_rejected():
    with pytest.raises(InputError):
        FiniteSemigroup([P("{(1,2)}", 2)])


def test_closure_cap():
    set_closure_cap(10)
    try:
        with pytest.raises(ResourceError):
            closure(family("SYM@4").elements[:2] + [P("{(1,2)}", 4)])
    finally:
        set_closure_cap(None)


def test_dual_examples():
    assert dual(family("DI@3")) == family("DI+@3")
    assert dual(family("SYM@4")) == family("SYM@4")
    OI3 = family("OI@3")
    assert dual(dual(OI3)) == OI3


def test_inverse_hull_examples():
    assert inverse_hull(family("SYM@3")) == family("SYM@3")
    one = FiniteSemigroup([PartialBijection.identity(3)])
    assert inverse_hull(one) == one
    DI3 = family("DI@3")
    union = DI3.element_set | dual(DI3).element_set
    # union size 15 + 15 - |intersection|; the hull is strictly larger
    # because DI_3 is not rich ample (see test_ample)
    assert len(union) == 15 + 15 - len(DI3.element_set & dual(DI3).element_set) == 22
    H = inverse_hull(DI3)
    assert len(H) == 29
    assert union < H.element_set
    assert H.element_set == brute_closure(union)


def test_idempotent_examples():
    I2 = family("I@2")
    assert {str(e) for e in idempotents(I2)} == {"{}", "{(1,1)}", "{(2,2)}", "{(1,1),(2,2)}"}
    for n in range(1, 6):
        assert is_unipotent(family(f"SYM@{n}"))
    assert not is_inverse_closed(family("DI@3"))
    assert is_full(family("DI@3"), family("I@3"))
    assert not is_full(family("SYM@3"), family("I@3"))


def test_symmetric_inverse_sizes():
    for n, size in zip(range(1, 5), (2, 7, 34, 209)):
        assert len(family(f"I@{n}")) == size
        assert size == sum(math.comb(n, k) ** 2 * math.factorial(k) for k in range(n + 1))


def test_min_left_idempotent_examples():
    I3, I4, I2 = family("I@3"), family("I@4"), family("I@2")
    assert min_left_idempotent(PartialBijection.identity(3), I3) == PartialBijection.identity(3)
    assert min_left_idempotent(P("{(4,3),(3,2)}", 4), I4) == P("{(3,3),(4,4)}", 4)
    assert min_left_idempotent(PartialBijection.empty(2), I2) == PartialBijection.empty(2)
    with pytest.raises(InputError):
        min_left_idempotent(P("{(2,1)}", 3), family("DI@3"))


def test_natural_order_inside_subsemigroup():
    # inside a subsemigroup with fewer idempotents the order is coarser
    G = family("SYM@3")
    a, b = G.elements[0], G.elements[1]
    assert not natural_leq_in(a, b, G)
    I3 = family("I@3")
    assert natural_leq_in(P("{(1,2)}", 3), P("{(1,2),(2,3)}", 3), I3)


def test_down_closed_examples():
    I2 = family("I@2")
    assert not is_down_closed(FiniteSemigroup([PartialBijection.identity(2)]), I2)
    assert is_down_closed(I2, I2)
    OI3 = family("OI@3")
    assert is_down_closed(OI3, OI3)


def test_intersection_report():
    r = intersection_report(family("DI@3"))
    assert r == {"size": 8, "empty": False}   # exactly the partial identities


def test_group_detection():
    assert is_group(family("SYM@3"))
    assert is_group(closure([P("{(1,2),(2,1)}", 3)]))
    assert not is_group(family("OI@2"))
    assert is_group(FiniteSemigroup([PartialBijection.empty(2)]))


def test_semigroup_json_round_trip():
    S = family("DI@3")
    js = json.loads(json.dumps(S.to_json()))
    assert js["schema"] == "ampleamalgam/semigroup@1"
    assert FiniteSemigroup.from_json(js) == S


def test_table_disk_cache(tmp_path):
    set_cache_dir(tmp_path)
    try:
        S = closure([P("{(1,2),(2,3),(3,1)}", 3), P("{(1,1)}", 3)])
        t1 = S.table
        files = list(tmp_path.iterdir())
        assert len(files) == 1 and S.digest() in files[0].name
        again = FiniteSemigroup(S.elements)
        assert again.table == t1
    finally:
        set_cache_dir(None)


def test_table_matches_products():
    S = family("OI@2")
    for i, a in enumerate(S):
        for j, b in enumerate(S):
            assert S.elements[S.table[i][j]] == a * b


def test_presentation_validation():
    with pytest.raises(InputError):
        CayleyPresentation(["a", "b"], [[1, 0], [0, 0]])   # not associative
    P2 = CayleyPresentation.cyclic_group(2)
    assert P2.is_inverse()
    band = CayleyPresentation(["e", "f"], [[0, 0], [1, 1]])   # left-zero band, not inverse
    assert not band.is_inverse()
    with pytest.raises(InputError):
        wagner_preston(band)
    js = json.loads(json.dumps(P2.to_json()))
    assert CayleyPresentation.from_json(js).table == P2.table


def _check_wp(P):
    rep = wagner_preston(P)
    for i, j in itertools.product(range(P.size), repeat=2):
        assert rep.images[i] * rep.images[j] == rep.images[P.mul(i, j)]
    assert len(set(rep.images)) == P.size
    return rep


def test_wagner_preston_examples():
    rep = _check_wp(CayleyPresentation.cyclic_group(2))
    assert rep.semigroup.element_set == {PartialBijection.identity(2), P("{(1,2),(2,1)}", 2)}
    rep = _check_wp(CayleyPresentation(["1"], [[0]]))
    assert rep.images == [PartialBijection.identity(1)]
    semilattice = CayleyPresentation(["e", "f"], [[0, 1], [1, 1]])
    rep = _check_wp(semilattice)
    assert sorted(im.rank for im in rep.images) == [1, 2]
    assert all(im.is_idempotent() for im in rep.images)


def test_wagner_preston_of_concrete_inverse_semigroups():
    for spec in ("I@2", "OI@2", "SYM@3"):
        _check_wp(CayleyPresentation.from_semigroup(family(spec)))
    with pytest.raises(ResourceError):
        wagner_preston(CayleyPresentation.from_semigroup(family("OI@3")))


def test_consistency_error_is_distinct():
    assert not issubclass(ConsistencyError, InputError)
