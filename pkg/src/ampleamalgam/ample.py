"""Ample, rich ample and ultra-rich ample subsemigroups of an inverse ``T``.

Every check is relative to a concrete ambient ``T`` that is closed under
inversion.  Failing checks carry the first violation met while scanning
``S`` in canonical order, so reports are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConsistencyError, InputError
from .pbij import PartialBijection, format_pbij, parse_pbij
from .semigroup import (
    FiniteSemigroup,
    dual,
    idempotents,
    inverse_hull,
    is_group,
    is_inverse_closed,
    is_unipotent,
)

CLASSIFICATION_SCHEMA = "ampleamalgam/classification@1"
REPORT_SCHEMA = "ampleamalgam/property-report@1"

BASIS = {
    "right-ample": "closure under s -> s^-1 s",
    "left-ample": "closure under s -> s s^-1",
    "ample": "right and left ample",
    "rich-right-ample": "x^-1 y in S u S' for all x, y in S",
    "rich-left-ample": "x y^-1 in S u S' for all x, y in S",
    "rich-ample": "rich right and rich left ample",
    "ultra-rich-right-ample": "rich right ample with unique a in x^-1 y = x^-1 x a",
    "ultra-rich-left-ample": "rich left ample with unique b in x y^-1 = b y y^-1",
    "ultra-rich-ample": "ultra-rich iff unipotent and rich ample",
}


def _fmt(x):
    return format_pbij(x) if isinstance(x, PartialBijection) else x


def _unfmt(v, n):
    if isinstance(v, list):
        return [_unfmt(x, n) for x in v]
    if isinstance(v, str) and v.startswith("{"):
        return parse_pbij(v, n)
    return v


@dataclass
class PropertyReport:
    property: str
    holds: bool
    witness: dict | None = None
    theorem: str = ""
    ambient: str | None = None
    degree: int | None = None

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        w = None
        if self.witness is not None:
            w = {k: ([_fmt(v) for v in val] if isinstance(val, (list, tuple)) else _fmt(val))
                 for k, val in self.witness.items()}
        return {
            "schema": REPORT_SCHEMA,
            "property": self.property,
            "holds": self.holds,
            "witness": w,
            "theorem": self.theorem,
            "ambient": self.ambient,
            "degree": self.degree,
        }

    @classmethod
    def from_json(cls, obj) -> PropertyReport:
        if obj.get("schema") != REPORT_SCHEMA:
            raise InputError(f"expected schema {REPORT_SCHEMA}")
        n = obj.get("degree")
        w = obj.get("witness")
        if w is not None:
            w = {k: _unfmt(v, n) for k, v in w.items()}
        return cls(obj["property"], obj["holds"], w, obj.get("theorem", ""), obj.get("ambient"), n)


def _report(prop, holds, witness, T, basis=None):
    return PropertyReport(prop, holds, None if holds else witness, basis or BASIS[prop], T.name, T.degree)


def _require(S: FiniteSemigroup, T: FiniteSemigroup):
    if S.degree != T.degree or not S.issubset(T):
        raise InputError(f"{S!r} is not contained in {T!r}")
    if not _inverse_closed_cached(T):
        raise InputError(f"ambient {T!r} is not closed under inversion")


def _inverse_closed_cached(T):
    flag = getattr(T, "_inv_closed", None)
    if flag is None:
        flag = is_inverse_closed(T)
        T._inv_closed = flag
    return flag


def _dual_union(S: FiniteSemigroup) -> frozenset:
    cached = getattr(S, "_dual_union", None)
    if cached is None:
        cached = S.element_set | frozenset(x.inverse() for x in S)
        S._dual_union = cached
    return cached


# -- ample -------------------------------------------------------------------


def is_right_ample(S: FiniteSemigroup, T: FiniteSemigroup) -> PropertyReport:
    _require(S, T)
    for s in S:
        p = s.inverse() * s
        if p not in S:
            return _report("right-ample", False, {"s": s, "product": p}, T)
    return _report("right-ample", True, None, T)


def is_left_ample(S: FiniteSemigroup, T: FiniteSemigroup) -> PropertyReport:
    _require(S, T)
    for s in S:
        p = s * s.inverse()
        if p not in S:
            return _report("left-ample", False, {"s": s, "product": p}, T)
    return _report("left-ample", True, None, T)


def _both(prop, r, l, T):
    if not r.holds:
        return PropertyReport(prop, False, dict(r.witness, side="right"), BASIS[prop], T.name, T.degree)
    if not l.holds:
        return PropertyReport(prop, False, dict(l.witness, side="left"), BASIS[prop], T.name, T.degree)
    return _report(prop, True, None, T)


def is_ample(S: FiniteSemigroup, T: FiniteSemigroup) -> PropertyReport:
    return _both("ample", is_right_ample(S, T), is_left_ample(S, T), T)


# -- rich ample ----------------------------------------------------------------


def is_rich_right_ample(S: FiniteSemigroup, T: FiniteSemigroup) -> PropertyReport:
    _require(S, T)
    U = _dual_union(S)
    for x in S:
        xi = x.inverse()
        for y in S:
            p = xi * y
            if p not in U:
                return _report("rich-right-ample", False, {"x": x, "y": y, "product": p}, T)
    return _report("rich-right-ample", True, None, T)


def is_rich_left_ample(S: FiniteSemigroup, T: FiniteSemigroup) -> PropertyReport:
    _require(S, T)
    U = _dual_union(S)
    invs = [y.inverse() for y in S]
    for x in S:
        for yi, y in zip(invs, S):
            p = x * yi
            if p not in U:
                return _report("rich-left-ample", False, {"x": x, "y": y, "product": p}, T)
    return _report("rich-left-ample", True, None, T)


def is_rich_ample(S: FiniteSemigroup, T: FiniteSemigroup) -> PropertyReport:
    return _both("rich-ample", is_rich_right_ample(S, T), is_rich_left_ample(S, T), T)


def rich_decomposition(x: PartialBijection, y: PartialBijection, S: FiniteSemigroup, side="right"):
    """All ``a`` in ``S u S'`` with ``x^-1 y == x^-1 x a`` (right side).

    With ``side="left"`` returns all ``b`` with ``x y^-1 == b y y^-1``.
    """
    if x not in S or y not in S:
        raise InputError("rich_decomposition needs x and y in S")
    U = sorted(_dual_union(S))
    if side == "right":
        xi = x.inverse()
        target, e = xi * y, xi * x
        return [a for a in U if e * a == target]
    if side == "left":
        yi = y.inverse()
        target, e = x * yi, y * yi
        return [b for b in U if b * e == target]
    raise InputError(f"side must be 'right' or 'left', got {side!r}")


def _decomposition_index(S, side):
    """For each relevant idempotent e: result -> list of decompositions."""
    U = sorted(_dual_union(S))
    index = {}

    def lookup(e):
        if e not in index:
            buckets = {}
            for a in U:
                r = e * a if side == "right" else a * e
                buckets.setdefault(r, []).append(a)
            index[e] = buckets
        return index[e]

    return lookup


def _unique_decomposition_violation(S, side):
    lookup = _decomposition_index(S, side)
    for x in S:
        for y in S:
            if side == "right":
                xi = x.inverse()
                target, e = xi * y, xi * x
            else:
                yi = y.inverse()
                target, e = x * yi, y * yi
            sols = lookup(e).get(target, [])
            if len(sols) != 1:
                return {"x": x, "y": y, "product": target, "decompositions": sols}
    return None


def _two_idempotents(S):
    E = idempotents(S)
    return {"idempotents": list(E[:2])} if len(E) > 1 else None


def _ultra_side(S, T, side, definition):
    prop = f"ultra-rich-{side}-ample"
    rich = is_rich_right_ample(S, T) if side == "right" else is_rich_left_ample(S, T)
    if not rich.holds:
        return PropertyReport(prop, False, rich.witness, BASIS[prop], T.name, T.degree)
    if not definition and not is_unipotent(S):
        # uniqueness forces a single idempotent
        return PropertyReport(prop, False, _two_idempotents(S),
                              "ultra-rich one-sided ample implies unipotent", T.name, T.degree)
    bad = _unique_decomposition_violation(S, side)
    return _report(prop, bad is None, bad, T)


def is_ultra_rich_right_ample(S, T, definition=False) -> PropertyReport:
    """``definition=True`` skips the unipotency shortcut and checks uniqueness only."""
    return _ultra_side(S, T, "right", definition)


def is_ultra_rich_left_ample(S, T, definition=False) -> PropertyReport:
    return _ultra_side(S, T, "left", definition)


def is_ultra_rich_ample(S, T, definition=False) -> PropertyReport:
    """Two-sided ultra-rich ampleness.

    The default path decides it as unipotent plus rich ample; with
    ``definition=True`` both uniqueness conditions are checked directly.
    """
    prop = "ultra-rich-ample"
    if definition:
        r = is_ultra_rich_right_ample(S, T, definition=True)
        l = is_ultra_rich_left_ample(S, T, definition=True)
        rep = _both(prop, r, l, T)
        rep.theorem = "uniqueness of a and b checked directly"
        return rep
    rich = is_rich_ample(S, T)
    if not rich.holds:
        return PropertyReport(prop, False, rich.witness, BASIS[prop], T.name, T.degree)
    if not is_unipotent(S):
        return PropertyReport(prop, False, _two_idempotents(S), BASIS[prop], T.name, T.degree)
    return _report(prop, True, None, T)


def verify_witness(report: PropertyReport, S: FiniteSemigroup, T: FiniteSemigroup) -> bool:
    """Re-evaluate a failing report's witness; True iff it is a real violation."""
    w = report.witness
    if report.holds or w is None:
        return False
    U = _dual_union(S)
    if "idempotents" in w:
        E = w["idempotents"]
        return len(E) == 2 and E[0] != E[1] and all(e in S and e.is_idempotent() for e in E)
    if "decompositions" in w:
        side = "left" if "left" in report.property else "right"
        return len(rich_decomposition(w["x"], w["y"], S, side)) != 1
    if "s" in w:
        s = w["s"]
        side = w.get("side") or ("left" if report.property.startswith("left") else "right")
        p = s.inverse() * s if side == "right" else s * s.inverse()
        return s in S and p == w["product"] and p not in S
    x, y = w["x"], w["y"]
    side = w.get("side")
    if side is None:
        side = "left" if "left" in report.property else "right"
    p = x.inverse() * y if side == "right" else x * y.inverse()
    return x in S and y in S and p == w["product"] and p not in U


# -- classification -------------------------------------------------------------


LEVELS = ("not-ample", "ample", "rich-ample", "ultra-rich-ample")


def _level(side, ample, rich, ultra):
    prefix = "" if side == "two-sided" else f"{side}-"
    if not ample:
        return f"not-{prefix}ample"
    if not rich:
        return f"{prefix}ample"
    if not ultra:
        return f"rich-{prefix}ample"
    return f"ultra-rich-{prefix}ample"


@dataclass
class Classification:
    right: str
    left: str
    two_sided: str
    inverse_closed: bool
    group: bool
    unipotent: bool
    flags: dict = field(default_factory=dict)

    def rank(self, side="two_sided") -> int:
        label = getattr(self, side)
        if label.startswith("not-"):
            return 0
        if label.startswith("ultra-"):
            return 3
        if label.startswith("rich-"):
            return 2
        return 1

    def to_json(self) -> dict:
        return {
            "schema": CLASSIFICATION_SCHEMA,
            "right": self.right,
            "left": self.left,
            "two_sided": self.two_sided,
            "inverse_closed": self.inverse_closed,
            "group": self.group,
            "unipotent": self.unipotent,
            **self.flags,
        }

    @classmethod
    def from_json(cls, obj) -> Classification:
        obj = dict(obj)
        if obj.pop("schema", None) != CLASSIFICATION_SCHEMA:
            raise InputError(f"expected schema {CLASSIFICATION_SCHEMA}")
        keys = ("right", "left", "two_sided", "inverse_closed", "group", "unipotent")
        return cls(*(obj.pop(k) for k in keys), flags=obj)


def classify(S: FiniteSemigroup, T: FiniteSemigroup) -> Classification:
    """Most specific hierarchy label on each side, plus structural flags."""
    ra, la = is_right_ample(S, T).holds, is_left_ample(S, T).holds
    rr = ra and is_rich_right_ample(S, T).holds
    rl = la and is_rich_left_ample(S, T).holds
    ur = rr and is_ultra_rich_right_ample(S, T).holds
    ul = rl and is_ultra_rich_left_ample(S, T).holds
    u2 = rr and rl and is_ultra_rich_ample(S, T).holds
    return Classification(
        right=_level("right", ra, rr, ur),
        left=_level("left", la, rl, ul),
        two_sided=_level("two-sided", ra and la, rr and rl, u2),
        inverse_closed=is_inverse_closed(S),
        group=is_group(S),
        unipotent=is_unipotent(S),
    )


# -- dominion ---------------------------------------------------------------------


@dataclass
class Dominion:
    semigroup: FiniteSemigroup | None
    note: str

    @property
    def known(self) -> bool:
        return self.semigroup is not None


def dominion_of(S: FiniteSemigroup, T: FiniteSemigroup) -> Dominion:
    """Dominion of an ample ``S`` in ``T`` when it is decidable here.

    For rich ample ``S`` the dominion is ``S u S'``; otherwise the answer
    would need a zigzag computation, which is not implemented.
    """
    amp = is_ample(S, T)
    if not amp.holds:
        raise InputError(f"dominion_of needs S ample in T; violation {amp.to_json()['witness']}")
    if is_rich_ample(S, T).holds:
        U = FiniteSemigroup(_dual_union(S), check=False)
        hull = inverse_hull(S)
        if U != hull:
            raise ConsistencyError("rich ample S whose inverse hull differs from S u S'")
        return Dominion(U, "dominion equals S u S' (rich ample)")
    return Dominion(None, "unknown: S is not rich ample and zigzag computation is out of scope")


def dual_union(S: FiniteSemigroup) -> frozenset:
    """``S u S'`` as a set."""
    return _dual_union(S)


__all__ = [
    "PropertyReport",
    "Classification",
    "Dominion",
    "is_right_ample",
    "is_left_ample",
    "is_ample",
    "is_rich_right_ample",
    "is_rich_left_ample",
    "is_rich_ample",
    "rich_decomposition",
    "is_ultra_rich_right_ample",
    "is_ultra_rich_left_ample",
    "is_ultra_rich_ample",
    "verify_witness",
    "classify",
    "dominion_of",
    "dual_union",
    "dual",
]
