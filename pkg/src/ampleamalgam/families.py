"""Named finite families inside the symmetric inverse monoid ``I_n``."""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError, ParseError, ResourceError
from .pbij import MAX_DEGREE, PartialBijection, order_class, parse_pbij
from .semigroup import FiniteSemigroup, closure

TAGS = ("I", "OI", "DI", "DI_plus", "ODI", "ODI_plus", "SYM", "TRIVIAL", "MONOGENIC")

DEFAULT_CAPS = {
    "I": 6,
    "OI": 6,
    "DI": 8,
    "DI_plus": 8,
    "ODI": 8,
    "ODI_plus": 8,
    "SYM": 8,
    "TRIVIAL": MAX_DEGREE,
    "MONOGENIC": MAX_DEGREE,
}

_ALIASES = {
    "I": "I",
    "OI": "OI",
    "DI": "DI",
    "DI+": "DI_plus",
    "DI_PLUS": "DI_plus",
    "ODI": "ODI",
    "ODI+": "ODI_plus",
    "ODI_PLUS": "ODI_plus",
    "SYM": "SYM",
    "S": "SYM",
    "TRIVIAL": "TRIVIAL",
    "MONO": "MONOGENIC",
    "MONOGENIC": "MONOGENIC",
}


def symmetric_inverse_size(n: int) -> int:
    """``|I_n| = sum_k C(n, k)^2 k!``."""
    return sum(math.comb(n, k) ** 2 * math.factorial(k) for k in range(n + 1))


@dataclass(frozen=True)
class FamilySpec:
    tag: str
    degree: int
    generator: PartialBijection | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise InputError(f"unknown family tag {self.tag!r}; expected one of {', '.join(TAGS)}")
        if not isinstance(self.degree, int) or self.degree < 1:
            raise InputError(f"family degree must be a positive int, got {self.degree!r}")
        if self.tag == "MONOGENIC":
            if self.generator is None:
                raise InputError("MONOGENIC needs a generator")
            if self.generator.degree != self.degree:
                raise InputError("generator degree does not match family degree")
        elif self.generator is not None:
            raise InputError(f"{self.tag} takes no generator")

    def __str__(self):
        if self.tag == "MONOGENIC":
            return f"MONO@{self.degree}:{self.generator}"
        return f"{self.tag}@{self.degree}"


_SPEC = re.compile(r"^\s*([A-Za-z_+]+)\s*@\s*(\d+)\s*(?::(.*))?$", re.S)


def parse_family_spec(text: str) -> FamilySpec:
    """Parse ``"I@4"``, ``"DI+@3"``, ``"MONO@3:{(1,2),(2,3),(3,1)}"`` and friends."""
    m = _SPEC.match(text)
    if m is None:
        raise ParseError("bad family spec", text)
    raw, deg, gen = m.group(1), int(m.group(2)), m.group(3)
    tag = _ALIASES.get(raw.upper())
    if tag is None:
        raise ParseError("unknown family tag", raw)
    if tag == "MONOGENIC":
        if not gen:
            raise ParseError("MONO needs ':{generator}'", text)
        return FamilySpec(tag, deg, parse_pbij(gen, deg))
    if gen:
        raise ParseError(f"{tag} takes no generator", text)
    return FamilySpec(tag, deg)


def iter_partial_bijections(n: int, allowed=None):
    """Every partial bijection of ``1..n``; ``allowed(x, y)`` prunes pairs."""
    img = [0] * (n + 1)
    used = [False] * (n + 1)

    def rec(x):
        if x > n:
            yield PartialBijection._raw(n, tuple(img))
            return
        img[x] = 0
        yield from rec(x + 1)
        for y in range(1, n + 1):
            if not used[y] and (allowed is None or allowed(x, y)):
                used[y] = True
                img[x] = y
                yield from rec(x + 1)
                used[y] = False
                img[x] = 0

    yield from rec(1)


@lru_cache(maxsize=8)
def symmetric_inverse_monoid(n: int) -> FiniteSemigroup:
    """``I_n`` itself, enumerated exhaustively (closed by definition)."""
    S = FiniteSemigroup(iter_partial_bijections(n), check=False, name=f"I@{n}")
    if len(S) != symmetric_inverse_size(n):
        raise AssertionError("enumeration of I_n has the wrong size")
    return S


def _predicate(tag):
    if tag == "I":
        return lambda a: True
    if tag == "OI":
        return lambda a: order_class(a).order_preserving
    if tag == "DI":
        return lambda a: order_class(a).order_decreasing
    if tag == "DI_plus":
        return lambda a: order_class(a).order_increasing
    if tag == "ODI":
        return lambda a: order_class(a).order_preserving and order_class(a).order_decreasing
    if tag == "ODI_plus":
        return lambda a: order_class(a).order_preserving and order_class(a).order_increasing
    if tag == "SYM":
        return lambda a: order_class(a).total
    if tag == "TRIVIAL":
        return lambda a: a == PartialBijection.identity(a.degree)
    raise InputError(f"{tag} has no pointwise predicate")


# pair-level pruning that agrees with the pointwise predicates above
_PRUNE = {
    "DI": lambda x, y: y <= x,
    "DI_plus": lambda x, y: y >= x,
    "ODI": lambda x, y: y <= x,
    "ODI_plus": lambda x, y: y >= x,
}


def build(spec: FamilySpec, cap: int | None = None) -> FiniteSemigroup:
    """Construct the family named by ``spec``.

    ``DI``/``DI_plus`` are all order-decreasing/increasing partial
    bijections; ``ODI``/``ODI_plus`` keep only the order-preserving ones.
    All of these, like ``I`` and ``OI``, contain the empty map (their
    conditions hold vacuously); ``SYM`` and ``TRIVIAL`` do not.
    """
    limit = DEFAULT_CAPS[spec.tag] if cap is None else cap
    n = spec.degree
    if n > limit:
        raise ResourceError(f"{spec.tag}@{n} exceeds the degree cap {limit}")
    name = str(spec)
    if spec.tag == "I":
        return symmetric_inverse_monoid(n)
    if spec.tag == "TRIVIAL":
        return FiniteSemigroup([PartialBijection.identity(n)], name=name)
    if spec.tag == "MONOGENIC":
        return closure([spec.generator], name=name)
    if spec.tag == "SYM":
        elems = [PartialBijection.from_images(p) for p in itertools.permutations(range(1, n + 1))]
        return FiniteSemigroup(elems, name=name)
    keep = _predicate(spec.tag)
    if n <= DEFAULT_CAPS["I"] and spec.tag not in _PRUNE:
        pool = symmetric_inverse_monoid(n).elements
    else:
        pool = iter_partial_bijections(n, _PRUNE.get(spec.tag))
    return FiniteSemigroup([a for a in pool if keep(a)], name=name)


def verify_family(S: FiniteSemigroup, spec: FamilySpec) -> bool:
    """Re-check closure, the defining predicate and completeness of ``S``."""
    if S.degree != spec.degree:
        return False
    try:
        FiniteSemigroup(S.elements)
    except InputError:
        return False
    if spec.tag == "MONOGENIC":
        return S == closure([spec.generator])
    keep = _predicate(spec.tag)
    if not all(keep(a) for a in S):
        return False
    return len(S) == len(build(spec))


def include(S: FiniteSemigroup, degree: int) -> FiniteSemigroup:
    """Image of ``S`` under the inclusion ``I_m -> I_n`` fixing ``1..m``."""
    from .pbij import embed

    return FiniteSemigroup([embed(a, degree) for a in S], check=False)
