"""Partial bijections of the chain 1 < 2 < ... < n.

Maps are written on the right of their arguments, so ``a * b`` applies
``a`` first and then ``b``.  Every value is immutable and hashable; the
sorted list of ``(x, xa)`` pairs is the canonical form and also the key
used for ordering and for all printed output.
"""
from __future__ import annotations

import itertools
import re
from typing import Iterable, NamedTuple

from .errors import InputError, ParseError

MAX_DEGREE = 16


def _check_degree(degree):
    if not isinstance(degree, int) or isinstance(degree, bool):
        raise InputError(f"degree must be an int, got {degree!r}")
    if not 1 <= degree <= MAX_DEGREE:
        raise InputError(f"degree must lie in 1..{MAX_DEGREE}, got {degree}")


class PartialBijection:
    """An injective partial self-map of ``{1, ..., degree}``.

    Internally ``_img[x]`` is the image of ``x`` (0 when undefined) and
    ``_img[0] == 0``, which lets composition run as a single table lookup
    per point.  ``dom_mask``/``ran_mask`` hold the domain and range as
    bitmasks (bit ``x - 1`` for point ``x``).
    """

    __slots__ = ("degree", "_img", "dom_mask", "ran_mask", "_hash", "_key")

    def __init__(self, degree: int, graph: Iterable[tuple[int, int]] = ()):
        _check_degree(degree)
        img = [0] * (degree + 1)
        seen_y = set()
        for pair in graph:
            try:
                x, y = pair
            except (TypeError, ValueError):
                raise InputError(f"malformed pair {pair!r}") from None
            for c in (x, y):
                if not isinstance(c, int) or isinstance(c, bool) or not 1 <= c <= degree:
                    raise InputError(f"coordinate out of range 1..{degree}: {pair!r}")
            if img[x]:
                raise InputError(f"duplicate first coordinate {x} in {pair!r}")
            if y in seen_y:
                raise InputError(f"duplicate second coordinate {y} in {pair!r}")
            img[x] = y
            seen_y.add(y)
        self._set(degree, tuple(img))

    def _set(self, degree, img):
        self.degree = degree
        self._img = img
        dom = ran = 0
        for x in range(1, degree + 1):
            y = img[x]
            if y:
                dom |= 1 << (x - 1)
                ran |= 1 << (y - 1)
        self.dom_mask = dom
        self.ran_mask = ran
        self._hash = hash((degree, img))
        self._key = None

    @classmethod
    def _raw(cls, degree, img):
        # trusted constructor: img already valid
        obj = cls.__new__(cls)
        obj._set(degree, img)
        return obj

    @classmethod
    def from_images(cls, images: Iterable[int | None]) -> PartialBijection:
        """Build from a list whose ``i``-th entry is the image of ``i + 1``."""
        images = list(images)
        return cls(len(images), [(x, y) for x, y in enumerate(images, 1) if y])

    @classmethod
    def identity(cls, degree: int) -> PartialBijection:
        _check_degree(degree)
        return cls._raw(degree, tuple(range(degree + 1)))

    @classmethod
    def empty(cls, degree: int) -> PartialBijection:
        _check_degree(degree)
        return cls._raw(degree, (0,) * (degree + 1))

    @classmethod
    def partial_identity(cls, degree: int, points: Iterable[int]) -> PartialBijection:
        return cls(degree, [(p, p) for p in points])

    # -- inspection --------------------------------------------------------

    @property
    def graph(self) -> tuple[tuple[int, int], ...]:
        if self._key is None:
            self._key = tuple((x, y) for x, y in enumerate(self._img) if y)
        return self._key

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(x for x, y in enumerate(self._img) if y)

    @property
    def range(self) -> frozenset[int]:
        return frozenset(y for y in self._img if y)

    @property
    def rank(self) -> int:
        return bin(self.dom_mask).count("1")

    def __call__(self, x: int) -> int | None:
        """Image of ``x``, or None outside the domain."""
        if not 1 <= x <= self.degree:
            return None
        return self._img[x] or None

    def __len__(self):
        return self.rank

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other: PartialBijection) -> PartialBijection:
        if not isinstance(other, PartialBijection):
            return NotImplemented
        if other.degree != self.degree:
            raise InputError(f"degree mismatch: {self.degree} vs {other.degree}")
        b = other._img
        return PartialBijection._raw(self.degree, tuple([b[y] for y in self._img]))

    def inverse(self) -> PartialBijection:
        inv = [0] * (self.degree + 1)
        for x, y in enumerate(self._img):
            if y:
                inv[y] = x
        return PartialBijection._raw(self.degree, tuple(inv))

    def is_idempotent(self) -> bool:
        img = self._img
        return all(y == x for x, y in enumerate(img) if y)

    # -- comparisons and hashing -------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, PartialBijection):
            return NotImplemented
        return self.degree == other.degree and self._img == other._img

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (self.degree, self.graph)

    def __lt__(self, other):
        # canonical total order, not the natural partial order
        if not isinstance(other, PartialBijection):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"PartialBijection({self.degree}, {format_pbij(self)})"

    def __str__(self):
        return format_pbij(self)


def compose(a: PartialBijection, b: PartialBijection) -> PartialBijection:
    """Product ``ab``: apply ``a`` first, then ``b``."""
    return a * b


def inverse(a: PartialBijection) -> PartialBijection:
    return a.inverse()


def is_idempotent(a: PartialBijection) -> bool:
    return a.is_idempotent()


def natural_leq(a: PartialBijection, b: PartialBijection) -> bool:
    """Natural partial order of the full symmetric inverse monoid.

    In ``I_n`` the relation ``a = e b`` for an idempotent ``e`` is
    graph inclusion; see :func:`natural_leq_by_idempotents` for the
    definition it replaces.
    """
    if a.degree != b.degree:
        raise InputError(f"degree mismatch: {a.degree} vs {b.degree}")
    if a.dom_mask & ~b.dom_mask:
        return False
    bi = b._img
    return all(y == bi[x] for x, y in enumerate(a._img) if y)


def partial_identities(degree: int):
    """All idempotents of ``I_degree``, in canonical order."""
    pts = range(1, degree + 1)
    out = [
        PartialBijection.partial_identity(degree, c)
        for k in range(degree + 1)
        for c in itertools.combinations(pts, k)
    ]
    return sorted(out)


def natural_leq_by_idempotents(a: PartialBijection, b: PartialBijection) -> bool:
    """``a <= b`` iff ``a == e * b`` for some idempotent ``e`` of ``I_n``."""
    return any(e * b == a for e in partial_identities(a.degree))


class OrderClass(NamedTuple):
    order_preserving: bool
    order_decreasing: bool
    order_increasing: bool
    total: bool


def order_class(a: PartialBijection) -> OrderClass:
    pairs = a.graph
    preserving = all(y1 < y2 for (_, y1), (_, y2) in zip(pairs, pairs[1:]))
    return OrderClass(
        order_preserving=preserving,
        order_decreasing=all(y <= x for x, y in pairs),
        order_increasing=all(y >= x for x, y in pairs),
        total=len(pairs) == a.degree,
    )


def direct_sum(a: PartialBijection, b: PartialBijection) -> PartialBijection:
    """``a`` on ``1..m`` alongside ``b`` shifted onto ``m+1..m+k``."""
    m = a.degree
    return PartialBijection(m + b.degree, list(a.graph) + [(x + m, y + m) for x, y in b.graph])


def embed(a: PartialBijection, degree: int) -> PartialBijection:
    """Inclusion ``I_m -> I_n`` fixing the low points ``1..m`` (nothing above)."""
    if degree < a.degree:
        raise InputError(f"cannot embed degree {a.degree} into degree {degree}")
    return PartialBijection(degree, a.graph)


def conjugate(a: PartialBijection, g: PartialBijection) -> PartialBijection:
    """``g^-1 a g`` for a permutation ``g``."""
    if g.rank != g.degree:
        raise InputError(f"conjugating map must be total: {g}")
    return g.inverse() * a * g


def reversal(degree: int) -> PartialBijection:
    """The order-reversing permutation ``x -> n + 1 - x``."""
    return PartialBijection(degree, [(x, degree + 1 - x) for x in range(1, degree + 1)])


# -- text and JSON encodings -----------------------------------------------

_PAIR = re.compile(r"\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*")
_SEP = re.compile(r"\s*,\s*")


def parse_pbij(text: str, degree: int) -> PartialBijection:
    """Parse ``"{(x,y),(x,y),...}"``; ``"{}"`` is the empty map."""
    _check_degree(degree)
    s = text.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise ParseError("expected '{...}'", text)
    inner = s[1:-1]
    pairs = []
    pos = 0
    if inner.strip():
        while True:
            m = _PAIR.match(inner, pos)
            if m is None:
                raise ParseError("malformed pair", inner[pos:].strip() or inner)
            pairs.append((m.group(0).strip(), int(m.group(1)), int(m.group(2))))
            pos = m.end()
            if pos == len(inner):
                break
            sep = _SEP.match(inner, pos)
            if sep is None or sep.end() == len(inner):
                raise ParseError("malformed pair", inner[pos:].strip())
            pos = sep.end()
    img = [0] * (degree + 1)
    seen_y = set()
    for token, x, y in pairs:
        if not (1 <= x <= degree and 1 <= y <= degree):
            raise ParseError(f"coordinate out of range 1..{degree}", token)
        if img[x]:
            raise ParseError("duplicate first coordinate", token)
        if y in seen_y:
            raise ParseError("duplicate second coordinate", token)
        img[x] = y
        seen_y.add(y)
    return PartialBijection._raw(degree, tuple(img))


def format_pbij(a: PartialBijection) -> str:
    return "{" + ",".join(f"({x},{y})" for x, y in a.graph) + "}"


def pbij_to_json(a: PartialBijection) -> dict:
    return {"degree": a.degree, "graph": [[x, y] for x, y in a.graph]}


def pbij_from_json(obj) -> PartialBijection:
    try:
        degree = obj["degree"]
        graph = [tuple(p) for p in obj["graph"]]
    except (KeyError, TypeError) as exc:
        raise ParseError("partial bijection JSON needs 'degree' and 'graph'", str(obj)) from exc
    return PartialBijection(degree, graph)
