"""Finite semigroups of partial bijections and abstract Cayley tables.

:class:`FiniteSemigroup` is a product-closed set of partial bijections of a
common degree; :class:`CayleyPresentation` is an abstract semigroup given
by its multiplication table.  Both expose ``size``, ``labels`` and a
``table`` of element indices so that homomorphism checks can treat them
uniformly.
"""
from __future__ import annotations

import hashlib
import logging
import os
import threading
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ConsistencyError, InputError, ParseError, ResourceError
from .pbij import MAX_DEGREE, PartialBijection, format_pbij, parse_pbij

log = logging.getLogger(__name__)

DEFAULT_CAP = 10**6
CACHE_ENV = "AMPLEAMALGAM_CACHE_DIR"
SEMIGROUP_SCHEMA = "ampleamalgam/semigroup@1"
PRESENTATION_SCHEMA = "ampleamalgam/presentation@1"

_cache_dir: Path | None = None
_closure_cap = DEFAULT_CAP


def set_closure_cap(cap: int | None) -> None:
    """Default element cap for closures (None restores the built-in value)."""
    global _closure_cap
    _closure_cap = DEFAULT_CAP if cap is None else cap


def set_cache_dir(path) -> None:
    """Persist Cayley tables under ``path`` (None disables the disk cache)."""
    global _cache_dir
    _cache_dir = Path(path) if path is not None else None


def cache_dir() -> Path | None:
    if _cache_dir is not None:
        return _cache_dir
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def _right_closure(gens: Sequence[PartialBijection], seed=(), cap=None, within=None):
    """Worklist closure of ``seed`` under right multiplication by ``gens``.

    Every element of the subsemigroup generated by ``gens`` is a word
    ``g1 g2 ... gk``, so right multiplication by generators reaches all of
    them.  With ``within`` given, stops and returns None as soon as a
    product escapes that set.
    """
    cap = _closure_cap if cap is None else cap
    found = set(seed)
    frontier = [g for g in gens if g not in found]
    found.update(frontier)
    if within is not None and not found <= within:
        return None
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in found:
                    if within is not None and y not in within:
                        return None
                    found.add(y)
                    nxt.append(y)
        if len(found) > cap:
            raise ResourceError(f"closure exceeded cap of {cap} elements")
        frontier = nxt
    return found


def _greedy_generators(elements: Sequence[PartialBijection], cap=None):
    """Pick generators greedily; returns (generators, closure-or-None).

    The closure is None when some product leaves ``elements``.
    """
    cap = _closure_cap if cap is None else cap
    pool = set(elements)
    order = sorted(elements, key=lambda e: (-e.rank, e.sort_key()))
    gens: list[PartialBijection] = []
    found: set = set()
    for e in order:
        if e in found:
            continue
        gens.append(e)
        # new words either end in an old generator after passing through e,
        # or end in e; re-run from everything already found plus e
        seed = [x * e for x in found] + [e]
        fresh = [s for s in seed if s not in found]
        for s in fresh:
            if s not in pool:
                return gens, None
        found.update(fresh)
        frontier = fresh
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = x * g
                    if y not in found:
                        if y not in pool:
                            return gens, None
                        found.add(y)
                        nxt.append(y)
            frontier = nxt
        if len(found) > cap:
            raise ResourceError(f"closure exceeded cap of {cap} elements")
    return gens, found


class FiniteSemigroup:
    """A nonempty, product-closed set of partial bijections of one degree.

    Elements are kept in canonical order; ``index`` gives their position.
    Closure is verified at construction unless ``check=False``.
    """

    def __init__(self, elements: Iterable[PartialBijection], *, check=True, name=None):
        elems = sorted(set(elements))
        if not elems:
            raise InputError("a semigroup must be nonempty")
        degrees = {e.degree for e in elems}
        if len(degrees) != 1:
            raise InputError(f"elements have mixed degrees {sorted(degrees)}")
        self.degree = degrees.pop()
        self.elements = tuple(elems)
        self.name = name
        self._index = {e: i for i, e in enumerate(elems)}
        self._set = frozenset(elems)
        self._table = None
        self._idempotents = None
        self._generators = None
        self._lock = threading.Lock()
        if check:
            gens, found = _greedy_generators(self.elements)
            if found is None:
                raise InputError(f"element set{self._label()} is not closed under composition")
            self._generators = tuple(gens)

    def _label(self):
        return f" {self.name}" if self.name else ""

    # -- container protocol --------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._set

    def index(self, x) -> int:
        """Position of ``x``, given as an element or in set-of-pairs text."""
        if isinstance(x, str):
            x = parse_pbij(x, self.degree)
        try:
            return self._index[x]
        except KeyError:
            raise InputError(f"{x} is not an element{self._label()}") from None

    @property
    def element_set(self) -> frozenset:
        return self._set

    @property
    def labels(self) -> list[str]:
        return [format_pbij(e) for e in self.elements]

    def issubset(self, other) -> bool:
        return self._set <= set(other)

    def __eq__(self, other):
        if not isinstance(other, FiniteSemigroup):
            return NotImplemented
        return self.degree == other.degree and self._set == other._set

    def __hash__(self):
        return hash((self.degree, self._set))

    def __repr__(self):
        tag = self.name or "FiniteSemigroup"
        return f"<{tag} degree={self.degree} size={len(self)}>"

    @property
    def generators(self) -> tuple:
        if self._generators is None:
            gens, _ = _greedy_generators(self.elements)
            self._generators = tuple(gens)
        return self._generators

    # -- Cayley table ----------------------------------------------------------

    def digest(self) -> str:
        h = hashlib.sha256(str(self.degree).encode())
        for e in self.elements:
            h.update(format_pbij(e).encode())
        return h.hexdigest()

    @property
    def table(self) -> list[list[int]]:
        """Index-valued multiplication table, filled lazily once."""
        if self._table is None:
            with self._lock:
                if self._table is None:
                    self._table = self._load_or_compute_table()
        return self._table

    def _load_or_compute_table(self):
        root = cache_dir()
        path = root / f"cayley-v1-{self.digest()}.npy" if root else None
        if path is not None and path.exists():
            try:
                arr = np.load(path)
                if arr.shape == (len(self), len(self)):
                    return arr.tolist()
            except (OSError, ValueError):
                log.warning("ignoring unreadable cache file %s", path)
        idx = self._index
        els = self.elements
        table = [[idx[a * b] for b in els] for a in els]
        if path is not None:
            root.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(f".{os.getpid()}.{threading.get_ident()}.tmp")
            with open(tmp, "wb") as fh:
                np.save(fh, np.asarray(table, dtype=np.int32))
            os.replace(tmp, path)
        return table

    # -- JSON --------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema": SEMIGROUP_SCHEMA,
            "degree": self.degree,
            "elements": [[list(p) for p in e.graph] for e in self.elements],
        }

    @classmethod
    def from_json(cls, obj, *, name=None) -> FiniteSemigroup:
        try:
            degree = obj["degree"]
            raw = obj["elements"]
        except (KeyError, TypeError) as exc:
            raise ParseError("semigroup JSON needs 'degree' and 'elements'", str(obj)[:80]) from exc
        elems = []
        for g in raw:
            if isinstance(g, str):
                elems.append(parse_pbij(g, degree))
            else:
                elems.append(PartialBijection(degree, [tuple(p) for p in g]))
        return cls(elems, name=name)


def closure(gens: Iterable[PartialBijection], cap=None, name=None) -> FiniteSemigroup:
    """Smallest product-closed set containing ``gens``."""
    gens = sorted(set(gens))
    if not gens:
        raise InputError("closure needs at least one generator")
    if len({g.degree for g in gens}) != 1:
        raise InputError("generators have mixed degrees")
    found = _right_closure(gens, cap=cap)
    S = FiniteSemigroup(found, check=False, name=name)
    S._generators = tuple(gens)
    return S


def dual(S: FiniteSemigroup) -> FiniteSemigroup:
    """Elementwise inverses; anti-isomorphic to ``S`` hence closed."""
    name = f"{S.name}'" if S.name else None
    return FiniteSemigroup([e.inverse() for e in S], check=False, name=name)


def union_set(S: FiniteSemigroup, other: Iterable) -> frozenset:
    return S.element_set | frozenset(other)


def inverse_hull(S: FiniteSemigroup, cap=None) -> FiniteSemigroup:
    """Inverse subsemigroup generated by ``S`` inside the symmetric inverse monoid."""
    gens = set(S.generators)
    gens.update(g.inverse() for g in S.generators)
    return closure(gens, cap=cap)


def idempotents(S: FiniteSemigroup) -> tuple:
    if S._idempotents is None:
        S._idempotents = tuple(e for e in S if e.is_idempotent())
    return S._idempotents


def is_inverse_closed(S: FiniteSemigroup) -> bool:
    return all(e.inverse() in S for e in S)


def is_unipotent(S: FiniteSemigroup) -> bool:
    return len(idempotents(S)) == 1


def is_full(S: FiniteSemigroup, T: FiniteSemigroup) -> bool:
    if not S.issubset(T):
        raise InputError("is_full needs S to be a subset of T")
    return all(e in S for e in idempotents(T))


def is_group(S: FiniteSemigroup) -> bool:
    """Group test from the table alone: a two-sided identity with inverses."""
    table = S.table
    n = len(S)
    ident = None
    for i in range(n):
        if all(table[i][j] == j and table[j][i] == j for j in range(n)):
            ident = i
            break
    if ident is None:
        return False
    return all(any(table[i][j] == ident and table[j][i] == ident for j in range(n)) for i in range(n))


def _is_full_monoid(U: FiniteSemigroup) -> bool:
    from .families import symmetric_inverse_size

    return len(U) == symmetric_inverse_size(U.degree)


def natural_leq_in(x: PartialBijection, y: PartialBijection, U: FiniteSemigroup) -> bool:
    """``x <= y`` in ``U``: ``x == e y`` for some idempotent ``e`` of ``U``."""
    if _is_full_monoid(U):
        from .pbij import natural_leq

        return natural_leq(x, y)
    return any(e * y == x for e in idempotents(U))


def min_left_idempotent(u: PartialBijection, U: FiniteSemigroup) -> PartialBijection:
    """Least idempotent ``e`` of ``U`` with ``e u == u``; checked against ``u u^-1``."""
    if u not in U:
        raise InputError(f"{u} is not in U")
    if not is_inverse_closed(U):
        raise InputError("min_left_idempotent needs an inverse-closed U")
    cands = [e for e in idempotents(U) if e * u == u]
    least = [m for m in cands if all(natural_leq_in(m, e, U) for e in cands)]
    if len(least) != 1:
        raise ConsistencyError(f"no unique least idempotent fixing {u}: {least}")
    m = least[0]
    if m != u * u.inverse():
        raise ConsistencyError(f"least idempotent {m} differs from u u^-1 = {u * u.inverse()}")
    return m


def is_down_closed(A: FiniteSemigroup, U: FiniteSemigroup) -> bool:
    """Every ``x <= a`` (order of ``U``) with ``a`` in ``A`` lies in ``A``."""
    if not A.issubset(U):
        raise InputError("is_down_closed needs A to be a subset of U")
    if not is_inverse_closed(U):
        raise InputError("is_down_closed needs an inverse-closed U")
    E = idempotents(U)
    return all(e * a in A for a in A for e in E)


def intersection_report(S: FiniteSemigroup) -> dict:
    """Size of ``S`` meet its dual; reported rather than assumed nonempty."""
    common = S.element_set & frozenset(e.inverse() for e in S)
    return {"size": len(common), "empty": not common}


# -- homomorphism checks shared by Wagner-Preston and amalgams --------------


def homomorphism_violation(source, images: Sequence[PartialBijection]):
    """First ``(i, j)`` with ``img[i] img[j] != img[ij]``, or None."""
    table = source.table
    n = source.size
    for i in range(n):
        a = images[i]
        row = table[i]
        for j in range(n):
            if a * images[j] != images[row[j]]:
                return (i, j)
    return None


def injectivity_violation(images: Sequence[PartialBijection]):
    """First ``(i, j)``, ``i < j``, with equal images, or None."""
    seen = {}
    for j, x in enumerate(images):
        if x in seen:
            return (seen[x], j)
        seen[x] = j
    return None


# -- abstract semigroups -------------------------------------------------------


class CayleyPresentation:
    """An abstract finite semigroup given by labels and an index table."""

    def __init__(self, labels: Sequence[str], table: Sequence[Sequence[int]], *, check=True):
        k = len(labels)
        if k == 0:
            raise InputError("a presentation needs at least one element")
        if len(set(labels)) != k:
            raise InputError("labels must be distinct")
        if len(table) != k or any(len(row) != k for row in table):
            raise InputError(f"table must be {k}x{k}")
        for row in table:
            for v in row:
                if not isinstance(v, int) or not 0 <= v < k:
                    raise InputError(f"table entry {v!r} out of range")
        self.labels = [str(x) for x in labels]
        self.table = [list(r) for r in table]
        self._idempotents = None
        if check:
            bad = self.associativity_violation()
            if bad is not None:
                a, b, c = (self.labels[i] for i in bad)
                raise InputError(f"table is not associative at ({a}, {b}, {c})")

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"<CayleyPresentation size={self.size}>"

    def index(self, label) -> int:
        if isinstance(label, int) and not isinstance(label, bool):
            if 0 <= label < self.size:
                return label
            raise InputError(f"element index {label} out of range")
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise InputError(f"unknown element label {label!r}") from None

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def associativity_violation(self):
        t = self.table
        k = self.size
        for a in range(k):
            ta = t[a]
            for b in range(k):
                ab = ta[b]
                tab = t[ab]
                tb = t[b]
                for c in range(k):
                    if tab[c] != ta[tb[c]]:
                        return (a, b, c)
        return None

    def idempotents(self) -> list[int]:
        if self._idempotents is None:
            self._idempotents = [i for i in range(self.size) if self.table[i][i] == i]
        return self._idempotents

    def generalized_inverses(self, x: int) -> list[int]:
        t = self.table
        return [y for y in range(self.size) if t[t[x][y]][x] == x and t[t[y][x]][y] == y]

    def inverse_violation(self):
        """None when inverse; otherwise (reason, witness labels)."""
        for x in range(self.size):
            inv = self.generalized_inverses(x)
            if len(inv) != 1:
                return (f"{len(inv)} generalized inverses", (self.labels[x],))
        t = self.table
        E = self.idempotents()
        for e in E:
            for f in E:
                if t[e][f] != t[f][e]:
                    return ("idempotents do not commute", (self.labels[e], self.labels[f]))
        return None

    def is_inverse(self) -> bool:
        return self.inverse_violation() is None

    @classmethod
    def from_semigroup(cls, S: FiniteSemigroup) -> CayleyPresentation:
        return cls(S.labels, S.table, check=False)

    @classmethod
    def cyclic_group(cls, order: int) -> CayleyPresentation:
        labels = [f"g{i}" for i in range(order)]
        return cls(labels, [[(i + j) % order for j in range(order)] for i in range(order)])

    def to_json(self) -> dict:
        return {"schema": PRESENTATION_SCHEMA, "labels": list(self.labels), "table": [list(r) for r in self.table]}

    @classmethod
    def from_json(cls, obj) -> CayleyPresentation:
        try:
            return cls(obj["labels"], obj["table"])
        except (KeyError, TypeError) as exc:
            raise ParseError("presentation JSON needs 'labels' and 'table'", str(obj)[:80]) from exc


class Representation(NamedTuple):
    semigroup: FiniteSemigroup
    images: list  # images[i] is the partial bijection for source element i


def wagner_preston(P: CayleyPresentation) -> Representation:
    """Faithful representation of an inverse semigroup by partial bijections.

    Element ``s`` acts on points ``1..k`` (point ``i + 1`` standing for
    element ``i``) by ``x -> x s`` on the domain ``S s^-1 = {x : x s s^-1 = x}``.
    """
    bad = P.inverse_violation()
    if bad is not None:
        reason, witness = bad
        raise InputError(f"not an inverse semigroup ({reason}) at {', '.join(witness)}")
    t = P.table
    k = P.size
    if k > MAX_DEGREE:
        raise ResourceError(f"Wagner-Preston needs degree |S| = {k}, above the bound {MAX_DEGREE}")
    inv = [P.generalized_inverses(s)[0] for s in range(k)]
    images = []
    for s in range(k):
        e = t[s][inv[s]]
        images.append(PartialBijection(k, [(x + 1, t[x][s] + 1) for x in range(k) if t[x][e] == x]))
    hom = homomorphism_violation(P, images)
    if hom is not None:
        raise ConsistencyError(f"Wagner-Preston map is not multiplicative at {hom}")
    inj = injectivity_violation(images)
    if inj is not None:
        raise ConsistencyError(f"Wagner-Preston map is not injective at {inj}")
    return Representation(FiniteSemigroup(images, check=False), images)
