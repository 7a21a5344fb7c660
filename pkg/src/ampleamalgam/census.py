"""Enumerate subsemigroups of ``I_n`` and tabulate their hierarchy labels."""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .ample import (
    classify,
    is_ample,
    is_rich_ample,
    is_ultra_rich_ample,
)
from .errors import InputError, ResourceError
from .families import symmetric_inverse_monoid
from .pbij import PartialBijection, format_pbij
from .semigroup import FiniteSemigroup, closure, is_full

CENSUS_SCHEMA = "ampleamalgam/census-record@1"


def exhaustive_subsemigroups(n: int, cap: int = 200_000) -> list[FiniteSemigroup]:
    """Every nonempty subsemigroup of ``I_n``.

    Degree 1 and 2 filter all subsets of ``I_n``; degree 3 walks the
    subsemigroup lattice by adding one element at a time.
    """
    T = symmetric_inverse_monoid(n)
    elems = T.elements
    if n <= 2:
        out = []
        for mask in range(1, 1 << len(elems)):
            subset = {elems[i] for i in range(len(elems)) if mask >> i & 1}
            if all(a * b in subset for a in subset for b in subset):
                out.append(FiniteSemigroup(subset, check=False))
        return out
    if n > 3:
        raise InputError("exhaustive census is limited to degree <= 3")
    seen = {}
    stack = [frozenset(closure([e]).elements) for e in elems]
    while stack:
        s = stack.pop()
        if s in seen:
            continue
        seen[s] = None
        if len(seen) > cap:
            raise ResourceError(f"more than {cap} subsemigroups")
        for e in elems:
            if e not in s:
                stack.append(frozenset(closure(list(s) + [e]).elements))
    return [FiniteSemigroup(s, check=False) for s in seen]


def generated_subsemigroups(n: int, bound: int) -> list[FiniteSemigroup]:
    """Distinct closures of all generator sets of size at most ``bound``."""
    elems = symmetric_inverse_monoid(n).elements
    seen = {}
    for k in range(1, bound + 1):
        for gens in itertools.combinations(elems, k):
            S = closure(gens)
            key = S.element_set
            if key not in seen:
                seen[key] = S
    return list(seen.values())


def sampled_subsemigroups(n: int, count: int, bound: int, seed: int) -> list[FiniteSemigroup]:
    """Closures of ``count`` random generator sets (size 1..bound), deduplicated."""
    rng = random.Random(seed)
    elems = symmetric_inverse_monoid(n).elements
    seen = {}
    for _ in range(count):
        k = rng.randint(1, bound)
        S = closure(rng.sample(elems, k))
        seen.setdefault(S.element_set, S)
    return list(seen.values())


@dataclass
class CensusRecord:
    generators: tuple
    size: int
    right: str
    left: str
    two_sided: str
    inverse_closed: bool
    unipotent: bool
    group: bool
    full: bool
    raw: dict = field(default_factory=dict)

    @property
    def descriptor(self) -> str:
        return " ".join(format_pbij(g) for g in self.generators)

    def sort_key(self):
        return tuple(g.sort_key() for g in self.generators)

    def to_json(self) -> dict:
        return {
            "schema": CENSUS_SCHEMA,
            "degree": self.generators[0].degree,
            "generators": [format_pbij(g) for g in self.generators],
            "size": self.size,
            "right": self.right,
            "left": self.left,
            "two_sided": self.two_sided,
            "inverse_closed": self.inverse_closed,
            "unipotent": self.unipotent,
            "group": self.group,
            "full": self.full,
        }

    @classmethod
    def from_json(cls, obj) -> CensusRecord:
        from .pbij import parse_pbij

        n = obj["degree"]
        return cls(
            tuple(parse_pbij(g, n) for g in obj["generators"]),
            obj["size"], obj["right"], obj["left"], obj["two_sided"],
            obj["inverse_closed"], obj["unipotent"], obj["group"], obj["full"],
        )


def census_record(S: FiniteSemigroup, T: FiniteSemigroup) -> CensusRecord:
    c = classify(S, T)
    raw = {
        # each decided on its own, so containments are a real check
        "ample": is_ample(S, T).holds,
        "rich": is_rich_ample(S, T).holds,
        "ultra": is_ultra_rich_ample(S, T, definition=True).holds,
    }
    return CensusRecord(
        generators=tuple(sorted(S.generators)),
        size=len(S),
        right=c.right,
        left=c.left,
        two_sided=c.two_sided,
        inverse_closed=c.inverse_closed,
        unipotent=c.unipotent,
        group=c.group,
        full=is_full(S, T),
        raw=raw,
    )


def _worker(args):
    n, graphs = args
    S = FiniteSemigroup([PartialBijection(n, g) for g in graphs], check=False)
    rec = census_record(S, symmetric_inverse_monoid(n))
    return rec.to_json(), rec.raw


@dataclass
class CensusResult:
    degree: int
    mode: str
    records: list
    summary: dict
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def summarize(records) -> tuple[dict, list]:
    counts = {}
    violations = []
    for r in records:
        counts[r.two_sided] = counts.get(r.two_sided, 0) + 1
        a, rich, ultra = r.raw.get("ample"), r.raw.get("rich"), r.raw.get("ultra")
        d = r.descriptor
        if ultra and not rich:
            violations.append(f"ultra-rich but not rich: {d}")
        if rich and not a:
            violations.append(f"rich but not ample: {d}")
        if r.inverse_closed and not rich:
            violations.append(f"inverse but not rich: {d}")
        if ultra and not r.group:
            violations.append(f"finite ultra-rich non-group: {d}")
        if ultra != (r.unipotent and rich):
            violations.append(f"ultra-rich disagrees with unipotent and rich: {d}")
        label_rank = {"not-ample": 0, "ample": 1, "rich-ample": 2, "ultra-rich-ample": 3}[r.two_sided]
        raw_rank = 3 if ultra else 2 if rich else 1 if a else 0
        if label_rank != raw_rank:
            violations.append(f"label {r.two_sided} disagrees with direct checks: {d}")
    summary = {
        "total": len(records),
        "by_label": dict(sorted(counts.items())),
        "ample": sum(1 for r in records if r.raw.get("ample")),
        "rich": sum(1 for r in records if r.raw.get("rich")),
        "ultra": sum(1 for r in records if r.raw.get("ultra")),
        "inverse_closed": sum(1 for r in records if r.inverse_closed),
        "groups": sum(1 for r in records if r.group),
        "ultra_non_group": sum(1 for r in records if r.raw.get("ultra") and not r.group),
    }
    return summary, violations


def run_census(n: int, mode: str = "generated", bound: int = 2, seed: int = 0,
               samples: int = 200, jobs: int = 1) -> CensusResult:
    """Classify a universe of subsemigroups of ``I_n``.

    ``mode`` is ``"exhaustive"`` (n <= 3), ``"generated"`` (all generator
    sets up to ``bound``) or ``"sampled"`` (``samples`` seeded draws).
    Output order is by generator descriptor regardless of ``jobs``.
    """
    if mode == "exhaustive":
        universe = exhaustive_subsemigroups(n)
    elif mode == "generated":
        universe = generated_subsemigroups(n, bound)
    elif mode == "sampled":
        universe = sampled_subsemigroups(n, samples, bound, seed)
    else:
        raise InputError(f"unknown census mode {mode!r}")
    T = symmetric_inverse_monoid(n)
    if jobs > 1:
        payload = [(n, [e.graph for e in S]) for S in universe]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            out = list(pool.map(_worker, payload, chunksize=16))
        records = []
        for obj, raw in out:
            rec = CensusRecord.from_json(obj)
            rec.raw = raw
            records.append(rec)
    else:
        records = [census_record(S, T) for S in universe]
    records.sort(key=CensusRecord.sort_key)
    summary, violations = summarize(records)
    return CensusResult(n, mode, records, summary, violations)
