"""Rooted ring instances, cuts, links, feasibility, and the text file formats.

Vertices are integers 0..n-1 in path order: the root r is vertex 0 and the
ring edge e_r = {n-1, 0} is the one removed to obtain the path, so "u left of
v" is plain integer comparison. Costs are exact non-negative integers;
rational costs in input files are scaled by the LCM of their denominators at
load time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .errors import FormatError


@dataclass(frozen=True)
class Link:
    """Undirected candidate edge. Endpoints stored with u < v."""

    u: int
    v: int
    id: int

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError(f"link {self.id} has equal endpoints {self.u}")
        if self.u > self.v:
            lo, hi = self.v, self.u
            object.__setattr__(self, "u", lo)
            object.__setattr__(self, "v", hi)


class Cut(NamedTuple):
    """Interval {lo..hi} of non-root vertices; exactly one 2-cut of the ring."""

    lo: int
    hi: int

    def contains(self, vertex: int) -> bool:
        return self.lo <= vertex <= self.hi

    def vertices(self) -> range:
        return range(self.lo, self.hi + 1)


@dataclass(frozen=True)
class RootedRingInstance:
    """Ring of n vertices rooted at 0 with candidate links and integer costs."""

    n: int
    links: tuple[Link, ...]
    costs: tuple[int, ...]

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"need n >= 3 ring vertices, got {self.n}")
        if len(self.links) != len(self.costs):
            raise ValueError("links and costs length mismatch")
        for pos, link in enumerate(self.links):
            if link.id != pos:
                raise ValueError(f"link at position {pos} carries id {link.id}")
            if not (0 <= link.u < self.n and 0 <= link.v < self.n):
                raise ValueError(f"link {pos} endpoint out of range 0..{self.n - 1}")
        for pos, cost in enumerate(self.costs):
            if cost < 0:
                raise ValueError(f"negative cost on link {pos}")

    @property
    def root(self) -> int:
        return 0

    @property
    def ring_edge(self) -> tuple[int, int]:
        return (self.n - 1, 0)

    def cost_of(self, link_ids: Iterable[int]) -> int:
        return sum(self.costs[i] for i in link_ids)

    def link_set(self, link_ids: Iterable[int]) -> tuple[Link, ...]:
        return tuple(self.links[i] for i in link_ids)


def make_instance(n: int, links: Sequence[tuple[int, int]], costs: Sequence[int]) -> RootedRingInstance:
    """Build an instance from plain (u, v) pairs; ids follow list order."""
    built = tuple(Link(u, v, i) for i, (u, v) in enumerate(links))
    return RootedRingInstance(n, built, tuple(int(c) for c in costs))


def enumerate_cuts(inst: RootedRingInstance) -> tuple[Cut, ...]:
    """All 2-cuts, i.e. all intervals of non-root vertices; n(n-1)/2 of them."""
    return _geometry(inst).cuts


def covers(link: Link, cut: Cut) -> bool:
    """True iff exactly one endpoint of the link lies in the cut."""
    return (cut.lo <= link.u <= cut.hi) != (cut.lo <= link.v <= cut.hi)


def is_wrap_solution(inst: RootedRingInstance, solution: Iterable[int | Link]) -> bool:
    """True iff every 2-cut is covered by some link of the solution."""
    ids = [l.id if isinstance(l, Link) else l for l in solution]
    geo = _geometry(inst)
    hit = 0
    for i in ids:
        hit |= geo.cover_mask[i]
    return hit == geo.full_mask


def is_feasible(inst: RootedRingInstance) -> bool:
    """True iff the full link set covers every 2-cut (precondition of all solvers)."""
    return is_wrap_solution(inst, range(len(inst.links)))


class _Geometry:
    """Per-instance lookup tables shared by the combinatorial modules.

    cuts are indexed; cover_mask[l] is the bitmask of cut indices link l
    crosses; intersect_mask[l] the bitmask of link ids intersecting link l
    (crossing or sharing an endpoint); incident[v] the ids of links at v.
    """

    __slots__ = (
        "cuts",
        "cut_index",
        "cover_mask",
        "cover_cuts",
        "full_mask",
        "intersect_mask",
        "incident",
    )

    def __init__(self, inst: RootedRingInstance):
        n = inst.n
        self.cuts = tuple(Cut(lo, hi) for lo in range(1, n) for hi in range(lo, n))
        self.cut_index = {c: i for i, c in enumerate(self.cuts)}
        self.full_mask = (1 << len(self.cuts)) - 1
        self.cover_mask = []
        self.cover_cuts = []
        for link in inst.links:
            mask = 0
            idxs = []
            for i, cut in enumerate(self.cuts):
                if (cut.lo <= link.u <= cut.hi) != (cut.lo <= link.v <= cut.hi):
                    mask |= 1 << i
                    idxs.append(i)
            self.cover_mask.append(mask)
            self.cover_cuts.append(tuple(idxs))
        self.intersect_mask = []
        for a in inst.links:
            mask = 0
            for b in inst.links:
                if a.id != b.id and links_intersect(a, b):
                    mask |= 1 << b.id
            self.intersect_mask.append(mask)
        self.incident = tuple(
            tuple(l.id for l in inst.links if v in (l.u, l.v)) for v in range(n)
        )


def links_intersect(a: Link, b: Link) -> bool:
    """Crossing chords or a shared endpoint (edges of the link intersection graph)."""
    if a.u in (b.u, b.v) or a.v in (b.u, b.v):
        return True
    return a.u < b.u < a.v < b.v or b.u < a.u < b.v < a.v


@lru_cache(maxsize=128)
def _geometry(inst: RootedRingInstance) -> _Geometry:
    return _Geometry(inst)


def load_instance(text: str | bytes) -> RootedRingInstance:
    """Parse the `wrap` file format; rational costs are scaled to integers."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    n = None
    raw: list[tuple[int, int, Fraction]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "wrap":
            if n is not None:
                raise FormatError("duplicate wrap header", lineno)
            if len(parts) != 2:
                raise FormatError("expected: wrap <n>", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise FormatError(f"bad vertex count {parts[1]!r}", lineno) from None
            if n < 3:
                raise FormatError(f"need n >= 3, got {n}", lineno)
        elif parts[0] == "link":
            if n is None:
                raise FormatError("link before wrap header", lineno)
            if len(parts) != 4:
                raise FormatError("expected: link <u> <v> <cost>", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
                cost = Fraction(parts[3])
            except (ValueError, ZeroDivisionError):
                raise FormatError(f"bad link line {line!r}", lineno) from None
            if not (0 <= u < n and 0 <= v < n):
                raise FormatError(f"endpoint out of range 0..{n - 1}", lineno)
            if u == v:
                raise FormatError("link endpoints must differ", lineno)
            if cost < 0:
                raise FormatError("negative cost", lineno)
            raw.append((u, v, cost))
        else:
            raise FormatError(f"unknown directive {parts[0]!r}", lineno)
    if n is None:
        raise FormatError("missing wrap header")
    scale = math.lcm(*(c.denominator for _, _, c in raw)) if raw else 1
    links = [(u, v) for u, v, _ in raw]
    costs = [int(c * scale) for _, _, c in raw]
    return make_instance(n, links, costs)


def save_instance(inst: RootedRingInstance) -> str:
    lines = [f"wrap {inst.n}"]
    for link, cost in zip(inst.links, inst.costs):
        lines.append(f"link {link.u} {link.v} {cost}")
    return "\n".join(lines) + "\n"


def load_solution(text: str | bytes) -> tuple[int, ...]:
    """Parse the `solution` file format into a tuple of link ids."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    seen_header = False
    ids: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "solution":
            seen_header = True
        elif parts[0] == "link":
            if not seen_header:
                raise FormatError("link before solution header", lineno)
            if len(parts) != 2:
                raise FormatError("expected: link <id>", lineno)
            try:
                ids.append(int(parts[1]))
            except ValueError:
                raise FormatError(f"bad link id {parts[1]!r}", lineno) from None
        else:
            raise FormatError(f"unknown directive {parts[0]!r}", lineno)
    if not seen_header:
        raise FormatError("missing solution header")
    return tuple(ids)


def save_solution(link_ids: Iterable[int]) -> str:
    lines = ["solution"]
    lines.extend(f"link {i}" for i in sorted(link_ids))
    return "\n".join(lines) + "\n"
