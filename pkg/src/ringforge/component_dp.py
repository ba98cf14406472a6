"""Pattern dynamic program over thin components, and ratio minimization.

The DP builds, bottom-up over the unknown maximal laminar family, maximizing
realizers for patterns (C, B, T, phi, psi): B are the realizer's links
crossing C, T its intersection-graph component traces on B, phi each trace's
endpoint-set lca, psi whether that lca is itself an endpoint. Patterns are
generated only from actual realizers (base singleton cuts by enumeration,
larger cuts by merging compatible neighbors), so every stored pattern is
realizable and absent patterns are the -infinity states.

phi may land outside C (even at the root): the lca of a component reaching
across C's boundary lies anywhere between its extreme endpoints. Such parts
simply never contribute to the merge credit U, whose members must lie in
their own cut.

Ratio minimization reduces to slack maximization: binary search on rho with
slack_rho(K) = rho*c(Drop(K) cap F) - c(K), run at exact rational midpoints
until the interval is narrower than 1/c(F)^2, which pins the optimum ratio
exactly for integral costs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Collection, Mapping, Optional, Sequence
import warnings

from .model import Cut, RootedRingInstance, _geometry
from .directed import Arborescence, DirectedLink
from .thinness import effective_alpha

# internal entry: parts key -> (value, realizer tuple, B frozenset)
_Part = tuple[tuple[int, ...], int, int]  # (sorted link ids, phi, psi)
_Key = tuple[_Part, ...]


@dataclass(frozen=True)
class Pattern:
    """DP state: boundary links of a partial component over the cut.

    parts aligns T, phi, psi: each element is (links crossing the cut that
    belong to one intersection-graph component, that component's endpoint
    lca, whether the lca is an endpoint itself).
    """

    cut: Cut
    parts: tuple[_Part, ...]

    @property
    def boundary(self) -> frozenset[int]:
        return frozenset(i for ids, _, _ in self.parts for i in ids)


@dataclass(frozen=True)
class DpEntry:
    """Maximizing realizer of a realizable pattern and its objective value."""

    value: int
    realizer: frozenset[int]


class _DpContext:
    """Per-(instance, base solution) tables shared by all DP invocations."""

    __slots__ = ("inst", "base", "arb", "geo", "lca_table", "ct_uniform", "ends")

    def __init__(self, inst: RootedRingInstance, base: Sequence[DirectedLink]):
        self.inst = inst
        self.base = tuple(base)
        self.arb = Arborescence(inst, base)
        self.geo = _geometry(inst)
        n = inst.n
        self.lca_table = [[self.arb.lca_pair(u, v) for v in range(n)] for u in range(n)]
        self.ct_uniform = [0] * n
        for dl in self.base:
            self.ct_uniform[dl.head] = dl.cost
        self.ends = [(l.u, l.v) for l in inst.links]

    def lca_ids(self, link_ids) -> int:
        table = self.lca_table
        acc = -1
        for i in link_ids:
            u, v = self.ends[i]
            acc = u if acc < 0 else table[acc][u]
            acc = table[acc][v]
        return acc


def _update(entries: dict, key: _Key, value: int, realizer: tuple[int, ...], boundary: frozenset[int]) -> None:
    old = entries.get(key)
    if old is None or value > old[0] or (value == old[0] and realizer < old[1]):
        entries[key] = (value, realizer, boundary)


def _run_dp(
    ctx: _DpContext,
    link_costs: Sequence[int],
    ct_by_head: Sequence[int],
    alpha: int,
) -> dict[Cut, dict[_Key, tuple[int, tuple[int, ...], frozenset[int]]]]:
    inst = ctx.inst
    n = inst.n
    geo = ctx.geo
    ends = ctx.ends
    lca_t = ctx.lca_table
    table: dict[Cut, dict] = {}

    # base: singleton cuts, realizers are incident link subsets of size <= alpha
    for v in range(1, n):
        entries: dict[_Key, tuple[int, tuple[int, ...], frozenset[int]]] = {}
        entries[()] = (0, (), frozenset())
        incident = geo.incident[v]
        gain = ct_by_head[v]
        for size in range(1, min(alpha, len(incident)) + 1):
            for sel in combinations(incident, size):
                top = ctx.lca_ids(sel)
                verts = set()
                for i in sel:
                    verts.add(ends[i][0])
                    verts.add(ends[i][1])
                psi = 1 if top in verts else 0
                value = (gain if top != v else 0) - sum(link_costs[i] for i in sel)
                key = ((sel, top, psi),)
                _update(entries, key, value, sel, frozenset(sel))
        table[Cut(v, v)] = entries

    intersect_mask = geo.intersect_mask

    for length in range(2, n - 1 + 1):
        for lo in range(1, n - length + 1):
            hi = lo + length - 1
            merged: dict[_Key, tuple[int, tuple[int, ...], frozenset[int]]] = {}
            for mid in range(lo, hi):
                left = table[Cut(lo, mid)]
                right = table[Cut(mid + 1, hi)]
                # links of B1 reaching into C2 must be shared with B2 (and
                # vice versa); group right entries by that exchange set
                right_by_reach: dict[frozenset[int], list] = {}
                for key2, (val2, real2, b2) in right.items():
                    reach2 = frozenset(
                        i for i in b2 if lo <= ends[i][0] <= mid or lo <= ends[i][1] <= mid
                    )
                    right_by_reach.setdefault(reach2, []).append((key2, val2, real2, b2))
                for key1, (val1, real1, b1) in left.items():
                    reach1 = frozenset(
                        i for i in b1 if mid + 1 <= ends[i][0] <= hi or mid + 1 <= ends[i][1] <= hi
                    )
                    for key2, val2, real2, b2 in right_by_reach.get(reach1, ()):
                        btot = b1 | b2
                        bnew = frozenset(
                            i for i in btot if (lo <= ends[i][0] <= hi) != (lo <= ends[i][1] <= hi)
                        )
                        if len(bnew) > alpha:
                            continue
                        parts_all = key1 + key2
                        # combined partition: union parts, then intersecting pairs
                        ids = sorted(btot)
                        root = {i: i for i in ids}

                        def find(x: int) -> int:
                            while root[x] != x:
                                root[x] = root[root[x]]
                                x = root[x]
                            return x

                        for pids, _, _ in parts_all:
                            first = pids[0]
                            for other in pids[1:]:
                                root[find(other)] = find(first)
                        for ia, a in enumerate(ids):
                            mask = intersect_mask[a]
                            for bq in ids[ia + 1:]:
                                if mask >> bq & 1:
                                    root[find(bq)] = find(a)
                        groups: dict[int, list[_Part]] = {}
                        for part in parts_all:
                            groups.setdefault(find(part[0][0]), []).append(part)
                        group_phis = set()
                        new_parts: list[_Part] = []
                        for rep, parts in groups.items():
                            gphi = parts[0][1]
                            for _, phi, _ in parts[1:]:
                                gphi = lca_t[gphi][phi]
                            gpsi = 1 if any(phi == gphi and psi for _, phi, psi in parts) else 0
                            group_phis.add(gphi)
                            keep = tuple(
                                i
                                for i in sorted(set().union(*(p[0] for p in parts)))
                                if i in bnew
                            )
                            if keep:
                                new_parts.append((keep, gphi, gpsi))
                        credit = 0
                        for pids, phi, psi in key1:
                            if psi and lo <= phi <= mid and phi not in group_phis:
                                credit += ct_by_head[phi]
                        for pids, phi, psi in key2:
                            if psi and mid + 1 <= phi <= hi and phi not in group_phis:
                                credit += ct_by_head[phi]
                        shared_cost = sum(link_costs[i] for i in b1 & b2)
                        value = val1 + val2 + shared_cost + credit
                        realizer = tuple(sorted(set(real1) | set(real2)))
                        _update(merged, tuple(sorted(new_parts)), value, realizer, bnew)
            table[Cut(lo, hi)] = merged
    return table


def _overlay_by_head(
    ctx: _DpContext, ctilde: Mapping[DirectedLink, int] | None
) -> list[int]:
    if ctilde is None:
        return list(ctx.ct_uniform)
    ct = [0] * ctx.inst.n
    for dl, value in ctilde.items():
        if value < 0:
            raise ValueError("ctilde must be non-negative")
        ct[dl.head] = value
    return ct


def uniform_overlay(base: Sequence[DirectedLink]) -> dict[DirectedLink, int]:
    """The overlay equal to each directed link's own cost."""
    return {dl: dl.cost for dl in base}


def pattern_of(
    inst: RootedRingInstance,
    base: Sequence[DirectedLink],
    link_ids: Collection[int],
    cut: Cut,
) -> Pattern:
    """The unique pattern a link set realizes over a cut.

    Every link must have at least one endpoint in the cut; B is the subset
    crossing it, grouped by intersection-graph components.
    """
    from .dropcalc import intersection_components

    ids = sorted(set(link_ids))
    for i in ids:
        link = inst.links[i]
        if not (cut.contains(link.u) or cut.contains(link.v)):
            raise ValueError(f"link {i} has no endpoint in {cut}")
    arb = Arborescence(inst, base)
    parts: list[_Part] = []
    for comp in intersection_components(inst, ids):
        boundary = tuple(
            i for i in comp if cut.contains(inst.links[i].u) != cut.contains(inst.links[i].v)
        )
        if not boundary:
            continue
        verts = set()
        for i in comp:
            verts.add(inst.links[i].u)
            verts.add(inst.links[i].v)
        top = arb.lca(verts)
        parts.append((boundary, top, 1 if top in verts else 0))
    return Pattern(cut, tuple(sorted(parts)))


def realizes(
    inst: RootedRingInstance,
    base: Sequence[DirectedLink],
    link_ids: Collection[int],
    pattern: Pattern,
) -> bool:
    """Check the five realization conditions against a candidate pattern."""
    try:
        return pattern_of(inst, base, link_ids, pattern.cut) == pattern
    except ValueError:
        return False


def pattern_objective(
    inst: RootedRingInstance,
    base: Sequence[DirectedLink],
    ctilde: Mapping[DirectedLink, int] | None,
    link_ids: Collection[int],
    cut: Cut,
) -> int:
    """Overlay value of droppable links with head in the cut, minus link cost."""
    from .dropcalc import drop_by_characterization

    ctx = _DpContext(inst, base)
    ct = _overlay_by_head(ctx, ctilde)
    dropped = drop_by_characterization(inst, base, link_ids)
    gain = sum(ct[dl.head] for dl in dropped if cut.contains(dl.head))
    return gain - sum(inst.costs[i] for i in set(link_ids))


def compatible(inst: RootedRingInstance, q1: Pattern, q2: Pattern, alpha: int) -> bool:
    """Neighboring cuts, matching boundary exchange, and bounded joint crossing."""
    c1, c2 = q1.cut, q2.cut
    if c1.hi + 1 != c2.lo and c2.hi + 1 != c1.lo:
        return False
    b1, b2 = q1.boundary, q2.boundary
    reach1 = {i for i in b1 if c2.contains(inst.links[i].u) != c2.contains(inst.links[i].v)}
    reach2 = {i for i in b2 if c1.contains(inst.links[i].u) != c1.contains(inst.links[i].v)}
    if reach1 != reach2:
        return False
    lo, hi = min(c1.lo, c2.lo), max(c1.hi, c2.hi)
    joint = Cut(lo, hi)
    crossing = {
        i for i in b1 | b2 if joint.contains(inst.links[i].u) != joint.contains(inst.links[i].v)
    }
    return len(crossing) <= alpha


def _combined_groups(
    ctx: _DpContext, q1: Pattern, q2: Pattern
) -> tuple[list[tuple[list[_Part], int, int]], set[int]]:
    """Union-find merge of both parts lists; returns (groups, all group lcas)."""
    parts_all = list(q1.parts) + list(q2.parts)
    ids = sorted({i for pids, _, _ in parts_all for i in pids})
    root = {i: i for i in ids}

    def find(x: int) -> int:
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    for pids, _, _ in parts_all:
        for other in pids[1:]:
            root[find(other)] = find(pids[0])
    mask = ctx.geo.intersect_mask
    for ia, a in enumerate(ids):
        for b in ids[ia + 1:]:
            if mask[a] >> b & 1:
                root[find(b)] = find(a)
    grouped: dict[int, list[_Part]] = {}
    for part in parts_all:
        grouped.setdefault(find(part[0][0]), []).append(part)
    groups = []
    phis = set()
    for parts in grouped.values():
        gphi = parts[0][1]
        for _, phi, _ in parts[1:]:
            gphi = ctx.lca_table[gphi][phi]
        gpsi = 1 if any(phi == gphi and psi for _, phi, psi in parts) else 0
        groups.append((parts, gphi, gpsi))
        phis.add(gphi)
    return groups, phis


def merge(
    inst: RootedRingInstance, base: Sequence[DirectedLink], q1: Pattern, q2: Pattern
) -> Pattern:
    """Merger pattern realized by the union of any realizers of q1 and q2."""
    alpha = len(inst.links)  # merge itself carries no alpha constraint
    if not compatible(inst, q1, q2, alpha):
        raise ValueError("patterns are not compatible")
    ctx = _DpContext(inst, base)
    lo = min(q1.cut.lo, q2.cut.lo)
    hi = max(q1.cut.hi, q2.cut.hi)
    joint = Cut(lo, hi)
    groups, _ = _combined_groups(ctx, q1, q2)
    new_parts: list[_Part] = []
    for parts, gphi, gpsi in groups:
        members = sorted({i for pids, _, _ in parts for i in pids})
        keep = tuple(
            i for i in members if joint.contains(inst.links[i].u) != joint.contains(inst.links[i].v)
        )
        if keep:
            new_parts.append((keep, gphi, gpsi))
    return Pattern(joint, tuple(sorted(new_parts)))


def u_set(
    inst: RootedRingInstance, base: Sequence[DirectedLink], q1: Pattern, q2: Pattern
) -> set[int]:
    """Vertices whose in-link becomes droppable only in the merged solution."""
    ctx = _DpContext(inst, base)
    _, group_phis = _combined_groups(ctx, q1, q2)
    out = set()
    for pattern in (q1, q2):
        for _, phi, psi in pattern.parts:
            if psi and pattern.cut.contains(phi) and phi not in group_phis:
                out.add(phi)
    return out


def dp_max_realizers(
    inst: RootedRingInstance,
    base: Sequence[DirectedLink],
    ctilde: Mapping[DirectedLink, int] | None,
    alpha: int,
) -> dict[Pattern, DpEntry]:
    """Table of all realizable patterns with maximizing realizers and values."""
    ctx = _DpContext(inst, base)
    alpha, capped = effective_alpha(alpha, len(inst.links))
    if capped:
        warnings.warn(f"alpha capped at {alpha}; guarantees derived from the request are void")
    ct = _overlay_by_head(ctx, ctilde)
    raw = _run_dp(ctx, inst.costs, ct, alpha)
    out: dict[Pattern, DpEntry] = {}
    for cut, entries in raw.items():
        for key, (value, realizer, _) in entries.items():
            out[Pattern(cut, key)] = DpEntry(value, frozenset(realizer))
    return out


def find_best_drop_component(
    inst: RootedRingInstance,
    base: Sequence[DirectedLink],
    ctilde: Mapping[DirectedLink, int] | None,
    alpha: int,
) -> tuple[frozenset[int], int]:
    """Maximize ctilde(Drop(K)) - c(K) over alpha-thin K; empty K is admissible."""
    ctx = _DpContext(inst, base)
    alpha, capped = effective_alpha(alpha, len(inst.links))
    if capped:
        warnings.warn(f"alpha capped at {alpha}; guarantees derived from the request are void")
    ct = _overlay_by_head(ctx, ctilde)
    value, realizer = _best_full_entry(ctx, inst.costs, ct, alpha)
    return frozenset(realizer), value


def _best_full_entry(
    ctx: _DpContext, link_costs: Sequence[int], ct_by_head: Sequence[int], alpha: int
) -> tuple[int, tuple[int, ...]]:
    table = _run_dp(ctx, link_costs, ct_by_head, alpha)
    full = table[Cut(1, ctx.inst.n - 1)]
    best: Optional[tuple[int, tuple[int, ...]]] = None
    for value, realizer, _ in full.values():
        if best is None or value > best[0] or (value == best[0] and realizer < best[1]):
            best = (value, realizer)
    assert best is not None  # the empty pattern always exists
    return best


def find_min_ratio_component(
    inst: RootedRingInstance,
    base: Sequence[DirectedLink],
    fsub: Collection[DirectedLink],
    alpha: int,
) -> tuple[frozenset[int], Fraction]:
    """Minimize c(K) / c(Drop(K) cap fsub) over alpha-thin K, exactly.

    Conventions 0/0 = 1 and x/0 = inf; when fsub is nonempty the returned K
    has a nonempty drop intersection. Binary search over the slack objective
    at exact rational midpoints, stopping below the 1/c(fsub)^2 separation.
    """
    from .dropcalc import drop_by_characterization

    fsub = list(fsub)
    if not fsub:
        return frozenset(), Fraction(1)
    base_set = set(base)
    for dl in fsub:
        if dl not in base_set:
            raise ValueError("fsub must be a subset of the base solution")
    ctx = _DpContext(inst, base)
    alpha, capped = effective_alpha(alpha, len(inst.links))
    if capped:
        warnings.warn(f"alpha capped at {alpha}; guarantees derived from the request are void")
    n = inst.n
    sub_cost_by_head = [0] * n
    for dl in fsub:
        sub_cost_by_head[dl.head] = dl.cost

    fsub_set = set(fsub)

    def exact_ratio(link_ids: frozenset[int]) -> Fraction:
        dropped = drop_by_characterization(inst, base, link_ids)
        gain = sum(dl.cost for dl in dropped if dl in fsub_set)
        paid = inst.cost_of(link_ids)
        if gain == 0:
            return Fraction(1) if paid == 0 else Fraction(-1)  # -1 marks infinity
        return Fraction(paid, gain)

    fallback_dl = min(fsub, key=lambda dl: (dl.origin, dl.tail, dl.head))
    best: frozenset[int] = frozenset({fallback_dl.origin})
    total = sum(dl.cost for dl in fsub)
    if total == 0:
        return best, Fraction(1)

    a, b = Fraction(0), Fraction(1)
    sep = Fraction(1, total * total)
    while b - a >= sep:
        mid = (a + b) / 2
        p, q = mid.numerator, mid.denominator
        ct = [p * c for c in sub_cost_by_head]
        scaled = [q * c for c in inst.costs]
        value, realizer = _best_full_entry(ctx, scaled, ct, alpha)
        if value > 0:
            b = mid
            best = frozenset(realizer)
        else:
            a = mid
    ratio = exact_ratio(best)
    assert ratio >= 0, "binary search kept an infinite-ratio component"
    return best, ratio
