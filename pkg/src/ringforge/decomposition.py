"""Executable decomposition of a solution into thin components.

Festoons are link sets whose intersection graph is a path with both left and
right endpoints strictly increasing along it; crossing any 2-cut with at most
4 links, they are the building blocks. A solution is partitioned into
max-interval festoons, each non-root vertex gets a minimal chain of festoons
connecting it to a vertex outside its descendant interval, and the chains'
arcs form a branching whose labeled layers yield the cheap reserve set and
the per-component thin partition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .errors import DecompositionError
from .model import Cut, RootedRingInstance, enumerate_cuts, is_wrap_solution, _geometry
from .directed import Arborescence, DirectedLink
from .dropcalc import drop_by_definition, intersection_components
from .thinness import is_alpha_thin


@dataclass(frozen=True)
class Festoon:
    """Links in festoon order; the interval spans first left to last right end."""

    links: tuple[int, ...]

    def interval(self, inst: RootedRingInstance) -> Cut:
        first = inst.links[self.links[0]]
        last = inst.links[self.links[-1]]
        return Cut(first.u, last.v)

    def validate(self, inst: RootedRingInstance) -> None:
        geo = _geometry(inst)
        ids = self.links
        for a, b in zip(ids, ids[1:]):
            if not geo.intersect_mask[a] >> b & 1:
                raise ValueError(f"consecutive links {a},{b} do not intersect")
        for i, a in enumerate(ids):
            for b in ids[i + 2:]:
                if geo.intersect_mask[a] >> b & 1:
                    raise ValueError(f"non-consecutive links {a},{b} intersect")
                if inst.links[a].v >= inst.links[b].u:
                    raise ValueError(f"link {a} reaches to link {b}'s left endpoint")
        for a, b in zip(ids, ids[1:]):
            if not (inst.links[a].u < inst.links[b].u and inst.links[a].v < inst.links[b].v):
                raise ValueError(f"endpoint order violated between {a} and {b}")


@dataclass(frozen=True)
class DependencyGraph:
    """Branching over festoons; arcs carry the vertex whose chain created them."""

    festoons: tuple[Festoon, ...]
    arcs: tuple[tuple[int, int, int], ...]  # (from festoon idx, to festoon idx, owner vertex)

    def components(self) -> list[tuple[int, ...]]:
        n = len(self.festoons)
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b, _ in self.arcs:
            parent[find(a)] = find(b)
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        return [tuple(g) for g in groups.values()]


def _festoon_arcs(inst: RootedRingInstance, pool: Sequence[int]) -> dict[int, list[int]]:
    """Successor DAG whose directed paths are exactly the festoons in the pool."""
    geo = _geometry(inst)
    arcs: dict[int, list[int]] = {i: [] for i in pool}
    for a in pool:
        la = inst.links[a]
        for b in pool:
            lb = inst.links[b]
            if a != b and geo.intersect_mask[a] >> b & 1 and la.u < lb.u and la.v < lb.v:
                arcs[a].append(b)
    return arcs


def max_festoon(inst: RootedRingInstance, pool: Sequence[int]) -> Festoon:
    """Festoon within the pool maximizing its interval size.

    Every festoon is a path of the successor DAG; a shortest first-to-last
    path is itself a festoon because non-adjacent hops would shortcut it.
    Ties break toward the lexicographically smallest sorted id sequence.
    """
    pool = sorted(set(pool))
    if not pool:
        raise ValueError("empty link pool")
    arcs = _festoon_arcs(inst, pool)

    def shortest_path(src: int, dst: int) -> Optional[tuple[int, ...]]:
        if src == dst:
            return (src,)
        fringe = {src: (src,)}
        seen = {src}
        while fringe:
            nxt: dict[int, tuple[int, ...]] = {}
            for node in sorted(fringe):
                for succ in sorted(arcs[node]):
                    if succ in seen or succ in nxt:
                        continue
                    nxt[succ] = fringe[node] + (succ,)
            if dst in nxt:
                return nxt[dst]
            seen |= set(nxt)
            fringe = nxt
        return None

    best: Optional[tuple[int, tuple[int, ...], tuple[int, ...]]] = None
    for first in pool:
        for last in pool:
            path = shortest_path(first, last)
            if path is None:
                continue
            span = inst.links[last].v - inst.links[first].u + 1
            key = (-span, tuple(sorted(path)))
            if best is None or key < (best[0], best[1]):
                best = (key[0], key[1], path)
    assert best is not None  # singletons always qualify
    festoon = Festoon(best[2])
    festoon.validate(inst)
    return festoon


def partition_into_festoons(inst: RootedRingInstance, link_ids: Sequence[int]) -> tuple[Festoon, ...]:
    """Peel off max-interval festoons; the resulting intervals are laminar."""
    pool = sorted(set(link_ids))
    out: list[Festoon] = []
    while pool:
        fest = max_festoon(inst, pool)
        out.append(fest)
        pool = [i for i in pool if i not in set(fest.links)]
    _assert_laminar_intervals(inst, out)
    return tuple(out)


def _assert_laminar_intervals(inst: RootedRingInstance, festoons: Sequence[Festoon]) -> None:
    spans = [f.interval(inst) for f in festoons]
    for (i, a), (j, b) in combinations(enumerate(spans), 2):
        disjoint = a.hi < b.lo or b.hi < a.lo
        nested = (a.lo <= b.lo and b.hi <= a.hi) or (b.lo <= a.lo and a.hi <= b.hi)
        if not (disjoint or nested):
            raise DecompositionError(
                f"festoon intervals {a} and {b} cross (festoons {festoons[i]}, {festoons[j]})"
            )


def tangled(inst: RootedRingInstance, x: Festoon, y: Festoon) -> bool:
    """Some link of x intersects some link of y.

    For nested intervals this is equivalent to the outer festoon having an
    endpoint inside the inner interval; both forms are computed and compared.
    """
    if x == y:
        raise ValueError("tangledness is defined for distinct festoons")
    geo = _geometry(inst)
    direct = any(geo.intersect_mask[a] >> b & 1 for a in x.links for b in y.links)
    ix, iy = x.interval(inst), y.interval(inst)
    inner, outer = (x, y) if (iy.lo <= ix.lo and ix.hi <= iy.hi) else (y, x)
    ii = inner.interval(inst)
    io = outer.interval(inst)
    if ii.lo >= io.lo and ii.hi <= io.hi:
        via_interval = any(
            ii.contains(inst.links[i].u) or ii.contains(inst.links[i].v) for i in outer.links
        )
        assert via_interval == direct, "tangledness characterization mismatch"
    return direct


def _connects(inst: RootedRingInstance, arb: Arborescence, festoons: Sequence[Festoon], v: int) -> bool:
    ids = [i for f in festoons for i in f.links]
    lo, hi = arb.desc_lo[v], arb.desc_hi[v]
    for comp in intersection_components(inst, ids):
        verts = set()
        for i in comp:
            verts.add(inst.links[i].u)
            verts.add(inst.links[i].v)
        if v in verts and any(not lo <= w <= hi for w in verts):
            return True
    return False


def minimal_connecting_set(
    inst: RootedRingInstance,
    arb: Arborescence,
    festoons: Sequence[Festoon],
    v: int,
) -> tuple[tuple[int, ...], tuple[tuple[int, int, int], ...]]:
    """Minimal festoon chain connecting v to a v-good vertex, plus its arcs.

    Among inclusion-minimal connecting subsets, picks one whose top festoon
    is smallest in the interval order, then the shortest chain, then the
    lexicographically smallest link ids. Returns (festoon indices ordered
    bottom-up, arcs (upper, lower, v)).
    """
    if v == 0:
        raise ValueError("the root needs no connecting set")
    # every festoon of a minimal connecting chain has v inside its interval,
    # so only those candidates need enumerating; minimality stays exact since
    # the candidate pool is closed under subsets
    candidates = [i for i in range(len(festoons)) if festoons[i].interval(inst).contains(v)]
    connecting: list[tuple[int, ...]] = []
    for size in range(1, len(candidates) + 1):
        for subset in combinations(candidates, size):
            if any(set(prev) < set(subset) for prev in connecting):
                continue
            if _connects(inst, arb, [festoons[i] for i in subset], v):
                connecting.append(subset)
    if not connecting:
        raise DecompositionError(f"festoons never connect vertex {v} to a v-good vertex")

    def chain_order(subset: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(sorted(subset, key=lambda i: (
            festoons[i].interval(inst).hi - festoons[i].interval(inst).lo,
            festoons[i].links,
        )))

    def sort_key(subset: tuple[int, ...]):
        ordered = chain_order(subset)
        top = festoons[ordered[-1]].interval(inst)
        return (top.hi - top.lo, len(subset), tuple(festoons[i].links for i in ordered))

    best = min(connecting, key=sort_key)
    ordered = chain_order(best)
    spans = [festoons[i].interval(inst) for i in ordered]
    for a, b in zip(spans, spans[1:]):
        if not (b.lo <= a.lo and a.hi <= b.hi and (b.lo < a.lo or a.hi < b.hi)):
            raise DecompositionError(f"minimal connecting set is not a strict chain at {v}")
    for ia, a in enumerate(ordered):
        for ib in range(ia + 1, len(ordered)):
            expect = ib == ia + 1
            if tangled(inst, festoons[a], festoons[ordered[ib]]) != expect:
                raise DecompositionError(f"chain of {v} violates consecutive-only tangledness")
    arcs = tuple((ordered[i], ordered[i - 1], v) for i in range(1, len(ordered)))
    return ordered, arcs


def build_dependency_graph(
    inst: RootedRingInstance,
    festoons: Sequence[Festoon],
    chains: dict[int, tuple[tuple[int, int, int], ...]],
) -> DependencyGraph:
    """Union the per-vertex chain arcs and check the branching property."""
    arcs = tuple(arc for v in sorted(chains) for arc in chains[v])
    indeg: dict[int, int] = {}
    for _, to, _ in arcs:
        indeg[to] = indeg.get(to, 0) + 1
        if indeg[to] > 1:
            raise DecompositionError(f"festoon {to} has two incoming dependency arcs")
    graph = DependencyGraph(tuple(festoons), arcs)
    comp_of: dict[int, int] = {}
    for ci, comp in enumerate(graph.components()):
        for i in comp:
            comp_of[i] = ci
    for (i, x), (j, y) in combinations(enumerate(festoons), 2):
        if comp_of[i] == comp_of[j] and tangled(inst, x, y):
            if not _has_ancestry(arcs, i, j):
                raise DecompositionError(f"tangled festoons {i},{j} lack an ancestry relation")
    return graph


def _has_ancestry(arcs: Sequence[tuple[int, int, int]], i: int, j: int) -> bool:
    parent = {to: frm for frm, to, _ in arcs}

    def is_anc(a: int, b: int) -> bool:  # a ancestor of b
        while b in parent:
            b = parent[b]
            if b == a:
                return True
        return False

    return is_anc(i, j) or is_anc(j, i)


@dataclass(frozen=True)
class Decomposition:
    components: tuple[tuple[int, ...], ...]  # partition of the solution's link ids
    reserve: tuple[DirectedLink, ...]  # directed links exempt from the drop guarantee
    graph: DependencyGraph
    labels: tuple[tuple[int, int, int, int], ...]  # arcs with labels
    alpha: int


def decompose(
    inst: RootedRingInstance,
    solution: Sequence[int],
    base: Sequence[DirectedLink],
    eps,
) -> Decomposition:
    """Partition a solution into 4*ceil(1/eps)-thin sets dropping most of base.

    Executable proof of the decomposition guarantee: every postcondition is
    re-verified independently and any failure raises with a witness.
    """
    eps = Fraction(str(eps)) if isinstance(eps, float) else Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not is_wrap_solution(inst, solution):
        raise DecompositionError("input link set is not a WRAP solution")
    arb = Arborescence(inst, base)
    festoons = partition_into_festoons(inst, solution)
    _assert_festoon_cut_bound(inst, festoons)

    chains: dict[int, tuple[tuple[int, int, int], ...]] = {}
    for v in range(1, inst.n):
        _, arcs = minimal_connecting_set(inst, arb, festoons, v)
        chains[v] = arcs
    graph = build_dependency_graph(inst, festoons, chains)

    # labels: 1 at branching roots, +1 whenever the owner changes downward
    label: dict[tuple[int, int, int], int] = {}
    incoming: dict[int, tuple[int, int, int]] = {}
    for arc in graph.arcs:
        incoming[arc[1]] = arc
    pending = list(graph.arcs)
    while pending:
        remaining = []
        for arc in pending:
            frm, to, owner = arc
            above = incoming.get(frm)
            if above is None:
                label[arc] = 1
            elif above in label:
                label[arc] = label[above] if above[2] == owner else label[above] + 1
            else:
                remaining.append(arc)
                continue
        if len(remaining) == len(pending):
            raise DecompositionError("dependency arcs contain a cycle")
        pending = remaining

    for v, arcs in chains.items():
        if arcs and len({label[a] for a in arcs}) != 1:
            raise DecompositionError(f"chain of vertex {v} received mixed labels")

    q = math.ceil(1 / eps)
    classes: list[list[DirectedLink]] = [[] for _ in range(q)]
    head_label = {arcs[0][2]: label[arcs[0]] for arcs in chains.values() if arcs}
    for dl in base:
        if dl.head in head_label:
            classes[head_label[dl.head] % q].append(dl)
    costs = [sum(dl.cost for dl in cls) for cls in classes]
    pick = min(range(q), key=lambda i: (costs[i], i))
    reserve = tuple(sorted(classes[pick], key=lambda dl: dl.head))
    total = sum(dl.cost for dl in base)
    if costs[pick] > eps * total:
        raise DecompositionError(f"reserve costs {costs[pick]} > eps * {total}")

    survivors = {dl.head for dl in base} - {dl.head for dl in reserve}
    kept_arcs = tuple(arc for arc in graph.arcs if arc[2] in survivors)
    pruned = DependencyGraph(graph.festoons, kept_arcs)
    components = tuple(
        tuple(sorted(i for fi in comp for i in festoons[fi].links))
        for comp in pruned.components()
    )

    alpha = 4 * q
    for comp in components:
        ok, family = is_alpha_thin(inst, comp, alpha)
        if not ok:
            raise DecompositionError(f"component {comp} is not {alpha}-thin")
        assert family is not None
        family.validate()
    flat_parts = sorted(i for comp in components for i in comp)
    if flat_parts != sorted(set(solution)):
        raise DecompositionError("components do not partition the solution")

    reserve_set = set(reserve)
    dropped_by_component = [drop_by_definition(inst, base, comp) for comp in components]
    for dl in base:
        if dl in reserve_set:
            continue
        if not any(dl in dropped for dropped in dropped_by_component):
            raise DecompositionError(f"link {dl} is not droppable by any component")

    labels_out = tuple((frm, to, owner, label[(frm, to, owner)]) for frm, to, owner in graph.arcs)
    return Decomposition(components, reserve, pruned, labels_out, alpha)


def _assert_festoon_cut_bound(inst: RootedRingInstance, festoons: Sequence[Festoon]) -> None:
    for fest in festoons:
        for cut in enumerate_cuts(inst):
            crossing = sum(
                1
                for i in fest.links
                if cut.contains(inst.links[i].u) != cut.contains(inst.links[i].v)
            )
            if crossing > 4:
                raise DecompositionError(f"festoon {fest} crosses {cut} {crossing} times")
