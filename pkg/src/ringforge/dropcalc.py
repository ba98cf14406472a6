"""Link intersection graph, v-good/v-bad classification, and Drop sets.

Drop is computed two independent ways that must agree everywhere: straight
from the responsibility partition, and through connectivity in the link
intersection graph (a directed link (u, v) is droppable iff v is connected
to a v-good vertex). For a set whose intersection graph is connected there
is also a closed form: everything entering its endpoint set except the link
entering the lca.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import NotConnectedError
from .model import Cut, Link, RootedRingInstance, _geometry
from .directed import Arborescence, DirectedLink, responsibilities


class UnionFind:
    __slots__ = ("parent",)

    def __init__(self, items: Iterable[int]):
        self.parent = {i: i for i in items}

    def find(self, x: int) -> int:
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


def intersects(a: Link, b: Link) -> bool:
    """Links intersect iff they cross as chords or share an endpoint; never self."""
    if a.id == b.id:
        return False
    if a.u in (b.u, b.v) or a.v in (b.u, b.v):
        return True
    return a.u < b.u < a.v < b.v or b.u < a.u < b.v < a.v


def intersection_graph(inst: RootedRingInstance, link_ids: Iterable[int]) -> dict[int, frozenset[int]]:
    """Adjacency of the link intersection graph induced on the given ids."""
    ids = sorted(set(link_ids))
    geo = _geometry(inst)
    return {
        a: frozenset(b for b in ids if b != a and geo.intersect_mask[a] >> b & 1)
        for a in ids
    }


def intersection_components(inst: RootedRingInstance, link_ids: Iterable[int]) -> list[tuple[int, ...]]:
    """Connected components of the link intersection graph induced on the ids."""
    ids = sorted(set(link_ids))
    geo = _geometry(inst)
    uf = UnionFind(ids)
    for i, a in enumerate(ids):
        mask = geo.intersect_mask[a]
        for b in ids[i + 1:]:
            if mask >> b & 1:
                uf.union(a, b)
    groups: dict[int, list[int]] = {}
    for a in ids:
        groups.setdefault(uf.find(a), []).append(a)
    return [tuple(g) for g in groups.values()]


def connected_vertices(inst: RootedRingInstance, link_ids: Iterable[int], u: int, v: int) -> bool:
    """True iff some path in H[K] joins a link at u to a link at v."""
    ids = set(link_ids)
    for comp in intersection_components(inst, ids):
        touches_u = touches_v = False
        for i in comp:
            link = inst.links[i]
            touches_u = touches_u or u in (link.u, link.v)
            touches_v = touches_v or v in (link.u, link.v)
        if touches_u and touches_v:
            return True
    return False


def v_bad_interval(arb: Arborescence, v: int) -> Cut:
    """Descendant interval of v; its complement is the v-good set."""
    return Cut(arb.desc_lo[v], arb.desc_hi[v])


def drop_by_definition(
    inst: RootedRingInstance, base: Sequence[DirectedLink], link_ids: Iterable[int]
) -> set[DirectedLink]:
    """Links of the base solution all of whose responsible cuts K covers."""
    geo = _geometry(inst)
    covered = 0
    for i in link_ids:
        covered |= geo.cover_mask[i]
    resp = responsibilities(inst, base)
    out = set()
    for dl, cuts in resp.items():
        if all(covered >> geo.cut_index[c] & 1 for c in cuts):
            out.add(dl)
    return out


def drop_by_characterization(
    inst: RootedRingInstance, base: Sequence[DirectedLink], link_ids: Iterable[int]
) -> set[DirectedLink]:
    """Links (u, v) whose head connects to a v-good vertex in H[K]."""
    arb = Arborescence(inst, base)
    comps = intersection_components(inst, link_ids)
    vertex_sets = []
    for comp in comps:
        verts = set()
        for i in comp:
            verts.add(inst.links[i].u)
            verts.add(inst.links[i].v)
        vertex_sets.append(verts)
    out = set()
    for dl in base:
        v = dl.head
        lo, hi = arb.desc_lo[v], arb.desc_hi[v]
        for verts in vertex_sets:
            # all links at v intersect pairwise, so at most one component touches v
            if v in verts and any(not lo <= w <= hi for w in verts):
                out.add(dl)
                break
    return out


def drop_connected(
    inst: RootedRingInstance, base: Sequence[DirectedLink], link_ids: Iterable[int]
) -> set[DirectedLink]:
    """Closed form for a set connected in H: enter its endpoints, skip the lca."""
    ids = sorted(set(link_ids))
    if not ids:
        return set()
    if len(intersection_components(inst, ids)) != 1:
        raise NotConnectedError("link set is not connected in the intersection graph")
    arb = Arborescence(inst, base)
    verts = set()
    for i in ids:
        verts.add(inst.links[i].u)
        verts.add(inst.links[i].v)
    top = arb.lca(verts)
    return {dl for dl in base if dl.head in verts and dl.head != top}
