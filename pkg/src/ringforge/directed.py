"""Directed shadow solutions and their structure.

A shadow of link {x, y} is a directed link obtained by orienting it and
moving the tail toward the head along the ring path; it costs the same as
the original and enters a subset of the cuts the original covers. Every
non-shortenable directed solution is a G-planar r-arborescence whose
per-vertex out-links go in distinct directions, with descendant sets forming
contiguous intervals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import InfeasibleInstanceError, StructureError
from .model import Cut, Link, RootedRingInstance, enumerate_cuts, is_feasible


@dataclass(frozen=True)
class DirectedLink:
    """Oriented candidate covering only the cuts it enters; shadows link `origin`."""

    tail: int
    head: int
    origin: int
    cost: int

    def __post_init__(self):
        if self.tail == self.head:
            raise ValueError("directed link needs distinct endpoints")


def shadows(inst: RootedRingInstance, link: Link) -> tuple[DirectedLink, ...]:
    """All shadows of a link: tails slide from either endpoint toward the other."""
    cost = inst.costs[link.id]
    out = []
    for s in range(link.u, link.v):  # shortenings of (u, v): head v
        out.append(DirectedLink(s, link.v, link.id, cost))
    for s in range(link.u + 1, link.v + 1):  # shortenings of (v, u): head u
        out.append(DirectedLink(s, link.u, link.id, cost))
    return tuple(out)


def is_shadow(link: Link, tail: int, head: int) -> bool:
    if head == link.v:
        return link.u <= tail < link.v
    if head == link.u:
        return link.u < tail <= link.v
    return False


def enters(dl: DirectedLink, cut: Cut) -> bool:
    """True iff the head is inside the cut and the tail outside."""
    return (cut.lo <= dl.head <= cut.hi) and not (cut.lo <= dl.tail <= cut.hi)


def is_directed_solution(inst: RootedRingInstance, links: Iterable[DirectedLink]) -> bool:
    """True iff every 2-cut is entered by some directed link."""
    pairs = [(dl.tail, dl.head) for dl in links]
    for cut in enumerate_cuts(inst):
        lo, hi = cut
        if not any(lo <= h <= hi and not (lo <= t <= hi) for t, h in pairs):
            return False
    return True


def _uncovered_cut(inst: RootedRingInstance, pairs: Sequence[tuple[int, int]]) -> Optional[Cut]:
    for cut in enumerate_cuts(inst):
        lo, hi = cut
        if not any(lo <= h <= hi and not (lo <= t <= hi) for t, h in pairs):
            return cut
    return None


@dataclass(frozen=True)
class StructureReport:
    """Outcome of the three structure checks on a directed link set."""

    arborescence_ok: bool
    planar_ok: bool
    directions_ok: bool
    detail: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.arborescence_ok and self.planar_ok and self.directions_ok


def verify_structure(inst: RootedRingInstance, links: Sequence[DirectedLink]) -> StructureReport:
    """Check r-arborescence, G-planarity, and the distinct-out-direction rule."""
    n = inst.n
    indeg = [0] * n
    for dl in links:
        indeg[dl.head] += 1
    arb_ok = True
    detail = None
    if indeg[0] != 0:
        arb_ok, detail = False, "a link enters the root"
    elif len(links) != n - 1 or any(indeg[v] != 1 for v in range(1, n)):
        arb_ok, detail = False, "in-degrees are not (0 at root, 1 elsewhere)"
    else:
        parent = {dl.head: dl.tail for dl in links}
        for v in range(1, n):
            seen = set()
            u = v
            while u != 0:
                if u in seen:
                    arb_ok, detail = False, f"cycle through vertex {u}"
                    break
                seen.add(u)
                u = parent[u]
            if not arb_ok:
                break

    planar_ok = True
    for i, a in enumerate(links):
        for b in links[i + 1:]:
            a1, a2 = sorted((a.tail, a.head))
            b1, b2 = sorted((b.tail, b.head))
            if a1 < b1 < a2 < b2 or b1 < a1 < b2 < a2:
                planar_ok = False
                if detail is None:
                    detail = f"crossing pair ({a.tail},{a.head}) and ({b.tail},{b.head})"
                break
        if not planar_ok:
            break

    directions_ok = True
    by_tail: dict[int, list[DirectedLink]] = {}
    for dl in links:
        by_tail.setdefault(dl.tail, []).append(dl)
    for v, outs in by_tail.items():
        rights = [dl for dl in outs if dl.head > v]
        lefts = [dl for dl in outs if dl.head < v]
        if len(rights) > 1 or len(lefts) > 1:
            directions_ok = False
            if detail is None:
                detail = f"two same-direction out-links at vertex {v}"
            break
    return StructureReport(arb_ok, planar_ok, directions_ok, detail)


class Arborescence:
    """Parent/depth/descendant-interval view of a structured directed solution.

    Ancestor and lca queries use a parent-jump (binary lifting) table; the
    table is rebuilt whenever the underlying directed solution changes, by
    constructing a fresh Arborescence.
    """

    __slots__ = ("n", "parent", "depth", "desc_lo", "desc_hi", "_jump")

    def __init__(self, inst: RootedRingInstance, links: Sequence[DirectedLink]):
        report = verify_structure(inst, links)
        if not report.ok:
            raise StructureError(f"not a structured solution: {report.detail}")
        n = inst.n
        self.n = n
        parent: list[Optional[int]] = [None] * n
        for dl in links:
            parent[dl.head] = dl.tail
        self.parent = tuple(parent)
        depth = [0] * n
        for v in range(1, n):
            d, u = 0, v
            while u != 0:
                u = parent[u]
                d += 1
            depth[v] = d
        self.depth = tuple(depth)
        lo = list(range(n))
        hi = list(range(n))
        for v in sorted(range(1, n), key=lambda v: -depth[v]):
            p = parent[v]
            lo[p] = min(lo[p], lo[v])
            hi[p] = max(hi[p], hi[v])
        for v in range(n):
            width = hi[v] - lo[v] + 1
            count = sum(1 for w in range(n) if self._is_desc_slow(parent, w, v))
            if width != count:
                raise StructureError(f"descendants of {v} are not an interval")
        self.desc_lo = tuple(lo)
        self.desc_hi = tuple(hi)
        levels = max(1, n.bit_length())
        jump = [list(range(n)) for _ in range(levels)]
        jump[0] = [parent[v] if parent[v] is not None else 0 for v in range(n)]
        for k in range(1, levels):
            jump[k] = [jump[k - 1][jump[k - 1][v]] for v in range(n)]
        self._jump = jump

    @staticmethod
    def _is_desc_slow(parent: Sequence[Optional[int]], w: int, v: int) -> bool:
        while True:
            if w == v:
                return True
            if parent[w] is None:
                return False
            w = parent[w]

    def is_ancestor(self, a: int, b: int) -> bool:
        """True iff b is a descendant of a (every vertex descends from itself)."""
        return self.desc_lo[a] <= b <= self.desc_hi[a]

    def lca_pair(self, u: int, v: int) -> int:
        if self.depth[u] > self.depth[v]:
            u, v = v, u
        diff = self.depth[v] - self.depth[u]
        k = 0
        while diff:
            if diff & 1:
                v = self._jump[k][v]
            diff >>= 1
            k += 1
        if u == v:
            return u
        for k in range(len(self._jump) - 1, -1, -1):
            if self._jump[k][u] != self._jump[k][v]:
                u, v = self._jump[k][u], self._jump[k][v]
        return self.parent[u] if self.parent[u] is not None else 0

    def lca(self, vertices: Iterable[int]) -> int:
        """Deepest common ancestor of a nonempty vertex set."""
        it = iter(vertices)
        try:
            acc = next(it)
        except StopIteration:
            raise ValueError("lca of empty set") from None
        for v in it:
            acc = self.lca_pair(acc, v)
        return acc


def lca(arb: Arborescence, vertices: Iterable[int]) -> int:
    return arb.lca(vertices)


def _shorten_pass(inst: RootedRingInstance, links: Sequence[DirectedLink]) -> list[Optional[DirectedLink]]:
    """One ordered delete-or-shorten pass; returns per-position results.

    Positions are processed in ascending (origin, tail, head) order; a link is
    deleted when the rest still covers everything, otherwise replaced by its
    feasible shortening entering the fewest cuts. One pass suffices: later
    links only get weaker, so earlier decisions stay final.
    """
    current: list[Optional[DirectedLink]] = list(links)
    order = sorted(range(len(current)), key=lambda i: (links[i].origin, links[i].tail, links[i].head))

    def live_pairs(skip: int, replacement: Optional[tuple[int, int]]) -> list[tuple[int, int]]:
        pairs = []
        for j, dl in enumerate(current):
            if dl is None or j == skip:
                continue
            pairs.append((dl.tail, dl.head))
        if replacement is not None:
            pairs.append(replacement)
        return pairs

    for i in order:
        dl = current[i]
        assert dl is not None
        if _uncovered_cut(inst, live_pairs(i, None)) is None:
            current[i] = None
            continue
        step = 1 if dl.head > dl.tail else -1
        # strict shortenings, nearest tail first = fewest covered cuts first
        for s in range(dl.head - step, dl.tail, -step):
            if _uncovered_cut(inst, live_pairs(i, (s, dl.head))) is None:
                current[i] = DirectedLink(s, dl.head, dl.origin, dl.cost)
                break
    return current


def make_non_shortenable(inst: RootedRingInstance, links: Sequence[DirectedLink]) -> tuple[DirectedLink, ...]:
    """Delete and shorten until no deletion or strict shortening stays feasible."""
    if _uncovered_cut(inst, [(dl.tail, dl.head) for dl in links]) is not None:
        raise InfeasibleInstanceError("input is not a directed solution")
    result = [dl for dl in _shorten_pass(inst, links) if dl is not None]
    result.sort(key=lambda dl: dl.head)
    return tuple(result)


def min_cost_directed_solution(inst: RootedRingInstance) -> tuple[DirectedLink, ...]:
    """Minimum-cost directed solution over all shadows of the link set.

    Exact dynamic program over interval-structured G-planar r-arborescences:
    some optimum is non-shortenable, hence of this shape, so searching the
    shape is lossless. State (i, j, v): cheapest sub-arborescence spanning
    exactly the interval [i, j] and rooted at v, split into an independent
    left branch [i, v-1] and right branch [v+1, j].
    """
    if not is_feasible(inst):
        raise InfeasibleInstanceError("links do not cover every 2-cut")
    n = inst.n
    best_shadow: dict[tuple[int, int], tuple[int, int]] = {}
    for link in inst.links:
        for dl in shadows(inst, link):
            key = (dl.tail, dl.head)
            cand = (dl.cost, dl.origin)
            if key not in best_shadow or cand < best_shadow[key]:
                best_shadow[key] = cand

    def solve_sub(i: int, j: int, v: int) -> Optional[int]:
        """Cheapest arborescence on [i, j] rooted at v (i <= v <= j)."""
        left = solve_branch(v, i, v - 1)
        right = solve_branch(v, v + 1, j)
        if left is None or right is None:
            return None
        return left + right

    # branch[(v, i, j)] = min cost to hang the interval [i, j] below v
    # (empty interval costs 0); None marks unreachable states.
    branch: dict[tuple[int, int, int], Optional[int]] = {}
    sub_choice: dict[tuple[int, int, int], int] = {}

    def solve_branch(v: int, i: int, j: int) -> Optional[int]:
        if i > j:
            return 0
        key = (v, i, j)
        if key in branch:
            return branch[key]
        branch[key] = None  # guards the recursion; final value set below
        best, choice = None, -1
        for w in range(i, j + 1):
            edge = best_shadow.get((v, w))
            if edge is None:
                continue
            below = solve_sub(i, j, w)
            if below is None:
                continue
            cost = edge[0] + below
            if best is None or cost < best:
                best, choice = cost, w
        branch[key] = best
        sub_choice[key] = choice
        return best

    total = solve_branch(0, 1, n - 1)
    if total is None:
        raise InfeasibleInstanceError("no structured directed solution exists")

    out: list[DirectedLink] = []

    def rebuild(v: int, i: int, j: int) -> None:
        if i > j:
            return
        w = sub_choice[(v, i, j)]
        cost, origin = best_shadow[(v, w)]
        out.append(DirectedLink(v, w, origin, cost))
        rebuild(w, i, w - 1)
        rebuild(w, w + 1, j)

    rebuild(0, 1, n - 1)
    out.sort(key=lambda dl: dl.head)
    return tuple(out)


def responsibilities(
    inst: RootedRingInstance, links: Sequence[DirectedLink]
) -> dict[DirectedLink, tuple[Cut, ...]]:
    """Partition of all 2-cuts into per-link responsibility sets.

    The link entering v is responsible exactly for the cuts containing v
    whose vertices are all descendants of v, i.e. the sub-intervals of v's
    descendant interval that contain v.
    """
    arb = Arborescence(inst, links)
    out: dict[DirectedLink, tuple[Cut, ...]] = {}
    for dl in links:
        v = dl.head
        a, b = arb.desc_lo[v], arb.desc_hi[v]
        out[dl] = tuple(Cut(lo, hi) for lo in range(a, v + 1) for hi in range(v, b + 1))
    return out


def two_approx_directed(inst: RootedRingInstance) -> tuple[DirectedLink, ...]:
    """Non-shortenable minimum-cost directed solution; costs at most 2*OPT."""
    return make_non_shortenable(inst, min_cost_directed_solution(inst))
