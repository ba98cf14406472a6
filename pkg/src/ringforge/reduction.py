"""Cactus instances, the ring unfolding, and min-cut based WCAP checking.

A cactus (every edge in exactly one cycle) is Eulerian; walking an Euler
tour and giving each repeat visit of a vertex a fresh ring position, chained
to the first position by a zero-cost link, turns the instance into a ring
instance whose solutions map back at equal cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import FormatError
from .model import RootedRingInstance, make_instance


@dataclass(frozen=True)
class CactusInstance:
    """Multigraph where every edge lies in exactly one cycle, plus links."""

    nv: int
    edges: tuple[tuple[int, int], ...]
    links: tuple[tuple[int, int], ...]
    costs: tuple[int, ...]

    def __post_init__(self):
        for u, v in self.edges:
            if not (0 <= u < self.nv and 0 <= v < self.nv) or u == v:
                raise ValueError(f"bad edge ({u},{v})")
        for u, v in self.links:
            if not (0 <= u < self.nv and 0 <= v < self.nv) or u == v:
                raise ValueError(f"bad link ({u},{v})")
        if len(self.links) != len(self.costs) or any(c < 0 for c in self.costs):
            raise ValueError("bad link costs")
        problem = _cactus_violation(self.nv, self.edges)
        if problem:
            raise ValueError(problem)


def _cactus_violation(nv: int, edges: Sequence[tuple[int, int]]) -> str | None:
    """None when connected and every block is a simple cycle (2-cycles allowed)."""
    if nv < 1:
        return "empty graph"
    adj: list[list[tuple[int, int]]] = [[] for _ in range(nv)]
    for idx, (u, v) in enumerate(edges):
        adj[u].append((v, idx))
        adj[v].append((u, idx))
    seen = [False] * nv
    stack = [0]
    seen[0] = True
    while stack:
        u = stack.pop()
        for w, _ in adj[u]:
            if not seen[w]:
                seen[w] = True
                stack.append(w)
    if not all(seen):
        return "graph is not connected"
    blocks = _biconnected_edge_blocks(nv, edges)
    covered = [0] * len(edges)
    for block in blocks:
        verts: set[int] = set()
        degree: dict[int, int] = {}
        for idx in block:
            u, v = edges[idx]
            verts.update((u, v))
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
            covered[idx] += 1
        if len(block) != len(verts) or any(d != 2 for d in degree.values()):
            return f"edges {sorted(block)} form a non-cycle block"
    if any(c != 1 for c in covered):
        return "some edge lies in no cycle"
    return None


def _biconnected_edge_blocks(nv: int, edges: Sequence[tuple[int, int]]) -> list[list[int]]:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(nv)]
    for idx, (u, v) in enumerate(edges):
        adj[u].append((v, idx))
        adj[v].append((u, idx))
    disc = [-1] * nv
    low = [0] * nv
    blocks: list[list[int]] = []
    edge_stack: list[int] = []
    timer = 0

    def dfs(root: int) -> None:
        nonlocal timer
        stack: list[tuple[int, int, int]] = [(root, -1, 0)]  # vertex, in-edge, adj pos
        disc[root] = low[root] = timer
        timer += 1
        while stack:
            u, in_edge, pos = stack.pop()
            if pos < len(adj[u]):
                stack.append((u, in_edge, pos + 1))
                w, idx = adj[u][pos]
                if idx == in_edge:
                    continue
                if disc[w] == -1:
                    edge_stack.append(idx)
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, idx, 0))
                elif disc[w] < disc[u]:
                    edge_stack.append(idx)
                    low[u] = min(low[u], disc[w])
            else:
                if in_edge != -1:
                    parent = stack[-1][0]
                    low[parent] = min(low[parent], low[u])
                    if low[u] >= disc[parent]:
                        block = []
                        while True:
                            idx = edge_stack.pop()
                            block.append(idx)
                            if idx == in_edge:
                                break
                        blocks.append(block)

    for v in range(nv):
        if disc[v] == -1:
            dfs(v)
    return blocks


def _euler_walk(nv: int, edges: Sequence[tuple[int, int]], start: int = 0) -> list[int]:
    """Hierholzer tour as a vertex sequence; ties follow input edge order."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(nv)]
    for idx, (u, v) in enumerate(edges):
        adj[u].append((v, idx))
        adj[v].append((u, idx))
    for lst in adj:
        lst.sort(key=lambda t: t[1])
    used = [False] * len(edges)
    ptr = [0] * nv
    stack = [start]
    walk: list[int] = []
    while stack:
        u = stack[-1]
        while ptr[u] < len(adj[u]) and used[adj[u][ptr[u]][1]]:
            ptr[u] += 1
        if ptr[u] == len(adj[u]):
            walk.append(stack.pop())
        else:
            w, idx = adj[u][ptr[u]]
            used[idx] = True
            stack.append(w)
    walk.reverse()
    return walk  # closed: walk[0] == walk[-1] == start


@dataclass(frozen=True)
class UnfoldMap:
    """Ring position -> cactus vertex, plus the zero-cost chaining link ids."""

    ring_to_cactus: tuple[int, ...]
    added_link_ids: tuple[int, ...]


def unfold_cactus(cactus: CactusInstance) -> tuple[RootedRingInstance, UnfoldMap]:
    """Ring instance over the Euler tour positions; repeat visits chain back."""
    walk = _euler_walk(cactus.nv, cactus.edges, start=0)
    positions = walk[:-1]  # one ring vertex per tour edge start
    n = len(positions)
    if n < 3:
        raise ValueError("cactus must unfold to a ring of length >= 3")
    first_pos: dict[int, int] = {}
    for pos, vert in enumerate(positions):
        first_pos.setdefault(vert, pos)
    links = [(first_pos[u], first_pos[v]) for u, v in cactus.links]
    costs = list(cactus.costs)
    added: list[int] = []
    for pos, vert in enumerate(positions):
        if first_pos[vert] != pos:
            added.append(len(links))
            links.append((first_pos[vert], pos))
            costs.append(0)
    inst = make_instance(n, links, costs)
    return inst, UnfoldMap(tuple(positions), tuple(added))


def map_solution_back(
    cactus: CactusInstance, mapping: UnfoldMap, ring_solution: Iterable[int]
) -> frozenset[int]:
    """Drop the zero-cost chaining links; the rest are cactus links by id."""
    added = set(mapping.added_link_ids)
    return frozenset(i for i in ring_solution if i not in added)


def min_cut(nv: int, edges: Sequence[tuple[int, int]]) -> int:
    """Global minimum edge cut by subset enumeration (vertex 0 fixed inside)."""
    if nv < 2:
        raise ValueError("min cut needs >= 2 vertices")
    best = len(edges) + 1
    for sub in range(1 << (nv - 1)):
        side = (sub << 1) | 1  # vertex 0 always inside
        if side == (1 << nv) - 1:
            continue  # proper subsets only
        crossing = sum(1 for u, v in edges if (side >> u & 1) != (side >> v & 1))
        best = min(best, crossing)
    return best


def is_wcap_solution(cactus: CactusInstance, link_ids: Iterable[int]) -> bool:
    """True iff adding the links raises the global edge connectivity."""
    base = min_cut(cactus.nv, cactus.edges)
    extra = [cactus.links[i] for i in set(link_ids)]
    return min_cut(cactus.nv, list(cactus.edges) + extra) > base


def load_cactus(text: str | bytes) -> CactusInstance:
    """Parse the `cactus` file format; cycles are inferred and validated."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    nv = None
    edges: list[tuple[int, int]] = []
    raw_links: list[tuple[int, int, Fraction]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "cactus":
            if nv is not None:
                raise FormatError("duplicate cactus header", lineno)
            try:
                nv = int(parts[1])
            except (IndexError, ValueError):
                raise FormatError("expected: cactus <nv>", lineno) from None
        elif parts[0] == "edge":
            if nv is None:
                raise FormatError("edge before cactus header", lineno)
            if len(parts) != 3:
                raise FormatError("expected: edge <u> <v>", lineno)
            try:
                edges.append((int(parts[1]), int(parts[2])))
            except ValueError:
                raise FormatError(f"bad edge line {line!r}", lineno) from None
        elif parts[0] == "link":
            if nv is None:
                raise FormatError("link before cactus header", lineno)
            if len(parts) != 4:
                raise FormatError("expected: link <u> <v> <cost>", lineno)
            try:
                raw_links.append((int(parts[1]), int(parts[2]), Fraction(parts[3])))
            except (ValueError, ZeroDivisionError):
                raise FormatError(f"bad link line {line!r}", lineno) from None
            if raw_links[-1][2] < 0:
                raise FormatError("negative cost", lineno)
        else:
            raise FormatError(f"unknown directive {parts[0]!r}", lineno)
    if nv is None:
        raise FormatError("missing cactus header")
    import math as _math

    scale = _math.lcm(*(c.denominator for _, _, c in raw_links)) if raw_links else 1
    links = tuple((u, v) for u, v, _ in raw_links)
    costs = tuple(int(c * scale) for _, _, c in raw_links)
    try:
        return CactusInstance(nv, tuple(edges), links, costs)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def save_cactus(cactus: CactusInstance) -> str:
    lines = [f"cactus {cactus.nv}"]
    lines.extend(f"edge {u} {v}" for u, v in cactus.edges)
    lines.extend(
        f"link {u} {v} {c}" for (u, v), c in zip(cactus.links, cactus.costs)
    )
    return "\n".join(lines) + "\n"
