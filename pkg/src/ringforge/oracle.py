"""Brute-force ground truth for every guarantee in the package.

Subset enumeration walks Gray-code order with incremental per-cut coverage
and crossing counters, so the n = 8 / 16-link budget stays fast. Directed
optima enumerate one incoming shadow per non-root vertex, which is lossless:
singleton cuts force in-degree >= 1 everywhere and any solution shortens to
a spanning in-degree-1 one of no larger cost.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Collection, Mapping, Optional, Sequence

from .errors import BudgetExceededError, InfeasibleInstanceError
from .model import Cut, RootedRingInstance, _geometry
from .directed import DirectedLink, responsibilities, shadows


@dataclass(frozen=True)
class OracleBudget:
    """Enumeration limits; RINGFORGE_BUDGET overrides max_links."""

    max_links: int = 16
    max_n: int = 8
    timeout: Optional[float] = None

    @staticmethod
    def from_env() -> "OracleBudget":
        raw = os.environ.get("RINGFORGE_BUDGET")
        if raw is None:
            return OracleBudget()
        try:
            return OracleBudget(max_links=int(raw))
        except ValueError:
            raise BudgetExceededError(f"bad RINGFORGE_BUDGET value {raw!r}") from None


def _check_budget(inst: RootedRingInstance, budget: OracleBudget) -> float:
    if len(inst.links) > budget.max_links:
        raise BudgetExceededError(
            f"{len(inst.links)} links exceed the enumeration budget {budget.max_links}"
        )
    if inst.n > budget.max_n:
        raise BudgetExceededError(f"n={inst.n} exceeds the budget {budget.max_n}")
    return time.monotonic()


def _deadline_hit(start: float, budget: OracleBudget) -> bool:
    return budget.timeout is not None and time.monotonic() - start > budget.timeout


def _gray_subsets(m: int):
    """Yield (subset_mask, flipped_bit, now_present) in Gray-code order."""
    prev = 0
    for k in range(1, 1 << m):
        gray = k ^ (k >> 1)
        diff = gray ^ prev
        bit = diff.bit_length() - 1
        yield gray, bit, bool(gray >> bit & 1)
        prev = gray


def exact_opt(
    inst: RootedRingInstance, budget: OracleBudget | None = None
) -> tuple[frozenset[int], int]:
    """Cheapest WRAP solution by full subset enumeration."""
    budget = budget or OracleBudget.from_env()
    start = _check_budget(inst, budget)
    geo = _geometry(inst)
    m = len(inst.links)
    ncuts = len(geo.cuts)
    counts = [0] * ncuts
    covered = 0
    cost = 0
    best: Optional[tuple[int, int]] = None  # (cost, mask)
    for mask, bit, present in _gray_subsets(m):
        step = 1 if present else -1
        cost += step * inst.costs[bit]
        for ci in geo.cover_cuts[bit]:
            counts[ci] += step
            if present and counts[ci] == 1:
                covered += 1
            elif not present and counts[ci] == 0:
                covered -= 1
        if covered == ncuts and (best is None or cost < best[0] or (cost == best[0] and mask < best[1])):
            best = (cost, mask)
        if mask % 4096 == 0 and _deadline_hit(start, budget):
            raise BudgetExceededError("oracle timeout")
    if best is None:
        raise InfeasibleInstanceError("no subset covers every 2-cut")
    ids = frozenset(i for i in range(m) if best[1] >> i & 1)
    return ids, best[0]


def exact_directed_opt(
    inst: RootedRingInstance, budget: OracleBudget | None = None
) -> tuple[tuple[DirectedLink, ...], int]:
    """Cheapest directed solution over all shadows; one in-link per vertex."""
    budget = budget or OracleBudget.from_env()
    start = _check_budget(inst, budget)
    n = inst.n
    into: list[list[DirectedLink]] = [[] for _ in range(n)]
    seen: list[dict[int, DirectedLink]] = [dict() for _ in range(n)]
    for link in inst.links:
        for dl in shadows(inst, link):
            kept = seen[dl.head].get(dl.tail)
            if kept is None or (dl.cost, dl.origin) < (kept.cost, kept.origin):
                seen[dl.head][dl.tail] = dl
    for v in range(1, n):
        into[v] = sorted(seen[v].values(), key=lambda dl: (dl.cost, dl.tail, dl.origin))
        if not into[v]:
            raise InfeasibleInstanceError(f"no link can enter the singleton cut {{{v}}}")
    cuts = [c for c in _geometry(inst).cuts if c.lo < c.hi]
    best_cost: Optional[int] = None
    best_pick: Optional[list[DirectedLink]] = None
    pick: list[Optional[DirectedLink]] = [None] * n

    def rec(v: int, cost: int) -> None:
        nonlocal best_cost, best_pick
        if best_cost is not None and cost >= best_cost:
            return
        if v == n:
            tails = [dl.tail for dl in pick[1:]]  # type: ignore[union-attr]
            for cut in cuts:
                lo, hi = cut
                if all(lo <= tails[h - 1] <= hi for h in range(lo, hi + 1)):
                    return
            best_cost = cost
            best_pick = list(pick[1:])  # type: ignore[arg-type]
            return
        if _deadline_hit(start, budget):
            raise BudgetExceededError("oracle timeout")
        for dl in into[v]:
            pick[v] = dl
            rec(v + 1, cost + dl.cost)
        pick[v] = None

    rec(1, 0)
    if best_pick is None:
        raise InfeasibleInstanceError("no directed solution exists")
    return tuple(best_pick), best_cost  # type: ignore[return-value]


def _alpha_thin_masks(inst: RootedRingInstance, alpha: int, budget: OracleBudget):
    """Yield (mask, cost) for every alpha-thin subset, Gray-code incremental."""
    geo = _geometry(inst)
    m = len(inst.links)
    cuts = geo.cuts
    ncuts = len(cuts)
    idx_of = geo.cut_index
    cross = [0] * ncuts
    cost = 0
    n = inst.n
    top = idx_of[Cut(1, n - 1)]
    singles = [idx_of[Cut(v, v)] for v in range(1, n)]
    if alpha >= m:  # every subset is m-thin
        yield 0, 0
        for mask, bit, present in _gray_subsets(m):
            cost += inst.costs[bit] if present else -inst.costs[bit]
            yield mask, cost
        return
    # interval DP over (lo, hi) pairs, shortest intervals first
    order = [(c.lo, c.hi, idx_of[c]) for c in sorted(cuts, key=lambda c: c.hi - c.lo)]

    def thin() -> bool:
        if cross[top] > alpha:
            return False
        for si in singles:
            if cross[si] > alpha:
                return False
        feas = [[False] * n for _ in range(n)]
        for lo, hi, ci in order:
            if cross[ci] > alpha:
                continue
            if lo == hi:
                feas[lo][hi] = True
            else:
                for mm in range(lo, hi):
                    if feas[lo][mm] and feas[mm + 1][hi]:
                        feas[lo][hi] = True
                        break
        return feas[1][n - 1]

    yield 0, 0
    for mask, bit, present in _gray_subsets(m):
        step = 1 if present else -1
        cost += step * inst.costs[bit]
        for ci in geo.cover_cuts[bit]:
            cross[ci] += step
        if thin():
            yield mask, cost


def exact_best_component(
    inst: RootedRingInstance,
    base: Sequence[DirectedLink],
    ctilde: Mapping[DirectedLink, int] | None,
    alpha: int,
    budget: OracleBudget | None = None,
) -> tuple[frozenset[int], int]:
    """Maximize ctilde(Drop(K)) - c(K) over all alpha-thin subsets, brute force."""
    budget = budget or OracleBudget.from_env()
    start = _check_budget(inst, budget)
    geo = _geometry(inst)
    resp = responsibilities(inst, base)
    ct = {dl: (dl.cost if ctilde is None else ctilde.get(dl, 0)) for dl in base}
    resp_masks = []
    for dl in base:
        mask = 0
        for cut in resp[dl]:
            mask |= 1 << geo.cut_index[cut]
        resp_masks.append((mask, ct[dl]))
    cover = geo.cover_mask
    best: Optional[tuple[int, int, int]] = None  # (value, popcount, mask)
    for mask, cost in _alpha_thin_masks(inst, alpha, budget):
        covered = 0
        sel = mask
        while sel:
            low = sel & -sel
            covered |= cover[low.bit_length() - 1]
            sel ^= low
        value = -cost
        for rmask, gain in resp_masks:
            if gain and rmask & ~covered == 0:
                value += gain
        key = (value, -bin(mask).count("1"), -mask)
        if best is None or key > best:
            best = key
        if mask % 4096 == 0 and _deadline_hit(start, budget):
            raise BudgetExceededError("oracle timeout")
    assert best is not None
    value = best[0]
    mask = -best[2]
    return frozenset(i for i in range(len(inst.links)) if mask >> i & 1), value


def exact_min_ratio(
    inst: RootedRingInstance,
    base: Sequence[DirectedLink],
    fsub: Collection[DirectedLink],
    alpha: int,
    budget: OracleBudget | None = None,
) -> Fraction:
    """Exact min of c(K)/c(Drop(K) cap fsub) over alpha-thin K (0/0 = 1)."""
    budget = budget or OracleBudget.from_env()
    _check_budget(inst, budget)
    geo = _geometry(inst)
    resp = responsibilities(inst, base)
    fsub_set = set(fsub)
    resp_masks = []
    for dl in base:
        if dl not in fsub_set:
            continue
        mask = 0
        for cut in resp[dl]:
            mask |= 1 << geo.cut_index[cut]
        resp_masks.append((mask, dl.cost))
    cover = geo.cover_mask
    best = Fraction(1)  # K = empty set scores 0/0 = 1
    for mask, cost in _alpha_thin_masks(inst, alpha, budget):
        covered = 0
        sel = mask
        while sel:
            low = sel & -sel
            covered |= cover[low.bit_length() - 1]
            sel ^= low
        gain = sum(g for rmask, g in resp_masks if rmask & ~covered == 0)
        if gain == 0:
            ratio = Fraction(1) if cost == 0 else None
        else:
            ratio = Fraction(cost, gain)
        if ratio is not None and ratio < best:
            best = ratio
    return best
