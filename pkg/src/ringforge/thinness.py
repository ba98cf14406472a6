"""Thinness certificates via maximal laminar families of 2-cuts.

A link set is alpha-thin when some maximal laminar family of 2-cuts has
every member crossed by at most alpha of its links. Maximal families over an
interval are exactly the binary split trees: all singletons, the full
interval, and a two-child split of every non-singleton member.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .model import Cut, RootedRingInstance, _geometry

# The pattern DP is exponential in alpha; requests beyond the cap are clamped
# with a warning (after the lossless clamp to |L|, since any set is |L|-thin).
ALPHA_CAP = 8


@dataclass(frozen=True)
class LaminarFamily:
    """Maximal laminar family over a ground interval, stored as sorted cuts."""

    ground: Cut
    cuts: tuple[Cut, ...]

    def validate(self) -> None:
        """Check the three maximality conditions and pairwise laminarity."""
        members = set(self.cuts)
        lo, hi = self.ground
        for v in range(lo, hi + 1):
            if Cut(v, v) not in members:
                raise ValueError(f"missing singleton {{{v}}}")
        if self.ground not in members:
            raise ValueError("missing ground interval")
        for cut in members:
            if not (lo <= cut.lo <= cut.hi <= hi):
                raise ValueError(f"cut {cut} leaves the ground interval")
            if cut.lo < cut.hi:
                if not any(
                    Cut(cut.lo, m) in members and Cut(m + 1, cut.hi) in members
                    for m in range(cut.lo, cut.hi)
                ):
                    raise ValueError(f"cut {cut} has no two-child split")
        cl = sorted(members)
        for i, a in enumerate(cl):
            for b in cl[i + 1:]:
                disjoint = a.hi < b.lo or b.hi < a.lo
                nested = (a.lo <= b.lo and b.hi <= a.hi) or (b.lo <= a.lo and a.hi <= b.hi)
                if not (disjoint or nested):
                    raise ValueError(f"cuts {a} and {b} cross")


def _crossing_counts(inst: RootedRingInstance, link_ids: Iterable[int]) -> dict[Cut, int]:
    geo = _geometry(inst)
    counts = {c: 0 for c in geo.cuts}
    for i in link_ids:
        for ci in geo.cover_cuts[i]:
            counts[geo.cuts[ci]] += 1
    return counts


def _feasible_family(
    inst: RootedRingInstance, link_ids: Iterable[int], alpha: int, ground: Cut
) -> Optional[LaminarFamily]:
    """Interval DP: ground splits recursively with every piece crossed <= alpha.

    feasible(i, j) iff |delta_K([i, j])| <= alpha and (i == j or some split m
    has both halves feasible); the witness uses the smallest feasible split.
    """
    counts = _crossing_counts(inst, link_ids)
    lo, hi = ground
    feasible: dict[tuple[int, int], bool] = {}
    split: dict[tuple[int, int], int] = {}
    for length in range(1, hi - lo + 2):
        for i in range(lo, hi - length + 2):
            j = i + length - 1
            if counts[Cut(i, j)] > alpha:
                feasible[(i, j)] = False
                continue
            if i == j:
                feasible[(i, j)] = True
                continue
            ok = False
            for m in range(i, j):
                if feasible[(i, m)] and feasible[(m + 1, j)]:
                    ok, split[(i, j)] = True, m
                    break
            feasible[(i, j)] = ok
    if not feasible[(lo, hi)]:
        return None
    cuts = []
    stack = [(lo, hi)]
    while stack:
        i, j = stack.pop()
        cuts.append(Cut(i, j))
        if i < j:
            m = split[(i, j)]
            stack.append((i, m))
            stack.append((m + 1, j))
    return LaminarFamily(ground, tuple(sorted(cuts)))


def is_alpha_thin(
    inst: RootedRingInstance, link_ids: Iterable[int], alpha: int
) -> tuple[bool, Optional[LaminarFamily]]:
    """Whether some maximal laminar family certifies thinness; returns the witness."""
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    family = _feasible_family(inst, tuple(link_ids), alpha, Cut(1, inst.n - 1))
    return (family is not None), family


def is_alpha_c_thin(
    inst: RootedRingInstance, link_ids: Iterable[int], alpha: int, ground: Cut
) -> tuple[bool, Optional[LaminarFamily]]:
    """Thinness over a ground cut C; links must each touch C."""
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    ids = tuple(link_ids)
    for i in ids:
        link = inst.links[i]
        if not (ground.contains(link.u) or ground.contains(link.v)):
            raise ValueError(f"link {i} has no endpoint in {ground}")
    family = _feasible_family(inst, ids, alpha, ground)
    return (family is not None), family


def effective_alpha(requested: int, link_count: int) -> tuple[int, bool]:
    """Clamp alpha to |L| (lossless: every set is |L|-thin), then to the cap.

    Returns (alpha to use, capped) where capped means the lossy cut-off was
    hit and guarantees derived from the requested alpha are void.
    """
    lossless = min(requested, max(1, link_count))
    if lossless > ALPHA_CAP:
        return ALPHA_CAP, True
    return lossless, False
