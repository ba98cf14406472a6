"""End-to-end solvers: 2-approximation, relative greedy, and local search.

Greedy repeatedly adds the thin component with the best cost-to-drop ratio
against the remaining directed links of the starting 2-approximation; local
search keeps a full undirected solution whose links own witness sets of at
most two surviving shadows, and trades components against the potential
Phi = sum 1.5*c(f) over two-witness links + sum c(f) over one-witness links.
All potential arithmetic is carried at twice scale so every comparison is an
integer or exact rational one.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InfeasibleInstanceError
from .model import RootedRingInstance, is_feasible, is_wrap_solution, enumerate_cuts
from .directed import (
    Arborescence,
    DirectedLink,
    _shorten_pass,
    is_shadow,
    make_non_shortenable,
    min_cost_directed_solution,
    verify_structure,
)
from .dropcalc import drop_by_characterization
from .component_dp import find_best_drop_component, find_min_ratio_component
from .thinness import effective_alpha


@dataclass
class IterationRecord:
    component: tuple[int, ...]
    component_cost: int
    drop_cost: int
    phi2: Optional[int] = None  # 2*Phi after the step (local search only)
    ratio: Optional[Fraction] = None  # chosen ratio (greedy only)


@dataclass
class SolveReport:
    algorithm: str
    solution: tuple[int, ...]
    cost: int
    eps: Optional[Fraction] = None
    iterations: int = 0
    alpha: Optional[int] = None
    alpha_capped: bool = False
    initial_cost: Optional[int] = None
    history: list[IterationRecord] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "algorithm": self.algorithm,
            "solution": list(self.solution),
            "cost": self.cost,
            "eps": str(self.eps) if self.eps is not None else None,
            "iterations": self.iterations,
            "alpha": self.alpha,
            "alpha_capped": self.alpha_capped,
            "initial_cost": self.initial_cost,
        }


@dataclass
class MixedState:
    """Local-search state: solution links, witness sets, and their union."""

    solution: set[int]
    witnesses: dict[int, list[DirectedLink]]

    def flat(self) -> list[DirectedLink]:
        return [dl for f in sorted(self.witnesses) for dl in self.witnesses[f]]

    def check(self, inst: RootedRingInstance) -> None:
        """Witness discipline: ownership, sizes, structure, and feasibility."""
        assert set(self.witnesses) == self.solution
        for f, wits in self.witnesses.items():
            assert 1 <= len(wits) <= 2, f"witness set of {f} has size {len(wits)}"
            for dl in wits:
                assert dl.origin == f
                assert is_shadow(inst.links[f], dl.tail, dl.head)
        links = self.flat()
        assert verify_structure(inst, links).ok
        assert is_wrap_solution(inst, self.solution)


def _as_eps(eps) -> Fraction:
    if isinstance(eps, float):
        eps = str(eps)
    value = Fraction(eps)
    if value <= 0:
        raise ValueError(f"eps must be positive, got {value}")
    return value


def two_approx(inst: RootedRingInstance) -> SolveReport:
    """Origins of the non-shortenable minimum-cost directed solution."""
    if not is_feasible(inst):
        raise InfeasibleInstanceError("instance has an uncoverable 2-cut")
    directed = make_non_shortenable(inst, min_cost_directed_solution(inst))
    ids = sorted({dl.origin for dl in directed})
    return SolveReport("two-approx", tuple(ids), inst.cost_of(ids))


def relative_greedy(inst: RootedRingInstance, eps) -> SolveReport:
    """Iteratively add the min-ratio thin component and drop what it pays for."""
    eps = _as_eps(eps)
    if not is_feasible(inst):
        raise InfeasibleInstanceError("instance has an uncoverable 2-cut")
    alpha_req = 4 * math.ceil(2 / eps)
    alpha, capped = effective_alpha(alpha_req, len(inst.links))
    if capped:
        warnings.warn(
            f"thinness {alpha_req} capped at {alpha}: the greedy guarantee is void"
        )
    base = make_non_shortenable(inst, min_cost_directed_solution(inst))
    remaining = list(base)
    chosen: set[int] = set()
    history: list[IterationRecord] = []
    while remaining:
        component, ratio = find_min_ratio_component(inst, base, remaining, alpha)
        dropped = drop_by_characterization(inst, base, component)
        newly = [dl for dl in remaining if dl in dropped]
        assert newly, "ratio minimization must return a component with a nonempty drop"
        chosen |= component
        remaining = [dl for dl in remaining if dl not in dropped]
        history.append(
            IterationRecord(
                tuple(sorted(component)),
                inst.cost_of(component),
                sum(dl.cost for dl in newly),
                ratio=ratio,
            )
        )
        # mixed solution invariant: remaining directed links plus chosen links
        _assert_mixed_solution(inst, remaining, chosen)
    ids = tuple(sorted(chosen))
    return SolveReport(
        "greedy",
        ids,
        inst.cost_of(ids),
        eps=eps,
        iterations=len(history),
        alpha=alpha,
        alpha_capped=capped,
        initial_cost=sum(dl.cost for dl in base),
        history=history,
    )


def _assert_mixed_solution(
    inst: RootedRingInstance, directed: Sequence[DirectedLink], undirected: set[int]
) -> None:
    links = [inst.links[i] for i in undirected]
    for cut in enumerate_cuts(inst):
        lo, hi = cut
        if any(lo <= dl.head <= hi and not (lo <= dl.tail <= hi) for dl in directed):
            continue
        if any((lo <= l.u <= hi) != (lo <= l.v <= hi) for l in links):
            continue
        raise AssertionError(f"mixed solution leaves cut {cut} uncovered")


def potential2(inst: RootedRingInstance, state: MixedState) -> int:
    """2*Phi: 3c(f) per two-witness link plus 2c(f) per one-witness link."""
    total = 0
    for f, wits in state.witnesses.items():
        total += 3 * inst.costs[f] if len(wits) == 2 else 2 * inst.costs[f]
    return total


def cbar2(inst: RootedRingInstance, state: MixedState, dl: DirectedLink) -> int:
    """2*cbar of a witness element: c(f) when f has two witnesses, else 2c(f)."""
    wits = state.witnesses.get(dl.origin)
    if not wits or dl not in wits:
        raise ValueError("directed link is not owned by any witness set")
    return inst.costs[dl.origin] if len(wits) == 2 else 2 * inst.costs[dl.origin]


def _initial_state(inst: RootedRingInstance, start: Sequence[int]) -> MixedState:
    """Bidirect the starting solution, shorten, and evict empty-witness links."""
    flat: list[DirectedLink] = []
    for f in sorted(start):
        link = inst.links[f]
        cost = inst.costs[f]
        flat.append(DirectedLink(link.u, link.v, f, cost))
        flat.append(DirectedLink(link.v, link.u, f, cost))
    kept = [dl for dl in _shorten_pass(inst, flat) if dl is not None]
    witnesses: dict[int, list[DirectedLink]] = {}
    for dl in kept:
        witnesses.setdefault(dl.origin, []).append(dl)
    return MixedState(set(witnesses), witnesses)


def _apply_step(
    inst: RootedRingInstance, state: MixedState, component: frozenset[int]
) -> tuple[MixedState, int]:
    """One local-search exchange; returns the new state and the drop's 2*cbar."""
    flat = state.flat()
    dropped = drop_by_characterization(inst, flat, component)
    gain2 = 0
    trimmed: dict[int, list[DirectedLink]] = {}
    for f, wits in state.witnesses.items():
        staying = [dl for dl in wits if dl not in dropped]
        gain2 += (len(wits) - len(staying)) * (
            inst.costs[f] if len(wits) == 2 else 2 * inst.costs[f]
        )
        if staying:
            trimmed[f] = staying
    for f in component:
        link = inst.links[f]
        cost = inst.costs[f]
        trimmed[f] = [
            DirectedLink(link.u, link.v, f, cost),
            DirectedLink(link.v, link.u, f, cost),
        ]
    order = sorted(trimmed)
    flat2 = [dl for f in order for dl in trimmed[f]]
    kept = [dl for dl in _shorten_pass(inst, flat2) if dl is not None]
    witnesses: dict[int, list[DirectedLink]] = {}
    for dl in kept:
        witnesses.setdefault(dl.origin, []).append(dl)
    return MixedState(set(witnesses), witnesses), gain2


def local_search(inst: RootedRingInstance, eps, start: Sequence[int] | None = None) -> SolveReport:
    """Exchange thin components while the potential falls fast enough.

    Each iteration maximizes cbar(Drop(K)) - 1.5 c(K) via the pattern DP run
    with overlay 2*cbar and link costs 3c (both integral), executes the step
    on a trial copy, and keeps it only when Phi shrinks by the required
    (1 - eps/(6n)) factor; otherwise the pre-step solution is returned.
    """
    eps = _as_eps(eps)
    if eps > Fraction(1, 2):
        raise ValueError(f"local search requires eps <= 1/2, got {eps}")
    if not is_feasible(inst):
        raise InfeasibleInstanceError("instance has an uncoverable 2-cut")
    alpha_req = 4 * math.ceil(4 / eps)
    alpha, capped = effective_alpha(alpha_req, len(inst.links))
    if capped:
        warnings.warn(
            f"thinness {alpha_req} capped at {alpha}: the local search guarantee is void"
        )
    if start is None:
        start = range(len(inst.links))
    state = _initial_state(inst, start)
    state.check(inst)
    initial_cost = inst.cost_of(state.solution)
    n = inst.n
    history: list[IterationRecord] = []
    while True:
        phi2_before = potential2(inst, state)
        if phi2_before == 0:
            break
        flat = state.flat()
        overlay = {}
        for f, wits in state.witnesses.items():
            for dl in wits:
                overlay[dl] = inst.costs[f] if len(wits) == 2 else 2 * inst.costs[f]
        # objective scaling: ctilde = 2*cbar and 3c per link maximizes
        # 2*(cbar(Drop) - 1.5 c(K)) exactly
        scaled = RootedRingInstance(inst.n, inst.links, tuple(3 * c for c in inst.costs))
        component, value2 = find_best_drop_component(scaled, flat, overlay, alpha)
        trial, drop_gain2 = _apply_step(inst, state, component)
        trial.check(inst)
        phi2_after = potential2(inst, trial)
        decrease2 = phi2_before - phi2_after
        # Phi falls by at least cbar(Drop(K)) - 1.5 c(K), exactly in 2x units
        assert decrease2 >= drop_gain2 - 3 * inst.cost_of(component)
        assert decrease2 >= value2, "potential fell short of the chosen objective"
        # stop rule: keep iterating only while phi' <= (1 - eps/(6n)) phi
        p, q = eps.numerator, eps.denominator
        if phi2_after * 6 * n * q > phi2_before * (6 * n * q - p):
            break
        state = trial
        history.append(
            IterationRecord(
                tuple(sorted(component)),
                inst.cost_of(component),
                drop_gain2,
                phi2=phi2_after,
            )
        )
    ids = tuple(sorted(state.solution))
    return SolveReport(
        "local",
        ids,
        inst.cost_of(ids),
        eps=eps,
        iterations=len(history),
        alpha=alpha,
        alpha_capped=capped,
        initial_cost=initial_cost,
        history=history,
    )
