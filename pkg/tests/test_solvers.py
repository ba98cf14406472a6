import math
import random
from fractions import Fraction

import pytest

from ringforge import (
    DirectedLink,
    exact_opt,
    is_wrap_solution,
    local_search,
    make_instance,
    relative_greedy,
    two_approx,
)
from ringforge.errors import InfeasibleInstanceError
from ringforge.solvers import MixedState, cbar2, potential2, _initial_state

from conftest import random_instance


def test_two_approx_r3(r3):
    report = two_approx(r3)
    assert report.solution == (1, 2)
    assert report.cost == 2


def test_two_approx_infeasible():
    with pytest.raises(InfeasibleInstanceError):
        two_approx(make_instance(3, [(1, 2)], [1]))


def test_two_approx_bound_random():
    rng = random.Random(71)
    for _ in range(15):
        inst = random_instance(rng, max_n=6, max_m=8)
        report = two_approx(inst)
        _, opt = exact_opt(inst)
        assert is_wrap_solution(inst, report.solution)
        assert report.cost <= 2 * opt


def test_greedy_r3(r3):
    report = relative_greedy(r3, Fraction(1, 2))
    assert report.cost == 2
    assert report.iterations <= r3.n - 1
    assert is_wrap_solution(r3, report.solution)


def test_greedy_never_beats_directed_seed():
    rng = random.Random(73)
    for _ in range(10):
        inst = random_instance(rng, max_n=6, max_m=6, max_cost=6)
        report = relative_greedy(inst, Fraction(1, 4))
        assert report.cost <= report.initial_cost
        assert report.iterations <= inst.n - 1
        assert all(rec.ratio <= 1 for rec in report.history)


def test_greedy_eps_validation(r3):
    with pytest.raises(ValueError):
        relative_greedy(r3, 0)


def test_local_search_r3(r3):
    report = local_search(r3, Fraction(1, 2))
    assert report.cost == 2
    assert is_wrap_solution(r3, report.solution)


def test_local_search_eps_range(r3):
    with pytest.raises(ValueError):
        local_search(r3, Fraction(3, 4))
    with pytest.raises(ValueError):
        local_search(r3, -1)


def test_local_search_bound_random():
    rng = random.Random(79)
    for _ in range(10):
        inst = random_instance(rng, max_n=6, max_m=6, max_cost=6)
        report = local_search(inst, Fraction(1, 2))
        _, opt = exact_opt(inst)
        assert report.cost <= 2 * opt
        if opt:
            bound = math.ceil(math.log(1.5 * report.initial_cost / opt) * 6 * inst.n * 2)
            assert report.iterations <= max(bound, 0)


def test_potential_and_cbar(r3):
    state = _initial_state(r3, [1, 2])
    # witnesses after shortening bidirected {b, c}
    assert state.solution == {1, 2}
    phi2 = potential2(r3, state)
    cost = r3.cost_of(state.solution)
    assert 2 * cost <= phi2 <= 3 * cost
    total2 = 0
    for f, wits in state.witnesses.items():
        for dl in wits:
            total2 += cbar2(r3, state, dl)
    assert total2 == 2 * cost  # cbar sums to c(F) over all witnesses


def test_potential_two_witness_state(r3):
    link = r3.links[1]
    wits = [DirectedLink(1, 2, 1, 1), DirectedLink(2, 1, 1, 1)]
    state = MixedState({1}, {1: wits})
    assert potential2(r3, state) == 3 * r3.costs[1]
    assert cbar2(r3, state, wits[0]) == r3.costs[1]
    solo = MixedState({1}, {1: wits[:1]})
    assert potential2(r3, solo) == 2 * r3.costs[1]
    assert cbar2(r3, solo, wits[0]) == 2 * r3.costs[1]
    with pytest.raises(ValueError):
        cbar2(r3, solo, wits[1])


def test_local_search_keeps_witness_discipline():
    rng = random.Random(83)
    for _ in range(8):
        inst = random_instance(rng, max_n=6, max_m=6, max_cost=5)
        report = local_search(inst, Fraction(1, 2))
        assert is_wrap_solution(inst, report.solution)
        assert report.cost == inst.cost_of(report.solution)
