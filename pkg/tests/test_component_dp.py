import random
from fractions import Fraction

import pytest

from ringforge import (
    Cut,
    DirectedLink,
    Pattern,
    compatible,
    dp_max_realizers,
    exact_best_component,
    exact_min_ratio,
    find_best_drop_component,
    find_min_ratio_component,
    make_instance,
    make_non_shortenable,
    merge,
    min_cost_directed_solution,
    pattern_objective,
    pattern_of,
    realizes,
    u_set,
    uniform_overlay,
)
from ringforge.component_dp import _DpContext

from conftest import random_directed_solution, random_instance

R3_BASE = (DirectedLink(0, 1, 2, 1), DirectedLink(1, 2, 1, 1))


def test_pattern_objective_examples(r3):
    overlay = uniform_overlay(R3_BASE)
    assert pattern_objective(r3, R3_BASE, overlay, [], Cut(1, 2)) == 0
    assert pattern_objective(r3, R3_BASE, overlay, [1], Cut(1, 2)) == 0
    assert pattern_objective(r3, R3_BASE, overlay, [1, 2], Cut(1, 2)) == 0


def test_realizes_empty(r3):
    empty = Pattern(Cut(1, 2), ())
    assert realizes(r3, R3_BASE, [], empty)
    assert not realizes(r3, R3_BASE, [1], Pattern(Cut(1, 1), ()))


def test_pattern_with_interior_link(r3):
    # b={1,2} does not cross {1,2}, so the pattern has an empty boundary
    pattern = pattern_of(r3, R3_BASE, [1], Cut(1, 2))
    assert pattern == Pattern(Cut(1, 2), ())
    assert realizes(r3, R3_BASE, [1], pattern)


def test_pattern_lca_may_leave_the_cut(r3):
    # c={0,1} over C={1}: the component lca is the root, outside C
    pattern = pattern_of(r3, R3_BASE, [2], Cut(1, 1))
    assert pattern.parts == (((2,), 0, 1),)


def test_compatible_and_merge_empty(r3):
    q1 = Pattern(Cut(1, 1), ())
    q2 = Pattern(Cut(2, 2), ())
    assert compatible(r3, q1, q2, 1)
    assert not compatible(r3, q1, Pattern(Cut(1, 1), ()), 3)
    merged = merge(r3, R3_BASE, q1, q2)
    assert merged == Pattern(Cut(1, 2), ())
    assert u_set(r3, R3_BASE, q1, q2) == set()


def test_compatible_boundary_exchange(r3):
    q1 = pattern_of(r3, R3_BASE, [1], Cut(1, 1))  # b crosses {1}
    q2 = pattern_of(r3, R3_BASE, [1], Cut(2, 2))  # b crosses {2}
    assert compatible(r3, q1, q2, 3)
    merged = merge(r3, R3_BASE, q1, q2)
    assert merged == pattern_of(r3, R3_BASE, [1], Cut(1, 2))
    # dropping the shared-link pattern from one side breaks the exchange
    assert not compatible(r3, Pattern(Cut(1, 1), ()), q2, 3)


def test_merge_of_realizers_realizes_merger():
    rng = random.Random(53)
    done = 0
    while done < 60:
        inst = random_instance(rng, max_n=7, max_m=8)
        base = make_non_shortenable(inst, random_directed_solution(inst, rng))
        n = inst.n
        mid = rng.randint(1, n - 2)
        c1, c2 = Cut(1, mid), Cut(mid + 1, n - 1)
        pool1 = [l.id for l in inst.links if c1.contains(l.u) or c1.contains(l.v)]
        pool2 = [l.id for l in inst.links if c2.contains(l.u) or c2.contains(l.v)]
        s1 = set(rng.sample(pool1, rng.randint(0, len(pool1))))
        s2 = set(rng.sample(pool2, rng.randint(0, len(pool2))))
        # realizers of compatible patterns must share the cross-split links
        split = {
            i
            for i in s1 | s2
            if (c1.contains(inst.links[i].u) or c1.contains(inst.links[i].v))
            and (c2.contains(inst.links[i].u) or c2.contains(inst.links[i].v))
            and c1.contains(inst.links[i].u) != c1.contains(inst.links[i].v)
        }
        s1 |= split
        s2 |= {i for i in split if c2.contains(inst.links[i].u) or c2.contains(inst.links[i].v)}
        q1 = pattern_of(inst, base, s1, c1)
        q2 = pattern_of(inst, base, s2, c2)
        if not compatible(inst, q1, q2, len(inst.links)):
            continue
        done += 1
        merged = merge(inst, base, q1, q2)
        assert realizes(inst, base, s1 | s2, merged)
        # pi-identity, exact integers
        overlay = uniform_overlay(base)
        lhs = pattern_objective(inst, base, overlay, s1 | s2, merged.cut)
        shared = sum(inst.costs[i] for i in q1.boundary & q2.boundary)
        ct = {dl.head: overlay[dl] for dl in base}
        credit = sum(ct.get(u, 0) for u in u_set(inst, base, q1, q2))
        rhs = (
            pattern_objective(inst, base, overlay, s1, c1)
            + pattern_objective(inst, base, overlay, s2, c2)
            + shared
            + credit
        )
        assert lhs == rhs


def test_dp_table_r3(r3):
    table = dp_max_realizers(r3, R3_BASE, uniform_overlay(R3_BASE), 3)
    full = {p: e for p, e in table.items() if p.cut == Cut(1, 2)}
    best = max(full.values(), key=lambda e: (e.value, tuple(sorted(e.realizer)) == ()))
    assert best.value == 0
    assert min(
        (e for e in full.values() if e.value == 0), key=lambda e: sorted(e.realizer)
    ).realizer == frozenset()


def test_dp_drop_value_example():
    inst = make_instance(3, [(1, 2), (0, 1)], [1, 1])
    base = make_non_shortenable(inst, min_cost_directed_solution(inst))
    overlay = {dl: (5 if dl.head == 2 else 0) for dl in base}
    component, value = find_best_drop_component(inst, base, overlay, 2)
    assert value == 4
    assert component == frozenset({0})


def test_find_best_zero_overlay(r3):
    overlay = {dl: 0 for dl in R3_BASE}
    component, value = find_best_drop_component(r3, R3_BASE, overlay, 3)
    assert (component, value) == (frozenset(), 0)


def test_find_best_value_nonnegative():
    rng = random.Random(59)
    for _ in range(10):
        inst = random_instance(rng, max_n=6, max_m=7)
        base = make_non_shortenable(inst, min_cost_directed_solution(inst))
        overlay = {dl: rng.randint(0, 8) for dl in base}
        _, value = find_best_drop_component(inst, base, overlay, 2)
        assert value >= 0


def test_min_ratio_single_shadow(r3):
    fsub = [R3_BASE[1]]  # shadow of b
    component, ratio = find_min_ratio_component(r3, R3_BASE, fsub, 3)
    assert ratio <= 1
    assert component == frozenset({1})


def test_min_ratio_full(r3):
    component, ratio = find_min_ratio_component(r3, R3_BASE, R3_BASE, 3)
    assert ratio == 1
    assert component == frozenset({1})


def test_min_ratio_empty(r3):
    assert find_min_ratio_component(r3, R3_BASE, [], 3) == (frozenset(), Fraction(1))


def test_dp_matches_oracle_small():
    rng = random.Random(61)
    for trial in range(15):
        inst = random_instance(rng, max_n=6, max_m=8, max_cost=8)
        base = make_non_shortenable(inst, min_cost_directed_solution(inst))
        overlay = {dl: rng.randint(0, 8) for dl in base}
        alpha = 1 + trial % 3
        _, dp_value = find_best_drop_component(inst, base, overlay, alpha)
        _, oracle_value = exact_best_component(inst, base, overlay, alpha)
        assert dp_value == oracle_value


def test_ratio_matches_oracle_small():
    rng = random.Random(67)
    for trial in range(10):
        inst = random_instance(rng, max_n=6, max_m=7, max_cost=6)
        base = make_non_shortenable(inst, min_cost_directed_solution(inst))
        fsub = [dl for dl in base if rng.random() < 0.7]
        alpha = 1 + trial % 3
        _, ratio = find_min_ratio_component(inst, base, fsub, alpha)
        assert ratio == exact_min_ratio(inst, base, fsub, alpha)
        if fsub:
            assert ratio <= 1


def test_component_lca_outside_cut():
    # {4,6} has lca 5: its singleton-cut patterns carry a phi outside the cut,
    # and adding it drops both links out of vertex 5
    links = [(0, 1), (1, 2), (2, 3), (3, 7), (5, 7), (4, 5), (5, 6), (4, 6)]
    inst = make_instance(8, links, [1] * 8)
    base = tuple(
        DirectedLink(t, h, i, 1)
        for i, (t, h) in enumerate([(0, 1), (1, 2), (2, 3), (3, 7), (7, 5), (5, 4), (5, 6)])
    )
    pattern = pattern_of(inst, base, [7], Cut(4, 4))
    assert pattern.parts == (((7,), 5, 0),)
    overlay = {dl: 1 for dl in base}
    for alpha in (1, 2, 3):
        _, dp_value = find_best_drop_component(inst, base, overlay, alpha)
        _, oracle_value = exact_best_component(inst, base, overlay, alpha)
        assert dp_value == oracle_value == 1


def test_context_lca_table(r3):
    ctx = _DpContext(r3, R3_BASE)
    assert ctx.lca_table[1][2] == 1
    assert ctx.lca_table[0][2] == 0


def test_alpha_cap_warns_and_flags():
    from ringforge.thinness import ALPHA_CAP, effective_alpha

    assert effective_alpha(50, 5) == (5, False)  # clamp to |L| is lossless
    assert effective_alpha(50, ALPHA_CAP + 3) == (ALPHA_CAP, True)
    inst = make_instance(
        6, [(0, i % 5 + 1) for i in range(ALPHA_CAP + 2)], [1] * (ALPHA_CAP + 2)
    )
    base = make_non_shortenable(inst, min_cost_directed_solution(inst))
    with pytest.warns(UserWarning, match="alpha capped"):
        find_best_drop_component(inst, base, uniform_overlay(base), 64)


def test_dp_table_reaches_every_realizable_full_pattern():
    # any alpha-thin set's full-cut pattern must appear with at least its value
    from ringforge import Cut, is_alpha_thin

    rng = random.Random(71)
    checked = 0
    while checked < 40:
        inst = random_instance(rng, max_n=6, max_m=7, max_cost=8)
        base = make_non_shortenable(inst, min_cost_directed_solution(inst))
        m = len(inst.links)
        ids = set(rng.sample(range(m), rng.randint(0, m)))
        alpha = rng.randint(1, 3)
        if not is_alpha_thin(inst, ids, alpha)[0]:
            continue
        checked += 1
        overlay = {dl: rng.randint(0, 8) for dl in base}
        full = Cut(1, inst.n - 1)
        pattern = pattern_of(inst, base, ids, full)
        table = dp_max_realizers(inst, base, overlay, alpha)
        assert pattern in table
        assert table[pattern].value >= pattern_objective(inst, base, overlay, ids, full)


def test_min_cost_directed_matches_oracle_n7():
    from ringforge import exact_directed_opt

    rng = random.Random(73)
    for _ in range(10):
        inst = random_instance(rng, max_n=7, max_m=10)
        cost = sum(dl.cost for dl in min_cost_directed_solution(inst))
        _, oracle_cost = exact_directed_opt(inst)
        assert cost == oracle_cost
