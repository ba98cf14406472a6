import random

import pytest

from ringforge import (
    CactusInstance,
    exact_opt,
    is_feasible,
    is_wcap_solution,
    load_cactus,
    map_solution_back,
    min_cut,
    save_cactus,
    unfold_cactus,
)
from ringforge.errors import FormatError

from conftest import random_cactus

TRIANGLE = ((0, 1), (1, 2), (2, 0))
TWO_TRIANGLES = ((0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2))


def test_single_cycle_unfolds_plainly():
    cactus = CactusInstance(5, ((0, 1), (1, 2), (2, 3), (3, 4), (4, 0)), ((0, 2),), (3,))
    ring, mapping = unfold_cactus(cactus)
    assert ring.n == 5
    assert mapping.added_link_ids == ()
    assert [(l.u, l.v) for l in ring.links] == [(0, 2)]


def test_two_triangles_unfold():
    cactus = CactusInstance(5, TWO_TRIANGLES, ((0, 3), (1, 4)), (2, 3))
    ring, mapping = unfold_cactus(cactus)
    assert ring.n == 6
    assert len(mapping.added_link_ids) == 1
    added = ring.links[mapping.added_link_ids[0]]
    # both endpoints are copies of the shared vertex 2
    assert mapping.ring_to_cactus[added.u] == mapping.ring_to_cactus[added.v] == 2
    assert ring.costs[added.id] == 0


def test_figure_cactus_unfolds_to_twelve():
    edges = (
        (0, 1), (1, 2), (2, 3), (3, 4), (4, 2), (2, 8),
        (8, 0), (8, 5), (5, 6), (6, 8), (2, 7), (7, 2),
    )
    cactus = CactusInstance(9, edges, ((1, 5),), (1,))
    ring, mapping = unfold_cactus(cactus)
    assert ring.n == 12
    assert len(mapping.added_link_ids) == 3
    assert all(ring.costs[i] == 0 for i in mapping.added_link_ids)


def test_map_solution_back_strips_added_links():
    cactus = CactusInstance(5, TWO_TRIANGLES, ((0, 3), (1, 4)), (2, 3))
    ring, mapping = unfold_cactus(cactus)
    full = set(range(len(ring.links)))
    back = map_solution_back(cactus, mapping, full)
    assert back == {0, 1}
    assert map_solution_back(cactus, mapping, {0}) == {0}


def test_min_cut_values():
    assert min_cut(3, list(TRIANGLE)) == 2
    assert min_cut(2, [(0, 1)]) == 1
    assert min_cut(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]) == 2


def test_is_wcap_solution_examples():
    triangle = CactusInstance(3, TRIANGLE, ((0, 1), (0, 2), (1, 2)), (1, 1, 1))
    assert not is_wcap_solution(triangle, [])
    # one chord leaves the opposite vertex at degree 2
    assert not is_wcap_solution(triangle, [0])
    assert is_wcap_solution(triangle, [0, 1, 2])
    two = CactusInstance(5, TWO_TRIANGLES, ((0, 3), (1, 4), (3, 1)), (1, 1, 1))
    assert is_wcap_solution(two, [0, 1])


def test_not_a_cactus():
    with pytest.raises(ValueError, match="non-cycle block"):
        CactusInstance(3, ((0, 1), (1, 2)), (), ())  # path: bridges
    with pytest.raises(ValueError, match="non-cycle block"):
        # K4: every edge lies in several cycles
        CactusInstance(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)), (), ())
    with pytest.raises(ValueError, match="not connected"):
        CactusInstance(6, TRIANGLE + ((3, 4), (4, 5), (5, 3)), (), ())


def test_parallel_edges_form_two_cycles():
    cactus = CactusInstance(2, ((0, 1), (0, 1)), (), ())
    assert min_cut(cactus.nv, cactus.edges) == 2


def test_cactus_file_round_trip():
    cactus = CactusInstance(5, TWO_TRIANGLES, ((0, 3), (1, 4)), (2, 3))
    assert load_cactus(save_cactus(cactus)) == cactus
    with pytest.raises(FormatError, match="line 2"):
        load_cactus("cactus 3\nedge 0\n")
    with pytest.raises(FormatError):
        load_cactus("cactus 3\nedge 0 1\nedge 1 2\n")  # not a cactus


def test_round_trip_solutions_random():
    rng = random.Random(103)
    done = 0
    while done < 10:
        cactus = random_cactus(rng, max_edges=8)
        ring, mapping = unfold_cactus(cactus)
        if not is_feasible(ring):
            continue
        done += 1
        solution, cost = exact_opt(ring)
        back = map_solution_back(cactus, mapping, solution)
        assert is_wcap_solution(cactus, back)
        assert sum(cactus.costs[i] for i in back) == cost
