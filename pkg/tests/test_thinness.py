import random

import pytest

from ringforge import Cut, is_alpha_c_thin, is_alpha_thin, make_instance
from ringforge.model import covers

from conftest import random_instance


def test_single_link_is_one_thin(r3):
    ok, family = is_alpha_thin(r3, [0], 1)
    assert ok
    family.validate()


def test_empty_set_thin(r3):
    for alpha in (1, 2, 5):
        ok, family = is_alpha_thin(r3, [], alpha)
        assert ok
        family.validate()


def test_three_thin_five_link_set():
    # 11-vertex ring with the five-link set certified 3-thin in the figure
    inst = make_instance(11, [(0, 4), (3, 7), (5, 9), (8, 10), (1, 8)], [1] * 5)
    ok, family = is_alpha_thin(inst, range(5), 3)
    assert ok
    family.validate()
    for cut in family.cuts:
        assert sum(1 for l in inst.links if covers(l, cut)) <= 3


def test_alpha_c_thin_full_interval_matches(r3):
    full = Cut(1, r3.n - 1)
    for alpha in (1, 2, 3):
        assert is_alpha_c_thin(r3, [1, 2], alpha, full)[0] == is_alpha_thin(r3, [1, 2], alpha)[0]


def test_alpha_c_thin_singleton(r3):
    assert is_alpha_c_thin(r3, [1], 1, Cut(2, 2))[0]
    ok, _ = is_alpha_c_thin(r3, [1, 0], 2, Cut(2, 2))
    assert ok


def test_alpha_c_thin_r3_example(r3):
    ok, family = is_alpha_c_thin(r3, [1], 1, Cut(1, 2))
    assert ok
    assert set(family.cuts) == {Cut(1, 1), Cut(2, 2), Cut(1, 2)}


def test_alpha_c_thin_requires_endpoint_in_ground(r3):
    with pytest.raises(ValueError):
        is_alpha_c_thin(r3, [2], 1, Cut(2, 2))  # c={0,1} misses {2}


def test_monotone_in_alpha_and_subsets():
    rng = random.Random(41)
    for _ in range(25):
        inst = random_instance(rng, max_n=7, max_m=9)
        m = len(inst.links)
        ids = rng.sample(range(m), rng.randint(0, m))
        for alpha in (1, 2, 3):
            thin, _ = is_alpha_thin(inst, ids, alpha)
            if thin:
                assert is_alpha_thin(inst, ids, alpha + 1)[0]
                sub = rng.sample(ids, rng.randint(0, len(ids)))
                assert is_alpha_thin(inst, sub, alpha)[0]


def _all_maximal_families(lo, hi):
    if lo == hi:
        yield [Cut(lo, lo)]
        return
    for m in range(lo, hi):
        for left in _all_maximal_families(lo, m):
            for right in _all_maximal_families(m + 1, hi):
                yield left + right + [Cut(lo, hi)]


def test_dp_agrees_with_family_enumeration():
    rng = random.Random(43)
    for _ in range(15):
        inst = random_instance(rng, max_n=7, max_m=8)
        m = len(inst.links)
        ids = rng.sample(range(m), rng.randint(0, m))
        for alpha in (1, 2, 3):
            expected = any(
                all(sum(1 for i in ids if covers(inst.links[i], c)) <= alpha for c in fam)
                for fam in _all_maximal_families(1, inst.n - 1)
            )
            got, family = is_alpha_thin(inst, ids, alpha)
            assert got == expected
            if got:
                family.validate()
                for cut in family.cuts:
                    assert sum(1 for i in ids if covers(inst.links[i], cut)) <= alpha


def test_witness_family_is_maximal_laminar():
    rng = random.Random(47)
    for _ in range(20):
        inst = random_instance(rng, max_n=8, max_m=10)
        m = len(inst.links)
        ids = rng.sample(range(m), rng.randint(0, m))
        ok, family = is_alpha_thin(inst, ids, 4)
        if ok:
            family.validate()
            assert len(family.cuts) == 2 * (inst.n - 1) - 1
