import random

import pytest

from ringforge import (
    CactusInstance,
    RootedRingInstance,
    enumerate_cuts,
    enters,
    make_instance,
    shadows,
)
from ringforge.cli import gen


@pytest.fixture
def r3() -> RootedRingInstance:
    # running example: a={0,2} cost 10, b={1,2} cost 1, c={0,1} cost 1
    return make_instance(3, [(0, 2), (1, 2), (0, 1)], [10, 1, 1])


def random_instance(rng: random.Random, max_n=7, max_m=12, max_cost=10) -> RootedRingInstance:
    n = rng.randint(3, max_n)
    least = max(2, (n + 1) // 2)  # fewer links are almost never feasible
    m = rng.randint(least, max(least, max_m))
    return gen(n, m, max_cost, rng.randrange(1 << 30))


def random_directed_solution(inst: RootedRingInstance, rng: random.Random):
    """A feasible directed link multiset: random shadows plus greedy repair."""
    pool = [dl for link in inst.links for dl in shadows(inst, link)]
    take = rng.randint(0, min(len(pool), 2 * inst.n))
    sol = rng.sample(pool, take)
    for cut in enumerate_cuts(inst):
        if not any(enters(dl, cut) for dl in sol):
            sol.append(rng.choice([dl for dl in pool if enters(dl, cut)]))
    return sol


def random_cactus(rng: random.Random, max_edges=8) -> CactusInstance:
    """Glue random cycles (length >= 2) onto a growing cactus."""
    length = rng.randint(3, 4)
    edges = [(i, (i + 1) % length) for i in range(length)]
    nv = length
    while len(edges) < max_edges:
        extra = rng.randint(2, min(4, max_edges - len(edges) + 1))
        if len(edges) + extra > max_edges:
            break
        at = rng.randrange(nv)
        cycle = [at] + [nv + i for i in range(extra - 1)]
        nv += extra - 1
        edges.extend((cycle[i], cycle[(i + 1) % extra]) for i in range(extra))
    m = rng.randint(1, 6)
    links = []
    costs = []
    for _ in range(m):
        u = rng.randrange(nv)
        v = rng.randrange(nv)
        while v == u:
            v = rng.randrange(nv)
        links.append((u, v))
        costs.append(rng.randint(0, 9))
    return CactusInstance(nv, tuple(edges), tuple(links), tuple(costs))
