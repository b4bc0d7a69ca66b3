import random

import pytest
from hypothesis import strategies as st

from fairloc.core import Instance


def build(pairs, weights):
    """Instance from (x, [groups]) pairs."""
    return Instance.build([x for x, _ in pairs], [g for _, g in pairs], weights)


@st.composite
def instances(draw, n_max=7, m_max=3, dyadic=True, weights=(1.0, 2.0, 3.0, 5.0)):
    n = draw(st.integers(1, n_max))
    m = draw(st.integers(1, m_max))
    if dyadic:
        xs = draw(st.lists(st.integers(-16, 16).map(lambda v: v / 4), min_size=n, max_size=n))
    else:
        xs = draw(st.lists(st.floats(-10, 10, allow_nan=False), min_size=n, max_size=n))
    groups = draw(st.lists(st.sets(st.integers(0, m - 1), min_size=1), min_size=n, max_size=n))
    groups = [set(g) for g in groups]
    for j in range(m):
        if not any(j in g for g in groups):
            groups[draw(st.integers(0, n - 1))].add(j)
    ws = draw(st.lists(st.sampled_from(weights), min_size=m, max_size=m))
    return Instance.build(xs, [sorted(g) for g in groups], ws)


def random_instances(seed, count, n_max=6, m_max=3, grid=21, weights=(1, 2, 5), n_min=1):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(n_min, n_max)
        m = rng.randint(1, m_max)
        xs = [rng.randrange(grid) / (grid - 1) if grid else rng.random() for _ in range(n)]
        gs = [{j for j in range(m) if rng.random() < 0.5} or {rng.randrange(m)} for _ in range(n)]
        for j in range(m):
            if not any(j in g for g in gs):
                gs[rng.randrange(n)].add(j)
        out.append(Instance.build(xs, [sorted(g) for g in gs], [rng.choice(weights) for _ in range(m)]))
    return out


@pytest.fixture
def endpoint_wtgc_n4():
    return build([(0, [0]), (0.5, [1]), (0.5, [1]), (1, [1])], [1, 2])


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
