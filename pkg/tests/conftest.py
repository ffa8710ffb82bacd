from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from matchkit.graph import Graph, WeightedInstance

settings.register_profile(
    "matchkit",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("matchkit")

SQUARE = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
SQUARE_W = (0, 1, 0, 1)
TRIANGLE = Graph(3, [(0, 1), (1, 2), (0, 2)])
# K4 weighted w(12)=1, w(34)=2, w(13)=3, w(24)=4, w(14)=5, w(23)=6
K4 = Graph(4, [(0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)])
K4_W = (1, 2, 3, 4, 5, 6)


@pytest.fixture
def square_instance():
    return WeightedInstance(SQUARE, SQUARE_W, "ewpm", 2)


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 8, even: bool = False, p=None):
    n = draw(st.integers(min_n, max_n))
    if even and n % 2:
        n = n + 1 if n < max_n else n - 1
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, tuple(p for p, keep in zip(pairs, mask) if keep))


@st.composite
def weighted_graphs(draw, min_n: int = 1, max_n: int = 8, lo: int = -5, hi: int = 8, even: bool = False):
    g = draw(graphs(min_n, max_n, even))
    w = tuple(draw(st.lists(st.integers(lo, hi), min_size=g.m, max_size=g.m)))
    return g, w


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph(n, tuple(e for e in itertools.combinations(range(n), 2) if rng.random() < p))


def random_bipartite(rng: random.Random, n: int, p: float) -> Graph:
    half = n // 2
    return Graph(n, tuple((u, v) for u in range(half) for v in range(half, n) if rng.random() < p))


def sparse_graph(rng: random.Random, n: int, extra: int) -> Graph:
    """Connected-ish sparse graph: a random spanning tree plus ``extra`` chords."""
    order = list(range(n))
    rng.shuffle(order)
    edges = {tuple(sorted((order[i], order[rng.randrange(i)]))) for i in range(1, n)}
    pairs = [p for p in itertools.combinations(range(n), 2) if p not in edges]
    edges.update(rng.sample(pairs, min(extra, len(pairs))))
    return Graph(n, tuple(sorted(edges)))
