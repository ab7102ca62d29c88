from __future__ import annotations

import random
from pathlib import Path

import pytest

from hiercut import build_graph, load_graph, parse_edge_list

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
DATASET_NAMES = ("adjnoun", "dolphins", "football", "karate", "lesmis", "polbooks")


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def datasets():
    return {name: load_graph(DATA_DIR / f"{name}.gml") for name in DATASET_NAMES}


@pytest.fixture(scope="session")
def karate(datasets):
    return datasets["karate"]


@pytest.fixture(scope="session")
def football(datasets):
    return datasets["football"]


@pytest.fixture(scope="session")
def dolphins(datasets):
    return datasets["dolphins"]


@pytest.fixture
def triangle():
    return parse_edge_list("0 1\n1 2\n2 0")


@pytest.fixture
def path3():
    return parse_edge_list("0 1\n1 2")


@pytest.fixture
def path4():
    return parse_edge_list("0 1\n1 2\n2 3")


@pytest.fixture
def two_triangles_bridge():
    # 0-1-2 and 3-4-5 triangles joined by the 2-3 bridge
    return parse_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n2 3")


def random_connected_graph(rng: random.Random, n: int, extra_edge_prob: float = 0.3):
    """Random spanning tree plus extra edges; always connected."""
    pairs = set()
    nodes = list(range(n))
    rng.shuffle(nodes)
    for i in range(1, n):
        u = nodes[rng.randrange(i)]
        v = nodes[i]
        pairs.add((min(u, v), max(u, v)))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in pairs and rng.random() < extra_edge_prob:
                pairs.add((u, v))
    return build_graph([str(i) for i in range(n)], sorted(pairs))
