import random

import pytest

from hiercut import (
    CoverageError,
    Criterion,
    CriterionKind,
    Partition,
    UndefinedInputError,
    build_graph,
    connected_components,
    detect,
    modularity,
    modularity_curve,
    parse_edge_list,
)
from hiercut.detect import DetectionConfig

from .conftest import random_connected_graph
from .oracles import oracle_modularity


def test_single_community_is_zero(karate):
    assert modularity(karate, Partition((0,) * karate.n)) == pytest.approx(0.0, abs=1e-15)


def test_two_disjoint_triangles():
    g = parse_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3")
    assert modularity(g, connected_components(g)) == pytest.approx(0.5)


def test_singleton_partition_is_negative(karate):
    p = Partition(tuple(range(karate.n)))
    expected = -sum((karate.degree(u) / (2 * karate.m)) ** 2 for u in range(karate.n))
    assert modularity(karate, p) == pytest.approx(expected)
    assert modularity(karate, p) < 0


def test_relabeling_invariance(karate):
    rng = random.Random(5)
    assignment = [rng.randrange(4) for _ in range(karate.n)]
    p1 = Partition.from_assignment(assignment)
    remap = {0: 17, 1: 3, 2: 99, 3: 42}
    p2 = Partition.from_assignment([remap[c] for c in assignment])
    assert modularity(karate, p1) == pytest.approx(modularity(karate, p2))


@pytest.mark.parametrize("seed", range(25))
def test_double_sum_oracle(seed):
    rng = random.Random(500 + seed)
    g = random_connected_graph(rng, rng.randint(2, 12))
    k = rng.randint(1, g.n)
    p = Partition.from_assignment([rng.randrange(k) for _ in range(g.n)])
    assert modularity(g, p) == pytest.approx(oracle_modularity(g, p.labels), abs=1e-9)


def test_coverage_error(karate):
    with pytest.raises(CoverageError):
        modularity(karate, Partition((0, 0)))


def test_edgeless_graph_rejected():
    g = build_graph(["a", "b"], [])
    with pytest.raises(UndefinedInputError):
        modularity(g, Partition((0, 1)))


def test_curve_two_triangles_bridge(two_triangles_bridge):
    d = detect(two_triangles_bridge, DetectionConfig(Criterion(CriterionKind.CN), k_max=4))
    report = modularity_curve(two_triangles_bridge, d, range(2, 5))
    assert report.best_k == 2
    # hand evaluation with m = 7: 6/7 - 2 * (7/14)^2
    assert report.best_q == pytest.approx(6 / 7 - 0.5)
    assert set(report.q_by_k) == {2, 3, 4}


def test_curve_values_in_range(karate):
    d = detect(karate, DetectionConfig(Criterion(CriterionKind.SO), k_max=10))
    report = modularity_curve(karate, d, range(2, 11))
    assert all(-1.0 <= q <= 1.0 for q in report.q_by_k.values())
    assert report.best_q == max(report.q_by_k.values())
