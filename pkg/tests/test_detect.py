import json
import random

import pytest

from hiercut import (
    ConfigError,
    Criterion,
    CriterionKind,
    INFINITE,
    UnreachableCutError,
    build_graph,
    connected_components,
    detect,
    parse_edge_list,
)
from hiercut.detect import DetectionConfig, WorkingGraph

from .conftest import random_connected_graph
from .oracles import oracle_edge_betweenness

BN = Criterion(CriterionKind.BETWEENNESS)


def _oracle_gn_removals(g):
    """Edge-removal sequence driven by the brute-force betweenness oracle."""
    wg = WorkingGraph(g)
    sequence = []
    while wg.live_count:
        scores = oracle_edge_betweenness(wg)
        best = max(scores.values())
        eid = min(e for e, s in scores.items() if s == best)
        sequence.append(eid)
        wg.remove(eid)
    return sequence


def test_path4_first_removal_is_central_edge(path4):
    d = detect(path4, DetectionConfig(BN, k_max=2))
    first = d.steps[0]
    assert {first.u, first.v} == {1, 2}
    assert first.score == pytest.approx(4.0)
    assert first.split
    assert d.cut(2).communities() == {0: (0, 1), 2: (2, 3)}


@pytest.mark.parametrize("kind", [CriterionKind.CN, CriterionKind.JA, CriterionKind.SO,
                                  CriterionKind.SA, CriterionKind.HP, CriterionKind.HD,
                                  CriterionKind.LLHN, CriterionKind.AA, CriterionKind.RA])
def test_bridge_is_removed_first(two_triangles_bridge, kind):
    d = detect(two_triangles_bridge, DetectionConfig(Criterion(kind), k_max=2))
    first = d.steps[0]
    assert {first.u, first.v} == {2, 3}
    assert first.split
    assert d.cut(2).communities() == {0: (0, 1, 2), 3: (3, 4, 5)}


def test_karate_k2_matches_oracle_driven_loop(karate):
    d = detect(karate, DetectionConfig(BN, k_max=2))
    wg = WorkingGraph(karate)
    while True:
        scores = oracle_edge_betweenness(wg)
        best = max(scores.values())
        eid = min(e for e, s in scores.items() if s == best)
        u, v = wg.edges[eid]
        wg.remove(eid)
        if not wg.reachable(u, v):
            break
    side = wg.component_of(0)
    oracle_labels = tuple(min(side) if node in side else min(set(range(karate.n)) - side)
                          for node in range(karate.n))
    assert d.cut(2).labels == oracle_labels


@pytest.mark.parametrize("seed", range(10))
def test_full_sequence_matches_oracle_on_small_graphs(seed):
    rng = random.Random(40 + seed)
    g = random_connected_graph(rng, rng.randint(3, 8))
    d = detect(g, DetectionConfig(BN, k_max=2, stop="exhaust-edges"))
    assert [s.edge_id for s in d.steps] == _oracle_gn_removals(g)


def test_replaying_log_reproduces_components(karate):
    d = detect(karate, DetectionConfig(BN, k_max=6))
    wg = WorkingGraph(karate)
    count = 1
    for step in d.steps:
        wg.remove(step.edge_id)
        if not wg.reachable(step.u, step.v):
            count += 1
        assert count == step.components_after


def test_detect_is_deterministic(dolphins):
    cfg = DetectionConfig(Criterion(CriterionKind.RA), k_max=6)
    a = detect(dolphins, cfg)
    b = detect(dolphins, cfg)
    assert [s.edge_id for s in a.steps] == [s.edge_id for s in b.steps]
    assert a.cut(6).labels == b.cut(6).labels


def test_split_bookkeeping(dolphins):
    d = detect(dolphins, DetectionConfig(Criterion(CriterionKind.CN), k_max=5))
    assert len(d.steps) <= dolphins.m
    splits = sum(1 for s in d.steps if s.split)
    assert splits == d.final_components - d.initial_components
    counts = [s.components_after for s in d.steps]
    assert counts == sorted(counts)


def test_cut_at_initial_count_is_untouched_graph(two_triangles_bridge):
    d = detect(two_triangles_bridge, DetectionConfig(Criterion(CriterionKind.CN), k_max=2))
    assert d.cut(1).labels == connected_components(two_triangles_bridge).labels


def test_cut_unreachable_k(two_triangles_bridge):
    d = detect(two_triangles_bridge, DetectionConfig(Criterion(CriterionKind.CN), k_max=2))
    with pytest.raises(UnreachableCutError):
        d.cut(5)


def test_communities_connected_at_every_cut(karate):
    d = detect(karate, DetectionConfig(Criterion(CriterionKind.JA), k_max=8))
    for k in d.reachable_counts():
        part = d.cut(k)
        assert part.n_communities == k
        # rebuild the working graph at the first moment of k components
        wg = WorkingGraph(karate)
        if k > d.initial_components:
            for step in d.steps:
                wg.remove(step.edge_id)
                if step.split and step.components_after == k:
                    break
        for members in part.communities().values():
            assert set(members) == wg.component_of(members[0])


def test_ecc_degenerate_fallback_on_star():
    star = parse_edge_list("0 1\n0 2\n0 3\n0 4")
    d = detect(star, DetectionConfig(Criterion(CriterionKind.ECC), k_max=3))
    assert all(s.degenerate for s in d.steps)
    assert all(s.score == INFINITE for s in d.steps)
    # lowest edge id first
    assert [s.edge_id for s in d.steps][:2] == [0, 1]


def test_k_max_exceeding_n_rejected(triangle):
    with pytest.raises(ConfigError):
        detect(triangle, DetectionConfig(BN, k_max=5))


def test_k_max_below_two_rejected():
    with pytest.raises(ConfigError):
        DetectionConfig(BN, k_max=1)


def test_unknown_stop_rule_rejected():
    with pytest.raises(ConfigError):
        DetectionConfig(BN, k_max=2, stop="whenever")


def test_exhaust_edges_reaches_singletons(triangle):
    d = detect(triangle, DetectionConfig(BN, k_max=3, stop="exhaust-edges"))
    assert d.final_components == 3
    assert len(d.steps) == 3
    assert d.cut(3).n_communities == 3


def test_detect_on_disconnected_start():
    g = parse_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3")
    d = detect(g, DetectionConfig(Criterion(CriterionKind.CN), k_max=2))
    assert d.initial_components == 2
    assert d.steps == []  # already at k_max


def test_dendrogram_json_round_trips(two_triangles_bridge):
    d = detect(two_triangles_bridge, DetectionConfig(Criterion(CriterionKind.CN), k_max=2))
    payload = json.loads(d.to_json())
    assert payload["initial_components"] == 1
    step = payload["steps"][0]
    assert {step["u"], step["v"]} == {2, 3}
    assert step["split"] is True
    assert step["components_after"] == 2


def test_json_serializes_infinite_score():
    star = parse_edge_list("0 1\n0 2\n0 3")
    d = detect(star, DetectionConfig(Criterion(CriterionKind.ECC), k_max=2))
    payload = json.loads(d.to_json())
    assert payload["steps"][0]["score"] == "inf"
