import itertools
import random
from dataclasses import replace

import pytest

from esmsynth.arch import hexagon_lattice, path_graph, square_lattice
from esmsynth.circuit import emit_json
from esmsynth.codes import generate_code, interaction_graph, steane_code
from esmsynth.partition import (
    RoutingError, compile_partitioned, layer_swaps, order_subsets, partition_stabilizers, route_integration,
    seed_layout,
)
from esmsynth.pipeline import CompileConfig, compile_code
from esmsynth.stage2 import check_schedule


def cut(code, subsets):
    part = {i: k for k, sub in enumerate(subsets) for i in sub}
    return sum(c for (i, j), c in interaction_graph(code).items() if part[i] != part[j])


@pytest.mark.parametrize("code,k", [
    (generate_code("surface", 3), 2), (generate_code("surface", 3), 4), (steane_code(), 3),
    (generate_code("surface", 5), 4), (generate_code("repetition", 5), 2),
])
def test_partition_is_balanced_and_complete(code, k):
    subs = partition_stabilizers(code, k)
    assert sorted(i for s in subs for i in s) == list(range(len(code)))
    assert max(map(len, subs)) - min(map(len, subs)) <= 1
    assert subs == partition_stabilizers(code, k)  # deterministic


@pytest.mark.parametrize("code", [steane_code(), generate_code("surface", 3), generate_code("repetition", 5)])
def test_bisection_cut_is_optimal_on_small_codes(code):
    n = len(code)
    subs = partition_stabilizers(code, 2)
    best = min(cut(code, [list(a), [i for i in range(n) if i not in a]])
               for a in itertools.combinations(range(n), n // 2))
    assert cut(code, subs) == best


def test_partition_bad_k():
    with pytest.raises(ValueError):
        partition_stabilizers(steane_code(), 0)
    with pytest.raises(ValueError):
        partition_stabilizers(steane_code(), 7)
    assert partition_stabilizers(steane_code(), 1) == [list(range(6))]


def test_order_subsets_rule():
    code = generate_code("repetition", 5)  # checks Z0..Z3 chain along qubits
    subsets = [[0], [3], [1], [2]]
    # qubit overlaps: [0]-[1] 1, [1]-[2] 1, [2]-[3] 1: middle subsets tie, lowest index wins
    assert order_subsets(subsets, code) == [2, 0, 3, 1]
    assert order_subsets(subsets, code, start=1) == [1, 3, 2, 0]


@pytest.mark.parametrize("seed", range(15))
def test_route_integration_reaches_target(seed):
    rng = random.Random(seed)
    arch = rng.choice([square_lattice(3, 4), path_graph(7), hexagon_lattice(3, 4)])
    nodes = sorted(arch.nodes)
    q = rng.randint(1, len(nodes) - 1)
    a = dict(zip(range(q), rng.sample(nodes, q)))
    b = dict(zip(range(q), rng.sample(nodes, q)))
    swaps = route_integration(a, b, arch)
    sim = {p: d for d, p in a.items()}
    for x, y in swaps:
        assert arch.has_edge(x, y)
        sim[x], sim[y] = sim.get(y), sim.get(x)
    assert {d: p for p, d in sim.items() if d is not None} == b
    assert route_integration(a, a, arch) == []


def test_route_integration_rejects_bad_input():
    arch = path_graph(4)
    with pytest.raises(RoutingError):
        route_integration({0: 0}, {1: 0}, arch)
    with pytest.raises(RoutingError):
        route_integration({0: 0, 1: 1}, {0: 2, 1: 2}, arch)


def test_layer_swaps_respects_order():
    swaps = [(0, 1), (2, 3), (1, 2), (4, 5), (0, 1)]
    layers = layer_swaps(swaps)
    assert layers == [[(0, 1), (2, 3), (4, 5)], [(1, 2)], [(0, 1)]]
    for layer in layers:
        used = [q for s in layer for q in s]
        assert len(used) == len(set(used))


def test_seed_layout_places_every_check_next_to_a_free_node():
    code, arch = generate_code("surface", 3), square_lattice(5, 5)
    lay = seed_layout(code, arch)
    assert lay is not None and len(set(lay.values())) == code.num_data
    used = set(lay.values())
    for s in code.stabilizers:
        assert any(p not in used and all(arch.has_edge(p, lay[q]) for q in s.qubits) for p in arch.nodes)
    assert seed_layout(code, path_graph(12)) is None


def test_k1_equals_direct():
    code, arch = generate_code("surface", 3), square_lattice(5, 5)
    a = compile_partitioned(code, arch, 1)
    b = compile_code(code, arch)
    assert emit_json(a.circuit) == emit_json(b.circuit)
    assert a.metrics == b.metrics


def test_k2_surface3_keeps_data_in_place():
    code, arch = generate_code("surface", 3), square_lattice(5, 5)
    r = compile_partitioned(code, arch, 2)
    assert r.report.passed and all(x.passed for x in r.segment_reports)
    assert r.metrics.extra_cnots == 0 and r.metrics.swap_count == 0
    assert all(s.moved == 0 for s in r.segments[1:])
    for s in r.segments:
        assert check_schedule(s.result.circuit, s.result.opset) == []


def test_routing_between_segments_is_verified():
    # without retention the subsets pick unrelated layouts and SWAPs are needed
    code, arch = generate_code("repetition", 5), square_lattice(3, 4)
    base = CompileConfig()
    cfg = replace(base, stage1=replace(base.stage1, w3=0))
    r = compile_partitioned(code, arch, 2, cfg)
    assert r.metrics.swap_count > 0
    assert r.report.passed and all(x.passed for x in r.segment_reports)
    assert r.metrics.extra_cnots == 3 * r.metrics.swap_count + sum(
        2 * (len(a) - 1) for s in r.segments for a in s.result.solution.anc.values())
    plan = r.plan()
    assert [s["start_step"] for s in plan["segments"]] == [s.start_step for s in r.segments]
