import random

import pytest

from esmsynth.arch import path_graph, square_lattice
from esmsynth.codes import generate_code, parse_code_spec
from esmsynth.sat import solve_sat
from esmsynth.sat.solve import Status
from esmsynth.stage1 import MappingSolution, solve_stage1
from esmsynth.stage2 import (
    Stage2Config, check_schedule, depth_lower_bound, encode_stage2, enumerate_operations, minimize_depth,
    sequential_schedule,
)
from esmsynth.verify import verify_circuit

from oracles import brute_mappings, brute_min_depth


def opset_for(spec, arch, pi, anc, cp):
    code = parse_code_spec(spec)
    sol = MappingSolution(pi, {k: frozenset(v) for k, v in anc.items()}, cp)
    return code, sol, enumerate_operations(sol, code, arch)


def feasible(opset, T, **kw):
    f, _ = encode_stage2(opset, T, Stage2Config(**kw))
    return solve_sat(f).status is Status.SAT


def sat_min_depth(opset, **kw):
    return next(T for T in range(1, 80) if feasible(opset, T, **kw))


# square 3x3 with data on the edge midpoints and the centre free
CROSS = dict(pi={0: 1, 1: 3, 2: 5, 3: 7})


def test_operation_counts():
    arch = square_lattice(2, 3)
    _, _, ops = opset_for("paulis:ZZZ", arch, {0: 0, 1: 2, 2: 5}, {"s0": {1, 4}}, {"s0": {0: 1, 1: 1, 2: 4}})
    kinds = [o.kind for o in ops.ops]
    assert kinds.count("reset") == 2 and kinds.count("h_enc") == 2 and kinds.count("meas") == 2
    assert kinds.count("enc") == 2 and kinds.count("dec") == 2  # both directions of edge 1-4
    assert kinds.count("ctrl") == 3
    assert [o.optional for o in ops.ops if o.kind in ("reset", "ctrl")] == [False] * 5


def test_weight4_bare_needs_exactly_8_steps():
    arch = square_lattice(3, 3)
    code, sol, ops = opset_for("paulis:ZZZZ", arch, CROSS["pi"], {"s0": {4}}, {"s0": {q: 4 for q in range(4)}})
    assert not feasible(ops, 7)
    assert feasible(ops, 8)
    res = minimize_depth(ops)
    assert res.depth == 8 and res.optimal
    assert check_schedule(res.circuit, ops) == []
    assert verify_circuit(res.circuit, code, sol).passed


def test_weight2_bare_is_6():
    arch = path_graph(3)
    code, sol, ops = opset_for("paulis:ZZ", arch, {0: 0, 1: 2}, {"s0": {1}}, {"s0": {0: 1, 1: 1}})
    assert minimize_depth(ops).depth == 6 == brute_min_depth(ops)


def test_bridge_of_two_weight4_is_8():
    arch = square_lattice(2, 4)
    pi = {0: 0, 1: 4, 2: 3, 3: 7}
    code, sol, ops = opset_for("paulis:ZZZZ", arch, pi, {"s0": {1, 2}}, {"s0": {0: 1, 1: 1, 2: 2, 3: 2}})
    # the fan-out CNOTs overlap with the controls, so this still fits in 8
    assert minimize_depth(ops).depth == 8 == brute_min_depth(ops)


def test_shared_ancilla_serializes():
    arch = square_lattice(3, 3)
    code, sol, ops = opset_for("paulis:XXXX,ZZZZ", arch, CROSS["pi"], {"s0": {4}, "s1": {4}},
                               {"s0": {q: 4 for q in range(4)}, "s1": {q: 4 for q in range(4)}})
    res = minimize_depth(ops)
    assert res.depth == 16 == brute_min_depth(ops)
    assert check_schedule(res.circuit, ops) == []
    assert verify_circuit(res.circuit, code, sol).passed


def test_anticommuting_overlap_needs_even_order():
    # XX and ZZ on the same two qubits, bare ancillas on either side:
    # both controls must hit the data in the same relative order
    arch = square_lattice(3, 3)
    code, sol, ops = opset_for("paulis:XX,ZZ", arch, {0: 1, 1: 3}, {"s0": {0}, "s1": {4}},
                               {"s0": {0: 0, 1: 0}, "s1": {0: 4, 1: 4}})
    res = minimize_depth(ops)
    assert res.depth == 7 == brute_min_depth(ops)
    assert verify_circuit(res.circuit, code, sol).passed
    # dropping the parity rule allows a shorter schedule that measures the wrong thing
    bad = minimize_depth(ops, Stage2Config(disable=frozenset({"C"})))
    assert bad.depth == 6
    assert not verify_circuit(bad.circuit, code, sol).passed


def test_sequential_schedule_depths():
    code = generate_code("surface", 3)
    arch = square_lattice(5, 5)
    sol = solve_stage1(code, arch).solution
    ops = enumerate_operations(sol, code, arch)
    seq = sequential_schedule(ops)
    assert seq.depth == sum(s.weight + 2 * len(sol.anc[s.label]) + 2 for s in code.stabilizers) == 56
    assert check_schedule(seq, ops) == []
    assert verify_circuit(seq, code, sol).passed


def test_lower_bound_is_sound():
    code = generate_code("surface", 3)
    arch = square_lattice(5, 5)
    sol = solve_stage1(code, arch).solution
    ops = enumerate_operations(sol, code, arch)
    lb = depth_lower_bound(ops)
    assert lb == 8 and feasible(ops, lb)


@pytest.mark.parametrize("seed", range(6))
def test_min_depth_matches_state_search(seed):
    rng = random.Random(seed)
    spec, arch, L = rng.choice([
        ("paulis:ZZ,XX", square_lattice(2, 4), 2),
        ("paulis:ZZZ", square_lattice(2, 3), 3),
        ("paulis:ZZI,IZZ", square_lattice(2, 4), 2),
        ("paulis:XZ,ZX", path_graph(5), 2),
    ])
    code = parse_code_spec(spec)
    keys = sorted(brute_mappings(code, arch, {s.label: L for s in code.stabilizers}))
    k = rng.choice(keys)
    sol = MappingSolution(dict(k[0]), {s: frozenset(b) for s, b in k[1]}, {s: dict(m) for s, m in k[2]})
    ops = enumerate_operations(sol, code, arch)
    want = brute_min_depth(ops)
    assert sat_min_depth(ops) == want
    res = minimize_depth(ops)
    assert res.depth == want and res.optimal
    assert check_schedule(res.circuit, ops) == []


@pytest.mark.parametrize("mode", ["binary", "linear"])
def test_search_modes_agree(mode):
    code = generate_code("repetition", 3)
    arch = path_graph(5)
    sol = solve_stage1(code, arch).solution
    ops = enumerate_operations(sol, code, arch)
    res = minimize_depth(ops, Stage2Config(mode=mode))
    assert res.depth == sat_min_depth(ops) and res.optimal


def test_mirror_dec_is_never_shorter():
    arch = square_lattice(2, 4)
    code, sol, ops = opset_for("paulis:ZZZZ", arch, {0: 0, 1: 4, 2: 3, 3: 7}, {"s0": {1, 2}},
                               {"s0": {0: 1, 1: 1, 2: 2, 3: 2}})
    free = minimize_depth(ops).depth
    mirrored = minimize_depth(ops, Stage2Config(mirror_dec=True))
    assert mirrored.depth >= free
    assert verify_circuit(mirrored.circuit, code, sol).passed


def test_config_validation():
    with pytest.raises(ValueError):
        Stage2Config(mode="ternary")
    with pytest.raises(ValueError):
        Stage2Config(disable=frozenset({"Q"}))
