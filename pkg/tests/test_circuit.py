import pytest

from esmsynth.circuit import (
    Circuit, CircuitError, Gate, compute_metrics, emit_json, emit_stim_text, expand_swaps, load_circuit,
    parse_json, save_circuit,
)
from esmsynth.stage1 import MappingSolution


def small():
    return Circuit(4, [
        Gate("R", (1,), 1, "s", "init"), Gate("H", (1,), 2, "s", "init"),
        Gate("CZ", (1, 0), 3, "s", "ctrl"), Gate("CZ", (1, 2), 4, "s", "ctrl"),
        Gate("H", (1,), 5, "s", "meas"), Gate("M", (1,), 6, "s", "meas"),
    ])


def test_gate_validation():
    with pytest.raises(CircuitError):
        Gate("T", (0,), 1)
    with pytest.raises(CircuitError):
        Gate("CX", (0,), 1)
    with pytest.raises(CircuitError):
        Gate("CX", (1, 1), 1)
    with pytest.raises(CircuitError):
        Gate("H", (0,), 0)


def test_check_catches_conflicts_and_gaps():
    assert small().check() == []
    c = Circuit(4, small().gates + [Gate("H", (0,), 3)])
    assert any("twice" in p for p in c.check())
    c = Circuit(4, [Gate("H", (0,), 1), Gate("H", (0,), 3)])
    assert any("dense" in p for p in c.check())
    assert any("range" in p for p in Circuit(1, [Gate("H", (3,), 1)]).check())


def test_metrics_and_bridge_crosscheck():
    c = small()
    m = compute_metrics(c)
    assert (m.extra_cnots, m.depth, m.two_qubit_total, m.ancilla_total, m.swap_count) == (0, 6, 2, 1, 0)
    sol = MappingSolution({0: 0, 1: 2}, {"s": frozenset({1})}, {"s": {0: 1, 1: 1}})
    assert compute_metrics(c, sol) == m
    wrong = MappingSolution({0: 0, 1: 2}, {"s": frozenset({1, 3})}, {"s": {0: 1, 1: 1}})
    with pytest.raises(CircuitError):
        compute_metrics(c, wrong)


def test_swap_expansion_and_cost():
    c = Circuit(3, [Gate("H", (0,), 1), Gate("SWAP", (0, 1), 2, phase="route"), Gate("H", (1,), 3)])
    assert compute_metrics(c).extra_cnots == 3
    e = expand_swaps(c)
    assert [(g.kind, g.qubits, g.t) for g in e.gates] == [
        ("H", (0,), 1), ("CX", (0, 1), 2), ("CX", (1, 0), 3), ("CX", (0, 1), 4), ("H", (1,), 5)]
    assert compute_metrics(e).swap_count == 1 and compute_metrics(e).extra_cnots == 3
    assert e.check() == []


def test_json_roundtrip(tmp_path):
    c = small()
    assert parse_json(emit_json(c)).gates == c.gates
    p = tmp_path / "c.json"
    save_circuit(c, p, compute_metrics(c))
    assert load_circuit(p).gates == c.gates


def test_stim_text_has_ticks():
    text = emit_stim_text(small())
    assert text.splitlines()[:3] == ["R 1", "TICK", "H 1"]
    assert text.count("TICK") == 5


def test_shifted():
    g = small().shifted(10, segment=2)
    assert min(x.t for x in g) == 11 and {x.segment for x in g} == {2}
