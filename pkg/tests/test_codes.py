import itertools
from fractions import Fraction

import numpy as np
import pytest

from esmsynth.codes import (
    CodeError, Stabilizer, StabilizerCode, code_density, cube_code, generate_code, hypergraph_product,
    interaction_graph, parse_code_spec, pauli_product, paulis_anticommute, repetition_code,
    stabilizers_commute, steane_code, validate_code,
)


def _rank_gf2(rows):
    m = np.array(rows, dtype=np.uint8) % 2
    r = 0
    for c in range(m.shape[1]):
        piv = next((i for i in range(r, len(m)) if m[i, c]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        for i in range(len(m)):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
    return r


def _symplectic(code):
    rows = []
    for s in code.stabilizers:
        x = [0] * code.num_data
        z = [0] * code.num_data
        for q, p in s.support:
            x[q] = p in "XY"
            z[q] = p in "ZY"
        rows.append(x + z)
    return rows


ALL = {
    "rep3": repetition_code(3), "rep5": repetition_code(5), "steane": steane_code(),
    "surface3": generate_code("surface", 3), "surface5": generate_code("surface", 5),
    "cube": cube_code(), "hgp": parse_code_spec("hgp:rep3"),
}


def test_pauli_algebra():
    for a, b in itertools.product("IXYZ", repeat=2):
        want = a != "I" and b != "I" and a != b
        assert paulis_anticommute(a, b) == want
    assert pauli_product("X", "Z") == "Y"
    assert pauli_product("Y", "Y") == "I"


@pytest.mark.parametrize("name", sorted(ALL))
def test_codes_are_valid(name):
    code = ALL[name]
    assert validate_code(code) == []
    for a, b in itertools.combinations(code.stabilizers, 2):
        assert stabilizers_commute(a, b)
    assert _rank_gf2(_symplectic(code)) == len(code)  # independent generators


@pytest.mark.parametrize("name,n,m,k", [
    ("rep3", 3, 2, 1), ("rep5", 5, 4, 1), ("steane", 7, 6, 1), ("surface3", 9, 8, 1),
    ("surface5", 25, 24, 1), ("cube", 8, 5, 3), ("hgp", 13, 12, 1),
])
def test_parameters(name, n, m, k):
    code = ALL[name]
    assert code.num_data == n and len(code) == m
    assert n - len(code) == k


def test_surface_weights():
    code = generate_code("surface", 3)
    assert sorted(s.weight for s in code.stabilizers) == [2, 2, 2, 2, 4, 4, 4, 4]
    assert sum(1 for s in code.stabilizers if s.pauli_at(s.qubits[0]) == "X") == 4
    assert code_density(code) == Fraction(2 * 24, 8 + 9)  # Tanner-graph edges over vertices


def test_interaction_graph_counts_shared_qubits():
    g = interaction_graph(steane_code())
    assert all(v >= 1 for v in g.values())
    assert sum(g.values()) == sum(len(set(a.qubits) & set(b.qubits))
                                  for a, b in itertools.combinations(steane_code().stabilizers, 2))


def test_parse_specs_and_roundtrip(tmp_path):
    c = parse_code_spec("paulis:ZZI,IXX")
    assert c.num_data == 3 and c.labels == ["s0", "s1"]
    assert c.stabilizers[1].as_dict() == {1: "X", 2: "X"}
    p = tmp_path / "c.json"
    ALL["steane"].save(p)
    assert StabilizerCode.load(p) == ALL["steane"]
    assert parse_code_spec(str(p)) == ALL["steane"]


@pytest.mark.parametrize("bad", ["surface:4", "surface:1", "nosuch", "paulis:", "hgp:foo7"])
def test_bad_specs(bad):
    with pytest.raises((CodeError, ValueError)):
        parse_code_spec(bad)


def test_invalid_codes_reported():
    c = StabilizerCode(2, (Stabilizer.from_string("XI", "a"), Stabilizer.from_string("ZI", "b")))
    assert validate_code(c) == ["a and b anticommute"]
    c = StabilizerCode(2, (Stabilizer.from_string("Z0 Z2", "a"),))
    assert "outside" in validate_code(c)[0]
    with pytest.raises(CodeError):
        Stabilizer.from_string("X0 Z0")
    with pytest.raises(CodeError):
        StabilizerCode(2, (Stabilizer.from_string("ZZ", "a"), Stabilizer.from_string("XX", "a")))


def test_hgp_rejects_empty():
    with pytest.raises(CodeError):
        hypergraph_product(np.zeros((0, 2)), np.eye(2))
