import itertools

import pytest

from esmsynth.arch import square_lattice
from esmsynth.circuit import Circuit, Gate
from esmsynth.codes import generate_code, parse_code_spec, steane_code
from esmsynth.pipeline import compile_code
from esmsynth.verify import (
    PauliFrame, VerifyError, conjugate_backward, conjugate_forward, expected_flips, verify_all_errors,
    verify_circuit, verify_error_detection, verify_syndrome_extraction,
)

ZZ = parse_code_spec("paulis:ZIZ")  # data 0 and 2 on nodes 0 and 2, ancilla on node 1


def zz_gates(kind="CZ"):
    return [
        Gate("R", (1,), 1, "s0", "init"), Gate("H", (1,), 2, "s0", "init"),
        Gate(kind, (1, 0), 3, "s0", "ctrl"), Gate(kind, (1, 2), 4, "s0", "ctrl"),
        Gate("H", (1,), 5, "s0", "meas"), Gate("M", (1,), 6, "s0", "meas"),
    ]


PI = {0: 0, 2: 2}


def test_hand_built_zz_passes():
    c = Circuit(3, zz_gates())
    assert verify_syndrome_extraction(c, ZZ, PI).passed
    assert verify_all_errors(c, ZZ, PI).passed


@pytest.mark.parametrize("mutate", [
    lambda g: g[:3] + g[4:],                                     # dropped control
    lambda g: g[:2] + [Gate("CX", (1, 0), 3, "s0", "ctrl")] + g[3:],  # wrong Pauli type
    lambda g: g[:1] + g[2:],                                     # no Hadamard
    lambda g: g + [Gate("M", (1,), 7, "s0", "meas")],            # measured twice
    lambda g: g[:5],                                             # never measured
    lambda g: [Gate("H", (1,), 1, "s0", "init"), Gate("R", (1,), 2, "s0", "init")] + [  # reset after H
        Gate(x.kind, x.qubits, x.t + 1, x.stab, x.phase) for x in g[2:]],
])
def test_corrupted_circuits_fail(mutate):
    g = zz_gates()
    c = Circuit(3, mutate(g))
    assert not verify_circuit(c, ZZ, PI).passed


def test_steane_single_z_error_flips_x_checks():
    code = steane_code()
    # qubit index 2 sits in the first and third Hamming checks
    assert expected_flips(code, (2, "Z")) == {"X1", "X3"}
    assert expected_flips(code, (2, "Y")) == {"X1", "X3", "Z1", "Z3"}
    res = compile_code(code, square_lattice(5, 5))
    assert res.report.passed
    assert verify_error_detection(res.circuit, code, res.solution, (2, "Z")) == {"X1", "X3"}
    with pytest.raises(VerifyError):
        verify_error_detection(res.circuit, code, res.solution, (99, "Z"))


def test_surface3_errors_match_anticommutation():
    code = generate_code("surface", 3)
    res = compile_code(code, square_lattice(5, 5))
    for q, p in itertools.product(range(code.num_data), "XYZ"):
        assert verify_error_detection(res.circuit, code, res.solution, (q, p)) == expected_flips(code, (q, p))


def test_pauli_frame_algebra():
    x = PauliFrame.from_dict({0: "X"}, 2)
    z = PauliFrame.from_dict({0: "Z"}, 2)
    with pytest.raises(VerifyError):
        x * z
    xx = PauliFrame.from_dict({0: "X", 1: "X"}, 2)
    zz = PauliFrame.from_dict({0: "Z", 1: "Z"}, 2)
    yy = xx * zz  # (XZ)(XZ) = (-iY)(-iY) = -YY
    assert yy == PauliFrame.from_dict({0: "Y", 1: "Y"}, 2, sign=1)
    assert repr(yy) == "-Y0 Y1"
    assert (xx * xx) == PauliFrame.identity(2)


def test_backward_and_forward_are_consistent():
    c = Circuit(3, zz_gates())
    obs, bad = conjugate_backward(c, PauliFrame.from_dict({1: "Z"}, 3), before_step=6)
    assert bad == 0 and obs.to_dict() == {0: "Z", 2: "Z"}
    _, flips = conjugate_forward(c, PauliFrame.from_dict({0: "X"}, 3))
    assert flips == {"s0": 1}
    _, flips = conjugate_forward(c, PauliFrame.from_dict({0: "Z"}, 3))
    assert flips == {"s0": 0}


def test_pure_python_kernels_agree():
    from esmsynth import _pykernels
    code = generate_code("surface", 3)
    res = compile_code(code, square_lattice(5, 5))
    a = verify_circuit(res.circuit, code, res.solution)
    b = verify_circuit(res.circuit, code, res.solution, impl=_pykernels)
    assert a.passed and b.passed and a.checked == b.checked
