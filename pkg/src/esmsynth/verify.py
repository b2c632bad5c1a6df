"""Semantic oracle for syndrome-extraction circuits.

Each measurement's observable (Z on the measured qubit) is conjugated back
to the start of the circuit.  A correct circuit turns it into exactly the
stabilizer on the data qubits.  Forward propagation of injected data errors
gives the syndrome flips, which must match symplectic anti-commutation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .circuit import Circuit
from .codes import StabilizerCode, paulis_anticommute

_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_NAMES = {v: k for k, v in _BITS.items()}


class VerifyError(ValueError):
    pass


@dataclass
class PauliFrame:
    """Pauli operator over ``n`` qubits; ``sign`` is 0 for +1 and 1 for -1."""

    x: np.ndarray
    z: np.ndarray
    sign: int = 0

    @classmethod
    def identity(cls, n: int) -> "PauliFrame":
        return cls(np.zeros(n, np.uint8), np.zeros(n, np.uint8), 0)

    @classmethod
    def from_dict(cls, ops: Mapping[int, str], n: int, sign: int = 0) -> "PauliFrame":
        f = cls.identity(n)
        for q, p in ops.items():
            f.x[q], f.z[q] = _BITS[p]
        f.sign = sign
        return f

    @property
    def n(self) -> int:
        return len(self.x)

    def __getitem__(self, q: int) -> str:
        return _NAMES[int(self.x[q]), int(self.z[q])]

    def to_dict(self) -> dict[int, str]:
        return {int(q): self[q] for q in np.nonzero(self.x | self.z)[0]}

    def __mul__(self, other: "PauliFrame") -> "PauliFrame":
        # phase of the product via the symplectic rule
        # (i^{x z} convention: Y = iXZ)
        x1, z1, x2, z2 = (a.astype(np.int64) for a in (self.x, self.z, other.x, other.z))
        x3, z3 = x1 ^ x2, z1 ^ z2
        k = (x1 * z1 + x2 * z2 + 2 * z1 * x2 - x3 * z3).sum()
        k += 2 * (self.sign + other.sign)
        if k % 2:
            raise VerifyError("product is not Hermitian (operands anti-commute)")
        return PauliFrame(x3.astype(np.uint8), z3.astype(np.uint8), int((k // 2) % 2))

    def __eq__(self, other) -> bool:
        return (isinstance(other, PauliFrame) and self.sign == other.sign
                and np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z))

    def __repr__(self) -> str:
        body = " ".join(f"{p}{q}" for q, p in sorted(self.to_dict().items())) or "I"
        return ("-" if self.sign else "+") + body


def _arrays(circuit: Circuit, meas_of: Mapping[int, int] | None = None):
    gates = circuit.gates
    codes = np.empty(len(gates), np.int32)
    qa = np.empty(len(gates), np.int32)
    qb = np.zeros(len(gates), np.int32)
    mi = np.full(len(gates), -1, np.int32)
    for i, g in enumerate(gates):
        if g.kind not in kernels.GATE_CODES:
            raise VerifyError(f"unsupported gate {g.kind}")
        codes[i] = kernels.GATE_CODES[g.kind]
        qa[i] = g.qubits[0]
        if len(g.qubits) > 1:
            qb[i] = g.qubits[1]
        if meas_of is not None and i in meas_of:
            mi[i] = meas_of[i]
    return codes, qa, qb, mi


def conjugate_backward(circuit: Circuit, frame: PauliFrame, before_step: int | None = None,
                       impl=None) -> tuple[PauliFrame, int]:
    """Heisenberg-propagate ``frame`` from just before ``before_step`` (default: the end) to the start.

    Returns the input-side frame and boundary flags: bit 0 set when X/Y meets
    a reset, bit 1 when anything non-identity meets a measurement.
    """
    codes, qa, qb, mi = _arrays(circuit)
    if before_step is None:
        start = len(circuit.gates)
    else:
        start = next((i for i, g in enumerate(circuit.gates) if g.t >= before_step), len(circuit.gates))
    x = frame.x.reshape(1, -1).astype(np.uint8).copy()
    z = frame.z.reshape(1, -1).astype(np.uint8).copy()
    sign = np.array([frame.sign], np.uint8)
    bad = np.zeros(1, np.int32)
    flips = np.zeros((1, 1), np.uint8)
    kernels.propagate(codes, qa, qb, x, z, sign, np.array([start], np.int64), bad, flips, mi, True, impl=impl)
    return PauliFrame(x[0], z[0], int(sign[0])), int(bad[0])


def conjugate_forward(circuit: Circuit, frame: PauliFrame, from_step: int = 1, impl=None) -> tuple[PauliFrame, dict[str, int]]:
    """Propagate an error frame forward; returns the final frame and measured flips by stabilizer label."""
    meas = [i for i, g in enumerate(circuit.gates) if g.kind == "M"]
    meas_of = {g: j for j, g in enumerate(meas)}
    codes, qa, qb, mi = _arrays(circuit, meas_of)
    start = next((i for i, g in enumerate(circuit.gates) if g.t >= from_step), len(circuit.gates))
    x = frame.x.reshape(1, -1).astype(np.uint8).copy()
    z = frame.z.reshape(1, -1).astype(np.uint8).copy()
    sign = np.array([frame.sign], np.uint8)
    bad = np.zeros(1, np.int32)
    flips = np.zeros((1, max(1, len(meas))), np.uint8)
    kernels.propagate(codes, qa, qb, x, z, sign, np.array([start], np.int64), bad, flips, mi, False, impl=impl)
    out = {circuit.gates[g].stab: int(flips[0, j]) for j, g in enumerate(meas) if g >= start}
    return PauliFrame(x[0], z[0], int(sign[0])), out


@dataclass
class VerifyReport:
    passed: bool
    failures: list[str] = field(default_factory=list)
    checked: int = 0

    def __bool__(self) -> bool:
        return self.passed


def _placement(solution) -> dict[int, int]:
    return dict(solution.pi) if hasattr(solution, "pi") else {int(q): int(p) for q, p in solution.items()}


def verify_syndrome_extraction(circuit: Circuit, code: StabilizerCode, solution, impl=None) -> VerifyReport:
    """Check that every stabilizer's measurement observes exactly that stabilizer.

    ``solution`` is a mapping solution or a plain data-qubit placement at the
    start of the circuit.
    """
    pi = _placement(solution)
    failures = []
    gates = circuit.gates
    meas: dict[str, list[int]] = {}
    for i, g in enumerate(gates):
        if g.kind == "M":
            meas.setdefault(g.stab, []).append(i)
    labels = [s.label for s in code.stabilizers]
    for lab in labels:
        if len(meas.get(lab, [])) != 1:
            failures.append(f"{lab}: measured {len(meas.get(lab, []))} times, expected once")
    for lab in sorted(set(meas) - set(labels)):
        failures.append(f"measurement attributed to unknown stabilizer {lab!r}")
    todo = [s for s in code.stabilizers if len(meas.get(s.label, [])) == 1]
    if not todo:
        return VerifyReport(not failures, failures, 0)
    n = circuit.n
    codes, qa, qb, mi = _arrays(circuit)
    F = len(todo)
    x = np.zeros((F, n), np.uint8)
    z = np.zeros((F, n), np.uint8)
    sign = np.zeros(F, np.uint8)
    start = np.zeros(F, np.int64)
    for f, s in enumerate(todo):
        g = meas[s.label][0]
        z[f, gates[g].qubits[0]] = 1
        start[f] = g
    bad = np.zeros(F, np.int32)
    flips = np.zeros((F, 1), np.uint8)
    kernels.propagate(codes, qa, qb, x, z, sign, start, bad, flips, mi, True, impl=impl)
    for f, s in enumerate(todo):
        frame = PauliFrame(x[f], z[f], int(sign[f]))
        if bad[f] & 1:
            failures.append(f"{s.label}: X/Y component reaches a reset")
        if bad[f] & 2:
            failures.append(f"{s.label}: observable touches another measurement")
        want = PauliFrame.from_dict({pi[q]: p for q, p in s.support}, n)
        if frame != want:
            failures.append(f"{s.label}: measures {frame!r}, expected {want!r}")
    return VerifyReport(not failures, failures, F)


def verify_error_detection(circuit: Circuit, code: StabilizerCode, solution,
                           error: tuple[int, str], from_step: int = 1, impl=None) -> set[str]:
    """Inject a single-qubit Pauli on data qubit ``error[0]`` and return the flipped stabilizers.

    The placement is the data layout at ``from_step``.
    """
    pi = _placement(solution)
    q, p = error
    if q not in pi:
        raise VerifyError(f"error location {q} is not a data qubit")
    if p not in ("X", "Y", "Z"):
        raise VerifyError(f"bad Pauli {p!r}")
    frame = PauliFrame.from_dict({pi[q]: p}, circuit.n)
    _, flips = conjugate_forward(circuit, frame, from_step, impl=impl)
    return {lab for lab, v in flips.items() if v}


def expected_flips(code: StabilizerCode, error: tuple[int, str], labels: Iterable[str] | None = None) -> set[str]:
    q, p = error
    keep = set(labels) if labels is not None else None
    return {s.label for s in code.stabilizers
            if (keep is None or s.label in keep) and paulis_anticommute(s.pauli_at(q), p)}


def verify_all_errors(circuit: Circuit, code: StabilizerCode, solution, from_step: int = 1,
                      measured: Iterable[str] | None = None, impl=None) -> VerifyReport:
    """Every single-qubit X/Y/Z on every data qubit must flip exactly the anti-commuting stabilizers."""
    pi = _placement(solution)
    meas = [i for i, g in enumerate(circuit.gates) if g.kind == "M"]
    meas_of = {g: j for j, g in enumerate(meas)}
    codes, qa, qb, mi = _arrays(circuit, meas_of)
    start = next((i for i, g in enumerate(circuit.gates) if g.t >= from_step), len(circuit.gates))
    if measured is None:
        measured = {circuit.gates[g].stab for g in meas if g >= start}
    measured = set(measured)
    errors = [(q, p) for q in sorted(pi) for p in "XYZ"]
    F = len(errors)
    x = np.zeros((F, circuit.n), np.uint8)
    z = np.zeros((F, circuit.n), np.uint8)
    for f, (q, p) in enumerate(errors):
        x[f, pi[q]], z[f, pi[q]] = _BITS[p]
    sign = np.zeros(F, np.uint8)
    bad = np.zeros(F, np.int32)
    flips = np.zeros((F, max(1, len(meas))), np.uint8)
    kernels.propagate(codes, qa, qb, x, z, sign, np.full(F, start, np.int64), bad, flips, mi, False, impl=impl)
    failures = []
    for f, (q, p) in enumerate(errors):
        got = {circuit.gates[g].stab for j, g in enumerate(meas) if g >= start and flips[f, j]}
        want = expected_flips(code, (q, p), measured)
        if got != want:
            failures.append(f"{p} on data {q}: flips {sorted(got)}, expected {sorted(want)}")
    return VerifyReport(not failures, failures, F)


def verify_circuit(circuit: Circuit, code: StabilizerCode, solution, impl=None) -> VerifyReport:
    """Syndrome extraction plus exhaustive single-qubit error detection."""
    a = verify_syndrome_extraction(circuit, code, solution, impl=impl)
    b = verify_all_errors(circuit, code, solution, impl=impl)
    return VerifyReport(a.passed and b.passed, a.failures + b.failures, a.checked + b.checked)
