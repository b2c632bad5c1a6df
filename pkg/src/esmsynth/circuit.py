"""Scheduled circuit representation, metrics and emission formats."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

TWO_QUBIT = {"CX", "CY", "CZ", "SWAP"}
KINDS = {"R", "H", "M"} | TWO_QUBIT
PHASES = {"init", "enc", "ctrl", "dec", "meas", "route"}


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    t: int
    stab: str = ""
    phase: str = ""
    segment: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        want = 2 if self.kind in TWO_QUBIT else 1
        if len(self.qubits) != want:
            raise CircuitError(f"{self.kind} acts on {want} qubit(s), got {self.qubits}")
        if want == 2 and self.qubits[0] == self.qubits[1]:
            raise CircuitError(f"{self.kind} on a repeated qubit {self.qubits}")
        if self.t < 1:
            raise CircuitError(f"gate step must be >= 1, got {self.t}")


@dataclass
class Circuit:
    n: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        self.gates = sorted(self.gates, key=lambda g: g.t)

    @property
    def depth(self) -> int:
        return max((g.t for g in self.gates), default=0)

    def by_step(self) -> dict[int, list[Gate]]:
        out: dict[int, list[Gate]] = {}
        for g in self.gates:
            out.setdefault(g.t, []).append(g)
        return out

    def shifted(self, offset: int, segment: int | None = None) -> list[Gate]:
        return [replace(g, t=g.t + offset, segment=g.segment if segment is None else segment)
                for g in self.gates]

    def check(self) -> list[str]:
        """Step exclusivity per qubit and dense steps."""
        problems = []
        busy: dict[tuple[int, int], Gate] = {}
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.n:
                    problems.append(f"qubit {q} out of range in {g}")
                if (q, g.t) in busy:
                    problems.append(f"qubit {q} used twice at step {g.t}")
                busy[q, g.t] = g
        steps = {g.t for g in self.gates}
        if steps and steps != set(range(1, self.depth + 1)):
            problems.append("steps are not dense from 1")
        return problems

    def to_json(self, metrics: "Metrics | None" = None) -> dict:
        data = {
            "n": self.n,
            "gates": [
                {"kind": g.kind, "qubits": list(g.qubits), "t": g.t, "stab": g.stab,
                 "phase": g.phase, "segment": g.segment}
                for g in self.gates
            ],
        }
        if metrics is not None:
            data["metrics"] = asdict(metrics)
        return data

    @classmethod
    def from_json(cls, data: dict) -> "Circuit":
        gates = [Gate(d["kind"], tuple(int(q) for q in d["qubits"]), int(d["t"]), d.get("stab", ""),
                      d.get("phase", ""), int(d.get("segment", 0))) for d in data["gates"]]
        return cls(int(data["n"]), gates)


@dataclass(frozen=True)
class Metrics:
    extra_cnots: int
    depth: int
    two_qubit_total: int
    ancilla_total: int
    swap_count: int


def compute_metrics(circuit: Circuit, solution=None) -> Metrics:
    """Count gates.  ``solution`` (a mapping or list of mappings) cross-checks the bridge formula."""
    swaps = sum(1 for g in circuit.gates if g.kind == "SWAP")
    route_cx = sum(1 for g in circuit.gates if g.phase == "route" and g.kind != "SWAP")
    if route_cx % 3:
        raise CircuitError("routing CNOTs do not come in SWAP triples")
    swap_count = swaps + route_cx // 3
    bridge = sum(1 for g in circuit.gates if g.phase in ("enc", "dec") and g.kind in TWO_QUBIT)
    two_q = sum(3 if g.kind == "SWAP" else 1 for g in circuit.gates if g.kind in TWO_QUBIT)
    ancillas = sum(1 for g in circuit.gates if g.kind == "R")
    if solution is not None:
        sols = solution if isinstance(solution, (list, tuple)) else [solution]
        expect = sum(2 * (len(a) - 1) for s in sols for a in s.anc.values())
        if expect != bridge:
            raise CircuitError(f"circuit has {bridge} bridge CNOTs, mapping implies {expect}")
    return Metrics(bridge + 3 * swap_count, circuit.depth, two_q, ancillas, swap_count)


def expand_swaps(circuit: Circuit) -> Circuit:
    """Replace each SWAP by three CNOTs on consecutive steps, shifting later steps by 2."""
    steps = sorted({g.t for g in circuit.gates if g.kind == "SWAP"})
    if not steps:
        return Circuit(circuit.n, list(circuit.gates))

    def shift(t: int) -> int:
        return t + 2 * sum(1 for s in steps if s < t)

    out = []
    for g in circuit.gates:
        t = shift(g.t)
        if g.kind == "SWAP":
            a, b = g.qubits
            for i, qs in enumerate(((a, b), (b, a), (a, b))):
                out.append(Gate("CX", qs, t + i, g.stab, g.phase or "route", g.segment))
        else:
            out.append(replace(g, t=t))
    return Circuit(circuit.n, out)


def emit_json(circuit: Circuit, metrics: Metrics | None = None) -> str:
    return json.dumps(circuit.to_json(metrics), indent=1)


def parse_json(text: str) -> Circuit:
    return Circuit.from_json(json.loads(text))


def emit_stim_text(circuit: Circuit) -> str:
    """One gate per line, ``TICK`` between consecutive steps."""
    lines = []
    steps = circuit.by_step()
    for t in range(1, circuit.depth + 1):
        if t > 1:
            lines.append("TICK")
        for g in steps.get(t, []):
            lines.append(g.kind + " " + " ".join(str(q) for q in g.qubits))
    return "\n".join(lines) + ("\n" if lines else "")


def save_circuit(circuit: Circuit, path, metrics: Metrics | None = None) -> None:
    Path(path).write_text(emit_json(circuit, metrics))


def load_circuit(path) -> Circuit:
    return parse_json(Path(path).read_text())
