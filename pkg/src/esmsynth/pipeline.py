"""Direct (single-shot) compile: Stage 1, Stage 2, metrics and verification."""
from __future__ import annotations

from dataclasses import dataclass, field

from .arch import CouplingGraph
from .circuit import Circuit, Metrics, compute_metrics
from .codes import StabilizerCode
from .stage1 import Stage1Config, Stage1Result, solve_stage1
from .stage2 import OperationSet, Stage2Config, Stage2Result, enumerate_operations, minimize_depth
from .verify import VerifyReport, verify_circuit


@dataclass
class CompileConfig:
    stage1: Stage1Config = field(default_factory=Stage1Config)
    stage2: Stage2Config = field(default_factory=Stage2Config)
    partition: int = 1
    seed: int = 0
    verify: bool = True


@dataclass
class CompileResult:
    circuit: Circuit
    metrics: Metrics
    stage1: Stage1Result
    stage2: Stage2Result
    opset: OperationSet
    report: VerifyReport | None = None

    @property
    def solution(self):
        return self.stage1.solution

    @property
    def optimal(self) -> dict[str, bool]:
        return {"stage1": self.stage1.optimal, "stage2": self.stage2.optimal}


def compile_code(code: StabilizerCode, arch: CouplingGraph, cfg: CompileConfig | None = None,
                 segment: int = 0) -> CompileResult:
    cfg = cfg or CompileConfig()
    s1 = solve_stage1(code, arch, cfg.stage1)
    ops = enumerate_operations(s1.solution, code, arch)
    s2 = minimize_depth(ops, cfg.stage2, segment=segment)
    metrics = compute_metrics(s2.circuit, s1.solution)
    report = verify_circuit(s2.circuit, code, s1.solution) if cfg.verify else None
    return CompileResult(s2.circuit, metrics, s1, s2, ops, report)
