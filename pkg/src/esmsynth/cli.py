"""Command-line driver.

Exit codes: 0 success, 1 verification failure, 2 infeasible, 3 timeout
without any solution, 64 bad input.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict
from pathlib import Path

from .arch import ArchError, CouplingGraph, parse_arch_spec
from .circuit import CircuitError, Metrics, compute_metrics, emit_json, emit_stim_text, load_circuit
from .codes import CodeError, StabilizerCode, parse_code_spec
from .partition import RoutingError, compile_partitioned
from .pipeline import CompileConfig, compile_code
from .sat import EXTERNAL_CMD_ENV, write_wcnf
from .stage1 import MappingSolution, Stage1Config, Stage1Infeasible, Stage1Timeout, encode_stage1
from .stage2 import Stage2Config
from .verify import VerifyReport, verify_circuit

EXIT_OK, EXIT_ORACLE, EXIT_INFEASIBLE, EXIT_TIMEOUT, EXIT_USAGE = 0, 1, 2, 3, 64

log = logging.getLogger("esmsynth")


class UsageError(Exception):
    pass


def _defects(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad defect list {text!r}") from exc


def _load_code(spec: str) -> StabilizerCode:
    return parse_code_spec(spec)


def _load_arch(spec: str, defects: str | None = None) -> CouplingGraph:
    return parse_arch_spec(spec, _defects(defects))


def _positive(kind):
    def conv(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
        return v
    return conv


def _stage1_cfg(args) -> Stage1Config:
    ext = None
    if args.solver and args.solver != "internal":
        ext = args.solver
    return Stage1Config(
        L=args.L, L_cap=args.L_cap, w1=args.w1, w2=args.w2, w3=args.w3,
        per_root_bft=args.per_root_bft, time_limit=args.stage1_time, backend=args.backend, external=ext,
    )


def _add_stage1_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--code", required=True, help="code spec (surface:3, steane, repetition:5, cube, hgp:rep3, paulis:ZZZZ) or JSON file")
    p.add_argument("--arch", required=True, help="architecture spec (square:5x5, hexagon:3x7, heavy_square:3x4, heavy_hexagon:3x7, path:4) or JSON file")
    p.add_argument("--defects", help="comma-separated node ids to remove")
    p.add_argument("--L", type=_positive(int), help="initial bridge-size bound for every stabilizer (default: its weight)")
    p.add_argument("--L-cap", dest="L_cap", type=_positive(int), help="largest bridge size tried on escalation")
    p.add_argument("--w1", type=int, help="bridge-size weight")
    p.add_argument("--w2", type=int, help="bridge-compatibility weight")
    p.add_argument("--w3", type=int, help="placement-retention weight (partitioned runs)")
    p.add_argument("--per-root-bft", action="store_true", help="traversal from every start node instead of an elected root")
    p.add_argument("--stage1-time", type=_positive(float), default=7200.0)
    p.add_argument("--backend", default=os.environ.get("ESMSYNTH_SAT_BACKEND"), help="pysat solver name")
    p.add_argument("--solver", default="internal",
                   help=f"'internal' or an external MaxSAT command with a {{wcnf}} placeholder (also via ${EXTERNAL_CMD_ENV})")


def cmd_compile(args) -> int:
    code = _load_code(args.code)
    arch = _load_arch(args.arch, args.defects)
    cfg = CompileConfig(
        stage1=_stage1_cfg(args),
        stage2=Stage2Config(mode=args.depth_search, time_limit=args.stage2_time,
                            mirror_dec=args.mirror_dec, backend=args.backend),
        partition=args.partition, seed=args.seed,
    )
    if args.partition > max(1, len(code)):
        raise UsageError(f"--partition {args.partition} exceeds the {len(code)} stabilizers")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.partition == 1:
        res = compile_code(code, arch, cfg)
        circuit, metrics, report = res.circuit, res.metrics, res.report
        mapping = res.solution
        optimal = res.optimal
        plan = None
    else:
        pres = compile_partitioned(code, arch, args.partition, cfg)
        circuit, metrics = pres.circuit, pres.metrics
        failures = list(pres.report.failures) if pres.report else []
        for r in pres.segment_reports:
            failures += r.failures
        report = VerifyReport(not failures, failures)
        mapping = pres.segments[0].result.solution
        optimal = {
            "stage1": all(s.result.stage1.optimal for s in pres.segments),
            "stage2": all(s.result.stage2.optimal for s in pres.segments),
        }
        plan = pres.plan()
    mapping.save(out / "mapping.json")
    (out / "circuit.json").write_text(emit_json(circuit, metrics))
    (out / "circuit.stim").write_text(emit_stim_text(circuit))
    (out / "metrics.json").write_text(json.dumps({**asdict(metrics), "optimal": optimal}, indent=1))
    if plan is not None:
        (out / "plan.json").write_text(json.dumps(plan, indent=1))
    summary = {**asdict(metrics), "optimal": optimal}
    if not all(optimal.values()):
        summary["note"] = "non-optimal"
    summary["verified"] = bool(report.passed) if report is not None else None
    print(json.dumps(summary))
    if report is not None and not report.passed:
        for f in report.failures[:20]:
            print("oracle:", f, file=sys.stderr)
        return EXIT_ORACLE
    return EXIT_OK


def cmd_gen_code(args) -> int:
    code = _load_code(args.spec)
    text = json.dumps(code.to_json(), indent=1)
    if args.output:
        Path(args.output).write_text(text)
    else:
        print(text)
    return EXIT_OK


def cmd_gen_arch(args) -> int:
    arch = _load_arch(args.spec, args.defects)
    text = json.dumps(arch.to_json(), indent=1)
    if args.output:
        Path(args.output).write_text(text)
    else:
        print(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    code = _load_code(args.code)
    circuit = load_circuit(args.circuit)
    mapping = MappingSolution.load(args.mapping)
    report = verify_circuit(circuit, code, mapping)
    if report.passed:
        print(f"PASS ({report.checked} checks)")
        return EXIT_OK
    print("FAIL")
    for f in report.failures:
        print("  " + f)
    return EXIT_ORACLE


def cmd_metrics(args) -> int:
    circuit = load_circuit(args.circuit)
    mapping = MappingSolution.load(args.mapping) if args.mapping else None
    m: Metrics = compute_metrics(circuit, mapping)
    print(json.dumps(asdict(m)))
    return EXIT_OK


def cmd_export_wcnf(args) -> int:
    code = _load_code(args.code)
    arch = _load_arch(args.arch, args.defects)
    wcnf, reg = encode_stage1(code, arch, _stage1_cfg(args))
    out = Path(args.output)
    write_wcnf(wcnf, out)
    legend = {str(v): list(t) if isinstance(t, tuple) else t for v, t in reg.items()}
    Path(str(out) + ".vars.json").write_text(json.dumps(legend))
    print(json.dumps({"nvars": wcnf.nvars, "hard": len(wcnf.clauses), "soft": len(wcnf.soft)}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="esmsynth", description="Compile syndrome-measurement circuits onto sparse devices.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="map, schedule and verify")
    _add_stage1_args(p)
    p.add_argument("--partition", type=_positive(int), default=1, help="number of stabilizer subsets")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stage2-time", type=_positive(float), default=7200.0)
    p.add_argument("--depth-search", choices=("binary", "linear"), default="binary")
    p.add_argument("--mirror-dec", action="store_true", help="decode tree mirrors the encode tree")
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("gen-code", help="write a code as JSON")
    p.add_argument("spec")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen_code)

    p = sub.add_parser("gen-arch", help="write a coupling graph as JSON")
    p.add_argument("spec")
    p.add_argument("--defects")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen_arch)

    p = sub.add_parser("verify", help="re-check a compiled circuit")
    p.add_argument("--circuit", required=True)
    p.add_argument("--mapping", required=True)
    p.add_argument("--code", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("metrics", help="print circuit metrics")
    p.add_argument("--circuit", required=True)
    p.add_argument("--mapping")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("export-wcnf", help="write the Stage-1 MaxSAT instance")
    _add_stage1_args(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_export_wcnf)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except Stage1Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except Stage1Timeout as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    except (UsageError, CodeError, ArchError, CircuitError, RoutingError, ValueError, KeyError,
            FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
