#!/usr/bin/env python3
"""Compare the compiled and pure-Python kernels on realistic workloads.

Workloads:
  propagate   all single-qubit data errors pushed through a compiled
              surface-code circuit (what the verifier does)
  clauses     first-falsified-clause scan over the Stage-1 hard clauses

Usage: python benchmarks/bench_kernels.py [--distance 3] [--repeat 5]
"""
from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from esmsynth import _pykernels, kernels
from esmsynth.arch import square_lattice
from esmsynth.codes import generate_code
from esmsynth.pipeline import compile_code
from esmsynth.sat import solve_sat
from esmsynth.stage1 import encode_stage1
from esmsynth.verify import verify_all_errors

try:
    from esmsynth import _ckernels
except ImportError:
    _ckernels = None


def timed(fn, repeat):
    out = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return statistics.median(out)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--distance", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    d = args.distance
    code, arch = generate_code("surface", d), square_lattice(2 * d - 1, 2 * d - 1)
    res = compile_code(code, arch)
    wcnf, _ = encode_stage1(code, arch)
    # a model of the hard clauses, so the scan visits every clause
    model = np.array(solve_sat(wcnf).model.values, np.int8)
    impls = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])

    print(f"surface d={d}: {len(res.circuit.gates)} gates, {len(wcnf.clauses)} hard clauses")
    rows = []
    for name, impl in impls:
        tp = timed(lambda: verify_all_errors(res.circuit, code, res.solution, impl=impl), args.repeat)
        tc = timed(lambda: kernels.first_falsified(wcnf.clauses, model, impl=impl), args.repeat)
        rows.append((name, tp, tc))
    print(f"{'kernel':8s} {'propagate [ms]':>15s} {'clauses [ms]':>13s}")
    for name, tp, tc in rows:
        print(f"{name:8s} {tp * 1e3:15.2f} {tc * 1e3:13.2f}")
    if len(rows) == 2:
        print(f"speedup  {rows[0][1] / rows[1][1]:15.1f}x {rows[0][2] / rows[1][2]:12.1f}x")


if __name__ == "__main__":
    main()
