"""Stage 2: schedule the syndrome-extraction gates of a mapping by SAT.

Each stabilizer's bridge is prepared as a GHZ-type state along an encode
tree (Reset, Hadamard on the root, CNOTs parent to child), every data qubit
gets one controlled-Pauli from its coupling node, then a decode tree folds
the parity back onto a root which is rotated and measured.  The trees are
chosen by the solver through presence literals:

  ("enc", s, u, p)   u != p: encode CNOT u->p;  u == p: p is the encode root
  ("dec", s, u, p)   same for the decode tree (root carries H and Measure)
  ("time", g, t)     operation g runs at step t
  ("ladder", g, t)   operation g has run at some step <= t
  ("flag", g, h)     ctrl g runs before ctrl h (anti-commuting pair)
  ("ord", s, s2)     s finishes on the shared nodes before s2 starts

``disable`` switches off constraint families for mutation experiments:
"B1" tree roots, "B2" in-degree, "B3" parent-before-child, "C" parity,
"D" serialization of bridge-sharing stabilizers, "phase" per-qubit phase order.
"""
from __future__ import annotations

import itertools
import logging
import time
from collections import deque
from dataclasses import dataclass, field

from .arch import CouplingGraph
from .circuit import Circuit, Gate
from .codes import StabilizerCode, paulis_anticommute
from .sat import (
    CnfFormula,
    Model,
    Status,
    VarRegistry,
    encode_at_most_one,
    encode_exactly_one,
    encode_parity_even,
    solve_sat,
)
from .stage1 import MappingSolution

log = logging.getLogger(__name__)

FAMILIES = frozenset({"B1", "B2", "B3", "C", "D", "phase"})

# earliest step and minimum number of steps that must follow, per op kind
_HEAD = {"reset": 1, "h_enc": 2, "enc": 3, "ctrl": 3, "dec": 3, "h_dec": 4, "meas": 5}
_TAIL = {"reset": 3, "h_enc": 3, "enc": 2, "ctrl": 2, "dec": 2, "h_dec": 1, "meas": 0}


class Stage2Error(RuntimeError):
    pass


@dataclass(frozen=True)
class Op:
    idx: int
    kind: str  # reset h_enc enc ctrl dec h_dec meas
    qubits: tuple[int, ...]  # (p,) or (control, target)
    stab: str
    pauli: str = ""
    data: int = -1

    @property
    def optional(self) -> bool:
        return self.kind not in ("reset", "ctrl")

    def gate(self, t: int, segment: int = 0) -> Gate:
        kind, phase = {
            "reset": ("R", "init"), "h_enc": ("H", "init"), "enc": ("CX", "enc"),
            "ctrl": ("C" + self.pauli, "ctrl"), "dec": ("CX", "dec"),
            "h_dec": ("H", "meas"), "meas": ("M", "meas"),
        }[self.kind]
        return Gate(kind, self.qubits, t, self.stab, phase, segment)


@dataclass
class OperationSet:
    code: StabilizerCode
    solution: MappingSolution
    n: int
    ops: list[Op]
    bridge: dict[str, tuple[int, ...]]
    edges: dict[str, tuple[tuple[int, int], ...]]  # directed edges inside each bridge

    def of(self, stab: str, kind: str | None = None) -> list[Op]:
        return [o for o in self.ops if o.stab == stab and (kind is None or o.kind == kind)]


def enumerate_operations(sol: MappingSolution, code: StabilizerCode, arch: CouplingGraph) -> OperationSet:
    ops: list[Op] = []
    bridges, edges = {}, {}

    def add(kind, qubits, stab, pauli="", data=-1):
        ops.append(Op(len(ops), kind, tuple(qubits), stab, pauli, data))

    for s in code.stabilizers:
        lab = s.label
        b = tuple(sorted(sol.anc[lab]))
        bs = set(b)
        e = tuple((u, p) for u in b for p in arch.adj[u] if p in bs)
        bridges[lab], edges[lab] = b, e
        for p in b:
            add("reset", (p,), lab)
        for p in b:
            add("h_enc", (p,), lab)
        for u, p in e:
            add("enc", (u, p), lab)
        for q in s.qubits:
            add("ctrl", (sol.cp[lab][q], sol.pi[q]), lab, s.pauli_at(q), q)
        for u, p in e:
            add("dec", (u, p), lab)
        for p in b:
            add("h_dec", (p,), lab)
        for p in b:
            add("meas", (p,), lab)
    n = max(arch.nodes) + 1 if arch.nodes else 0
    return OperationSet(code, sol, n, ops, bridges, edges)


@dataclass
class Stage2Config:
    mode: str = "binary"  # or "linear"
    time_limit: float | None = 7200.0
    mirror_dec: bool = False
    disable: frozenset[str] = frozenset()
    backend: str | None = None

    def __post_init__(self):
        if self.mode not in ("binary", "linear"):
            raise ValueError(f"unknown depth-search mode {self.mode!r}")
        unknown = set(self.disable) - FAMILIES
        if unknown:
            raise ValueError(f"unknown constraint families {sorted(unknown)}")


class _Enc:
    """Clause builder with constant folding (True/False stand for fixed literals)."""

    def __init__(self, opset: OperationSet, T: int, cfg: Stage2Config):
        self.os, self.T, self.cfg = opset, T, cfg
        self.f = CnfFormula()
        self.reg = self.f.registry
        self.time: dict[int, dict[int, int]] = {}
        self.pres: dict[int, int | bool] = {}
        self._ladders: dict[int, list] = {}

    def clause(self, lits) -> None:
        out = []
        for x in lits:
            if x is True:
                return
            if x is False or x is None:
                continue
            out.append(x)
        if not out:
            # every literal folded to false: the instance is infeasible
            v = self.reg.aux("false")
            self.f.add([v])
            self.f.add([-v])
            return
        self.f.add(out)

    def window(self, op: Op) -> range:
        return range(_HEAD[op.kind], self.T - _TAIL[op.kind] + 1)

    def ladder(self, g: int) -> list:
        """``lad[t]`` (t = 0..T) is true iff op g has run at some step <= t."""
        if g in self._ladders:
            return self._ladders[g]
        tv = self.time[g]
        lad: list = [False] * (self.T + 1)
        for t in range(1, self.T + 1):
            prev = lad[t - 1]
            if t not in tv:
                lad[t] = prev
                continue
            u = self.reg.new(("ladder", g, t))
            self.clause([-tv[t], u])
            if prev is not False:
                self.clause([-prev, u])
            self.clause([-u, prev, tv[t]])
            lad[t] = u
        self._ladders[g] = lad
        return lad

    def before(self, a: int, b: int, cond=()) -> None:
        """``cond -> a runs strictly before b`` (absent b makes it vacuous)."""
        if any(c is False for c in cond):
            return
        lad = self.ladder(a)
        guard = [-c for c in cond if c is not True]
        for t, v in self.time[b].items():
            self.clause(guard + [-v, lad[t - 1]])


def encode_stage2(opset: OperationSet, T: int, cfg: Stage2Config | None = None) -> tuple[CnfFormula, VarRegistry]:
    cfg = cfg or Stage2Config()
    if T < 1:
        raise ValueError("depth bound T must be >= 1")
    E = _Enc(opset, T, cfg)
    reg, off = E.reg, cfg.disable
    ops = opset.ops

    # tree decision variables
    for s in opset.code.stabilizers:
        lab = s.label
        for tree in ("enc", "dec"):
            for p in opset.bridge[lab]:
                reg.new((tree, lab, p, p))
            for u, p in opset.edges[lab]:
                reg.new((tree, lab, u, p))

    def presence(o: Op):
        if o.kind in ("reset", "ctrl"):
            return True
        if o.kind in ("h_enc",):
            return reg.get(("enc", o.stab, o.qubits[0], o.qubits[0]))
        if o.kind in ("h_dec", "meas"):
            return reg.get(("dec", o.stab, o.qubits[0], o.qubits[0]))
        return reg.get((o.kind, o.stab) + o.qubits)

    # Hard A: each present op runs exactly once, one op per qubit per step
    for o in ops:
        E.pres[o.idx] = presence(o)
        tv = {t: reg.new(("time", o.idx, t)) for t in E.window(o)}
        E.time[o.idx] = tv
        lits = list(tv.values())
        if o.optional:
            E.f.extend(encode_at_most_one(reg, lits))
            E.clause([-E.pres[o.idx]] + lits)
            for v in lits:
                E.clause([-v, E.pres[o.idx]])
        elif lits:
            E.f.extend(encode_exactly_one(reg, lits))
        else:
            E.clause([])
    by_qubit: dict[int, list[Op]] = {}
    for o in ops:
        for q in o.qubits:
            by_qubit.setdefault(q, []).append(o)
    for q, qops in by_qubit.items():
        for t in range(1, T + 1):
            lits = [E.time[o.idx][t] for o in qops if t in E.time[o.idx]]
            if len(lits) > 1:
                E.f.extend(encode_at_most_one(reg, lits))

    prep: dict[tuple[str, int], list[Op]] = {}
    fin: dict[tuple[str, int], list[Op]] = {}
    for o in ops:
        if o.kind in ("h_enc", "enc"):
            prep.setdefault((o.stab, o.qubits[-1]), []).append(o)
        elif o.kind in ("h_dec", "dec"):
            fin.setdefault((o.stab, o.qubits[-1]), []).append(o)

    for s in opset.code.stabilizers:
        lab = s.label
        b = opset.bridge[lab]
        for tree in ("enc", "dec"):
            # Hard B(1): one root; B(2): every node has exactly one parent (or is the root)
            if "B1" not in off:
                E.f.extend(encode_exactly_one(reg, [reg.get((tree, lab, p, p)) for p in b]))
            if "B2" not in off:
                for p in b:
                    inc = [reg.get((tree, lab, p, p))] + [reg.get((tree, lab, u, v)) for u, v in opset.edges[lab] if v == p]
                    E.f.extend(encode_exactly_one(reg, inc))
        if cfg.mirror_dec:
            for p in b:
                E.clause([-reg.get(("enc", lab, p, p)), reg.get(("dec", lab, p, p))])
                E.clause([reg.get(("enc", lab, p, p)), -reg.get(("dec", lab, p, p))])
            for u, p in opset.edges[lab]:
                E.clause([-reg.get(("enc", lab, u, p)), reg.get(("dec", lab, u, p))])
                E.clause([reg.get(("enc", lab, u, p)), -reg.get(("dec", lab, u, p))])
        for o in opset.of(lab):
            if o.kind == "enc" and "B3" not in off:
                u = o.qubits[0]
                for g in prep[lab, u]:
                    E.before(g.idx, o.idx, [E.pres[o.idx], E.pres[g.idx]])
            if o.kind == "dec" and "B3" not in off:
                u = o.qubits[0]
                for g in fin[lab, u]:
                    E.before(o.idx, g.idx, [E.pres[o.idx], E.pres[g.idx]])
        if "phase" in off:
            continue
        resets = {o.qubits[0]: o for o in opset.of(lab, "reset")}
        for p in b:
            for g in prep[lab, p]:
                E.before(resets[p].idx, g.idx, [E.pres[g.idx]])
                for h in fin[lab, p]:
                    E.before(g.idx, h.idx, [E.pres[g.idx], E.pres[h.idx]])
        for o in opset.of(lab):
            if o.kind == "ctrl":
                p = o.qubits[0]
                for g in prep[lab, p]:
                    E.before(g.idx, o.idx, [E.pres[g.idx]])
                for h in fin[lab, p]:
                    E.before(o.idx, h.idx, [E.pres[h.idx]])
            elif o.kind == "enc":
                # an encode CNOT out of u happens while u is still live
                for h in fin[lab, o.qubits[0]]:
                    E.before(o.idx, h.idx, [E.pres[o.idx], E.pres[h.idx]])
            elif o.kind == "dec":
                # a decode CNOT out of u needs u prepared
                for g in prep[lab, o.qubits[0]]:
                    E.before(g.idx, o.idx, [E.pres[o.idx], E.pres[g.idx]])
        for hd in opset.of(lab, "h_dec"):
            m = next(x for x in opset.of(lab, "meas") if x.qubits == hd.qubits)
            E.before(hd.idx, m.idx, [E.pres[hd.idx]])

    stabs = opset.code.stabilizers
    for s1, s2 in itertools.combinations(stabs, 2):
        # Hard C: even number of inversions among anti-commuting ctrl pairs
        if "C" not in off:
            c1 = {o.data: o for o in opset.of(s1.label, "ctrl")}
            c2 = {o.data: o for o in opset.of(s2.label, "ctrl")}
            flags = []
            for q in sorted(set(c1) & set(c2)):
                a, b2 = c1[q], c2[q]
                if not paulis_anticommute(a.pauli, b2.pauli):
                    continue
                f = reg.new(("flag", a.idx, b2.idx))
                lad = E.ladder(a.idx)
                for t, v in E.time[b2.idx].items():
                    if lad[t - 1] is False:
                        E.clause([-v, -f])
                    else:
                        E.clause([-v, -lad[t - 1], f])
                        E.clause([-v, lad[t - 1], -f])
                flags.append(f)
            if flags:
                E.f.extend(encode_parity_even(reg, flags))
        # Hard D: bridge-sharing stabilizers run one after the other on shared nodes
        if "D" not in off:
            shared = sorted(set(opset.bridge[s1.label]) & set(opset.bridge[s2.label]))
            if shared:
                ordv = reg.new(("ord", s1.label, s2.label))
                for p in shared:
                    for first, second, lit in ((s1.label, s2.label, ordv), (s2.label, s1.label, -ordv)):
                        r2 = next(o for o in opset.of(second, "reset") if o.qubits[0] == p)
                        for g in opset.of(first):
                            last = (g.kind == "dec" and g.qubits[1] == p) or (g.kind == "meas" and g.qubits[0] == p)
                            if last:
                                E.before(g.idx, r2.idx, [lit, E.pres[g.idx]])
    return E.f, reg


def decode_stage2(model: Model, reg: VarRegistry, opset: OperationSet, segment: int = 0) -> Circuit:
    gates = []
    seen: dict[int, int] = {}
    for vid, tag in reg.with_prefix("time"):
        if model[vid]:
            g = tag[1]
            if g in seen:
                raise Stage2Error(f"operation {g} scheduled twice")
            seen[g] = tag[2]
    for o in opset.ops:
        if o.idx in seen:
            gates.append(o.gate(seen[o.idx], segment))
        elif not o.optional:
            raise Stage2Error(f"mandatory operation {o} not scheduled")
    return Circuit(opset.n, gates)


def _bfs_tree(bridge: tuple[int, ...], edges, root: int) -> list[tuple[int, int]]:
    adj: dict[int, list[int]] = {}
    for u, p in edges:
        adj.setdefault(u, []).append(p)
    order, seen = [], {root}
    dq = deque([root])
    while dq:
        u = dq.popleft()
        for p in sorted(adj.get(u, [])):
            if p not in seen:
                seen.add(p)
                order.append((u, p))
                dq.append(p)
    if len(seen) != len(bridge):
        raise Stage2Error(f"bridge {bridge} is not connected")
    return order


def _root_choice(opset: OperationSet, lab: str) -> int:
    b = opset.bridge[lab]
    return b[0]


def sequential_schedule(opset: OperationSet, segment: int = 0) -> Circuit:
    """Stabilizers one after another with BFS trees; depth sum of wt(s) + 2|anc[s]| + 2."""
    gates: list[Gate] = []
    t = 0
    for s in opset.code.stabilizers:
        lab = s.label
        b = opset.bridge[lab]
        r = _root_choice(opset, lab)
        tree = _bfs_tree(b, opset.edges[lab], r)
        t += 1
        for p in b:
            gates.append(Gate("R", (p,), t, lab, "init", segment))
        t += 1
        gates.append(Gate("H", (r,), t, lab, "init", segment))
        for u, p in tree:
            t += 1
            gates.append(Gate("CX", (u, p), t, lab, "enc", segment))
        for o in opset.of(lab, "ctrl"):
            t += 1
            gates.append(o.gate(t, segment))
        for u, p in reversed(tree):
            t += 1
            gates.append(Gate("CX", (u, p), t, lab, "dec", segment))
        t += 1
        gates.append(Gate("H", (r,), t, lab, "meas", segment))
        t += 1
        gates.append(Gate("M", (r,), t, lab, "meas", segment))
    return Circuit(opset.n, gates)


def _subset_opset(opset: OperationSet, labels: list[str]) -> OperationSet:
    idx = [opset.code.index(l) for l in labels]
    code = opset.code.subset(idx)
    keep = [o for o in opset.ops if o.stab in labels]
    ops = [Op(i, o.kind, o.qubits, o.stab, o.pauli, o.data) for i, o in enumerate(keep)]
    return OperationSet(code, opset.solution, opset.n,
                        ops, {l: opset.bridge[l] for l in labels}, {l: opset.edges[l] for l in labels})


def _try(opset: OperationSet, T: int, cfg: Stage2Config, limit: float | None):
    f, reg = encode_stage2(opset, T, cfg)
    res = solve_sat(f, time_limit=limit, backend=cfg.backend)
    return res, reg


def depth_lower_bound(opset: OperationSet, cfg: Stage2Config | None = None) -> int:
    cfg = cfg or Stage2Config()
    if not opset.ops:
        return 0
    load: dict[int, int] = {}
    for o in opset.ops:
        if o.kind == "ctrl":
            load[o.qubits[1]] = load.get(o.qubits[1], 0) + 1
    lb = max(load.values(), default=0) + 4
    for s in opset.code.stabilizers:
        b = opset.bridge[s.label]
        if len(b) == 1:
            lb = max(lb, s.weight + 4)
            continue
        sub = _subset_opset(opset, [s.label])
        T = max(lb, 5)
        sub_cfg = Stage2Config(disable=cfg.disable, mirror_dec=cfg.mirror_dec, backend=cfg.backend)
        while True:
            res, _ = _try(sub, T, sub_cfg, None)
            if res.status is Status.SAT:
                break
            T += 1
        lb = max(lb, T)
    return lb


@dataclass
class Stage2Result:
    circuit: Circuit
    depth: int
    optimal: bool
    lower_bound: int
    upper_bound: int
    probes: list[tuple[int, str]] = field(default_factory=list)
    elapsed: float = 0.0


def minimize_depth(opset: OperationSet, cfg: Stage2Config | None = None, segment: int = 0) -> Stage2Result:
    cfg = cfg or Stage2Config()
    t0 = time.monotonic()
    seq = sequential_schedule(opset, segment)
    ub = seq.depth
    if not opset.ops:
        return Stage2Result(seq, 0, True, 0, 0)
    lb = min(depth_lower_bound(opset, cfg), ub)
    best, best_T = seq, ub
    probes: list[tuple[int, str]] = []
    proven_lo = lb  # every T < proven_lo is infeasible
    timed_out = False

    def remaining():
        if cfg.time_limit is None:
            return None
        return max(0.0, cfg.time_limit - (time.monotonic() - t0))

    def probe(T: int):
        res, reg = _try(opset, T, cfg, remaining())
        probes.append((T, res.status.value))
        log.info("stage2 T=%d %s (%.1fs)", T, res.status.value, res.elapsed)
        return res, reg

    if cfg.mode == "binary":
        candidates = [lb] if lb < ub else []
        lo, hi = lb, ub
        while lo < hi:
            T = candidates.pop() if candidates else (lo + hi) // 2
            res, reg = probe(T)
            if res.status is Status.SAT:
                best, best_T, hi = decode_stage2(res.model, reg, opset, segment), T, T
            elif res.status is Status.UNSAT:
                lo = T + 1
            else:
                timed_out = True
                break
        proven_lo = lo
    else:
        T = ub - 1
        while T >= lb:
            res, reg = probe(T)
            if res.status is Status.SAT:
                best, best_T = decode_stage2(res.model, reg, opset, segment), T
                T -= 1
            elif res.status is Status.UNSAT:
                break
            else:
                timed_out = True
                break
        proven_lo = T + 1 if not timed_out else lb
    optimal = not timed_out and best_T <= proven_lo
    if best is not seq:
        best = Circuit(best.n, _compact(best.gates))
    return Stage2Result(best, best.depth, optimal, lb, ub, probes, time.monotonic() - t0)


def _compact(gates: list[Gate]) -> list[Gate]:
    """Close empty steps (possible when T exceeds the realized depth)."""
    steps = sorted({g.t for g in gates})
    remap = {t: i + 1 for i, t in enumerate(steps)}
    return [Gate(g.kind, g.qubits, remap[g.t], g.stab, g.phase, g.segment) for g in gates]


def check_schedule(circuit: Circuit, opset: OperationSet) -> list[str]:
    """Independent re-check of every scheduling rule on a decoded circuit."""
    problems = list(circuit.check())
    gates_by = {}
    for g in circuit.gates:
        gates_by.setdefault(g.stab, []).append(g)
    ctrl_time: dict[tuple[str, int], int] = {}
    code = opset.code
    for s in code.stabilizers:
        lab = s.label
        b = set(opset.bridge[lab])
        gs = gates_by.get(lab, [])
        resets = [g for g in gs if g.kind == "R"]
        if sorted(g.qubits[0] for g in resets) != sorted(b):
            problems.append(f"{lab}: resets {sorted(g.qubits[0] for g in resets)} != bridge {sorted(b)}")
            continue
        r_t = {g.qubits[0]: g.t for g in resets}
        enc_h = [g for g in gs if g.phase == "init" and g.kind == "H"]
        dec_h = [g for g in gs if g.phase == "meas" and g.kind == "H"]
        meas = [g for g in gs if g.kind == "M"]
        enc = [g for g in gs if g.phase == "enc"]
        dec = [g for g in gs if g.phase == "dec"]
        ctrl = [g for g in gs if g.phase == "ctrl"]
        if len(enc_h) != 1 or len(dec_h) != 1 or len(meas) != 1:
            problems.append(f"{lab}: expected one encode root, one decode root and one measurement")
            continue
        if meas[0].qubits != dec_h[0].qubits or meas[0].t <= dec_h[0].t:
            problems.append(f"{lab}: measurement must follow the decode-root Hadamard on the same node")
        prep = {enc_h[0].qubits[0]: enc_h[0].t}
        for g in enc:
            if g.qubits[1] in prep:
                problems.append(f"{lab}: node {g.qubits[1]} prepared twice")
            prep[g.qubits[1]] = g.t
        finish = {dec_h[0].qubits[0]: dec_h[0].t}
        for g in dec:
            if g.qubits[1] in finish:
                problems.append(f"{lab}: node {g.qubits[1]} decoded twice")
            finish[g.qubits[1]] = g.t
        if set(prep) != b or set(finish) != b:
            problems.append(f"{lab}: encode/decode trees do not span the bridge")
            continue
        for g in enc + dec:
            if not set(g.qubits) <= b:
                problems.append(f"{lab}: tree CNOT {g.qubits} leaves the bridge")
        for p in b:
            if not r_t[p] < prep[p] < finish[p]:
                problems.append(f"{lab}: node {p} violates reset < prepare < finish")
        for g in enc:
            u, p = g.qubits
            if not prep[u] < g.t < finish[u]:
                problems.append(f"{lab}: encode CNOT {u}->{p} outside the live window of {u}")
        for g in dec:
            u, p = g.qubits
            if not prep[u] < g.t < finish[u] or not prep[p] < g.t:
                problems.append(f"{lab}: decode CNOT {u}->{p} misordered")
        want = {q: (s.pauli_at(q), opset.solution.cp[lab][q], opset.solution.pi[q]) for q in s.qubits}
        got = {}
        for g in ctrl:
            q = next((q for q, (_, a, d) in want.items() if g.qubits == (a, d)), None)
            if q is None or g.kind != "C" + want[q][0] or q in got:
                problems.append(f"{lab}: unexpected controlled gate {g.kind} {g.qubits}")
                continue
            got[q] = g.t
            a = g.qubits[0]
            if not prep[a] < g.t < finish[a]:
                problems.append(f"{lab}: controlled gate on {a} outside its live window")
        if set(got) != set(s.qubits):
            problems.append(f"{lab}: controlled gates cover {sorted(got)} not {list(s.qubits)}")
        for q, t in got.items():
            ctrl_time[lab, q] = t
    for s1, s2 in itertools.combinations(code.stabilizers, 2):
        inv = 0
        for q in sorted(set(s1.qubits) & set(s2.qubits)):
            if paulis_anticommute(s1.pauli_at(q), s2.pauli_at(q)):
                if (s1.label, q) in ctrl_time and (s2.label, q) in ctrl_time:
                    inv += ctrl_time[s1.label, q] < ctrl_time[s2.label, q]
        if inv % 2:
            problems.append(f"{s1.label}/{s2.label}: odd number of anti-commuting inversions")
        shared = set(opset.bridge[s1.label]) & set(opset.bridge[s2.label])
        direction = set()
        for p in sorted(shared):
            t1 = [g.t for g in gates_by.get(s1.label, []) if p in g.qubits]
            t2 = [g.t for g in gates_by.get(s2.label, []) if p in g.qubits]
            if not t1 or not t2:
                continue
            if max(t1) < min(t2):
                direction.add(1)
            elif max(t2) < min(t1):
                direction.add(2)
            else:
                problems.append(f"{s1.label}/{s2.label}: shared node {p} used concurrently")
        if len(direction) > 1:
            problems.append(f"{s1.label}/{s2.label}: shared nodes serialized in opposite orders")
    return problems
