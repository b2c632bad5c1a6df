"""Partitioned compilation for large codes.

The stabilizers are split into balanced subsets that are compiled one after
another.  Each subset's Stage 1 is nudged to keep data qubits where the
previous subset left them; whatever moves is routed with SWAP layers.
"""
from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Sequence

from .arch import CouplingGraph, NoPathError, shortest_path
from .circuit import Circuit, Gate, Metrics, compute_metrics, expand_swaps
from .codes import StabilizerCode, interaction_graph
from .pipeline import CompileConfig, CompileResult, compile_code
from .sat import CnfFormula, Status, encode_at_most_one, encode_exactly_one, solve_sat
from .verify import VerifyReport, verify_all_errors, verify_syndrome_extraction

log = logging.getLogger(__name__)


class RoutingError(RuntimeError):
    pass


def _cut_weight(assign: Sequence[int], w: Mapping[tuple[int, int], int]) -> int:
    return sum(c for (i, j), c in w.items() if assign[i] != assign[j])


def partition_stabilizers(code: StabilizerCode, k: int, seed: int = 0) -> list[list[int]]:
    """Balanced k-way split of the stabilizer interaction graph with a small cut.

    Subsets are grown greedily (most-connected unassigned stabilizer first),
    then improved by pairwise swaps between subsets while the cut shrinks.
    """
    n = len(code)
    if not 1 <= k <= max(n, 1):
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    if k == 1:
        return [list(range(n))]
    w = interaction_graph(code)
    nbr: dict[int, dict[int, int]] = {i: {} for i in range(n)}
    for (i, j), c in w.items():
        nbr[i][j] = c
        nbr[j][i] = c
    rng = random.Random(seed)
    sizes = [n // k + (1 if i < n % k else 0) for i in range(k)]
    assign = [-1] * n
    order = list(range(n))
    if seed:
        rng.shuffle(order)
    for part, size in enumerate(sizes):
        members: list[int] = []
        while len(members) < size:
            free = [v for v in order if assign[v] < 0]
            if members:
                v = max(free, key=lambda v: (sum(nbr[v].get(m, 0) for m in members), -order.index(v)))
            else:
                # start from the free stabilizer with the fewest free neighbours
                v = min(free, key=lambda v: (sum(1 for m in nbr[v] if assign[m] < 0), order.index(v)))
            assign[v] = part
            members.append(v)

    def gain(a: int, b: int) -> int:
        pa, pb = assign[a], assign[b]
        ext_a = sum(c for m, c in nbr[a].items() if assign[m] == pb and m != b)
        int_a = sum(c for m, c in nbr[a].items() if assign[m] == pa)
        ext_b = sum(c for m, c in nbr[b].items() if assign[m] == pa and m != a)
        int_b = sum(c for m, c in nbr[b].items() if assign[m] == pb)
        return (ext_a - int_a) + (ext_b - int_b)

    improved = True
    while improved:
        improved = False
        best = (0, None)
        for a in range(n):
            for b in range(a + 1, n):
                if assign[a] != assign[b]:
                    g = gain(a, b)
                    if g > best[0]:
                        best = (g, (a, b))
        if best[1] is not None:
            a, b = best[1]
            assign[a], assign[b] = assign[b], assign[a]
            improved = True
    return [[v for v in range(n) if assign[v] == p] for p in range(k)]


def order_subsets(subsets: Sequence[Sequence[int]], code: StabilizerCode, start: int | None = None) -> list[int]:
    """Greedy order: each next subset shares the most data qubits with those already chosen."""
    qs = [set().union(*(code.stabilizers[i].qubits for i in sub)) if sub else set() for sub in subsets]
    k = len(subsets)
    if k == 0:
        return []
    if start is None:
        inter = [sum(len(qs[i] & qs[j]) for j in range(k) if j != i) for i in range(k)]
        start = max(range(k), key=lambda i: (inter[i], -i))
    order = [start]
    seen = set(qs[start])
    rest = [i for i in range(k) if i != start]
    while rest:
        nxt = max(rest, key=lambda i: (len(qs[i] & seen), -i))
        order.append(nxt)
        rest.remove(nxt)
        seen |= qs[nxt]
    return order


def _tree_token_swap(arch: CouplingGraph, pos: dict[int, int], target: Mapping[int, int],
                     nodes: set[int]) -> list[tuple[int, int]]:
    """Leaf-elimination token swapping on a BFS spanning tree of ``nodes``."""
    root = min(nodes)
    parent = {root: None}
    order = [root]
    i = 0
    while i < len(order):
        u = order[i]
        i += 1
        for v in arch.adj[u]:
            if v in nodes and v not in parent:
                parent[v] = u
                order.append(v)
    if len(order) != len(nodes):
        raise RoutingError("device graph is disconnected")
    children: dict[int, set[int]] = {v: set() for v in nodes}
    for v, p in parent.items():
        if p is not None:
            children[p].add(v)
    occ = {p: q for q, p in pos.items()}
    alive = set(nodes)
    swaps: list[tuple[int, int]] = []

    def tree_path(a: int, b: int) -> list[int]:
        up_a, x = [], a
        while x is not None:
            up_a.append(x)
            x = parent[x]
        anc = set(up_a)
        up_b, x = [], b
        while x not in anc:
            up_b.append(x)
            x = parent[x]
        return up_a[: up_a.index(x) + 1] + up_b[::-1]

    def move(path: list[int]) -> None:
        for a, b in zip(path, path[1:]):
            swaps.append((a, b))
            qa, qb = occ.get(a), occ.get(b)
            occ.pop(a, None)
            occ.pop(b, None)
            if qa is not None:
                occ[b] = qa
                pos[qa] = b
            if qb is not None:
                occ[a] = qb
                pos[qb] = a

    wanted = {p: q for q, p in target.items()}
    for leaf in reversed(order):  # children before parents
        q = wanted.get(leaf)
        if q is not None:
            if pos[q] != leaf:
                move(tree_path(pos[q], leaf))
        elif leaf in occ:
            # pull the nearest hole (inside the remaining tree) onto the leaf
            holes = [v for v in alive if v not in occ]
            hole = min(holes, key=lambda h: (len(tree_path(h, leaf)), h))
            move(tree_path(hole, leaf))
        alive.discard(leaf)
    return swaps


def route_integration(prev: Mapping[int, int], nxt: Mapping[int, int], arch: CouplingGraph) -> list[tuple[int, int]]:
    """SWAP sequence taking data layout ``prev`` to ``nxt`` (executed in order)."""
    if set(prev) != set(nxt):
        raise RoutingError("placements cover different data qubits")
    for m in (prev, nxt):
        if len(set(m.values())) != len(m):
            raise RoutingError("placement is not injective")
    pos = dict(prev)
    occ = {p: q for q, p in pos.items()}
    settled: set[int] = set()
    swaps: list[tuple[int, int]] = []
    for q in sorted(pos):
        if pos[q] == nxt[q]:
            settled.add(nxt[q])
            continue
        try:
            path = shortest_path(arch, pos[q], nxt[q], avoid=settled)
        except NoPathError:
            log.info("greedy routing blocked at qubit %d; falling back to tree token swapping", q)
            swaps += _tree_token_swap(arch, pos, nxt, set(arch.nodes))
            break
        for a, b in zip(path, path[1:]):
            swaps.append((a, b))
            qa, qb = occ.pop(a, None), occ.pop(b, None)
            if qa is not None:
                occ[b], pos[qa] = qa, b
            if qb is not None:
                occ[a], pos[qb] = qb, a
        settled.add(nxt[q])
    # postcondition by independent simulation
    sim = {p: q for q, p in prev.items()}
    for a, b in swaps:
        if not arch.has_edge(a, b):
            raise RoutingError(f"SWAP on non-edge ({a}, {b})")
        qa, qb = sim.pop(a, None), sim.pop(b, None)
        if qa is not None:
            sim[b] = qa
        if qb is not None:
            sim[a] = qb
    if {q: p for p, q in sim.items()} != dict(nxt):
        raise RoutingError("routing failed to reach the required placement")
    return swaps


def layer_swaps(swaps: Sequence[tuple[int, int]]) -> list[list[tuple[int, int]]]:
    """ASAP layering that keeps the relative order of SWAPs sharing a qubit."""
    ready: dict[int, int] = {}
    layers: list[list[tuple[int, int]]] = []
    for a, b in swaps:
        t = max(ready.get(a, 0), ready.get(b, 0))
        if t == len(layers):
            layers.append([])
        layers[t].append((a, b))
        ready[a] = ready[b] = t + 1
    return layers


@dataclass
class Segment:
    index: int
    subset: list[int]
    labels: list[str]
    result: CompileResult
    placement: dict[int, int]
    swaps: list[tuple[int, int]]
    start_step: int = 1
    retained: int = 0
    moved: int = 0


@dataclass
class PartitionedResult:
    circuit: Circuit
    metrics: Metrics
    segments: list[Segment]
    order: list[int]
    subsets: list[list[int]]
    report: VerifyReport | None = None
    segment_reports: list[VerifyReport] = field(default_factory=list)

    @property
    def initial_placement(self) -> dict[int, int]:
        return self.segments[0].placement

    def plan(self) -> dict:
        return {
            "subsets": self.subsets,
            "order": self.order,
            "segments": [
                {
                    "index": s.index,
                    "stabilizers": s.labels,
                    "start_step": s.start_step,
                    "placement": {str(q): p for q, p in sorted(s.placement.items())},
                    "swaps": [list(x) for x in s.swaps],
                    "retained": s.retained,
                    "moved": s.moved,
                    "mapping": s.result.solution.to_json(),
                    "optimal": s.result.optimal,
                }
                for s in self.segments
            ],
            "metrics": self.metrics.__dict__,
        }

    def save_plan(self, path) -> None:
        Path(path).write_text(json.dumps(self.plan(), indent=1))


def seed_layout(code: StabilizerCode, arch: CouplingGraph, time_limit: float | None = 60.0,
                backend: str | None = None) -> dict[int, int] | None:
    """Whole-code placement in which every stabilizer has one bare ancilla adjacent to all its qubits.

    Pure feasibility SAT; ``None`` when unsatisfiable or out of time.  Used
    as the retention prior of the first subset so later subsets can keep
    their data qubits in place.
    """
    nodes = list(arch.sorted_nodes)
    if code.num_data > len(nodes):
        return None
    f = CnfFormula()
    reg = f.registry
    for q in range(code.num_data):
        f.extend(encode_exactly_one(reg, [reg.var(("map", q, p)) for p in nodes]))
    occ = {}
    for p in nodes:
        lits = [reg.var(("map", q, p)) for q in range(code.num_data)]
        f.extend(encode_at_most_one(reg, lits))
        occ[p] = reg.new(("occ", p))
        for x in lits:
            f.add([-x, occ[p]])
    for s in code.stabilizers:
        anc = []
        for p in nodes:
            a = reg.new(("anc", s.label, p))
            anc.append(a)
            f.add([-a, -occ[p]])
            for q in s.qubits:
                f.add([-a] + [reg.var(("map", q, m)) for m in arch.adj[p]])
        f.extend(encode_exactly_one(reg, anc))
    res = solve_sat(f, time_limit=time_limit, backend=backend)
    if res.status is not Status.SAT:
        log.info("no bare-ancilla seed layout (%s)", res.status.value)
        return None
    return {t[1]: t[2] for v, t in reg.with_prefix("map") if res.model[v]}


def solve_subset(code: StabilizerCode, subset: Sequence[int], arch: CouplingGraph,
                 prior: Mapping[int, int] | None, cfg: CompileConfig, segment: int = 0) -> tuple[CompileResult, int, int]:
    """Compile one subset with retention towards ``prior``; returns (result, retained, moved)."""
    sub = code.subset(list(subset))
    c = cfg
    if prior:
        c = replace(cfg, stage1=replace(cfg.stage1, retention=dict(prior)), verify=False)
    else:
        c = replace(cfg, verify=False)
    res = compile_code(sub, arch, c, segment=segment)
    if not prior:
        return res, 0, 0
    shared = set().union(*(sub.stabilizers[i].qubits for i in range(len(sub)))) & set(prior)
    retained = sum(1 for q in shared if res.solution.pi[q] == prior[q])
    return res, retained, len(shared) - retained


def compile_partitioned(code: StabilizerCode, arch: CouplingGraph, k: int,
                        cfg: CompileConfig | None = None, start: int | None = None) -> PartitionedResult:
    cfg = cfg or CompileConfig()
    subsets = partition_stabilizers(code, k, cfg.seed)
    order = order_subsets(subsets, code, start)
    gates: list[Gate] = []
    segments: list[Segment] = []
    offset = 0
    prior: dict[int, int] | None = None
    if k > 1:
        prior = seed_layout(code, arch, backend=cfg.stage1.backend)
    n = max(arch.nodes) + 1
    for seg, si in enumerate(order):
        res, retained, moved = solve_subset(code, subsets[si], arch, prior, cfg, segment=seg)
        place = dict(res.solution.pi)
        swaps: list[tuple[int, int]] = []
        if seg > 0:
            swaps = route_integration(prior, place, arch)
            for li, layer in enumerate(layer_swaps(swaps)):
                for a, b in layer:
                    gates.append(Gate("SWAP", (a, b), offset + li + 1, "", "route", seg))
            offset += len(layer_swaps(swaps))
        gates += res.circuit.shifted(offset, segment=seg)
        segments.append(Segment(seg, list(subsets[si]), [code.stabilizers[i].label for i in subsets[si]],
                                res, place, swaps, offset + 1, retained, moved))
        offset += res.circuit.depth
        prior = place
        log.info("segment %d: %d stabilizers, %d swaps, depth %d", seg, len(subsets[si]), len(swaps), res.circuit.depth)
    raw = Circuit(n, gates)
    circuit = expand_swaps(raw)
    # segment start steps after SWAP expansion
    shift_steps = sorted({g.t for g in raw.gates if g.kind == "SWAP"})
    for s in segments:
        s.start_step += 2 * sum(1 for t in shift_steps if t < s.start_step)
    metrics = compute_metrics(circuit, [s.result.solution for s in segments])
    out = PartitionedResult(circuit, metrics, segments, order, subsets)
    if cfg.verify:
        out.report = verify_syndrome_extraction(circuit, code, segments[0].placement)
        for s in segments:
            out.segment_reports.append(verify_all_errors(circuit, code, s.placement, from_step=s.start_step))
    return out
