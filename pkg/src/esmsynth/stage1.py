"""Stage 1: place data qubits and allocate ancilla bridges via MaxSAT.

Variables (registry tags):
  ("map", q, p)       data qubit q sits on node p
  ("occ", p)          node p holds some data qubit (compact exclusion)
  ("anc", s, p)       node p belongs to the bridge of stabilizer s
  ("v", s, p, t)      bridge traversal from the elected root reaches p by round t
                      (round 1 is the root itself)
  ("vr", s, r, p, t)  per-start traversal variant (``per_root_bft``)
  ("cp", s, q, p)     data qubit q of s couples to bridge node p
  ("compat", s, s2)   bridges of s and s2 are node-disjoint
Stabilizers are keyed by label.
"""
from __future__ import annotations

import itertools
import json
import logging
import time
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Mapping

from .arch import CouplingGraph
from .codes import StabilizerCode
from .sat import (
    Model,
    Status,
    VarRegistry,
    WcnfFormula,
    encode_at_most_k,
    encode_at_most_one,
    encode_exactly_one,
    solve_maxsat,
)

log = logging.getLogger(__name__)


class Stage1Error(RuntimeError):
    pass


class Stage1Infeasible(Stage1Error):
    """No valid mapping exists within the bridge-size cap (or the input is too large)."""


class Stage1Timeout(Stage1Error):
    """The solver ran out of time before finding any mapping."""


@dataclass
class Stage1Config:
    L: int | Mapping[str, int] | None = None  # None: wt(s) per stabilizer
    L_cap: int | None = None  # escalation limit; None: free nodes
    w1: int | None = None  # bridge-size weight (None: dominating stratum)
    w2: int | None = None  # compatibility weight
    w3: int | None = None  # retention weight (None: lowest stratum when priors given; 0 disables)
    region: frozenset[int] | None = None
    retention: Mapping[int, int] | None = None  # data qubit -> prior node
    per_root_bft: bool = False  # traversal from every start node, pairwise exclusion
    time_limit: float | None = 7200.0
    extra_hard: Callable[[VarRegistry, StabilizerCode, CouplingGraph], Iterable[list[int]]] | None = None
    backend: str | None = None
    max_total_ancilla: int | None = None  # optional hard cap on total bridge size
    external: str | None = None  # external MaxSAT command (``{wcnf}`` placeholder)

    def initial_L(self, code: StabilizerCode) -> dict[str, int]:
        if self.L is None:
            out = {s.label: s.weight for s in code.stabilizers}
        elif isinstance(self.L, int):
            out = {s.label: self.L for s in code.stabilizers}
        else:
            out = {s.label: int(self.L.get(s.label, s.weight)) for s in code.stabilizers}
        for lab, v in out.items():
            if v < 1:
                raise ValueError(f"bridge bound L[{lab}] must be >= 1")
        return out


@dataclass
class MappingSolution:
    pi: dict[int, int]
    anc: dict[str, frozenset[int]]
    cp: dict[str, dict[int, int]]

    def to_json(self) -> dict:
        return {
            "pi": {str(q): p for q, p in sorted(self.pi.items())},
            "anc": {s: sorted(a) for s, a in self.anc.items()},
            "cp": {s: {str(q): p for q, p in sorted(m.items())} for s, m in self.cp.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "MappingSolution":
        return cls(
            {int(q): int(p) for q, p in data["pi"].items()},
            {s: frozenset(int(p) for p in a) for s, a in data["anc"].items()},
            {s: {int(q): int(p) for q, p in m.items()} for s, m in data["cp"].items()},
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1))

    @classmethod
    def load(cls, path) -> "MappingSolution":
        return cls.from_json(json.loads(Path(path).read_text()))

    def key(self):
        """Hashable canonical form (for enumeration comparisons)."""
        return (
            tuple(sorted(self.pi.items())),
            tuple(sorted((s, tuple(sorted(a))) for s, a in self.anc.items())),
            tuple(sorted((s, tuple(sorted(m.items()))) for s, m in self.cp.items())),
        )

    @property
    def total_ancilla(self) -> int:
        return sum(len(a) for a in self.anc.values())

    def compatible_pairs(self) -> int:
        labs = sorted(self.anc)
        return sum(1 for a, b in itertools.combinations(labs, 2) if not (self.anc[a] & self.anc[b]))


@dataclass
class Stage1Result:
    solution: MappingSolution
    total_ancilla: int
    compatible_pairs: int
    optimal: bool
    L: dict[str, int]
    nvars: int
    nhard: int
    nsoft: int
    retained: int = 0
    elapsed: float = 0.0

    @property
    def extra_cnots(self) -> int:
        return 2 * (self.total_ancilla - len(self.solution.anc))


def _weights(cfg: Stage1Config, npairs: int, nret: int) -> tuple[int, int, int]:
    if cfg.w3 is None:
        w3 = 1 if nret else 0
    else:
        w3 = cfg.w3
    w2 = cfg.w2 if cfg.w2 is not None else nret * w3 + 1
    w1 = cfg.w1 if cfg.w1 is not None else npairs * w2 + nret * w3 + 1
    return w1, w2, w3


def encode_stage1(code: StabilizerCode, arch: CouplingGraph, cfg: Stage1Config | None = None,
                  L: Mapping[str, int] | None = None) -> tuple[WcnfFormula, VarRegistry]:
    cfg = cfg or Stage1Config()
    L = dict(L) if L is not None else cfg.initial_L(code)
    nodes = sorted(cfg.region & arch.nodes) if cfg.region is not None else list(arch.sorted_nodes)
    node_set = set(nodes)
    adj = {p: [m for m in arch.adj[p] if m in node_set] for p in nodes}
    data = list(range(code.num_data))
    if len(data) > len(nodes):
        raise Stage1Infeasible(f"{len(data)} data qubits do not fit on {len(nodes)} nodes")

    w = WcnfFormula()
    reg = w.registry

    # -- Hard A: placement
    for q in data:
        for p in nodes:
            reg.new(("map", q, p))
    for q in data:
        w.extend(encode_exactly_one(reg, [reg.get(("map", q, p)) for p in nodes]))
    for p in nodes:
        w.extend(encode_at_most_one(reg, [reg.get(("map", q, p)) for q in data]))
    compact = not cfg.per_root_bft
    if compact:
        for p in nodes:
            occ = reg.new(("occ", p))
            for q in data:
                w.add([-reg.get(("map", q, p)), occ])

    for s in code.stabilizers:
        lab, Ls = s.label, L[s.label]
        anc = {p: reg.new(("anc", lab, p)) for p in nodes}
        # Hard A(2): data and ancilla roles are exclusive
        for p in nodes:
            if compact:
                w.add([-anc[p], -reg.get(("occ", p))])
            else:
                for q in data:
                    w.add([-reg.get(("map", q, p)), -anc[p]])
        # Hard B: bridge connectivity by bounded breadth-first traversal
        if cfg.per_root_bft:
            _encode_bft_per_root(w, reg, lab, nodes, adj, anc, Ls)
        else:
            _encode_bft_root(w, reg, lab, nodes, adj, anc, Ls)
        if Ls < len(nodes):
            w.extend(encode_at_most_k(reg, [anc[p] for p in nodes], Ls))
        # Hard C: each data qubit of s couples to exactly one adjacent bridge node
        for q in s.qubits:
            cps = [reg.new(("cp", lab, q, p)) for p in nodes]
            w.extend(encode_exactly_one(reg, cps))
            for p, c in zip(nodes, cps):
                w.add([-c, anc[p]])
                w.add([-c] + [reg.get(("map", q, m)) for m in adj[p]])

    pairs = list(itertools.combinations([s.label for s in code.stabilizers], 2))
    compat = {}
    for a, b in pairs:
        c = reg.new(("compat", a, b))
        compat[(a, b)] = c
        for p in nodes:
            w.add([-c, -reg.get(("anc", a, p)), -reg.get(("anc", b, p))])

    if cfg.max_total_ancilla is not None:
        w.extend(encode_at_most_k(reg, [v for v, t in reg.with_prefix("anc")], cfg.max_total_ancilla))

    if cfg.extra_hard is not None:
        w.extend(cfg.extra_hard(reg, code, arch))

    retention = {q: p for q, p in (cfg.retention or {}).items() if p in node_set and q < code.num_data}
    w1, w2, w3 = _weights(cfg, len(pairs), len(retention) if cfg.w3 != 0 else 0)
    if w1 > 0:
        for s in code.stabilizers:
            for p in nodes:
                w.add_soft([-reg.get(("anc", s.label, p))], w1)
    if w2 > 0:
        for key in pairs:
            w.add_soft([compat[key]], w2)
    if w3 > 0:
        for q, p in sorted(retention.items()):
            w.add_soft([reg.get(("map", q, p))], w3)
    return w, reg


def _encode_bft_root(w, reg, lab, nodes, adj, anc, Ls) -> None:
    v = {(p, 1): reg.new(("v", lab, p, 1)) for p in nodes}
    w.extend(encode_exactly_one(reg, [v[p, 1] for p in nodes]))
    for p in nodes:
        w.add([-v[p, 1], anc[p]])
    for t in range(2, Ls + 1):
        for p in nodes:
            v[p, t] = reg.new(("v", lab, p, t))
        for p in nodes:
            w.add([-v[p, t], anc[p]])
            w.add([-v[p, t], v[p, t - 1]] + [v[m, t - 1] for m in adj[p]])
    for p in nodes:
        w.add([-anc[p], v[p, Ls]])


def _encode_bft_per_root(w, reg, lab, nodes, adj, anc, Ls) -> None:
    # Round-1 states are constants (only the start is visited); states at
    # distance >= t from the start are constant false and are not allocated.
    node_set = set(nodes)
    for r in nodes:
        dist = {r: 0}
        dq = deque([r])
        while dq:
            n = dq.popleft()
            for m in adj[n]:
                if m in node_set and m not in dist:
                    dist[m] = dist[n] + 1
                    dq.append(m)
        prev = {r: True}
        for t in range(2, Ls + 1):
            cur = {}
            for p in nodes:
                if dist.get(p, Ls) <= t - 1:
                    cur[p] = reg.new(("vr", lab, r, p, t))
            for p, var in cur.items():
                w.add([-var, anc[p]])
                srcs = [prev[m] for m in [p] + list(adj[p]) if m in prev]
                if True in srcs:
                    continue
                w.add([-var] + srcs)
            prev = cur
        for p in nodes:
            last = prev.get(p)
            if last is True:
                continue
            w.add([-anc[r], -anc[p]] + ([last] if last else []))


def decode_stage1(model: Model, reg: VarRegistry) -> MappingSolution:
    pi: dict[int, int] = {}
    anc: dict[str, set[int]] = {}
    cp: dict[str, dict[int, int]] = {}
    for vid, tag in reg.items():
        if not isinstance(tag, tuple):
            continue
        kind = tag[0]
        if kind == "anc":
            anc.setdefault(tag[1], set())
            if model[vid]:
                anc[tag[1]].add(tag[2])
        elif not model[vid]:
            continue
        elif kind == "map":
            if tag[1] in pi:
                raise Stage1Error(f"data qubit {tag[1]} placed twice")
            pi[tag[1]] = tag[2]
        elif kind == "cp":
            m = cp.setdefault(tag[1], {})
            if tag[2] in m:
                raise Stage1Error(f"coupling of ({tag[1]}, {tag[2]}) not unique")
            m[tag[2]] = tag[3]
    return MappingSolution(pi, {s: frozenset(a) for s, a in anc.items()}, cp)


def _connected(nodes: frozenset[int], arch: CouplingGraph) -> bool:
    if not nodes:
        return False
    start = min(nodes)
    seen = {start}
    dq = deque([start])
    while dq:
        n = dq.popleft()
        for m in arch.adj[n]:
            if m in nodes and m not in seen:
                seen.add(m)
                dq.append(m)
    return len(seen) == len(nodes)


def validate_mapping(sol: MappingSolution, code: StabilizerCode, arch: CouplingGraph,
                     L: Mapping[str, int] | None = None, data: Iterable[int] | None = None) -> list[str]:
    """Independent graph-search check of every placement/bridge/coupling rule."""
    problems = []
    data = list(range(code.num_data)) if data is None else list(data)
    for q in data:
        if q not in sol.pi:
            problems.append(f"data qubit {q} is not placed")
        elif sol.pi[q] not in arch.nodes:
            problems.append(f"data qubit {q} placed on missing node {sol.pi[q]}")
    placed = [p for q, p in sol.pi.items()]
    if len(set(placed)) != len(placed):
        problems.append("placement is not injective")
    data_nodes = set(placed)
    for s in code.stabilizers:
        lab = s.label
        bridge = sol.anc.get(lab, frozenset())
        if not bridge:
            problems.append(f"{lab}: empty bridge")
            continue
        if bridge - arch.nodes:
            problems.append(f"{lab}: bridge uses missing nodes {sorted(bridge - arch.nodes)}")
            continue
        if bridge & data_nodes:
            problems.append(f"{lab}: bridge overlaps data nodes {sorted(bridge & data_nodes)}")
        if not _connected(bridge, arch):
            problems.append(f"{lab}: bridge {sorted(bridge)} is not connected")
        if L is not None and len(bridge) > L[lab]:
            problems.append(f"{lab}: bridge size {len(bridge)} exceeds L={L[lab]}")
        cps = sol.cp.get(lab, {})
        if set(cps) != set(s.qubits):
            problems.append(f"{lab}: coupling covers {sorted(cps)} instead of {list(s.qubits)}")
        for q, p in cps.items():
            if p not in bridge:
                problems.append(f"{lab}: coupling node {p} of qubit {q} not in bridge")
            if q in sol.pi and not arch.has_edge(p, sol.pi[q]):
                problems.append(f"{lab}: coupling node {p} not adjacent to qubit {q} at {sol.pi[q]}")
    return problems


def solve_stage1(code: StabilizerCode, arch: CouplingGraph, cfg: Stage1Config | None = None) -> Stage1Result:
    cfg = cfg or Stage1Config()
    t0 = time.monotonic()
    L = cfg.initial_L(code)
    nodes = cfg.region & arch.nodes if cfg.region is not None else arch.nodes
    cap = cfg.L_cap if cfg.L_cap is not None else max(1, len(nodes) - code.num_data)
    while True:
        wcnf, reg = encode_stage1(code, arch, cfg, L)
        remaining = None if cfg.time_limit is None else max(0.0, cfg.time_limit - (time.monotonic() - t0))
        npairs = len(code) * (len(code) - 1) // 2
        nret = sum(1 for _ in reg.with_prefix("map")) and len(cfg.retention or {})
        w1 = _weights(cfg, npairs, nret if cfg.w3 != 0 else 0)[0]
        res = solve_maxsat(wcnf, remaining, lower_bounds={w1: w1 * len(code)} if w1 else None,
                           backend=cfg.backend, external=cfg.external)
        log.info("stage1 L=%s status=%s cost=%s (%.1fs)", L, res.status.value, res.cost, res.elapsed)
        if res.status is Status.SAT:
            break
        if res.status is Status.TIMEOUT:
            raise Stage1Timeout(f"no mapping found within {cfg.time_limit}s")
        grow = {lab: v + 1 for lab, v in L.items() if v < cap}
        if not grow:
            raise Stage1Infeasible(f"no valid mapping with bridge sizes up to {cap}")
        L.update(grow)
    sol = decode_stage1(res.model, reg)
    problems = validate_mapping(sol, code, arch, L)
    if problems:
        raise Stage1Error("decoded mapping failed validation: " + "; ".join(problems))
    retained = sum(1 for q, p in (cfg.retention or {}).items() if sol.pi.get(q) == p)
    return Stage1Result(sol, sol.total_ancilla, sol.compatible_pairs(), res.optimal, dict(L),
                        wcnf.nvars, len(wcnf.clauses), len(wcnf.soft), retained, time.monotonic() - t0)
