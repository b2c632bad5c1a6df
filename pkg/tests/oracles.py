"""Brute-force reference implementations used as test oracles.

Nothing here uses SAT: mappings are enumerated directly, schedules are
found by breadth-first search over execution states, MaxSAT by trying
every assignment.
"""
from __future__ import annotations

import itertools
from collections import deque

from esmsynth.codes import paulis_anticommute


# -- MaxSAT ------------------------------------------------------------------

def brute_maxsat(nvars, hard, soft):
    """Minimum falsified soft weight over all assignments (None if hard is UNSAT)."""
    best = None
    for bits in itertools.product((False, True), repeat=nvars):
        def sat(cl):
            return any(bits[abs(l) - 1] == (l > 0) for l in cl)
        if not all(sat(c) for c in hard):
            continue
        cost = sum(w for w, c in soft if not sat(c))
        if best is None or cost < best:
            best = cost
    return best


# -- Stage 1 -----------------------------------------------------------------

def connected_subsets(arch, allowed, max_size):
    """All connected node sets of size 1..max_size inside ``allowed``."""
    allowed = set(allowed)
    seen = set()
    out = []
    frontier = [frozenset([p]) for p in sorted(allowed)]
    while frontier:
        nxt = []
        for s in frontier:
            if s in seen:
                continue
            seen.add(s)
            out.append(s)
            if len(s) == max_size:
                continue
            for p in s:
                for m in arch.adj[p]:
                    if m in allowed and m not in s:
                        nxt.append(s | {m})
        frontier = nxt
    return out


def brute_mappings(code, arch, L):
    """Canonical keys of every valid mapping (same shape as MappingSolution.key())."""
    nodes = sorted(arch.nodes)
    out = set()
    for perm in itertools.permutations(nodes, code.num_data):
        pi = dict(enumerate(perm))
        free = set(nodes) - set(perm)
        per_stab = []
        for s in code.stabilizers:
            options = []
            for b in connected_subsets(arch, free, L[s.label]):
                choices = []
                for q in s.qubits:
                    choices.append([p for p in sorted(b) if arch.has_edge(p, pi[q])])
                for cps in itertools.product(*choices):
                    options.append((s.label, tuple(sorted(b)), tuple(zip(s.qubits, cps))))
            per_stab.append(options)
        for combo in itertools.product(*per_stab):
            out.add((
                tuple(sorted(pi.items())),
                tuple(sorted((lab, b) for lab, b, _ in combo)),
                tuple(sorted((lab, tuple(sorted(cp))) for lab, _, cp in combo)),
            ))
    return out


# -- Stage 2 -----------------------------------------------------------------

def arborescences(bridge, edges):
    """Every (root, parent-map) spanning tree of the bridge using directed ``edges``."""
    bridge = sorted(bridge)
    into = {p: [u for u, v in edges if v == p] for p in bridge}
    for r in bridge:
        others = [p for p in bridge if p != r]
        for parents in itertools.product(*(into[p] for p in others)):
            par = dict(zip(others, parents))
            ok = True
            for p in others:
                x, steps = p, 0
                while x != r and steps <= len(bridge):
                    x = par[x]
                    steps += 1
                if x != r:
                    ok = False
                    break
            if ok:
                yield r, par


def _ops_for(opset, trees):
    """Concrete op list and precedence pairs for fixed encode/decode trees."""
    ops = []  # (name, stab, qubits)
    prec = []

    def add(name, stab, qubits, extra=None):
        ops.append((name, stab, tuple(qubits), extra))
        return len(ops) - 1

    ctrl_of = {}
    for s in opset.code.stabilizers:
        lab = s.label
        (er, epar), (dr, dpar) = trees[lab]
        b = opset.bridge[lab]
        reset = {p: add("R", lab, (p,)) for p in b}
        prep = {er: add("Henc", lab, (er,))}
        enc = {}
        for p, u in epar.items():
            enc[p] = add("enc", lab, (u, p))
            prep[p] = enc[p]
        ctrl = []
        for q in s.qubits:
            a = opset.solution.cp[lab][q]
            c = add("ctrl", lab, (a, opset.solution.pi[q]), (q, s.pauli_at(q)))
            ctrl.append((a, c))
            ctrl_of[lab, q] = c
        fin = {dr: add("Hdec", lab, (dr,))}
        dec = {}
        for p, u in dpar.items():
            dec[p] = add("dec", lab, (u, p))
            fin[p] = dec[p]
        meas = add("M", lab, (dr,))
        for p in b:
            prec.append((reset[p], prep[p]))
            prec.append((prep[p], fin[p]))
        for p, u in epar.items():
            prec.append((prep[u], enc[p]))
            prec.append((enc[p], fin[u]))
        for p, u in dpar.items():
            prec.append((dec[p], fin[u]))
            prec.append((prep[u], dec[p]))
        for a, c in ctrl:
            prec.append((prep[a], c))
            prec.append((c, fin[a]))
        prec.append((fin[dr], meas))
    return ops, prec, ctrl_of


def brute_min_depth(opset, limit=40):
    """Exact minimum depth over all tree choices by level-wise state search."""
    code = opset.code
    labs = [s.label for s in code.stabilizers]
    tree_opts = {lab: list(arborescences(opset.bridge[lab], opset.edges[lab])) for lab in labs}
    pairs = []
    for s1, s2 in itertools.combinations(code.stabilizers, 2):
        qs = [q for q in sorted(set(s1.qubits) & set(s2.qubits))
              if paulis_anticommute(s1.pauli_at(q), s2.pauli_at(q))]
        shared = set(opset.bridge[s1.label]) & set(opset.bridge[s2.label])
        pairs.append((s1.label, s2.label, qs, shared))
    best = None
    for enc_choice in itertools.product(*(tree_opts[l] for l in labs)):
        for dec_choice in itertools.product(*(tree_opts[l] for l in labs)):
            trees = {l: (e, d) for l, e, d in zip(labs, enc_choice, dec_choice)}
            d = _search(opset, trees, pairs, limit if best is None else best - 1)
            if d is not None and (best is None or d < best):
                best = d
    return best


def _search(opset, trees, pairs, limit):
    ops, prec, ctrl_of = _ops_for(opset, trees)
    n = len(ops)
    preds = [set() for _ in range(n)]
    for a, b in prec:
        preds[b].add(a)
    on_node = {}  # (stab, node) -> op ids touching it
    for i, (_, lab, qs, _) in enumerate(ops):
        for q in qs:
            on_node.setdefault((lab, q), set()).add(i)
    full = frozenset(range(n))
    start = (frozenset(), tuple(0 for _ in pairs), tuple(None for _ in pairs))
    level = {start}
    for depth in range(1, limit + 1):
        nxt = set()
        for done, par, dirs in level:
            ready = [i for i in range(n) if i not in done and preds[i] <= done]
            for r in range(1, len(ready) + 1):
                for chosen in itertools.combinations(ready, r):
                    qubits = [q for i in chosen for q in ops[i][2]]
                    if len(qubits) != len(set(qubits)):
                        continue
                    st = _apply(ops, chosen, done, par, dirs, pairs, ctrl_of, on_node)
                    if st is None:
                        continue
                    if st[0] == full:
                        if all(p % 2 == 0 for p in st[1]):
                            return depth
                        continue
                    nxt.add(st)
        level = nxt
        if not level:
            return None
    return None


def _apply(ops, chosen, done, par, dirs, pairs, ctrl_of, on_node):
    par, dirs = list(par), list(dirs)
    for k, (a, b, qs, shared) in enumerate(pairs):
        for q in qs:
            ca, cb = ctrl_of[a, q], ctrl_of[b, q]
            # count "a's gate strictly before b's gate" when b's runs now
            if cb in chosen and ca in done:
                par[k] += 1
        if not shared:
            continue
        starts = {a: False, b: False}
        for i in chosen:
            lab, qs_i = ops[i][1], ops[i][2]
            if lab not in (a, b) or not set(qs_i) & shared:
                continue
            other = b if lab == a else a
            for p in set(qs_i) & shared:
                if dirs[k] is None:
                    starts[lab] = True
                elif dirs[k] == lab:
                    pass
                else:
                    # the other stabilizer goes first on p: it must be finished there
                    if not on_node.get((other, p), set()) <= done:
                        return None
        if starts[a] and starts[b]:
            return None
        if dirs[k] is None:
            if starts[a]:
                dirs[k] = a
            elif starts[b]:
                dirs[k] = b
    return done | frozenset(chosen), tuple(par), tuple(dirs)
