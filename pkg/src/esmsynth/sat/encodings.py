"""Cardinality, parity and time-ordering encodings.

All encoders return a list of clauses and allocate their auxiliary
variables in the given registry.  Cardinality uses Sinz's sequential
counter.
"""
from __future__ import annotations

from typing import Hashable, Sequence

from .formula import EncodingError, VarRegistry

Clauses = list[list[int]]


def encode_at_most_k(reg: VarRegistry, lits: Sequence[int], k: int) -> Clauses:
    if k < 0:
        raise EncodingError(f"cardinality bound must be >= 0, got {k}")
    lits = list(lits)
    n = len(lits)
    if k >= n:
        return []
    if k == 0:
        return [[-x] for x in lits]
    if n == 2:  # k == 1
        return [[-lits[0], -lits[1]]]
    # s[i][j] <=> "at least j+1 of lits[0..i] are true" (upward direction only)
    s = [[reg.aux("seq") for _ in range(k)] for _ in range(n - 1)]
    out: Clauses = [[-lits[0], s[0][0]]]
    out.extend([-s[0][j]] for j in range(1, k))
    for i in range(1, n - 1):
        x = lits[i]
        out.append([-x, s[i][0]])
        out.append([-s[i - 1][0], s[i][0]])
        for j in range(1, k):
            out.append([-x, -s[i - 1][j - 1], s[i][j]])
            out.append([-s[i - 1][j], s[i][j]])
        out.append([-x, -s[i - 1][k - 1]])
    out.append([-lits[n - 1], -s[n - 2][k - 1]])
    return out


def encode_at_most_one(reg: VarRegistry, lits: Sequence[int]) -> Clauses:
    return encode_at_most_k(reg, lits, 1)


def encode_exactly_one(reg: VarRegistry, lits: Sequence[int]) -> Clauses:
    lits = list(lits)
    if not lits:
        raise EncodingError("exactly-one over an empty literal set")
    return [lits] + encode_at_most_one(reg, lits)


def build_counter(reg: VarRegistry, lits: Sequence[int], levels: int) -> tuple[Clauses, list[int]]:
    """Unary counter whose output ``out[j]`` is forced true when more than j lits are true.

    Assuming ``-out[c]`` therefore bounds the count to at most ``c``.
    """
    lits = list(lits)
    if levels < 1 or not lits:
        raise EncodingError("counter needs at least one level and one literal")
    clauses: Clauses = []
    prev: list[int] | None = None
    for i, x in enumerate(lits):
        width = min(levels, i + 1)
        cur = [reg.aux("cnt") for _ in range(width)]
        clauses.append([-x, cur[0]])
        if prev is not None:
            for j in range(len(prev)):
                clauses.append([-prev[j], cur[j]])
            for j in range(1, width):
                clauses.append([-x, -prev[j - 1], cur[j]])
        prev = cur
    assert prev is not None
    return clauses, prev


def encode_parity_even(reg: VarRegistry, flags: Sequence[int]) -> Clauses:
    """XOR chain: satisfied iff an even number of ``flags`` are true."""
    flags = list(flags)
    if not flags:
        return []
    acc = flags[0]
    out: Clauses = []
    for f in flags[1:]:
        y = reg.aux("xor")
        # y <-> acc xor f
        out += [[-y, acc, f], [-y, -acc, -f], [y, -acc, f], [y, acc, -f]]
        acc = y
    out.append([-acc])
    return out


def build_ladder(reg: VarRegistry, time_vars: Sequence[int], tag: Hashable | None = None) -> tuple[Clauses, list[int]]:
    """Prefix variables ``u[t-1]`` true iff the op runs at some step <= t."""
    T = len(time_vars)
    if T < 1:
        raise EncodingError("ladder needs a horizon T >= 1")
    if tag is None:
        u = [reg.aux("ladder") for _ in range(T)]
    else:
        u = [reg.new(("ladder", tag, t)) for t in range(1, T + 1)]
    out: Clauses = []
    for i in range(T):
        out.append([-time_vars[i], u[i]])
        if i == 0:
            out.append([-u[0], time_vars[0]])
        else:
            out.append([-u[i - 1], u[i]])
            out.append([-u[i], u[i - 1], time_vars[i]])
    return out, u


def encode_order(before_ladder: Sequence[int], after_time: Sequence[int], cond: Sequence[int] = ()) -> Clauses:
    """``cond -> t(before) < t(after)``; both ops share the horizon T."""
    T = len(after_time)
    if T < 1 or len(before_ladder) != T:
        raise EncodingError("order constraint needs matching horizons T >= 1")
    guard = [-c for c in cond]
    out: Clauses = [guard + [-after_time[0]]]
    for t in range(1, T):
        out.append(guard + [-after_time[t], before_ladder[t - 1]])
    return out
