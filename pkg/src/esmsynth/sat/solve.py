"""SAT and MaxSAT solving behind a small, deadline-aware interface.

SAT calls go to an incremental CDCL backend from python-sat.  MaxSAT is a
stratified linear SAT-UNSAT search on top of it; an external WCNF solver
can be plugged in through the ``ESMSYNTH_MAXSAT_CMD`` environment variable.
"""
from __future__ import annotations

import enum
import logging
import math
import os
import shlex
import subprocess
import tempfile
import threading
import time
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

from pysat.solvers import Solver

from .. import kernels
from .dimacs import write_wcnf
from .encodings import build_counter
from .formula import CnfFormula, Model, VarRegistry, WcnfFormula

log = logging.getLogger(__name__)

DEFAULT_BACKEND = os.environ.get("ESMSYNTH_SAT_BACKEND", "glucose4")
EXTERNAL_CMD_ENV = "ESMSYNTH_MAXSAT_CMD"
LB_PROBE_SECONDS = 30.0


def debug_checks_enabled() -> bool:
    return os.environ.get("ESMSYNTH_DEBUG", "1") != "0"


class Status(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    TIMEOUT = "TIMEOUT"


class ModelCheckError(RuntimeError):
    """The solver returned a model that falsifies a hard clause."""


@dataclass
class SatResult:
    status: Status
    model: Model | None = None
    elapsed: float = 0.0


@dataclass
class MaxSatResult:
    status: Status  # SAT (with model), UNSAT (hard part) or TIMEOUT (no model at all)
    model: Model | None = None
    cost: int | None = None
    optimal: bool = False
    stratum_costs: list[int] = field(default_factory=list)
    elapsed: float = 0.0


def check_model(clauses: Sequence[Sequence[int]], model: Model) -> int:
    """Index of the first clause the model falsifies, or -1."""
    return kernels.first_falsified(clauses, model.values)


def _assert_model(clauses, model: Model) -> None:
    bad = check_model(clauses, model)
    if bad >= 0:
        raise ModelCheckError(f"model falsifies hard clause #{bad}: {list(clauses[bad])}")


class _Deadline:
    def __init__(self, time_limit: float | None):
        self.end = None if time_limit is None else time.monotonic() + time_limit

    def remaining(self) -> float | None:
        if self.end is None:
            return None
        return max(0.0, self.end - time.monotonic())

    def expired(self) -> bool:
        return self.end is not None and time.monotonic() >= self.end


class IncrementalSolver:
    """Thin wrapper adding deadlines and model checking to a pysat solver."""

    def __init__(self, nvars: int, clauses: Iterable[Sequence[int]] = (), backend: str | None = None):
        self.backend = backend or DEFAULT_BACKEND
        self._solver = Solver(name=self.backend)
        self.nvars = nvars
        self.clauses: list[list[int]] = []
        self.add_clauses(clauses)

    def add_clauses(self, clauses: Iterable[Sequence[int]]) -> None:
        for cl in clauses:
            cl = list(cl)
            self.clauses.append(cl)
            self._solver.add_clause(cl)
            m = max(abs(x) for x in cl)
            if m > self.nvars:
                self.nvars = m

    def set_phases(self, lits: Sequence[int]) -> None:
        try:
            self._solver.set_phases(list(lits))
        except NotImplementedError:  # pragma: no cover - backend dependent
            pass

    def solve(self, assumptions: Sequence[int] = (), time_limit: float | None = None) -> SatResult:
        t0 = time.monotonic()
        if time_limit is not None and time_limit <= 0:
            return SatResult(Status.TIMEOUT, elapsed=0.0)
        timer = None
        if time_limit is not None:
            timer = threading.Timer(time_limit, self._solver.interrupt)
            timer.start()
        try:
            res = self._solver.solve_limited(assumptions=list(assumptions), expect_interrupt=timer is not None)
        finally:
            if timer is not None:
                timer.cancel()
                self._solver.clear_interrupt()
        elapsed = time.monotonic() - t0
        if res is None:
            return SatResult(Status.TIMEOUT, elapsed=elapsed)
        if not res:
            return SatResult(Status.UNSAT, elapsed=elapsed)
        model = Model.from_literals(self._solver.get_model(), self.nvars)
        if debug_checks_enabled():
            _assert_model(self.clauses, model)
        return SatResult(Status.SAT, model, elapsed)

    def close(self) -> None:
        self._solver.delete()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def solve_sat(cnf: CnfFormula | Sequence[Sequence[int]], assumptions: Sequence[int] = (),
              time_limit: float | None = None, backend: str | None = None) -> SatResult:
    if isinstance(cnf, CnfFormula):
        clauses, nvars = cnf.clauses, cnf.nvars
    else:
        clauses = [list(c) for c in cnf]
        nvars = max((abs(x) for c in clauses for x in c), default=0)
    with IncrementalSolver(nvars, clauses, backend) as s:
        return s.solve(assumptions, time_limit)


def soft_cost(wcnf: WcnfFormula, model: Model) -> int:
    return sum(w for w, cl in wcnf.soft if not any(model[l] for l in cl))


def stratify(weights: Sequence[int]) -> list[list[int]]:
    """Group soft-clause indices into lexicographic strata, highest first.

    A distinct weight opens a new stratum only when it exceeds the total
    weight of every lighter clause, so solving strata top-down is exact.
    """
    by_w: dict[int, list[int]] = {}
    for i, w in enumerate(weights):
        by_w.setdefault(w, []).append(i)
    strata: list[list[int]] = []
    below = 0
    for w in sorted(by_w):
        idx = by_w[w]
        if strata and w <= below:
            strata[-1].extend(idx)
        else:
            strata.append(list(idx))
        below += w * len(idx)
    return strata[::-1]


def solve_maxsat(wcnf: WcnfFormula, time_limit: float | None = None, *,
                 lower_bounds: dict[int, int] | None = None, backend: str | None = None,
                 phases: Sequence[int] | None = None, external: str | None = None) -> MaxSatResult:
    """Minimise the weight of falsified soft clauses subject to the hard clauses.

    ``lower_bounds`` optionally maps a stratum weight (any weight inside
    the stratum) to a known lower bound on that stratum's cost in weight
    units; the search stops as soon as the bound is met.
    """
    cmd = external if external is not None else os.environ.get(EXTERNAL_CMD_ENV)
    if cmd:
        return solve_maxsat_external(wcnf, cmd, time_limit)
    t0 = time.monotonic()
    deadline = _Deadline(time_limit)
    reg = VarRegistry()
    for v in range(1, wcnf.nvars + 1):
        reg.new(("ext", v))
    selectors: list[int] = []
    relax: list[list[int]] = []
    for w, cl in wcnf.soft:
        if len(cl) == 1:
            selectors.append(-cl[0])
        else:
            b = reg.aux("relax")
            relax.append(cl + [b])
            selectors.append(b)

    solver = IncrementalSolver(reg.top, list(wcnf.clauses) + relax, backend)
    if phases:
        solver.set_phases(phases)
    else:
        solver.set_phases([-b for b in selectors])
    weights = [w for w, _ in wcnf.soft]
    strata = stratify(weights)
    best: Model | None = None
    stratum_costs: list[int] = []
    optimal = True
    try:
        first = solver.solve(time_limit=deadline.remaining())
        if first.status is Status.UNSAT:
            return MaxSatResult(Status.UNSAT, elapsed=time.monotonic() - t0)
        if first.status is Status.TIMEOUT:
            return MaxSatResult(Status.TIMEOUT, elapsed=time.monotonic() - t0)
        best = first.model
        for stratum in strata:
            g = reduce(math.gcd, (weights[i] for i in stratum))
            units = [(selectors[i], weights[i] // g) for i in stratum]
            lits = [s for s, k in units for _ in range(k)]

            def cost_of(m: Model) -> int:
                return sum(k for s, k in units if m[s])

            lb = 0
            if lower_bounds:
                for i in stratum:
                    if weights[i] in lower_bounds:
                        lb = max(lb, lower_bounds[weights[i]] // g)
            cost = cost_of(best)
            if cost > lb:
                clauses, out = build_counter(reg, lits, cost + 1)
                solver.add_clauses(clauses)
                if lb > 0:
                    # a known bound is often tight: try it before descending one unit at a time
                    rem = deadline.remaining()
                    r = solver.solve([-out[lb]], time_limit=LB_PROBE_SECONDS if rem is None else min(rem, LB_PROBE_SECONDS))
                    if r.status is Status.SAT:
                        best, cost = r.model, cost_of(r.model)
                    elif r.status is Status.UNSAT:
                        lb += 1
                while cost > lb:
                    r = solver.solve([-out[cost - 1]], time_limit=deadline.remaining())
                    if r.status is Status.SAT:
                        best = r.model
                        cost = cost_of(best)
                        log.debug("stratum w=%d improved to %d", g, cost)
                    elif r.status is Status.UNSAT:
                        break
                    else:
                        optimal = False
                        break
                if not optimal:
                    stratum_costs.append(cost * g)
                    break
                if cost < len(out):  # otherwise every literal is true and the bound is vacuous
                    solver.add_clauses([[-out[cost]]])
            else:
                # pin the stratum at its (optimal) cost for the lower strata
                clauses, out = build_counter(reg, lits, cost + 1)
                solver.add_clauses(clauses)
                if cost < len(out):
                    solver.add_clauses([[-out[cost]]])
            stratum_costs.append(cost * g)
    finally:
        solver.close()
    assert best is not None
    model = Model(best.values[: wcnf.nvars + 1])
    if debug_checks_enabled():
        _assert_model(wcnf.clauses, model)
    return MaxSatResult(Status.SAT, model, soft_cost(wcnf, model), optimal, stratum_costs,
                        time.monotonic() - t0)


def parse_solver_output(text: str, nvars: int) -> tuple[str | None, Model | None]:
    status = None
    lits: list[int] = []
    bits: str | None = None
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s "):
            status = line[2:].strip()
        elif line.startswith("v "):
            body = line[2:].split()
            if len(body) == 1 and set(body[0]) <= {"0", "1"} and len(body[0]) > 1:
                bits = body[0]
            else:
                lits.extend(int(x) for x in body if x != "0")
    if bits is not None:
        lits = [i + 1 if c == "1" else -(i + 1) for i, c in enumerate(bits)]
    if not lits:
        return status, None
    return status, Model.from_literals(lits, nvars)


def solve_maxsat_external(wcnf: WcnfFormula, cmd: str, time_limit: float | None = None) -> MaxSatResult:
    """Run an external WCNF solver; ``{wcnf}`` in ``cmd`` is replaced by the instance path."""
    t0 = time.monotonic()
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "instance.wcnf")
        write_wcnf(wcnf, path)
        argv = shlex.split(cmd)
        argv = [a.replace("{wcnf}", path) for a in argv] if "{wcnf}" in cmd else argv + [path]
        try:
            proc = subprocess.run(argv, capture_output=True, text=True, timeout=time_limit)
            out = proc.stdout
        except subprocess.TimeoutExpired as exc:
            out = exc.stdout.decode() if isinstance(exc.stdout, bytes) else (exc.stdout or "")
    status, model = parse_solver_output(out, wcnf.nvars)
    elapsed = time.monotonic() - t0
    if status == "UNSATISFIABLE":
        return MaxSatResult(Status.UNSAT, elapsed=elapsed)
    if model is None:
        return MaxSatResult(Status.TIMEOUT, elapsed=elapsed)
    _assert_model(wcnf.clauses, model)
    return MaxSatResult(Status.SAT, model, soft_cost(wcnf, model), status == "OPTIMUM FOUND", [], elapsed)
