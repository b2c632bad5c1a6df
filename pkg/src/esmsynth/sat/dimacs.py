"""DIMACS CNF / WCNF reading and writing (classic ``p wcnf`` header)."""
from __future__ import annotations

from pathlib import Path
from typing import TextIO

from .formula import CnfFormula, EncodingError, VarRegistry, WcnfFormula


def _lits(cl) -> str:
    return " ".join(str(x) for x in cl) + " 0"


def dumps_cnf(cnf: CnfFormula) -> str:
    lines = [f"p cnf {cnf.nvars} {len(cnf.clauses)}"]
    lines += [_lits(cl) for cl in cnf.clauses]
    return "\n".join(lines) + "\n"


def dumps_wcnf(wcnf: WcnfFormula) -> str:
    top = wcnf.top_weight
    lines = [f"p wcnf {wcnf.nvars} {len(wcnf.clauses) + len(wcnf.soft)} {top}"]
    lines += [f"{top} {_lits(cl)}" for cl in wcnf.clauses]
    lines += [f"{w} {_lits(cl)}" for w, cl in wcnf.soft]
    return "\n".join(lines) + "\n"


def write_cnf(cnf: CnfFormula, path) -> None:
    Path(path).write_text(dumps_cnf(cnf))


def write_wcnf(wcnf: WcnfFormula, path) -> None:
    Path(path).write_text(dumps_wcnf(wcnf))


def _bare_registry(nvars: int) -> VarRegistry:
    reg = VarRegistry()
    for v in range(1, nvars + 1):
        reg.new(("dimacs", v))
    return reg


def _body(stream: TextIO):
    header = None
    pending: list[int] = []
    for raw in stream:
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p "):
            header = line.split()
            continue
        if header is None:
            raise EncodingError("clause before DIMACS header")
        for tok in line.split():
            x = int(tok)
            if x == 0:
                yield header, pending
                pending = []
            else:
                pending.append(x)
    if pending:
        raise EncodingError("unterminated clause at end of file")


def loads_cnf(text: str) -> CnfFormula:
    import io

    cnf: CnfFormula | None = None
    for header, cl in _body(io.StringIO(text)):
        if cnf is None:
            if header[1] != "cnf":
                raise EncodingError(f"not a CNF header: {' '.join(header)}")
            cnf = CnfFormula(_bare_registry(int(header[2])))
        cnf.add(cl)
    if cnf is None:
        header = next((ln.split() for ln in text.splitlines() if ln.startswith("p ")), None)
        if header is None:
            raise EncodingError("missing DIMACS header")
        cnf = CnfFormula(_bare_registry(int(header[2])))
    return cnf


def loads_wcnf(text: str) -> WcnfFormula:
    """Parse a classic ``p wcnf nvars nclauses top`` file; the first token of a clause is its weight."""
    import io

    header = next((ln.split() for ln in text.splitlines() if ln.startswith("p ")), None)
    if header is None or header[1] != "wcnf":
        raise EncodingError("missing 'p wcnf' header")
    nvars, top = int(header[2]), int(header[4])
    wcnf = WcnfFormula(_bare_registry(nvars))
    for _, cl in _body(io.StringIO(text)):
        w, lits = cl[0], cl[1:]
        if w >= top:
            wcnf.add(lits)
        else:
            wcnf.add_soft(lits, w)
    return wcnf


def read_wcnf(path) -> WcnfFormula:
    return loads_wcnf(Path(path).read_text())


def read_cnf(path) -> CnfFormula:
    return loads_cnf(Path(path).read_text())
