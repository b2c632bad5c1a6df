"""Stabilizer codes: representation, validation, generators and metrics."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

PAULIS = ("I", "X", "Y", "Z")
# symplectic (x, z) bits
_XZ = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


class CodeError(ValueError):
    """Invalid generator parameters or malformed code input."""


def paulis_anticommute(a: str, b: str) -> bool:
    return a != "I" and b != "I" and a != b


def pauli_product(a: str, b: str) -> str:
    """Product up to phase."""
    xa, za = _XZ[a]
    xb, zb = _XZ[b]
    bits = (xa ^ xb, za ^ zb)
    return next(p for p, v in _XZ.items() if v == bits)


@dataclass(frozen=True)
class Stabilizer:
    support: tuple[tuple[int, str], ...]
    label: str = ""

    def __post_init__(self):
        sup = tuple((int(q), str(p).upper()) for q, p in self.support)
        if not sup:
            raise CodeError(f"stabilizer {self.label!r} has empty support")
        for q, p in sup:
            if p not in ("X", "Y", "Z"):
                raise CodeError(f"stabilizer {self.label!r}: invalid Pauli {p!r} on qubit {q}")
            if q < 0:
                raise CodeError(f"stabilizer {self.label!r}: negative qubit index {q}")
        sup = tuple(sorted(sup))
        qs = [q for q, _ in sup]
        if len(set(qs)) != len(qs):
            raise CodeError(f"stabilizer {self.label!r} acts twice on a qubit")
        object.__setattr__(self, "support", sup)

    @classmethod
    def from_string(cls, text: str, label: str = "", one_based: bool = False) -> "Stabilizer":
        """Parse ``"X0 X1 Z3"`` style strings (or dense ``"XXIZ"``)."""
        text = text.strip()
        off = 1 if one_based else 0
        if " " in text or any(ch.isdigit() for ch in text):
            items = []
            for tok in text.replace(",", " ").split():
                items.append((int(tok[1:]) - off, tok[0]))
            return cls(tuple(items), label)
        return cls(tuple((i, p) for i, p in enumerate(text.upper()) if p != "I"), label)

    @property
    def weight(self) -> int:
        return len(self.support)

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.support)

    def pauli_at(self, q: int) -> str:
        for qq, p in self.support:
            if qq == q:
                return p
        return "I"

    def as_dict(self) -> dict[int, str]:
        return dict(self.support)

    def __str__(self) -> str:
        return " ".join(f"{p}{q}" for q, p in self.support)


def stabilizers_commute(a: Stabilizer, b: Stabilizer) -> bool:
    pb = b.as_dict()
    clashes = sum(1 for q, p in a.support if paulis_anticommute(p, pb.get(q, "I")))
    return clashes % 2 == 0


@dataclass(frozen=True)
class StabilizerCode:
    num_data: int
    stabilizers: tuple[Stabilizer, ...]
    name: str = "code"

    def __post_init__(self):
        stabs = tuple(self.stabilizers)
        labels = []
        fixed = []
        for i, s in enumerate(stabs):
            lab = s.label or f"s{i}"
            if lab != s.label:
                s = Stabilizer(s.support, lab)
            fixed.append(s)
            labels.append(lab)
        if len(set(labels)) != len(labels):
            raise CodeError("stabilizer labels must be unique")
        object.__setattr__(self, "stabilizers", tuple(fixed))

    def __len__(self) -> int:
        return len(self.stabilizers)

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.stabilizers]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def subset(self, indices: Sequence[int], name: str | None = None) -> "StabilizerCode":
        return StabilizerCode(self.num_data, tuple(self.stabilizers[i] for i in indices),
                              name or f"{self.name}[{','.join(map(str, indices))}]")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "num_data": self.num_data,
            "stabilizers": [
                {"label": s.label, "paulis": [[q, p] for q, p in s.support]} for s in self.stabilizers
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "StabilizerCode":
        try:
            stabs = tuple(
                Stabilizer(tuple((int(q), p) for q, p in s["paulis"]), s.get("label", ""))
                for s in data["stabilizers"]
            )
            return cls(int(data["num_data"]), stabs, data.get("name", "code"))
        except (KeyError, TypeError) as exc:
            raise CodeError(f"malformed code JSON: {exc}") from exc

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1))

    @classmethod
    def load(cls, path) -> "StabilizerCode":
        return cls.from_json(json.loads(Path(path).read_text()))


def validate_code(code: StabilizerCode) -> list[str]:
    """Human-readable problems; an empty list means the code is valid."""
    problems = []
    if not code.stabilizers:
        problems.append("code has no stabilizers")
    for s in code.stabilizers:
        for q, _ in s.support:
            if not 0 <= q < code.num_data:
                problems.append(f"{s.label}: qubit {q} outside 0..{code.num_data - 1}")
    for a, b in itertools.combinations(code.stabilizers, 2):
        if not stabilizers_commute(a, b):
            problems.append(f"{a.label} and {b.label} anticommute")
    return problems


def code_density(code: StabilizerCode) -> Fraction:
    total = sum(s.weight for s in code.stabilizers)
    return Fraction(2 * total, len(code.stabilizers) + code.num_data)


def interaction_graph(code: StabilizerCode) -> dict[tuple[int, int], int]:
    """Edge weights |Data[s] & Data[s']| keyed by stabilizer index pairs (i < j)."""
    qsets = [set(s.qubits) for s in code.stabilizers]
    edges = {}
    for i, j in itertools.combinations(range(len(qsets)), 2):
        w = len(qsets[i] & qsets[j])
        if w:
            edges[(i, j)] = w
    return edges


# --- generators -------------------------------------------------------------

def _mk(items: Iterable[tuple[int, str]], label: str) -> Stabilizer:
    return Stabilizer(tuple(items), label)


def steane_code() -> StabilizerCode:
    # Hamming-code checks on qubits 1..7 (stored 0-based)
    checks = [(1, 2, 3, 4), (2, 4, 5, 6), (3, 4, 6, 7)]
    stabs = [_mk(((q - 1, "X") for q in c), f"X{i + 1}") for i, c in enumerate(checks)]
    stabs += [_mk(((q - 1, "Z") for q in c), f"Z{i + 1}") for i, c in enumerate(checks)]
    return StabilizerCode(7, tuple(stabs), "steane")


def repetition_code(n: int) -> StabilizerCode:
    if n < 2:
        raise CodeError("repetition code needs n >= 2")
    stabs = [_mk(((i, "Z"), (i + 1, "Z")), f"Z{i}") for i in range(n - 1)]
    return StabilizerCode(n, tuple(stabs), f"repetition{n}")


def rotated_surface_code(d: int) -> StabilizerCode:
    """Rotated planar surface code, d*d data qubits and d*d-1 checks.

    Data qubit (r, c) has index r*d + c.  Plaquettes sit at the corners
    (i, j), i, j in 0..d; bulk plaquettes alternate X/Z in a checkerboard,
    X-type weight-2 boundary checks live on the top/bottom edges and Z-type
    on the left/right edges.
    """
    if d < 3 or d % 2 == 0:
        raise CodeError("surface code distance must be odd and >= 3")
    stabs = []
    for i in range(d + 1):
        for j in range(d + 1):
            qs = [(r, c) for r in (i - 1, i) for c in (j - 1, j) if 0 <= r < d and 0 <= c < d]
            kind = "X" if (i + j) % 2 == 0 else "Z"
            if len(qs) == 4:
                pass
            elif len(qs) == 2:
                horizontal = qs[0][0] == qs[1][0]  # pair along a row: top/bottom boundary
                if horizontal and kind != "X":
                    continue
                if not horizontal and kind != "Z":
                    continue
            else:
                continue
            stabs.append(_mk(((r * d + c, kind) for r, c in qs), f"{kind}{i}_{j}"))
    stabs.sort(key=lambda s: (s.label[0], s.qubits))
    return StabilizerCode(d * d, tuple(stabs), f"surface{d}")


def cube_code() -> StabilizerCode:
    """[[8,3,2]] code on the cube: X on all 8 vertices, Z on each face."""
    verts = list(range(8))  # vertex v has coordinates (v&1, v>>1&1, v>>2&1)
    stabs = [_mk(((v, "X") for v in verts), "Xcube")]
    n = 0
    for axis in range(3):
        for val in (0, 1):
            face = [v for v in verts if (v >> axis) & 1 == val]
            stabs.append(_mk(((v, "Z") for v in face), f"Zface{n}"))
            n += 1
    # opposite faces multiply to the same all-Z operator, so only four of
    # the six faces are independent: keep both x-faces plus one y- and one z-face
    keep = [stabs[0], stabs[1], stabs[2], stabs[3], stabs[5]]
    return StabilizerCode(8, tuple(keep), "cube832")


def hypergraph_product(h1, h2, name: str = "hgp") -> StabilizerCode:
    """Tillich-Zemor hypergraph product of two binary parity-check matrices.

    With H1 (m1 x n1) and H2 (m2 x n2): data = n1*n2 + m1*m2 qubits,
    HX = [H1 (x) I_n2 | I_m1 (x) H2^T], HZ = [I_n1 (x) H2 | H1^T (x) I_m2].
    """
    h1 = np.asarray(h1, dtype=np.uint8) % 2
    h2 = np.asarray(h2, dtype=np.uint8) % 2
    if h1.ndim != 2 or h2.ndim != 2 or 0 in h1.shape or 0 in h2.shape:
        raise CodeError("parity-check matrices must be non-empty 2-D arrays")
    m1, n1 = h1.shape
    m2, n2 = h2.shape
    hx = np.hstack([np.kron(h1, np.eye(n2, dtype=np.uint8)), np.kron(np.eye(m1, dtype=np.uint8), h2.T)]) % 2
    hz = np.hstack([np.kron(np.eye(n1, dtype=np.uint8), h2), np.kron(h1.T, np.eye(m2, dtype=np.uint8))]) % 2
    n = n1 * n2 + m1 * m2
    stabs = []
    for i, row in enumerate(hx):
        qs = np.nonzero(row)[0]
        if len(qs):
            stabs.append(_mk(((int(q), "X") for q in qs), f"X{i}"))
    for i, row in enumerate(hz):
        qs = np.nonzero(row)[0]
        if len(qs):
            stabs.append(_mk(((int(q), "Z") for q in qs), f"Z{i}"))
    return StabilizerCode(n, tuple(stabs), name)


FAMILIES = ("surface", "steane", "repetition", "cube", "hgp")


def generate_code(family: str, *params, **kw) -> StabilizerCode:
    family = family.lower()
    if family in ("surface", "rotated_surface"):
        (d,) = params or (kw.get("d", 3),)
        return rotated_surface_code(int(d))
    if family == "steane":
        return steane_code()
    if family in ("repetition", "rep"):
        (n,) = params or (kw.get("n", 3),)
        return repetition_code(int(n))
    if family in ("cube", "cube832", "color832"):
        return cube_code()
    if family == "hgp":
        h1, h2 = params if params else (kw["h1"], kw["h2"])
        return hypergraph_product(h1, h2)
    raise CodeError(f"unknown code family {family!r}; choose from {FAMILIES}")


def parse_code_spec(spec: str) -> StabilizerCode:
    """CLI form: ``surface:3``, ``steane``, ``repetition:5``, ``cube``, ``hgp:rep3``,
    ``paulis:ZZZZ,XXII`` (explicit Pauli strings) or a JSON path."""
    if spec.endswith(".json") or Path(spec).is_file():
        return StabilizerCode.load(spec)
    fam, _, arg = spec.partition(":")
    fam = fam.lower()
    if fam == "paulis":
        words = [w for w in arg.split(",") if w]
        if not words:
            raise CodeError("paulis: needs at least one Pauli string")
        stabs = tuple(Stabilizer.from_string(w, f"s{i}") for i, w in enumerate(words))
        return StabilizerCode(max(len(w) for w in words), stabs, "paulis")
    if fam == "hgp":
        h = _named_matrix(arg or "rep3")
        return hypergraph_product(h, h, f"hgp_{arg or 'rep3'}")
    if arg:
        return generate_code(fam, int(arg))
    return generate_code(fam)


def _named_matrix(name: str) -> np.ndarray:
    if name.startswith("rep"):
        n = int(name[3:])
        return np.array([[1 if c in (r, r + 1) else 0 for c in range(n)] for r in range(n - 1)])
    if name.startswith("cyc"):
        n = int(name[3:])
        return np.array([[1 if c in (r, (r + 1) % n) else 0 for c in range(n)] for r in range(n)])
    raise CodeError(f"unknown parity-check matrix {name!r} (use repN or cycN)")
