"""Hardware coupling graphs: lattice generators, defects, density, paths."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable


class ArchError(ValueError):
    """Bad generator dimensions, unknown nodes or malformed architecture input."""


class NoPathError(ArchError):
    pass


@dataclass(frozen=True)
class CouplingGraph:
    nodes: frozenset[int]
    edges: frozenset[tuple[int, int]]
    name: str = "arch"

    def __post_init__(self):
        nodes = frozenset(int(n) for n in self.nodes)
        edges = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise ArchError(f"self-loop on node {a}")
            if a not in nodes or b not in nodes:
                raise ArchError(f"edge ({a}, {b}) references a missing node")
            edges.add((min(a, b), max(a, b)))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", frozenset(edges))

    @cached_property
    def adj(self) -> dict[int, tuple[int, ...]]:
        nb: dict[int, list[int]] = {n: [] for n in self.nodes}
        for a, b in self.edges:
            nb[a].append(b)
            nb[b].append(a)
        return {n: tuple(sorted(v)) for n, v in nb.items()}

    @cached_property
    def sorted_nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self.nodes))

    def degree(self, n: int) -> int:
        return len(self.adj[n])

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def __len__(self) -> int:
        return len(self.nodes)

    def to_json(self, defects: Iterable[int] = ()) -> dict:
        return {
            "name": self.name,
            "nodes": sorted(self.nodes),
            "edges": [list(e) for e in sorted(self.edges)],
            "defects": sorted(defects),
        }

    @classmethod
    def from_json(cls, data: dict) -> "CouplingGraph":
        try:
            g = cls(frozenset(data["nodes"]), frozenset(tuple(e) for e in data["edges"]), data.get("name", "arch"))
        except (KeyError, TypeError) as exc:
            raise ArchError(f"malformed architecture JSON: {exc}") from exc
        defects = data.get("defects") or []
        return remove_defects(g, set(defects)) if defects else g

    def save(self, path, defects: Iterable[int] = ()) -> None:
        Path(path).write_text(json.dumps(self.to_json(defects)))

    @classmethod
    def load(cls, path) -> "CouplingGraph":
        return cls.from_json(json.loads(Path(path).read_text()))


def _check_dims(rows: int, cols: int) -> None:
    if rows < 1 or cols < 1:
        raise ArchError(f"lattice dimensions must be >= 1, got {rows}x{cols}")


def square_lattice(rows: int, cols: int) -> CouplingGraph:
    _check_dims(rows, cols)
    nodes = range(rows * cols)
    edges = set()
    for i in range(rows):
        for j in range(cols):
            n = i * cols + j
            if j + 1 < cols:
                edges.add((n, n + 1))
            if i + 1 < rows:
                edges.add((n, n + cols))
    return CouplingGraph(frozenset(nodes), frozenset(edges), f"square{rows}x{cols}")


def hexagon_lattice(rows: int, cols: int) -> CouplingGraph:
    """Brick-wall embedding of the honeycomb lattice (max degree 3).

    Every row is a path; rows i and i+1 are joined at columns with i+j even.
    """
    _check_dims(rows, cols)
    edges = set()
    for i in range(rows):
        for j in range(cols):
            n = i * cols + j
            if j + 1 < cols:
                edges.add((n, n + 1))
            if i + 1 < rows and (i + j) % 2 == 0:
                edges.add((n, n + cols))
    return CouplingGraph(frozenset(range(rows * cols)), frozenset(edges), f"hexagon{rows}x{cols}")


def heavy(g: CouplingGraph, name: str | None = None) -> CouplingGraph:
    """Insert one node on every edge (new ids follow the sorted edge order)."""
    nxt = max(g.nodes) + 1 if g.nodes else 0
    nodes = set(g.nodes)
    edges = set()
    for a, b in sorted(g.edges):
        m = nxt
        nxt += 1
        nodes.add(m)
        edges.add((a, m))
        edges.add((b, m))
    return CouplingGraph(frozenset(nodes), frozenset(edges), name or f"heavy_{g.name}")


def heavy_square_lattice(rows: int, cols: int) -> CouplingGraph:
    return heavy(square_lattice(rows, cols), f"heavy_square{rows}x{cols}")


def heavy_hexagon_lattice(rows: int, cols: int) -> CouplingGraph:
    return heavy(hexagon_lattice(rows, cols), f"heavy_hexagon{rows}x{cols}")


def path_graph(n: int) -> CouplingGraph:
    if n < 1:
        raise ArchError("path needs at least one node")
    return CouplingGraph(frozenset(range(n)), frozenset((i, i + 1) for i in range(n - 1)), f"path{n}")


FAMILIES = {
    "square": square_lattice,
    "hexagon": hexagon_lattice,
    "heavy_square": heavy_square_lattice,
    "heavy_hexagon": heavy_hexagon_lattice,
}


def generate_arch(family: str, rows: int, cols: int) -> CouplingGraph:
    fam = family.lower().replace("-", "_")
    fam = {"hex": "hexagon", "h_square": "heavy_square", "h_hexagon": "heavy_hexagon", "grid": "square"}.get(fam, fam)
    if fam not in FAMILIES:
        raise ArchError(f"unknown architecture family {family!r}; choose from {sorted(FAMILIES)}")
    return FAMILIES[fam](int(rows), int(cols))


def remove_defects(g: CouplingGraph, bad: Iterable[int]) -> CouplingGraph:
    bad = set(int(b) for b in bad)
    unknown = bad - g.nodes
    if unknown:
        raise ArchError(f"defect ids not in graph: {sorted(unknown)}")
    if not bad:
        return g
    edges = frozenset(e for e in g.edges if e[0] not in bad and e[1] not in bad)
    return CouplingGraph(g.nodes - bad, edges, f"{g.name}-d{len(bad)}")


def arch_density(g: CouplingGraph) -> Fraction:
    if not g.nodes:
        raise ArchError("density of an empty graph is undefined")
    return Fraction(2 * len(g.edges), len(g.nodes))


def center_node(g: CouplingGraph) -> int:
    """Node minimising eccentricity (smallest id on ties); used for mid-chip defects."""
    best = None
    for n in g.sorted_nodes:
        dist = bfs_distances(g, n)
        ecc = max(dist.values()) if len(dist) == len(g.nodes) else len(g.nodes)
        if best is None or ecc < best[0]:
            best = (ecc, n)
    assert best is not None
    return best[1]


def bfs_distances(g: CouplingGraph, src: int, avoid: frozenset[int] | set[int] = frozenset()) -> dict[int, int]:
    dist = {src: 0}
    dq = deque([src])
    while dq:
        n = dq.popleft()
        for m in g.adj[n]:
            if m not in dist and m not in avoid:
                dist[m] = dist[n] + 1
                dq.append(m)
    return dist


def shortest_path(g: CouplingGraph, u: int, v: int, avoid: Iterable[int] = ()) -> list[int]:
    """Lexicographically smallest minimum-hop path from u to v.

    Nodes in ``avoid`` (other than the endpoints) are not traversed.
    """
    if u not in g.nodes or v not in g.nodes:
        raise ArchError(f"unknown node in path query ({u}, {v})")
    blocked = set(avoid) - {u, v}
    dist = bfs_distances(g, v, blocked)
    if u not in dist:
        raise NoPathError(f"no path between {u} and {v}")
    path = [u]
    cur = u
    while cur != v:
        cur = min(m for m in g.adj[cur] if dist.get(m) == dist[cur] - 1)
        path.append(cur)
    return path


def parse_arch_spec(spec: str, defects: Iterable[int] = ()) -> CouplingGraph:
    """CLI form: ``square:5x5``, ``hexagon:3x7``, ``heavy_square:3x4``, ``path:4`` or a JSON path."""
    if spec.endswith(".json") or Path(spec).is_file():
        g = CouplingGraph.load(spec)
    else:
        fam, _, dims = spec.partition(":")
        if fam == "path":
            g = path_graph(int(dims))
        else:
            try:
                r, c = (int(x) for x in dims.lower().split("x"))
            except ValueError as exc:
                raise ArchError(f"bad dimensions in {spec!r}; expected ROWSxCOLS") from exc
            g = generate_arch(fam, r, c)
    defects = list(defects)
    return remove_defects(g, defects) if defects else g
