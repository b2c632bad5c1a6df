"""Clause databases and the variable registry shared by both compilation stages."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator


class EncodingError(ValueError):
    """Raised for malformed encoding requests (bad bounds, empty clauses...)."""


class VarRegistry:
    """Dense variable ids (from 1) with a bijective map to semantic tags.

    Tags are tuples such as ``("map", q, p)`` or ``("time", g, t)``.
    Auxiliary encoding variables get ``("aux", kind, n)`` tags.
    """

    def __init__(self) -> None:
        self._by_tag: dict[Hashable, int] = {}
        self._tags: list[Hashable] = [None]
        self._aux_count = 0

    def __len__(self) -> int:
        return len(self._tags) - 1

    @property
    def top(self) -> int:
        return len(self._tags) - 1

    def new(self, tag: Hashable) -> int:
        if tag in self._by_tag:
            raise EncodingError(f"tag already registered: {tag!r}")
        vid = len(self._tags)
        self._tags.append(tag)
        self._by_tag[tag] = vid
        return vid

    def get(self, tag: Hashable) -> int:
        return self._by_tag[tag]

    def lookup(self, tag: Hashable) -> int | None:
        return self._by_tag.get(tag)

    def var(self, tag: Hashable) -> int:
        """Return the id for ``tag``, allocating it on first use."""
        vid = self._by_tag.get(tag)
        return vid if vid is not None else self.new(tag)

    def aux(self, kind: str = "aux") -> int:
        self._aux_count += 1
        return self.new(("aux", kind, self._aux_count))

    def tag(self, vid: int) -> Hashable:
        return self._tags[abs(vid)]

    def __contains__(self, tag: Hashable) -> bool:
        return tag in self._by_tag

    def items(self) -> Iterator[tuple[int, Hashable]]:
        for vid in range(1, len(self._tags)):
            yield vid, self._tags[vid]

    def with_prefix(self, name: str) -> Iterator[tuple[int, tuple]]:
        for vid, tag in self.items():
            if isinstance(tag, tuple) and tag and tag[0] == name:
                yield vid, tag


@dataclass
class CnfFormula:
    registry: VarRegistry = field(default_factory=VarRegistry)
    clauses: list[list[int]] = field(default_factory=list)

    @property
    def nvars(self) -> int:
        return self.registry.top

    def add(self, clause: Iterable[int]) -> None:
        cl = list(clause)
        if not cl:
            raise EncodingError("empty hard clause")
        top = self.registry.top
        for lit in cl:
            if lit == 0 or abs(lit) > top:
                raise EncodingError(f"literal {lit} references an unallocated variable")
        self.clauses.append(cl)

    def extend(self, clauses: Iterable[Iterable[int]]) -> None:
        for cl in clauses:
            self.add(cl)


@dataclass
class WcnfFormula(CnfFormula):
    soft: list[tuple[int, list[int]]] = field(default_factory=list)

    def add_soft(self, clause: Iterable[int], weight: int) -> None:
        cl = list(clause)
        if weight < 1 or int(weight) != weight:
            raise EncodingError(f"soft weight must be a positive integer, got {weight}")
        if not cl:
            raise EncodingError("empty soft clause")
        top = self.registry.top
        for lit in cl:
            if lit == 0 or abs(lit) > top:
                raise EncodingError(f"literal {lit} references an unallocated variable")
        self.soft.append((int(weight), cl))

    @property
    def top_weight(self) -> int:
        return 1 + sum(w for w, _ in self.soft)


@dataclass
class Model:
    """Total assignment, ``values[v]`` for v in 1..nvars (index 0 unused)."""

    values: list[bool]

    @classmethod
    def from_literals(cls, lits: Iterable[int], nvars: int) -> "Model":
        vals = [False] * (nvars + 1)
        for lit in lits:
            if 0 < abs(lit) <= nvars:
                vals[abs(lit)] = lit > 0
        return cls(vals)

    @property
    def nvars(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, lit: int) -> bool:
        v = self.values[abs(lit)]
        return v if lit > 0 else not v

    def true_vars(self) -> Iterator[int]:
        return (v for v in range(1, len(self.values)) if self.values[v])

    def literals(self) -> list[int]:
        return [v if self.values[v] else -v for v in range(1, len(self.values))]
