"""Host graphs, cycles, 1-factors and resolved decompositions.

Vertices are the integers ``0..N-1``.  For an equipartite host with parts of
size ``m`` vertex ``v`` lives in part ``v // m``.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

COMPLETE = "complete"
EQUIPARTITE = "equipartite"

Edge = tuple[int, int]
CycleT = tuple[int, ...]


def edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class GraphSpec:
    kind: str
    lam: int
    n: int
    m: int = 1

    def __post_init__(self):
        if self.kind not in (COMPLETE, EQUIPARTITE):
            raise ValueError(f"unknown graph kind {self.kind!r}")
        if self.lam < 1 or self.n < 2 or self.m < 1:
            raise ValueError(f"invalid graph parameters lambda={self.lam} n={self.n} m={self.m}")
        if self.kind == COMPLETE and self.m != 1:
            raise ValueError("complete hosts have m = 1")

    @classmethod
    def complete(cls, lam: int, n: int) -> GraphSpec:
        return cls(COMPLETE, lam, n, 1)

    @classmethod
    def equipartite(cls, lam: int, n: int, m: int) -> GraphSpec:
        return cls(EQUIPARTITE, lam, n, m)

    @property
    def order(self) -> int:
        return self.n * self.m

    @property
    def degree(self) -> int:
        return self.lam * self.m * (self.n - 1)

    @property
    def needs_one_factor(self) -> bool:
        return self.degree % 2 == 1

    @property
    def num_factors(self) -> int:
        return self.degree // 2

    def part(self, v: int) -> int:
        return v // self.m

    def part_vertices(self, j: int) -> range:
        return range(j * self.m, (j + 1) * self.m)

    def multiplicity(self, u: int, v: int) -> int:
        if u == v or self.part(u) == self.part(v):
            return 0
        return self.lam

    def amalgamated(self) -> GraphSpec:
        """The complete multigraph lambda*m K_n whose detachment is this host."""
        return GraphSpec.complete(self.lam * self.m, self.n)

    def label(self) -> str:
        lam = "" if self.lam == 1 else str(self.lam)
        if self.kind == COMPLETE:
            return f"{lam}K_{self.n}"
        return f"{lam}K_{{{self.n}x{self.m}}}"

    def to_json(self) -> dict:
        return {"kind": self.kind, "lambda": self.lam, "n": self.n, "m": self.m}

    @classmethod
    def from_json(cls, data: dict) -> GraphSpec:
        return cls(data["kind"], int(data["lambda"]), int(data["n"]), int(data.get("m", 1)))


def host_edge_multiset(spec: GraphSpec) -> Counter:
    """Every vertex pair of the host with its edge multiplicity (zero pairs omitted)."""
    out: Counter = Counter()
    N = spec.order
    for u in range(N):
        for v in range(u + 1, N):
            mu = spec.multiplicity(u, v)
            if mu:
                out[(u, v)] = mu
    return out


def degree(spec: GraphSpec) -> int:
    return spec.degree


def cycle_edges(cycle: Sequence[int]) -> list[Edge]:
    """Edges of a cycle in traversal order; a 2-cycle yields its edge twice."""
    k = len(cycle)
    if k == 2:
        e = edge(cycle[0], cycle[1])
        return [e, e]
    return [edge(cycle[i], cycle[(i + 1) % k]) for i in range(k)]


def normalize_cycle(cycle: Sequence[int]) -> CycleT:
    """Rotate so the minimum vertex comes first and orient so the second entry is the smaller neighbour."""
    c = list(cycle)
    if len(c) <= 2:
        return tuple(sorted(c))
    i = c.index(min(c))
    c = c[i:] + c[:i]
    if c[1] > c[-1]:
        c = [c[0]] + c[:0:-1]
    return tuple(c)


@dataclass(frozen=True)
class Decomposition:
    """A cycle decomposition, optionally with a 1-factor and a resolution into classes.

    ``classes`` lists cycle indices per parallel class and ``alphas`` the
    coverage each class declares.
    """

    cycles: tuple[CycleT, ...]
    one_factor: tuple[Edge, ...] | None = None
    classes: tuple[tuple[int, ...], ...] | None = None
    alphas: tuple[int, ...] | None = None

    @classmethod
    def from_classes(
        cls,
        classes: Iterable[Iterable[Sequence[int]]],
        one_factor: Iterable[Sequence[int]] | None = None,
        alphas: Iterable[int] | None = None,
    ) -> Decomposition:
        cycles: list[CycleT] = []
        index: list[tuple[int, ...]] = []
        for cls_cycles in classes:
            ids = []
            for c in cls_cycles:
                ids.append(len(cycles))
                cycles.append(normalize_cycle(c))
            index.append(tuple(ids))
        al = tuple(alphas) if alphas is not None else tuple(1 for _ in index)
        if len(al) != len(index):
            raise ValueError("one alpha per class required")
        return cls(tuple(cycles), _norm_factor(one_factor), tuple(index), al)

    @classmethod
    def unresolved(cls, cycles: Iterable[Sequence[int]], one_factor=None) -> Decomposition:
        return cls(tuple(normalize_cycle(c) for c in cycles), _norm_factor(one_factor))

    @property
    def resolved(self) -> bool:
        return self.classes is not None

    def class_cycles(self) -> list[list[CycleT]]:
        if self.classes is None:
            return [list(self.cycles)]
        return [[self.cycles[i] for i in ids] for ids in self.classes]

    def factorization_type(self) -> tuple[tuple[int, ...], ...]:
        """Sorted multiset of per-class cycle types."""
        return tuple(sorted(tuple(sorted(len(c) for c in cc)) for cc in self.class_cycles()))

    def relabel(self, perm: Sequence[int] | dict) -> Decomposition:
        p = perm.__getitem__
        cycles = tuple(normalize_cycle([p(v) for v in c]) for c in self.cycles)
        of = None
        if self.one_factor is not None:
            of = _norm_factor([(p(u), p(v)) for u, v in self.one_factor])
        return Decomposition(cycles, of, self.classes, self.alphas)

    def to_json(self, spec: GraphSpec) -> dict:
        if self.classes is None:
            groups = [{"alpha": None, "cycles": [list(c) for c in self.cycles]}]
        else:
            groups = [
                {"alpha": a, "cycles": [list(self.cycles[i]) for i in ids]}
                for a, ids in zip(self.alphas, self.classes)
            ]
        out = {"graph": spec.to_json(), "classes": groups}
        if self.one_factor is not None:
            out["one_factor"] = [list(e) for e in self.one_factor]
        return out

    @classmethod
    def from_json(cls, data: dict) -> tuple[GraphSpec, Decomposition]:
        spec = GraphSpec.from_json(data["graph"])
        groups = data.get("classes", [])
        of = data.get("one_factor")
        if len(groups) == 1 and groups[0].get("alpha") is None:
            return spec, cls.unresolved(groups[0]["cycles"], of)
        alphas = [int(g["alpha"]) for g in groups]
        return spec, cls.from_classes([g["cycles"] for g in groups], of, alphas)


def _norm_factor(one_factor) -> tuple[Edge, ...] | None:
    if one_factor is None:
        return None
    return tuple(sorted(edge(int(u), int(v)) for u, v in one_factor))


def dumps(spec: GraphSpec, d: Decomposition, extra: dict | None = None) -> str:
    """Canonical JSON text; identical inputs give byte-identical output."""
    data = d.to_json(spec)
    if extra:
        data.update(extra)
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def loads(text: str) -> tuple[GraphSpec, Decomposition]:
    return Decomposition.from_json(json.loads(text))
