"""Exhaustive checker for decompositions, resolutions, factor types and holey factors.

Every function here is pure and reports *all* violations it finds so that a
failing construction can be debugged from a single report.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .model import Decomposition, GraphSpec, cycle_edges, edge, host_edge_multiset

MISSING_EDGE = "MissingEdge"
EXTRA_EDGE = "ExtraEdge"
REPEATED_VERTEX = "RepeatedVertexInCycle"
INTRA_PART_EDGE = "IntraPartEdge"
PARITY_MISMATCH = "ParityMismatch"
INVALID_VERTEX = "InvalidVertex"
SHORT_CYCLE = "ShortCycle"
NOT_PERFECT_MATCHING = "NotPerfectMatching"
CLASS_COVERAGE = "ClassCoverageViolation"
PROFILE_MISMATCH = "ProfileMismatch"
TYPE_MISMATCH = "TypeMismatch"
NOT_SPANNING = "NotSpanning"
HOLE_MISMATCH = "HoleMismatch"
NOT_RESOLVED = "NotResolved"


class NotVertexDisjoint(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: tuple = ()

    def __str__(self):
        if not self.detail:
            return self.kind
        return f"{self.kind}{self.detail}"


@dataclass
class Report:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set:
        return {v.kind for v in self.violations}

    def add(self, kind: str, *detail):
        self.violations.append(Violation(kind, tuple(detail)))

    def extend(self, other: Report) -> Report:
        self.violations.extend(other.violations)
        return self

    def __bool__(self):
        return self.ok

    def summary(self, limit: int = 10) -> str:
        if self.ok:
            return "ok"
        shown = "; ".join(str(v) for v in self.violations[:limit])
        more = len(self.violations) - limit
        return shown + (f"; ... {more} more" if more > 0 else "")


def cycle_type_of(cycles: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Sorted cycle lengths of a set of vertex-disjoint cycles."""
    seen: set = set()
    for c in cycles:
        for v in c:
            if v in seen:
                raise NotVertexDisjoint(f"vertex {v} lies on two cycles")
            seen.add(v)
    return tuple(sorted(len(c) for c in cycles))


def verify_decomposition(spec: GraphSpec, d: Decomposition) -> Report:
    rep = Report()
    N = spec.order
    covered: Counter = Counter()
    for idx, cyc in enumerate(d.cycles):
        if len(cyc) < 2:
            rep.add(SHORT_CYCLE, idx, len(cyc))
            continue
        bad = [v for v in cyc if not (0 <= v < N)]
        if bad:
            rep.add(INVALID_VERTEX, idx, bad[0])
            continue
        if len(set(cyc)) != len(cyc):
            dup = next(v for v, k in Counter(cyc).items() if k > 1)
            rep.add(REPEATED_VERTEX, idx, dup)
        for u, v in cycle_edges(cyc):
            if u == v:
                continue
            if spec.part(u) == spec.part(v):
                rep.add(INTRA_PART_EDGE, idx, (u, v))
            covered[(u, v)] += 1

    has_factor = d.one_factor is not None
    if has_factor != spec.needs_one_factor:
        rep.add(PARITY_MISMATCH, spec.degree, has_factor)
    if has_factor:
        deg: Counter = Counter()
        for u, v in d.one_factor:
            if not (0 <= u < N and 0 <= v < N) or u == v:
                rep.add(INVALID_VERTEX, "one_factor", (u, v))
                continue
            if spec.part(u) == spec.part(v):
                rep.add(INTRA_PART_EDGE, "one_factor", (u, v))
            deg[u] += 1
            deg[v] += 1
            covered[edge(u, v)] += 1
        for v in range(N):
            if deg[v] != 1:
                rep.add(NOT_PERFECT_MATCHING, v, deg[v])

    host = host_edge_multiset(spec)
    for e, mu in sorted(host.items()):
        got = covered.get(e, 0)
        if got < mu:
            rep.add(MISSING_EDGE, e, got, mu)
    for e, got in sorted(covered.items()):
        mu = host.get(e, 0)
        if got > mu:
            rep.add(EXTRA_EDGE, e, got, mu)
    return rep


def _coverage(spec: GraphSpec, d: Decomposition, ids) -> Counter:
    cov: Counter = Counter()
    for i in ids:
        for v in set(d.cycles[i]):
            cov[v] += 1
    return cov


def verify_resolution(spec: GraphSpec, d: Decomposition, profile: Sequence[int] | None = None) -> Report:
    """Check each class covers every vertex exactly alpha_j times.

    ``profile`` defaults to the alphas declared on ``d``.
    """
    rep = Report()
    if d.classes is None:
        rep.add(NOT_RESOLVED)
        return rep
    alphas = list(profile) if profile is not None else list(d.alphas)
    if len(alphas) != len(d.classes):
        rep.add(PROFILE_MISMATCH, "class count", len(d.classes), len(alphas))
        return rep
    if d.alphas is not None and list(d.alphas) != alphas:
        rep.add(PROFILE_MISMATCH, "declared", tuple(d.alphas), tuple(alphas))
    N = spec.order
    for j, (ids, a) in enumerate(zip(d.classes, alphas)):
        cov = _coverage(spec, d, ids)
        for v in range(N):
            if cov[v] != a:
                rep.add(CLASS_COVERAGE, v, j, cov[v], a)
    target = spec.degree - (1 if d.one_factor is not None else 0)
    if 2 * sum(alphas) != target:
        rep.add(PROFILE_MISMATCH, "degree", 2 * sum(alphas), target)
    return rep


def _norm_ftype(ftype) -> tuple:
    return tuple(sorted(tuple(sorted(t)) for t in ftype))


def verify_factorization_type(spec: GraphSpec, d: Decomposition, ftype) -> Report:
    rep = Report()
    if d.classes is None:
        rep.add(NOT_RESOLVED)
        return rep
    N = spec.order
    found = []
    for j, ids in enumerate(d.classes):
        cov = _coverage(spec, d, ids)
        if any(cov[v] != 1 for v in range(N)) or len(cov) != N:
            rep.add(NOT_SPANNING, j)
        found.append(tuple(sorted(len(d.cycles[i]) for i in ids)))
    found_t = _norm_ftype(found)
    if found_t != _norm_ftype(ftype):
        rep.add(TYPE_MISMATCH, found_t)
    return rep


def verify_holey(spec: GraphSpec, d: Decomposition, ftype=None) -> Report:
    """Each class must span exactly the vertices outside one part.

    For a complete host the parts are single vertices, which makes this the
    check for almost 2-factorizations.
    """
    rep = verify_decomposition(spec, d)
    if d.classes is None:
        rep.add(NOT_RESOLVED)
        return rep
    if not d.classes:
        return rep
    N = spec.order
    found = []
    for j, ids in enumerate(d.classes):
        cov = _coverage(spec, d, ids)
        missing = {spec.part(v) for v in range(N) if cov[v] == 0}
        covered_ok = all(cov[v] in (0, 1) for v in range(N))
        if len(missing) != 1 or not covered_ok:
            rep.add(HOLE_MISMATCH, j)
        else:
            (w,) = missing
            if any(cov[v] != 0 for v in spec.part_vertices(w)):
                rep.add(HOLE_MISMATCH, j)
        found.append(tuple(sorted(len(d.cycles[i]) for i in ids)))
    if ftype is not None and _norm_ftype(found) != _norm_ftype(ftype):
        rep.add(TYPE_MISMATCH, _norm_ftype(found))
    return rep


def verify_all(spec: GraphSpec, d: Decomposition, ftype=None, profile=None) -> Report:
    """Decomposition check plus whichever resolution claims are supplied."""
    rep = verify_decomposition(spec, d)
    if profile is not None or (d.classes is not None and ftype is None):
        if d.classes is not None:
            rep.extend(verify_resolution(spec, d, profile))
    if ftype is not None:
        rep.extend(verify_factorization_type(spec, d, ftype))
    return rep
