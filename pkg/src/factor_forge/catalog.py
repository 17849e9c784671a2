"""Base solutions for small hosts: exhaustive search, Walecki cycles and a result cache.

Everything leaving this module has passed the verifier.  Search results are
memoized in memory and, when a cache directory is configured, stored as
content-addressed JSON files that are written once and never modified.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import random
import tempfile
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import kernel
from .calculus import ftype as norm_ftype
from .model import COMPLETE, Decomposition, GraphSpec, cycle_edges
from .verify import verify_decomposition, verify_factorization_type, verify_holey, verify_resolution

log = logging.getLogger(__name__)

DEFAULT_NODE_LIMIT = 10**7
CACHE_ENV = "FACTOR_FORGE_CACHE"


class _Unsat:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "UNSAT"

    def __bool__(self):
        return False


UNSAT = _Unsat()


class BudgetExceeded(RuntimeError):
    def __init__(self, what: str, nodes: int):
        super().__init__(f"search budget exhausted after {nodes} nodes: {what}")
        self.nodes = nodes


class ShapeError(ValueError):
    """The requested type list cannot describe a factorization of the host."""


@dataclass(frozen=True)
class SearchBudget:
    node_limit: int = DEFAULT_NODE_LIMIT
    seed: int = 0

    def __post_init__(self):
        if self.node_limit < 1:
            raise ValueError("node_limit must be at least 1")


def _mult_matrix(spec: GraphSpec) -> list[int]:
    N = spec.order
    return [spec.multiplicity(u, v) for u in range(N) for v in range(N)]


def _remove_cycles(mult: list[int], N: int, cycles) -> None:
    for c in cycles:
        for u, v in cycle_edges(c):
            mult[u * N + v] -= 1
            mult[v * N + u] -= 1


def _residual_matching(mult: list[int], N: int) -> list[tuple[int, int]]:
    out = []
    for u in range(N):
        for v in range(u + 1, N):
            out.extend([(u, v)] * mult[u * N + v])
    return out


def _canonical_factor(T: Sequence[int]) -> list[tuple[int, ...]]:
    cycles = []
    start = 0
    for L in sorted(T, reverse=True):
        cycles.append(tuple(range(start, start + L)))
        start += L
    return cycles


def seed_permutation(spec: GraphSpec, seed: int) -> list[int]:
    """Vertex relabeling used to diversify witnesses; identity for seed 0.

    Equipartite hosts get a part-preserving permutation so the result is
    still a decomposition of the same host.
    """
    N = spec.order
    if seed == 0:
        return list(range(N))
    rng = random.Random(seed)
    if spec.m == 1:
        perm = list(range(N))
        rng.shuffle(perm)
        return perm
    parts = list(range(spec.n))
    rng.shuffle(parts)
    perm = [0] * N
    for j in range(spec.n):
        inner = list(range(spec.m))
        rng.shuffle(inner)
        for r in range(spec.m):
            perm[j * spec.m + r] = parts[j] * spec.m + inner[r]
    return perm


def _request_key(payload: dict) -> str:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


class Catalog:
    """Memoizing front end to the search kernel with an optional on-disk store."""

    def __init__(self, cache_dir: str | os.PathLike | None = None):
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self._memo: dict = {}
        self.stats = Counter()

    # -- cache plumbing -------------------------------------------------
    def _load(self, key: str):
        if key in self._memo:
            self.stats["memo_hits"] += 1
            return self._memo[key]
        if self.cache_dir is None:
            return None
        path = self.cache_dir / f"{key}.json"
        if not path.exists():
            return None
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError):
            log.warning("ignoring unreadable cache entry %s", path)
            return None
        self.stats["disk_hits"] += 1
        self._memo[key] = data
        return data

    def _store(self, key: str, data: dict) -> None:
        self._memo[key] = data
        if self.cache_dir is None:
            return
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        path = self.cache_dir / f"{key}.json"
        if path.exists():
            return
        fd, tmp = tempfile.mkstemp(dir=self.cache_dir, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(data, fh, sort_keys=True, separators=(",", ":"))
        os.replace(tmp, path)

    def _run(self, key_payload: dict, spec: GraphSpec, solve, check):
        key = _request_key(key_payload)
        hit = self._load(key)
        if hit is not None:
            if hit["status"] == "unsat":
                return UNSAT
            _, d = Decomposition.from_json(hit["decomposition"])
            rep = check(d)
            if rep.ok:
                return d
            log.warning("cached witness failed verification, recomputing: %s", rep.summary())
        result, nodes = solve()
        self.stats["searches"] += 1
        self.stats["nodes"] += nodes
        if result is UNSAT:
            self._store(key, {"status": "unsat", "nodes": nodes})
            return UNSAT
        rep = check(result)
        if not rep.ok:
            raise AssertionError(f"search produced an invalid witness: {rep.summary()}")
        self._store(key, {"status": "sat", "nodes": nodes, "decomposition": result.to_json(spec)})
        return result

    # -- public searches -------------------------------------------------
    def factorization(self, spec: GraphSpec, types, budget: SearchBudget | None = None):
        """A 2-factorization of ``spec`` with the given per-class types, or UNSAT."""
        budget = budget or SearchBudget()
        types = norm_ftype(types)
        N = spec.order
        if len(types) != spec.num_factors:
            raise ShapeError(f"{spec.label()} needs {spec.num_factors} 2-factors, got {len(types)}")
        for T in types:
            if sum(T) != N or min(T) < 2:
                raise ShapeError(f"type {list(T)} is not a 2-factor type on {N} vertices")
        payload = {"op": "factorization", "graph": spec.to_json(), "types": [list(t) for t in types],
                   "seed": budget.seed}

        def solve():
            if spec.lam == 1 and any(2 in T for T in types):
                return UNSAT, 0
            fixed, mult, classes, groups = factorization_problem(spec, types)
            status, cycles, nodes = kernel.search(N, mult, classes, groups, budget.node_limit)
            if status < 0:
                raise BudgetExceeded(f"{spec.label()} type {[list(t) for t in types]}", nodes)
            if status == 0:
                return UNSAT, nodes
            for cls in cycles:
                _remove_cycles(mult, N, cls)
            all_classes = ([fixed] if fixed is not None else []) + cycles
            one = _residual_matching(mult, N) if spec.needs_one_factor else None
            d = Decomposition.from_classes(all_classes, one)
            return d.relabel(seed_permutation(spec, budget.seed)), nodes

        def check(d):
            rep = verify_decomposition(spec, d)
            return rep.extend(verify_factorization_type(spec, d, types))

        return self._run(payload, spec, solve, check)

    def almost_factorization(self, spec: GraphSpec, types, budget: SearchBudget | None = None):
        """Classes that each span all vertices but one, every vertex missed equally often."""
        budget = budget or SearchBudget()
        if spec.kind != COMPLETE:
            raise ShapeError("almost 2-factorizations are searched on complete hosts")
        types = norm_ftype(types)
        n, lam = spec.n, spec.lam
        if any(sum(T) != n - 1 or min(T) < 2 for T in types):
            return UNSAT
        if lam % 2 or len(types) != lam * n // 2:
            raise ShapeError(f"{spec.label()} has no almost 2-factorization with {len(types)} classes")
        payload = {"op": "almost", "graph": spec.to_json(), "types": [list(t) for t in types],
                   "seed": budget.seed}

        def solve():
            if lam == 1 and any(2 in T for T in types):
                return UNSAT, 0
            counts = Counter(types)
            distinct = sorted(counts)
            per_vertex = lam // 2
            total_nodes = 0
            for holes in _hole_assignments(distinct, counts, n, per_vertex):
                seq = [(t, h) for t in distinct for h in holes[t]]
                gid = {key: i for i, key in enumerate(sorted(set(seq)))}
                classes = []
                for t, h in seq:
                    cover = [1] * n
                    cover[h] = 0
                    classes.append((tuple(sorted(t, reverse=True)), cover))
                groups = [gid[key] for key in seq]
                mult = _mult_matrix(spec)
                left = budget.node_limit - total_nodes
                status, cycles, nodes = kernel.search(n, mult, classes, groups, max(1, left))
                total_nodes += nodes
                if status < 0:
                    raise BudgetExceeded(f"almost factorization of {spec.label()}", total_nodes)
                if status == 1:
                    d = Decomposition.from_classes(cycles)
                    return d.relabel(seed_permutation(spec, budget.seed)), total_nodes
            return UNSAT, total_nodes

        def check(d):
            return verify_holey(spec, d, types)

        return self._run(payload, spec, solve, check)

    def alpha_resolvable(self, spec: GraphSpec, cycle_len: int, alpha: int, budget: SearchBudget | None = None):
        """Cycles of one length grouped into classes covering each vertex alpha times.

        Hosts of odd degree keep a 1-factor outside the classes.
        """
        budget = budget or SearchBudget()
        if spec.kind != COMPLETE:
            raise ShapeError("alpha-resolvable seeds are searched on complete hosts")
        n = spec.n
        deg = spec.degree - (1 if spec.needs_one_factor else 0)
        if alpha < 1 or cycle_len < 2 or deg % (2 * alpha) or (alpha * n) % cycle_len:
            raise ShapeError(f"no {alpha}-resolvable {cycle_len}-cycle shape for {spec.label()}")
        k = deg // (2 * alpha)
        per_class = alpha * n // cycle_len
        payload = {"op": "alpha", "graph": spec.to_json(), "len": cycle_len, "alpha": alpha,
                   "seed": budget.seed}

        def solve():
            if cycle_len == 2 and spec.lam == 1:
                return UNSAT, 0
            mult = _mult_matrix(spec)
            classes = [((cycle_len,) * per_class, [alpha] * n) for _ in range(k)]
            status, cycles, nodes = kernel.search(n, mult, classes, [0] * k, budget.node_limit)
            if status < 0:
                raise BudgetExceeded(f"{alpha}-resolvable {cycle_len}-cycles of {spec.label()}", nodes)
            if status == 0:
                return UNSAT, nodes
            for cls in cycles:
                _remove_cycles(mult, n, cls)
            one = _residual_matching(mult, n) if spec.needs_one_factor else None
            d = Decomposition.from_classes(cycles, one, [alpha] * k)
            return d.relabel(seed_permutation(spec, budget.seed)), nodes

        def check(d):
            rep = verify_decomposition(spec, d)
            return rep.extend(verify_resolution(spec, d, [alpha] * k))

        return self._run(payload, spec, solve, check)


def factorization_problem(spec: GraphSpec, types):
    """Kernel input for a 2-factorization search: ``(fixed, mult, classes, groups)``.

    On a complete host the first class is pinned to a canonical factor
    (``fixed``) and removed from ``mult``; equal types share a group so the
    kernel can break the symmetry between them.
    """
    types = norm_ftype(types)
    N = spec.order
    counts = Counter(types)
    order = sorted(counts, key=lambda t: (counts[t], t))
    seq = [t for t in order for _ in range(counts[t])]
    gid = {t: i for i, t in enumerate(order)}
    mult = _mult_matrix(spec)
    fixed = None
    if spec.kind == COMPLETE and seq:
        fixed = _canonical_factor(seq[0])
        _remove_cycles(mult, N, fixed)
        seq = seq[1:]
    classes = [(tuple(sorted(T, reverse=True)), [1] * N) for T in seq]
    groups = [gid[t] for t in seq]
    return fixed, mult, classes, groups


def _hole_assignments(distinct, counts, n, per_vertex):
    """Ways to give each class a missing vertex, up to swapping equal-type classes."""
    holes_left = [per_vertex] * n
    out: dict = {t: [] for t in distinct}
    flat = [t for t in distinct for _ in range(counts[t])]

    def rec(i, lo):
        if i == len(flat):
            yield {t: list(v) for t, v in out.items()}
            return
        t = flat[i]
        start = lo if i > 0 and flat[i - 1] == t else 0
        for h in range(start, n):
            if holes_left[h] == 0:
                continue
            holes_left[h] -= 1
            out[t].append(h)
            yield from rec(i + 1, h)
            out[t].pop()
            holes_left[h] += 1

    yield from rec(0, 0)


def walecki(n: int) -> Decomposition:
    """Hamilton decomposition of K_n for odd n by the zigzag construction."""
    if n < 3 or n % 2 == 0:
        raise ValueError("walecki needs an odd n >= 3")
    N = n - 1
    zig = [0] + [(t + 1) // 2 if t % 2 else N - t // 2 for t in range(1, N)]
    classes = [[[N] + [(z + i) % N for z in zig]] for i in range(N // 2)]
    d = Decomposition.from_classes(classes)
    spec = GraphSpec.complete(1, n)
    rep = verify_factorization_type(spec, d, [[n]] * (N // 2))
    rep.extend(verify_decomposition(spec, d))
    assert rep.ok, rep.summary()
    return d


_DEFAULT: Catalog | None = None


def default_catalog() -> Catalog:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = Catalog(os.environ.get(CACHE_ENV) or None)
    return _DEFAULT


def set_default_catalog(cat: Catalog) -> None:
    global _DEFAULT
    _DEFAULT = cat


def search_factorization(spec: GraphSpec, types, budget: SearchBudget | None = None):
    return default_catalog().factorization(spec, types, budget)


def search_almost_factorization(spec: GraphSpec, types, budget: SearchBudget | None = None):
    return default_catalog().almost_factorization(spec, types, budget)


def search_alpha_resolvable(spec: GraphSpec, cycle_len: int, alpha: int, budget: SearchBudget | None = None):
    return default_catalog().alpha_resolvable(spec, cycle_len, alpha, budget)
