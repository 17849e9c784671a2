"""Layering: stacking factorizations of mu_i K_n and re-pairing their 1-factors.

Each odd-degree layer leaves a 1-factor.  Consecutive pairs of those
1-factors are turned into prescribed bipartite 2-factors by relabeling the
second layer of each pair, and a final unpaired 1-factor is kept as the
1-factor of the result.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .calculus import ctype, is_bipartite_type
from .model import Decomposition, GraphSpec, edge
from .verify import verify_decomposition, verify_factorization_type


class OddDegreeHost(ValueError):
    pass


class TypeNotRealizable(ValueError):
    pass


class LayerPlanError(ValueError):
    pass


def replicate(f: Decomposition, mu: int) -> Decomposition:
    """``mu`` stacked copies of a factorization of an even-degree host."""
    if f.one_factor is not None:
        raise OddDegreeHost("cannot replicate a factorization that carries a 1-factor")
    if mu < 1:
        raise ValueError("mu must be positive")
    if mu == 1:
        return f
    return concat([f] * mu)


def concat(parts: Sequence[Decomposition], extra_classes=(), one_factor=None) -> Decomposition:
    """Union of resolved decompositions on a common vertex set."""
    classes = []
    alphas = []
    for d in parts:
        for a, cyc in zip(d.alphas, d.class_cycles()):
            classes.append(cyc)
            alphas.append(a)
    for cyc in extra_classes:
        classes.append(cyc)
        alphas.append(1)
    return Decomposition.from_classes(classes, one_factor, alphas)


def union_cycles(I: Sequence[tuple[int, int]], J: Sequence[tuple[int, int]]) -> list[list[int]]:
    """Cycles of the union of two perfect matchings (a shared edge gives a 2-cycle)."""
    mate_i = {}
    for u, v in I:
        mate_i[u] = v
        mate_i[v] = u
    mate_j = {}
    for u, v in J:
        mate_j[u] = v
        mate_j[v] = u
    seen = set()
    cycles = []
    for s in sorted(mate_i):
        if s in seen:
            continue
        cyc = [s]
        seen.add(s)
        cur = mate_i[s]
        use_j = True
        while cur != s:
            cyc.append(cur)
            seen.add(cur)
            cur = mate_j[cur] if use_j else mate_i[cur]
            use_j = not use_j
        cycles.append(cyc)
    return cycles


def realize_bipartite_pair(I: Sequence[tuple[int, int]], T: Sequence[int]) -> list[tuple[int, int]]:
    """A perfect matching ``I'`` such that ``I`` plus ``I'`` has cycle type ``T``.

    The edges of ``I`` are taken in the given order (each oriented as given)
    and grouped ``a`` at a time for each target length ``2a``; inside a group
    the second end of each edge is joined to the first end of the next one,
    cyclically.  A group of one edge doubles that edge into a 2-cycle.
    """
    I = [tuple(e) for e in I]
    T = list(T)
    if any(c % 2 or c < 2 for c in T) or sum(T) != 2 * len(I):
        raise TypeNotRealizable(f"type {T} cannot be realized on a 1-factor of {len(I)} edges")
    out = []
    pos = 0
    for c in T:
        group = I[pos:pos + c // 2]
        pos += c // 2
        for j, e in enumerate(group):
            nxt = group[(j + 1) % len(group)]
            out.append(edge(e[1], nxt[0]))
    return sorted(out)


def matching_map(src: Sequence[tuple[int, int]], dst: Sequence[tuple[int, int]], N: int) -> list[int]:
    """Vertex permutation taking the j-th edge of ``src`` onto the j-th edge of ``dst``."""
    perm = [-1] * N
    for (a, b), (c, d) in zip(sorted(src), sorted(dst)):
        perm[a] = c
        perm[b] = d
    if sorted(perm) != list(range(N)):
        raise ValueError("matchings do not cover the vertex set")
    return perm


@dataclass
class LayerPlan:
    """Layers ``(mu_i, factorization of mu_i K_n, x_i)`` plus bipartite filler types."""

    n: int
    layers: list
    fillers: list = field(default_factory=list)

    @property
    def mu(self) -> int:
        return sum(mu * x for mu, _, x in self.layers)

    @property
    def beta(self) -> int:
        return sum(x for mu, _, x in self.layers if mu * (self.n - 1) % 2 == 1)

    def validate(self) -> None:
        for mu, f, x in self.layers:
            if x < 0 or mu < 1:
                raise LayerPlanError("layer multiplicities must be positive")
            odd = mu * (self.n - 1) % 2 == 1
            if odd != (f.one_factor is not None):
                raise LayerPlanError(f"layer of {mu}K_{self.n} has the wrong 1-factor status")
            rep = verify_decomposition(GraphSpec.complete(mu, self.n), f)
            if not rep.ok or f.classes is None:
                raise LayerPlanError(f"layer of {mu}K_{self.n} is not a resolved decomposition: {rep.summary()}")
        if len(self.fillers) != self.beta // 2:
            raise LayerPlanError(f"expected {self.beta // 2} fillers, got {len(self.fillers)}")
        for T in self.fillers:
            if not is_bipartite_type(T) or sum(T) != self.n or min(T) < 2:
                raise LayerPlanError(f"filler {list(T)} is not an admissible bipartite type for 2K_{self.n}")

    def predicted_type(self):
        out = []
        for mu, f, x in self.layers:
            out.extend(list(f.factorization_type()) * x)
        out.extend(ctype(T) for T in self.fillers)
        return tuple(sorted(ctype(T) for T in out))


def layer(plan: LayerPlan) -> Decomposition:
    """Combine the layers of ``plan`` into a 2-factorization of ``mu K_n``."""
    plan.validate()
    n = plan.n
    copies = []
    for mu, f, x in plan.layers:
        copies.extend([f] * x)
    odd_idx = [i for i, f in enumerate(copies) if f.one_factor is not None]
    filler_classes = []
    for k, T in enumerate(plan.fillers):
        a, b = odd_idx[2 * k], odd_idx[2 * k + 1]
        I_a = copies[a].one_factor
        target = realize_bipartite_pair(I_a, T)
        sigma = matching_map(copies[b].one_factor, target, n)
        copies[b] = copies[b].relabel(sigma)
        filler_classes.append(union_cycles(I_a, copies[b].one_factor))
    one = copies[odd_idx[-1]].one_factor if len(odd_idx) % 2 else None
    stripped = [Decomposition(c.cycles, None, c.classes, c.alphas) for c in copies]
    out = concat(stripped, filler_classes, one)
    spec = GraphSpec.complete(plan.mu, n)
    rep = verify_decomposition(spec, out)
    if all(a == 1 for a in out.alphas):
        rep.extend(verify_factorization_type(spec, out, plan.predicted_type()))
    if not rep.ok:
        raise AssertionError(f"layering produced an invalid decomposition: {rep.summary()}")
    return out


def layer_hwp(lam: int, n: int, base_solutions: Mapping[int, Decomposition], split: Mapping[int, int],
              fillers: Sequence[Sequence[int]] = ()) -> Decomposition:
    """Layer base solutions of K_n indexed by their alpha according to ``split``."""
    layers = [(1, base_solutions[a], x) for a, x in sorted(split.items(), reverse=True) if x > 0]
    if sum(x for _, _, x in layers) != lam:
        raise LayerPlanError("split does not use exactly lambda layers")
    if lam == 1 and not fillers:
        return layers[0][1]
    return layer(LayerPlan(n, layers, [list(T) for T in fillers]))
