"""Multiset arithmetic on cycle types, factorization types and signatures.

A cycle type is a sorted tuple of lengths; a factorization type is a sorted
tuple of cycle types.  The decision procedures here are exact searches over
small integer structures, never transcriptions of hand case analyses.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .model import COMPLETE, GraphSpec


class ParityError(ValueError):
    """Signature entries do not add up to the number of 2-factors."""


def ctype(lengths: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(int(x) for x in lengths))


def ftype(types: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(ctype(t) for t in types))


def is_bipartite_type(T: Sequence[int]) -> bool:
    return all(c % 2 == 0 for c in T)


def is_refinement(fine: Sequence[int], coarse: Sequence[int]) -> tuple[bool, list[list[int]] | None]:
    """Can ``fine`` be partitioned into blocks whose sums are the entries of ``coarse``?

    Returns ``(True, blocks)`` with ``blocks[i]`` summing to ``coarse[i]``,
    or ``(False, None)``.
    """
    if sum(fine) != sum(coarse) or any(x <= 0 for x in fine) or any(x <= 0 for x in coarse):
        return False, None
    items = sorted(fine, reverse=True)
    caps = list(coarse)
    order = sorted(range(len(caps)), key=lambda i: -caps[i])
    rem = [caps[i] for i in order]
    blocks: list[list[int]] = [[] for _ in order]

    def place(k: int) -> bool:
        if k == len(items):
            return all(r == 0 for r in rem)
        x = items[k]
        tried = set()
        for b in range(len(rem)):
            r = rem[b]
            if r < x or (r, len(blocks[b]) == 0) in tried:
                continue
            # bins with equal remaining capacity are interchangeable
            tried.add((r, len(blocks[b]) == 0))
            rem[b] -= x
            blocks[b].append(x)
            if place(k + 1):
                return True
            rem[b] += x
            blocks[b].pop()
        return False

    if not place(0):
        return False, None
    out: list[list[int]] = [[] for _ in caps]
    for pos, i in enumerate(order):
        out[i] = blocks[pos]
    return True, out


def scale(n: int, M):
    """Multiply every length by ``n``; works on cycle and factorization types."""
    if n < 1:
        raise ValueError("scale factor must be positive")
    M = tuple(M)
    if M and isinstance(M[0], (tuple, list)):
        return tuple(tuple(n * x for x in T) for T in M)
    return tuple(n * x for x in M)


def is_admissible_factor_type(T: Sequence[int], spec: GraphSpec) -> bool:
    """Admissibility of a 2-factor type for the host.

    For equipartite hosts this accepts the two families the constructions
    produce: ``m``-multiples of a type admissible for ``lambda*m K_n``, and
    bipartite blockwise refinements of ``[(2m)^(n/2)]``.
    """
    T = list(T)
    if not T or any(c < 2 for c in T):
        return False
    if spec.kind == COMPLETE:
        if sum(T) != spec.n:
            return False
        return spec.lam >= 2 or all(c >= 3 for c in T)
    m, n = spec.m, spec.n
    if sum(T) != n * m:
        return False
    if spec.lam == 1 and any(c == 2 for c in T):
        return False
    if all(c % m == 0 for c in T):
        base = [c // m for c in T]
        if is_admissible_factor_type(base, spec.amalgamated()):
            return True
    if n % 2 == 0 and is_bipartite_type(T):
        return is_refinement(T, [2 * m] * (n // 2))[0]
    return False


def multiplicities(ft) -> Counter:
    return Counter(ctype(T) for T in ft)


def signature_holds(ft, A: Sequence[int]) -> bool:
    """True iff ``A`` refines the multiplicities of the distinct types of ``ft``."""
    mults = list(multiplicities(ft).values())
    return is_refinement(list(A), mults)[0]


def _num_factors(lam: int, n: int) -> int:
    return lam * (n - 1) // 2


def _layer_shape(n: int) -> tuple[int, int]:
    """(threes, twos) per layer in the normalized signature."""
    if n % 4 == 2:
        return 0, (n - 2) // 4
    return 1, (n - 8) // 4


@dataclass(frozen=True)
class SignaturePlan:
    """How per-type multiplicities split into lambda layers plus fillers.

    ``layers[j]`` maps a type index to its multiplicity inside layer ``j``;
    ``fillers`` lists type indices, one per filler 2-factor.
    """

    layers: tuple
    fillers: tuple
    refinement: tuple


def plan_bipartite_signature(lam: int, n: int, betas: Sequence[int], two_cycle: Sequence[bool] | None = None):
    """Normalized layer assignment behind the bipartite signature criterion.

    Types flagged in ``two_cycle`` contain a 2-cycle, cannot live inside a
    layer of ``K_n`` and are forced into the fillers.  Returns a
    ``SignaturePlan`` or ``None``.
    """
    betas = list(betas)
    if n % 2 or n < 4:
        raise ValueError("n must be even and at least 4")
    if sum(betas) != _num_factors(lam, n):
        raise ParityError(f"sum of betas {sum(betas)} != {_num_factors(lam, n)}")
    flags = list(two_cycle) if two_cycle is not None else [False] * len(betas)
    nfill = lam // 2
    if n == 4:
        return None
    threes_per, twos_per = _layer_shape(n)
    need3 = lam * threes_per
    need2 = lam * twos_per
    idx = [i for i in range(len(betas)) if not flags[i]]

    best = None

    def rec(k: int, left3: int, t: list):
        nonlocal best
        if best is not None:
            return
        if k == len(idx):
            if left3:
                return
            twos = [(betas[i] - 3 * t[j]) // 2 for j, i in enumerate(idx)]
            if sum(twos) >= need2:
                best = list(t)
            return
        i = idx[k]
        hi = min(left3, betas[i] // 3)
        for x in range(hi, -1, -1):
            t.append(x)
            rec(k + 1, left3 - x, t)
            t.pop()

    rec(0, need3, [])
    if best is None:
        return None
    threes = {i: best[j] for j, i in enumerate(idx)}
    twos_avail = {i: (betas[i] - 3 * threes[i]) // 2 for i in idx}
    # take twos greedily from the earliest types
    twos_used = {}
    left = need2
    for i in idx:
        u = min(left, twos_avail[i])
        twos_used[i] = u
        left -= u
    # layer assignment: unit lists, dealt round-robin into lambda layers
    three_units = [i for i in idx for _ in range(threes[i])]
    two_units = [i for i in idx for _ in range(twos_used[i])]
    layers = []
    for j in range(lam):
        layer: Counter = Counter()
        for i in three_units[j * threes_per:(j + 1) * threes_per]:
            layer[i] += 3
        for i in two_units[j * twos_per:(j + 1) * twos_per]:
            layer[i] += 2
        layers.append(dict(sorted(layer.items())))
    fillers = []
    refinement = []
    for i in range(len(betas)):
        used = 3 * threes.get(i, 0) + 2 * twos_used.get(i, 0)
        rest = betas[i] - used
        fillers.extend([i] * rest)
        refinement += [3] * threes.get(i, 0) + [2] * twos_used.get(i, 0)
        if flags[i]:
            refinement += [1] * rest
        else:
            refinement += [2] * (rest // 2) + [1] * (rest % 2)
    if len(fillers) != nfill:
        return None
    return SignaturePlan(tuple(layers), tuple(fillers), tuple(sorted(refinement, reverse=True)))


def signature_conditions(lam: int, n: int, A: Sequence[int], two_cycle: Sequence[bool] | None = None) -> bool:
    """Literal cardinality conditions on a refinement ``A``.

    ``two_cycle[i]`` marks entries whose type contains a 2-cycle; those count
    with their full value toward the odd-entry budget.
    """
    flags = list(two_cycle) if two_cycle is not None else [False] * len(A)
    weight = sum(a for a, f in zip(A, flags) if f) + sum(1 for a, f in zip(A, flags) if not f and a % 2)
    big_odd = sum(1 for a in A if a % 2 and a >= 3)
    if n % 4 == 2:
        return weight <= lam // 2
    return weight <= lam + lam // 2 and big_odd >= lam


def bipartite_signature_witness(lam: int, n: int, betas: Sequence[int]) -> list[int] | None:
    """A refinement of ``betas`` meeting the bipartite layering criterion, or None."""
    plan = plan_bipartite_signature(lam, n, betas)
    if plan is None:
        return None
    A = list(plan.refinement)
    assert is_refinement(A, list(betas))[0]
    assert signature_conditions(lam, n, A)
    return A


@dataclass(frozen=True)
class LayerAlphaSet:
    feasible: frozenset
    k_base: int

    def __post_init__(self):
        bad = [a for a in self.feasible if not (0 <= a <= self.k_base)]
        if bad:
            raise ValueError(f"feasible values {bad} outside 0..{self.k_base}")


def layer_split(lam: int, target: int, menu: LayerAlphaSet | Iterable[int]) -> dict[int, int] | None:
    """Choose lam layers from the menu whose alphas sum to ``target``.

    Greedy on top of an exact reachability table: each layer takes the
    largest alpha that keeps the remainder reachable, which yields the
    lexicographically largest usage.
    """
    feas = sorted(menu.feasible if isinstance(menu, LayerAlphaSet) else set(menu), reverse=True)
    if target < 0 or lam < 0:
        return None

    @lru_cache(maxsize=None)
    def reach(layers: int, t: int) -> bool:
        if layers == 0:
            return t == 0
        return any(a <= t and reach(layers - 1, t - a) for a in feas)

    if not reach(lam, target):
        return None
    out: Counter = Counter()
    t = target
    for k in range(lam, 0, -1):
        for a in feas:
            if a <= t and reach(k - 1, t - a):
                out[a] += 1
                t -= a
                break
    res = dict(sorted(out.items(), reverse=True))
    assert sum(res.values()) == lam and sum(a * x for a, x in res.items()) == target
    return res


def distribute(total: int, caps: Sequence[int]) -> list[int] | None:
    """Split ``total`` into parts bounded by ``caps``, filling earlier slots first."""
    out = []
    for c in caps:
        x = min(c, total)
        out.append(x)
        total -= x
    return out if total == 0 else None
