"""Front doors mapping a problem instance to a construction pipeline and a verdict.

Every ``Constructed`` verdict carries a witness that has passed the full
verifier.  ``KnownUnsolvable`` is only reported for multiplicity-one table
entries, violated counting conditions, or an exhaustive search that came
back empty; instances the recorded open table lists are reported as
``OpenCase`` without an attempt to construct them.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from . import tables
from .calculus import (
    LayerAlphaSet,
    ctype,
    is_admissible_factor_type,
    is_bipartite_type,
    is_refinement,
    layer_split,
    plan_bipartite_signature,
)
from .catalog import UNSAT, BudgetExceeded, Catalog, SearchBudget, default_catalog
from .detach import detach, detach_layers2
from .layering import LayerPlan, layer, layer_hwp, replicate
from .model import COMPLETE, EQUIPARTITE, Decomposition, GraphSpec
from .verify import verify_all

CONSTRUCTED = "Constructed"
KNOWN_UNSOLVABLE = "KnownUnsolvable"
OPEN_CASE = "OpenCase"
UNSUPPORTED = "Unsupported"


@dataclass
class Verdict:
    status: str
    route: str
    spec: GraphSpec | None = None
    witness: Decomposition | None = None
    conditions: tuple = ()
    budget_exceeded: bool = False

    def __post_init__(self):
        if self.status == CONSTRUCTED and self.witness is None:
            raise ValueError("a Constructed verdict needs a witness")

    @property
    def constructed(self) -> bool:
        return self.status == CONSTRUCTED


def _constructed(spec: GraphSpec, d: Decomposition, route: str, ftype=None, profile=None,
                 conditions=()) -> Verdict:
    rep = verify_all(spec, d, ftype=ftype, profile=profile)
    if not rep.ok:
        raise AssertionError(f"route {route} produced an invalid witness: {rep.summary()}")
    return Verdict(CONSTRUCTED, route, spec, d, tuple(conditions))


def _layered(spec: GraphSpec, d: Decomposition, route: str, ftype) -> Verdict:
    """Like ``_constructed`` but a failed check on a 2-cycle type is reported, not raised.

    The signature conditions for types with 2-cycles come without a worked
    construction, so a witness that does not verify means the route does not apply.
    """
    if any(2 in T for T in ftype):
        rep = verify_all(spec, d, ftype=ftype)
        if not rep.ok:
            return Verdict(UNSUPPORTED, f"{route} (2-cycle extension did not verify)", spec,
                           conditions=(rep.summary(3),))
    return _constructed(spec, d, route, ftype=ftype)


def _ctx(catalog: Catalog | None, budget: SearchBudget | None):
    return catalog or default_catalog(), budget or SearchBudget()


def _search(cat: Catalog, spec: GraphSpec, types, budget: SearchBudget):
    """Catalog search returning a decomposition, UNSAT, or None when the budget ran out."""
    try:
        return cat.factorization(spec, types, budget)
    except BudgetExceeded:
        return None


def _direct(spec: GraphSpec, types, cat, budget, conditions=()) -> Verdict:
    try:
        d = cat.factorization(spec, types, budget)
    except BudgetExceeded as exc:
        return Verdict(OPEN_CASE, f"catalog-search (budget exhausted after {exc.nodes} nodes)", spec,
                       conditions=tuple(conditions), budget_exceeded=True)
    if d is UNSAT:
        return Verdict(KNOWN_UNSOLVABLE, "exhaustive-search", spec, conditions=tuple(conditions))
    return _constructed(spec, d, "catalog-search", ftype=types, conditions=conditions)


# -- bipartite layering ------------------------------------------------------

def _bipartite_layering(lam: int, n: int, types: Sequence, betas: Sequence[int], cat, budget):
    """Signature layering of ``lam K_n`` with the given bipartite types and counts."""
    types = [ctype(T) for T in types]
    if n % 2 or not all(is_bipartite_type(T) for T in types):
        return None
    if n == 4:
        # K_4 has the single 2-factor type [4]; every layer uses it once
        idx = [i for i, T in enumerate(types) if T == (4,)]
        if not idx or betas[idx[0]] < lam:
            return None
        base = _search(cat, GraphSpec.complete(1, 4), [[4]], budget)
        if not base:
            return None
        fillers = []
        for i, T in enumerate(types):
            fillers += [list(T)] * (betas[i] - (lam if i == idx[0] else 0))
        return layer(LayerPlan(4, [(1, base, lam)], fillers))
    flags = [2 in T for T in types]
    plan = plan_bipartite_signature(lam, n, betas, flags)
    if plan is None:
        return None
    layers = []
    for spec_layer in plan.layers:
        lt = [list(types[i]) for i, k in spec_layer.items() for _ in range(k)]
        base = _search(cat, GraphSpec.complete(1, n), lt, budget)
        if not base:
            return None
        layers.append((1, base, 1))
    fillers = [list(types[i]) for i in plan.fillers]
    return layer(LayerPlan(n, layers, fillers))


def _well_formed(T, spec: GraphSpec) -> bool:
    return sum(T) == spec.order and min(T) >= (2 if spec.lam >= 2 else 3)


# -- OP --------------------------------------------------------------------

def solve_OP(spec: GraphSpec, T, catalog: Catalog | None = None, budget: SearchBudget | None = None) -> Verdict:
    cat, budget = _ctx(catalog, budget)
    T = ctype(T)
    k = spec.num_factors
    target = [T] * k
    if not is_admissible_factor_type(T, spec):
        if spec.kind == EQUIPARTITE and _well_formed(T, spec):
            # outside the detachment and replication families; only search can settle it
            return _direct(spec, target, cat, budget)
        return Verdict(UNSUPPORTED, "type-not-admissible", spec, conditions=(f"{list(T)} admissible for {spec.label()}",))
    hit = tables.op_known_unsolvable(spec, T)
    if hit is not None:
        if spec.lam == 1:
            return Verdict(KNOWN_UNSOLVABLE, f"exception-table: {hit.name}", spec)
        v = _direct(spec, target, cat, budget)
        if v.status == OPEN_CASE:
            v.route = f"{v.route}; listed as {hit.name}"
        return v
    if spec.kind == COMPLETE:
        n, lam = spec.n, spec.lam
        if n % 2 == 0 and is_bipartite_type(T):
            d = _bipartite_layering(lam, n, [T], [k], cat, budget)
            if d is not None:
                return _layered(spec, d, "signature-layering", target)
        if n % 2 == 1 and lam > 1 and min(T) >= 3:
            base = _search(cat, GraphSpec.complete(1, n), [T] * ((n - 1) // 2), budget)
            if base:
                return _constructed(spec, replicate(base, lam), "replication", ftype=target)
        return _direct(spec, target, cat, budget)
    m, n, lam = spec.m, spec.n, spec.lam
    if all(c % m == 0 for c in T):
        T0 = [c // m for c in T]
        base_spec = GraphSpec.complete(lam * m, n)
        if is_admissible_factor_type(T0, base_spec):
            v = solve_OP(base_spec, T0, cat, budget)
            if v.constructed:
                d = detach(v.witness, m, lam, n)
                return _constructed(spec, d, f"detachment<-{v.route}", ftype=target)
    if m % 2 == 0 and is_bipartite_type(T):
        unit = GraphSpec.equipartite(1, n, m)
        if tables.op_known_unsolvable(unit, T) is None:
            base = _search(cat, unit, [T] * unit.num_factors, budget)
            if base:
                return _constructed(spec, replicate(base, lam), "replication", ftype=target)
    return _direct(spec, target, cat, budget)


# -- HWP -------------------------------------------------------------------

@dataclass
class HwpInstance:
    spec: GraphSpec
    t1: tuple
    t2: tuple
    alpha: int
    gamma: int

    def __post_init__(self):
        self.t1 = ctype(self.t1)
        self.t2 = ctype(self.t2)

    def problems(self) -> list[str]:
        out = []
        if self.alpha < 0 or self.gamma < 0:
            out.append("alpha, gamma >= 0")
        if self.alpha + self.gamma != self.spec.num_factors:
            out.append(f"alpha + gamma = {self.spec.num_factors}")
        if self.t1 == self.t2:
            out.append("T1 != T2")
        for T in (self.t1, self.t2):
            if sum(T) != self.spec.order or min(T) < 2 or (self.spec.lam == 1 and 2 in T):
                out.append(f"{list(T)} admissible for {self.spec.label()}")
        return out

    def ftype(self):
        return [self.t1] * self.alpha + [self.t2] * self.gamma


def _base_hwp_menu(n: int, t1, t2, cat, budget) -> dict:
    """Solutions of HWP(K_n; t1, t2; a, k - a) found by search, keyed by a."""
    k = (n - 1) // 2 if n % 2 else (n - 2) // 2
    base_spec = GraphSpec.complete(1, n)
    out = {}
    for a in range(k + 1):
        if 2 in (t1 if a else ()) or 2 in (t2 if a < k else ()):
            continue
        if tables.hwp_known_unsolvable(n, t1, t2, a, k - a) is not None:
            continue
        d = _search(cat, base_spec, [t1] * a + [t2] * (k - a), budget)
        if d:
            out[a] = d
    return out


def _hwp_layer_split(lam: int, n: int, t1, t2, alpha: int, cat, budget):
    menu = _base_hwp_menu(n, t1, t2, cat, budget)
    if not menu:
        return None
    k = (n - 1) // 2 if n % 2 else (n - 2) // 2
    half = 0 if n % 2 else lam // 2
    for abar in range(half, -1, -1):
        gbar = half - abar
        if (abar and not is_bipartite_type(t1)) or (gbar and not is_bipartite_type(t2)):
            continue
        split = layer_split(lam, alpha - abar, LayerAlphaSet(frozenset(menu), k))
        if split is None:
            continue
        fillers = [list(t1)] * abar + [list(t2)] * gbar
        return layer_hwp(lam, n, menu, split, fillers)
    return None


def solve_HWP(inst: HwpInstance, catalog: Catalog | None = None, budget: SearchBudget | None = None) -> Verdict:
    cat, budget = _ctx(catalog, budget)
    spec = inst.spec
    problems = inst.problems()
    if problems:
        return Verdict(UNSUPPORTED, "invalid-instance", spec, conditions=tuple(problems))
    t1, t2, alpha, gamma = inst.t1, inst.t2, inst.alpha, inst.gamma
    target = inst.ftype()
    if spec.kind == EQUIPARTITE:
        m, n, lam = spec.m, spec.n, spec.lam
        if all(c % m == 0 for c in t1 + t2):
            base = HwpInstance(GraphSpec.complete(lam * m, n), [c // m for c in t1], [c // m for c in t2],
                               alpha, gamma)
            v = solve_HWP(base, cat, budget)
            if v.constructed:
                d = detach(v.witness, m, lam, n)
                return _constructed(spec, d, f"detachment<-{v.route}", ftype=target)
            # detachment is only sufficient, so a failed base still leaves direct search
        return _direct(spec, target, cat, budget)
    n, lam = spec.n, spec.lam
    if lam == 1:
        hit = tables.hwp_known_unsolvable(n, t1, t2, alpha, gamma)
        if hit is not None:
            return Verdict(KNOWN_UNSOLVABLE, f"exception-table: {hit.name}", spec)
    if n % 2 == 0 and is_bipartite_type(t1) and is_bipartite_type(t2):
        types, betas = zip(*[(T, b) for T, b in ((t1, alpha), (t2, gamma)) if b > 0])
        d = _bipartite_layering(lam, n, types, betas, cat, budget)
        if d is not None:
            return _layered(spec, d, "signature-layering", target)
    if lam >= 2:
        hit = tables.hwp_open(lam, n, t1, t2, alpha, gamma)
        if hit is not None:
            return Verdict(OPEN_CASE, f"open-table: {hit.name}", spec)
        d = _hwp_layer_split(lam, n, t1, t2, alpha, cat, budget)
        if d is not None:
            return _constructed(spec, d, "layer-split", ftype=target)
    return _direct(spec, target, cat, budget)


# -- alpha-resolvable ------------------------------------------------------

def solve_alpha_resolvable(spec: GraphSpec, cycle_len: int, alpha: int, catalog: Catalog | None = None,
                           budget: SearchBudget | None = None) -> Verdict:
    """Alpha-resolvable decomposition of ``spec`` into cycles of length ``m * cycle_len``.

    Odd-degree hosts keep a 1-factor outside the classes.
    """
    cat, budget = _ctx(catalog, budget)
    lam, n, m = spec.lam, spec.n, spec.m
    L = lam * m
    if cycle_len not in (3, 4):
        return Verdict(UNSUPPORTED, "cycle length outside {3,4}", spec, conditions=("cycle_len in {3,4}",))
    if alpha < 1:
        return Verdict(UNSUPPORTED, "invalid-instance", spec, conditions=("alpha >= 1",))
    deg = L * (n - 1)
    usable = deg - (deg % 2)
    checks = [
        (f"{cycle_len} | alpha*n", (alpha * n) % cycle_len == 0),
        ("2*alpha | lambda*m*(n-1)" if deg % 2 == 0 else "2*alpha | lambda*m*(n-1) - 1", usable % (2 * alpha) == 0),
    ]
    failed = [name for name, ok in checks if not ok]
    if failed:
        return Verdict(KNOWN_UNSOLVABLE, "necessary-conditions", spec, conditions=tuple(failed))
    base = GraphSpec.complete(L, n)
    try:
        d = cat.alpha_resolvable(base, cycle_len, alpha, budget)
    except BudgetExceeded as exc:
        return Verdict(OPEN_CASE, f"catalog-search (budget exhausted after {exc.nodes} nodes)", spec,
                       budget_exceeded=True)
    if d is UNSAT:
        return Verdict(KNOWN_UNSOLVABLE, "exhaustive-search", spec)
    route = "catalog-search"
    if m > 1:
        d = detach(d, m, lam, n)
        route = "detachment<-catalog-search"
    k = usable // (2 * alpha)
    return _constructed(spec, d, route, profile=[alpha] * k, conditions=[c for c, _ in checks])


# -- small even n ------------------------------------------------------------

BASE_TYPES = {
    4: [(4,)],
    6: [(6,), (3, 3)],
    8: [(8,), (3, 5), (4, 4)],
    10: [(10,), (3, 7), (4, 6), (5, 5), (3, 3, 4)],
}
LETTERS = "abcde"
# bipartite K_n types taken as fillers, in order of preference
FILLER_PREFERENCE = {4: [(4,)], 6: [(6,)], 8: [(4, 4), (8,)], 10: [(4, 6), (10,)]}


@dataclass(frozen=True)
class SmallEvenParams:
    n: int
    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0
    e: int = 0
    y: int = 0
    primes: tuple = ()
    m: int = 1
    beta: int | None = None
    fillers: tuple = ()

    def counts(self) -> dict:
        vals = [self.a, self.b, self.c, self.d, self.e]
        return {T: vals[i] for i, T in enumerate(BASE_TYPES.get(self.n, []))}


def _sum_expr(n: int) -> str:
    return "+".join(list(LETTERS[:len(BASE_TYPES[n])]) + ["y"])


def _count_conditions(n: int, vals: dict, y: int, total: int, half: int, cap: int,
                      sym: tuple[str, str, str]) -> tuple[list[str], list[str]]:
    """(checked, violated) counting conditions of the small-even families.

    ``sym`` holds display strings for ``total``, ``half`` and ``cap``.
    """
    s_total, s_half, s_cap = sym
    checked: list[str] = []
    bad: list[str] = []

    def need(name, ok):
        checked.append(name)
        if not ok:
            bad.append(name)

    used = LETTERS[:len(BASE_TYPES[n])]
    need("a,b,c,d,e,y >= 0", min(list(vals.values()) + [y]) >= 0)
    need(f"0 <= y <= {s_half}", 0 <= y <= half)
    for x in LETTERS[len(used):]:
        need(f"{x} = 0 for n={n}", vals[x] == 0)
    need(f"{_sum_expr(n)} = {s_total}", sum(vals[x] for x in used) + y == total)
    if n == 6:
        need(f"b <= {s_cap}", vals["b"] <= cap)
    if n in (8, 10):
        need(f"a+c+y >= {s_half}", vals["a"] + vals["c"] + y >= half)
    if n == 8 and vals["a"] == 0:
        need(f"if a=0 then c+y ≡ {s_half} (mod 3)", (vals["c"] + y - half) % 3 == 0)
    return checked, bad


def _layer_ok(n: int, vals: dict, y: int, L: int) -> bool:
    total = L * (n - 1) // 2
    return not _count_conditions(n, vals, y, total, L // 2, L, ("", "", ""))[1]


def _prime_ok(T, n: int) -> bool:
    return is_bipartite_type(T) and sum(T) == n and min(T) >= 2 and 2 in T


def small_even_conditions(lam: int, p: SmallEvenParams) -> tuple[list[str], list[str]]:
    """Checked and violated conditions for ``p`` with multiplicity ``lam``.

    Without ``m`` and ``beta`` the host is ``lam K_n``; with ``m >= 2`` it is
    ``lam K_{n x m}`` (here ``lam`` plays the role of mu); ``beta`` selects
    the odd-layer route that admits extra blockwise fillers.
    """
    n = p.n
    checked = ["n in {4,6,8,10}"]
    if n not in BASE_TYPES:
        return checked, checked[:]
    bad: list[str] = []

    def need(name, ok):
        checked.append(name)
        if not ok:
            bad.append(name)

    need("lambda >= 1", lam >= 1)
    vals = {x: getattr(p, x) for x in LETTERS}
    m = p.m
    L = lam * m
    if p.beta is None:
        if m == 1:
            sym = ("⌊λ(n-1)/2⌋", "⌊λ/2⌋", "λ")
        else:
            need("m >= 2", m >= 2)
            sym = ("⌊μm(n-1)/2⌋", "⌊μm/2⌋", "μm")
        total, half = L * (n - 1) // 2, L // 2
        need("no fillers without beta", not p.fillers)
    else:
        beta = p.beta
        need("m >= 3 odd", m >= 3 and m % 2 == 1)
        need("1 <= β <= μ", 1 <= beta <= lam)
        need("β ≡ μ (mod 2)", (beta - lam) % 2 == 0)
        need("⌊β/2⌋ filler types T_i", len(p.fillers) == beta // 2)
        need(f"T_i bipartite refinements of [{2 * m}^{n // 2}]",
             all(is_bipartite_type(T) and min(T) >= 2 and sum(T) == n * m
                 and is_refinement(list(T), [2 * m] * (n // 2))[0] for T in p.fillers))
        sym = ("⌊μm(n-1)/2⌋ - ⌊β/2⌋", "⌊μm/2⌋ - ⌊β/2⌋", "μm")
        total, half = L * (n - 1) // 2 - beta // 2, L // 2 - beta // 2
    need("y = number of T' types", len(p.primes) == p.y)
    need("T' bipartite, admissible for 2K_n but not for K_n", all(_prime_ok(T, n) for T in p.primes))
    c, b = _count_conditions(n, vals, p.y, total, half, L, sym)
    return checked + c, bad + b


def _filler_choices(n: int, counts: Counter, f: int):
    """Multisets of ``f`` bipartite base types within ``counts``, preferred ones first."""
    pref = FILLER_PREFERENCE[n]

    def rec(i, left):
        if left == 0:
            yield []
            return
        if i == len(pref):
            return
        T = pref[i]
        for take in range(min(counts[T], left), -1, -1):
            for rest in rec(i + 1, left - take):
                yield [T] * take + rest

    yield from rec(0, f)


def _small_even_layers(L: int, n: int, counts: Counter, primes: Sequence, cat, budget):
    """Factorization of ``L K_n`` with the given base-type counts and T' fillers."""
    k = (n - 2) // 2
    types = BASE_TYPES[n]
    comps = [Counter(c) for c in itertools.combinations_with_replacement(types, k)]
    bases: dict = {}

    def base_for(ci):
        if ci not in bases:
            lt = [list(T) for T, x in sorted(comps[ci].items()) for _ in range(x)]
            bases[ci] = _search(cat, GraphSpec.complete(1, n), lt, budget) or None
        return bases[ci]

    f = L // 2 - len(primes)
    for chosen in _filler_choices(n, counts, f):
        rem = counts - Counter(chosen)
        dead: set = set()

        def fill(rem: Counter, left: int):
            if left == 0:
                return [] if not +rem else None
            key = tuple(sorted((+rem).items()))
            if key in dead:
                return None
            for ci, comp in enumerate(comps):
                if any(rem[T] < x for T, x in comp.items()):
                    continue
                base = base_for(ci)
                if base is None:
                    continue
                rest = fill(rem - comp, left - 1)
                if rest is not None:
                    return [base] + rest
            dead.add(key)
            return None

        layers = fill(rem, L)
        if layers is None:
            continue
        fillers = [list(T) for T in primes] + [list(T) for T in chosen]
        return layer(LayerPlan(n, [(1, b, 1) for b in layers], fillers))
    return None


def _split_layers(n: int, vals: dict, y: int, Ls: Sequence[int]):
    """Split counts over odd layers so that each layer meets its own conditions."""
    keys = LETTERS[:len(BASE_TYPES[n])]
    start = tuple(vals[x] for x in keys) + (y,)
    dead: set = set()

    def vectors(rem, total):
        def rec(i, left):
            if i == len(rem) - 1:
                if left <= rem[i]:
                    yield (left,)
                return
            for v in range(min(rem[i], left), -1, -1):
                for rest in rec(i + 1, left - v):
                    yield (v,) + rest
        yield from rec(0, total)

    def go(i, rem):
        if i == len(Ls):
            return [] if not any(rem) else None
        if (i, rem) in dead:
            return None
        L = Ls[i]
        for vec in vectors(rem, L * (n - 1) // 2):
            layer_vals = {x: 0 for x in LETTERS}
            layer_vals.update(zip(keys, vec[:-1]))
            if not _layer_ok(n, layer_vals, vec[-1], L):
                continue
            rest = go(i + 1, tuple(r - v for r, v in zip(rem, vec)))
            if rest is not None:
                return [(layer_vals, vec[-1])] + rest
        dead.add((i, rem))
        return None

    return go(0, start)


def solve_small_even(lam: int, params: SmallEvenParams, catalog: Catalog | None = None,
                     budget: SearchBudget | None = None) -> Verdict:
    cat, budget = _ctx(catalog, budget)
    p = params
    checked, bad = small_even_conditions(lam, p)
    n, m = p.n, p.m
    spec = GraphSpec.complete(lam, n) if m == 1 and p.beta is None else (
        GraphSpec.equipartite(lam, n, m) if n in BASE_TYPES and lam >= 1 and m >= 2 else None)
    if bad:
        return Verdict(UNSUPPORTED, "invalid-parameters", spec, conditions=tuple(bad))
    vals = {x: getattr(p, x) for x in LETTERS}
    counts = Counter({T: vals[LETTERS[i]] for i, T in enumerate(BASE_TYPES[n])})
    primes = [ctype(T) for T in p.primes]
    expected = [T for T, x in counts.items() for _ in range(x)] + primes
    if p.beta is None:
        d = _small_even_layers(lam * m, n, counts, primes, cat, budget)
        if d is None:
            return Verdict(OPEN_CASE, "small-even-layering: no layer assignment found", spec,
                           conditions=tuple(checked))
        if m == 1:
            return _constructed(spec, d, "small-even-layering", ftype=expected, conditions=checked)
        d = detach(d, m, lam, n)
        scaled = [[c * m for c in T] for T in expected]
        return _constructed(spec, d, "detachment<-small-even-layering", ftype=scaled, conditions=checked)
    beta = p.beta
    mus = [1] * (beta - 1) + [lam - beta + 1]
    split = _split_layers(n, vals, p.y, [mu * m for mu in mus])
    if split is None:
        return Verdict(OPEN_CASE, "small-even-odd-layers: no per-layer split found", spec,
                       conditions=tuple(checked))
    layers = []
    pos = 0
    for mu, (lv, yi) in zip(mus, split):
        ci = Counter({T: lv[LETTERS[i]] for i, T in enumerate(BASE_TYPES[n])})
        di = _small_even_layers(mu * m, n, ci, primes[pos:pos + yi], cat, budget)
        pos += yi
        if di is None:
            return Verdict(OPEN_CASE, "small-even-odd-layers: layer construction failed", spec,
                           conditions=tuple(checked))
        layers.append((mu, detach(di, m, mu, n), 1))
    d = detach_layers2(layers, [list(T) for T in p.fillers], n, m)
    full = [[c * m for c in T] for T in expected] + [list(T) for T in p.fillers]
    return _constructed(spec, d, "small-even-odd-layers+detachment", ftype=full, conditions=checked)
