"""Detachment: expanding a cycle decomposition of lambda*m K_n into one of lambda K_{n x m}.

Every input edge becomes ``m`` parallel edges of its cycle's colour on the
amalgamated graph, whose vertex ``j`` carries amalgamation number ``m``.
Vertices are then split one at a time.  A split hands a fresh vertex two
edges of every colour at the split vertex (one edge of the 1-factor colour),
keeping each colour connected and sending exactly ``lambda * g(v)`` edges
towards every other vertex ``v``.  When every amalgamation number is 1 each
colour is a single cycle of ``lambda K_{n x m}``.

Part ``j`` of the output is ``{jm, ..., jm + m - 1}``; vertex ``jm`` is the
root that the other members of the part are split from.
"""
from __future__ import annotations

from collections import Counter, defaultdict, deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .calculus import ctype, is_refinement
from .layering import concat, realize_bipartite_pair, union_cycles
from .model import Decomposition, GraphSpec, edge
from .verify import verify_decomposition, verify_factorization_type, verify_holey, verify_resolution

DEFAULT_DETACH_BUDGET = 200_000


class DetachmentFailed(RuntimeError):
    """The split search ran out of budget; this is not a non-existence claim."""


class NoValidSplit(RuntimeError):
    pass


class BlockStructureViolation(RuntimeError):
    pass


@dataclass
class DetachState:
    """Intermediate graph of a detachment.

    ``colours[i]`` is a Counter of edges ``(a, b)`` (``a < b``) of colour
    ``i``; when ``has_one_factor`` is set the last colour is the 1-factor.
    """

    n: int
    m: int
    lam: int
    g: dict
    colours: list
    lengths: list
    has_one_factor: bool

    @classmethod
    def initial(cls, d: Decomposition, lam: int, n: int, m: int) -> DetachState:
        colours = []
        for cyc in d.cycles:
            cnt: Counter = Counter()
            if len(cyc) == 2:
                cnt[edge(cyc[0] * m, cyc[1] * m)] = 2 * m
            else:
                for t in range(len(cyc)):
                    cnt[edge(cyc[t] * m, cyc[(t + 1) % len(cyc)] * m)] += m
            colours.append(cnt)
        if d.one_factor is not None:
            colours.append(Counter({edge(u * m, v * m): m for u, v in d.one_factor}))
        g = {j * m: m for j in range(n)}
        return cls(n, m, lam, g, colours, [len(c) for c in d.cycles], d.one_factor is not None)

    def copy(self) -> DetachState:
        return DetachState(self.n, self.m, self.lam, dict(self.g), [Counter(c) for c in self.colours],
                           list(self.lengths), self.has_one_factor)

    def part(self, v: int) -> int:
        return v // self.m

    def is_one_factor_colour(self, i: int) -> bool:
        return self.has_one_factor and i == len(self.colours) - 1

    def neighbours(self, i: int, u: int) -> Counter:
        out: Counter = Counter()
        for (a, b), k in self.colours[i].items():
            if a == u:
                out[b] += k
            elif b == u:
                out[a] += k
        return out

    def multiplicity(self, u: int, v: int) -> int:
        e = edge(u, v)
        return sum(c.get(e, 0) for c in self.colours)

    def check(self) -> list[str]:
        """Problems with the structural invariants; empty when all hold."""
        problems = []
        sums: Counter = Counter()
        for v, k in self.g.items():
            sums[self.part(v)] += k
        for j in range(self.n):
            if sums[j] != self.m:
                problems.append(f"P2: part {j} has amalgamation total {sums[j]}")
        verts = sorted(self.g)
        for x, u in enumerate(verts):
            for v in verts[x + 1:]:
                want = 0 if self.part(u) == self.part(v) else self.lam * self.g[u] * self.g[v]
                got = self.multiplicity(u, v)
                if got != want:
                    problems.append(f"P3: mult({u},{v})={got}, expected {want}")
        for i, col in enumerate(self.colours):
            one = self.is_one_factor_colour(i)
            size = sum(col.values())
            want = self.m * self.n // 2 if one else self.lengths[i] * self.m
            if size != want:
                problems.append(f"P4a: colour {i} has {size} edges, expected {want}")
            deg: Counter = Counter()
            for (a, b), k in col.items():
                deg[a] += k
                deg[b] += k
            for v in verts:
                ok = deg[v] == self.g[v] if one else deg[v] in (0, 2 * self.g[v])
                if not ok:
                    problems.append(f"P4b: colour {i} has degree {deg[v]} at {v}")
            if not one and not _connected(col):
                problems.append(f"P4c: colour {i} is disconnected")
        return problems


def _connected(col: Counter) -> bool:
    adj = defaultdict(set)
    for (a, b), k in col.items():
        if k > 0:
            adj[a].add(b)
            adj[b].add(a)
    if not adj:
        return True
    start = next(iter(adj))
    seen = {start}
    todo = deque([start])
    while todo:
        x = todo.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return len(seen) == len(adj)


def _moved(col: Counter, u: int, beta: int, targets) -> Counter:
    out = Counter(col)
    for x in targets:
        out[edge(u, x)] -= 1
        if out[edge(u, x)] == 0:
            del out[edge(u, x)]
        out[edge(beta, x)] += 1
    return out


def _colour_options(state: DetachState, i: int, u: int, beta: int) -> list[tuple[tuple[int, ...], Counter]]:
    nb = state.neighbours(i, u)
    keys = sorted(nb)
    if state.is_one_factor_colour(i):
        return [((x,), _moved(state.colours[i], u, beta, (x,))) for x in keys]
    pairs = [(x, y) for a, x in enumerate(keys) for y in keys[a + 1:]]
    pairs += [(x, x) for x in keys if nb[x] >= 2]
    out = []
    for p in pairs:
        col = _moved(state.colours[i], u, beta, p)
        if _connected(col):
            out.append((p, col))
    return out


def split_options(state: DetachState, u: int, beta: int, counter: list | None = None) -> Iterator[DetachState]:
    """All states obtained by splitting ``beta`` off ``u``, in a fixed order."""
    if state.g.get(u, 0) < 2:
        raise ValueError(f"vertex {u} has amalgamation number {state.g.get(u)}; nothing to split")
    if beta in state.g:
        raise ValueError(f"vertex {beta} already exists")
    touching = [i for i in range(len(state.colours)) if any(u in e for e in state.colours[i])]
    options = [_colour_options(state, i, u, beta) for i in touching]
    if any(not o for o in options):
        return
    quota = {v: state.lam * k for v, k in state.g.items() if v != u and state.part(v) != state.part(u)}
    # cap[t][v]: most edges towards v the colours touching[t:] can still move
    cap = [Counter() for _ in range(len(touching) + 1)]
    for t in range(len(touching) - 1, -1, -1):
        cap[t] = Counter(cap[t + 1])
        width = 1 if state.is_one_factor_colour(touching[t]) else 2
        for v, k in state.neighbours(touching[t], u).items():
            cap[t][v] += min(width, k)
    chosen: list = [None] * len(touching)

    def rec(t: int):
        if counter is not None:
            counter[0] += 1
            if counter[0] > counter[1]:
                raise DetachmentFailed(f"split budget of {counter[1]} nodes exhausted")
        if t == len(touching):
            if all(q == 0 for q in quota.values()):
                yield list(chosen)
            return
        if any(q > cap[t][v] for v, q in quota.items()):
            return
        for p, col in options[t]:
            need = Counter(p)
            if any(quota.get(x, 0) < k for x, k in need.items()):
                continue
            for x, k in need.items():
                quota[x] -= k
            chosen[t] = col
            yield from rec(t + 1)
            for x, k in need.items():
                quota[x] += k

    for picks in rec(0):
        new = state.copy()
        for i, col in zip(touching, picks):
            new.colours[i] = col
        new.g[u] -= 1
        new.g[beta] = 1
        yield new


def split_vertex(state: DetachState, u: int, beta: int | None = None) -> DetachState:
    """Split one vertex off ``u`` using the first admissible choice."""
    if beta is None:
        beta = u + state.m - state.g[u] + 1
    for new in split_options(state, u, beta):
        return new
    raise NoValidSplit(f"no admissible split at vertex {u}")


def _colour_cycle(col: Counter) -> list[int]:
    adj = defaultdict(list)
    for (a, b), k in col.items():
        for _ in range(k):
            adj[a].append(b)
            adj[b].append(a)
    start = min(adj)
    if len(adj) == 2:
        return sorted(adj)
    cyc = [start]
    prev, cur = None, start
    while True:
        nxt = [y for y in adj[cur] if y != prev]
        step = nxt[0] if prev is not None else min(adj[cur])
        if step == start:
            break
        cyc.append(step)
        prev, cur = cur, step
    return cyc


def detach(d: Decomposition, m: int, lam: int | None = None, n: int | None = None,
           budget: int = DEFAULT_DETACH_BUDGET, check_states: bool = False) -> Decomposition:
    """Detach a decomposition of ``lam*m K_n`` into one of ``lam K_{n x m}``.

    ``lam`` and ``n`` default to values read off the input (``lam`` then
    being the input multiplicity divided by ``m``).  Classes and alphas are
    carried over by cycle index.
    """
    if n is None:
        n = 1 + max(max(c) for c in d.cycles) if d.cycles else 1 + max(max(e) for e in d.one_factor)
    if lam is None:
        total = sum(len(c) for c in d.cycles) + (len(d.one_factor) if d.one_factor else 0)
        lm, rem = divmod(total, n * (n - 1) // 2)
        if rem or lm % m:
            raise ValueError(f"input is not a decomposition of a multiple of {m}K_{n}")
        lam = lm // m
    base = GraphSpec.complete(lam * m, n)
    rep = verify_decomposition(base, d)
    if not rep.ok:
        raise ValueError(f"input is not a decomposition of {base.label()}: {rep.summary()}")
    out_spec = GraphSpec.equipartite(lam, n, m)
    if m == 1:
        return d
    steps = [(j * m, j * m + t) for j in range(n) for t in range(1, m)]
    counter = [0, budget]
    state0 = DetachState.initial(d, lam, n, m)

    def rec(state: DetachState, k: int):
        if check_states:
            problems = state.check()
            if problems:
                raise AssertionError("; ".join(problems[:5]))
        if k == len(steps):
            return state
        u, beta = steps[k]
        for new in split_options(state, u, beta, counter):
            got = rec(new, k + 1)
            if got is not None:
                return got
        return None

    final = rec(state0, 0)
    if final is None:
        raise DetachmentFailed("split search exhausted without a detachment")
    ncyc = len(d.cycles)
    cycles = [_colour_cycle(final.colours[i]) for i in range(ncyc)]
    one = None
    if d.one_factor is not None:
        one = sorted(final.colours[-1].elements())
    if d.classes is not None:
        out = Decomposition.from_classes([[cycles[i] for i in ids] for ids in d.classes], one, d.alphas)
    else:
        out = Decomposition.unresolved(cycles, one)
    rep = verify_decomposition(out_spec, out)
    # carry over whichever class structure the input had: resolution or holey classes
    if d.classes is not None and verify_resolution(base, d, list(d.alphas)).ok:
        rep.extend(verify_resolution(out_spec, out, list(d.alphas)))
    elif d.classes is not None and verify_holey(base, d).ok:
        rep.extend(verify_holey(out_spec, out))
    if not rep.ok:
        raise AssertionError(f"detachment produced an invalid decomposition: {rep.summary()}")
    return out


def part_support_ok(d_in: Decomposition, d_out: Decomposition, m: int) -> bool:
    """Every output cycle is ``m`` times longer and spans the parts of its source cycle."""
    src = [c for cc in d_in.class_cycles() for c in cc]
    dst = [c for cc in d_out.class_cycles() for c in cc]
    if len(src) != len(dst):
        return False
    for a, b in zip(src, dst):
        if len(b) != m * len(a):
            return False
        want = {j * m + t for j in a for t in range(m)}
        if set(b) != want:
            return False
    return True


def part_pairing(one_factor, m: int) -> dict[int, int]:
    """The part matching induced by a detached 1-factor."""
    mate: dict[int, int] = {}
    for u, v in one_factor:
        a, b = u // m, v // m
        if a == b or mate.get(a, b) != b or mate.get(b, a) != a:
            raise BlockStructureViolation(f"1-factor edge {u}-{v} breaks the part pairing")
        mate[a] = b
        mate[b] = a
    return mate


def _pairs(mate: dict[int, int]) -> list[tuple[int, int]]:
    return sorted({(min(a, b), max(a, b)) for a, b in mate.items()})


def detach_layers2(layers: Sequence, fillers: Sequence[Sequence[int]], n: int, m: int) -> Decomposition:
    """Layer detached factorizations and fill with blockwise-bipartite 2-factors.

    ``layers`` holds ``(mu_i, factorization of mu_i K_{n x m}, x_i)``.  The
    leftover 1-factors are paired in plan order; every filler must split into
    ``n/2`` blocks summing to ``2m``, one block per pair of matched parts.
    """
    if n % 2:
        raise ValueError("n must be even")
    lam = sum(mu * x for mu, _, x in layers)
    spec = GraphSpec.equipartite(lam, n, m)
    copies = []
    for mu, f, x in layers:
        copies.extend([f] * x)
    odd_idx = [i for i, f in enumerate(copies) if f.one_factor is not None]
    if len(fillers) != len(odd_idx) // 2:
        raise ValueError(f"expected {len(odd_idx) // 2} fillers, got {len(fillers)}")
    filler_classes = []
    for k, T in enumerate(fillers):
        ok, blocks = is_refinement(list(T), [2 * m] * (n // 2))
        if not ok or any(c % 2 for c in T):
            raise ValueError(f"filler {list(T)} is not a blockwise bipartite refinement of [{2 * m}^{n // 2}]")
        a, b = odd_idx[2 * k], odd_idx[2 * k + 1]
        I_a = copies[a].one_factor
        pairs_a = _pairs(part_pairing(I_a, m))
        pairs_b = _pairs(part_pairing(copies[b].one_factor, m))
        # align copy b's part pairing with copy a's by permuting whole parts
        rho = {}
        for (p, q), (r, s) in zip(pairs_b, pairs_a):
            rho[p] = r
            rho[q] = s
        perm = [rho[v // m] * m + v % m for v in range(n * m)]
        B = copies[b].relabel(perm)
        sigma = list(range(n * m))
        for (pa, pb), block in zip(pairs_a, blocks):
            Ia = sorted((u, v) if u // m == pa else (v, u) for u, v in I_a if {u // m, v // m} == {pa, pb})
            target = realize_bipartite_pair(Ia, block)
            want = {}
            for x, y in target:
                if x // m == pa:
                    want[x] = y
                else:
                    want[y] = x
            for u, v in B.one_factor:
                if {u // m, v // m} == {pa, pb}:
                    xa, yb = (u, v) if u // m == pa else (v, u)
                    sigma[yb] = want[xa]
        copies[b] = B.relabel(sigma)
        filler_classes.append(union_cycles(I_a, copies[b].one_factor))
    one = copies[odd_idx[-1]].one_factor if len(odd_idx) % 2 else None
    stripped = [Decomposition(c.cycles, None, c.classes, c.alphas) for c in copies]
    out = concat(stripped, filler_classes, one)
    predicted = [T for c in copies for T in c.factorization_type()] + [ctype(T) for T in fillers]
    rep = verify_decomposition(spec, out)
    rep.extend(verify_factorization_type(spec, out, predicted))
    if not rep.ok:
        raise AssertionError(f"layered detachment is invalid: {rep.summary()}")
    return out
