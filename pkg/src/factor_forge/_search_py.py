"""Pure-Python backtracking kernel for resolvable cycle decompositions.

The compiled twin in ``_search_ext.pyx`` implements exactly the same
branching order, so both backends return identical witnesses and node
counts.

Inputs
------
n           number of vertices
mult        flat ``n*n`` list of edge multiplicities (consumed as a copy)
classes     list of ``(lengths, cover)``: cycle lengths in descending order
            and the number of times each vertex must be covered
groups      class group ids; adjacent classes with equal ids are
            interchangeable and get a symmetry-breaking order
node_limit  maximum number of path-extension steps

Returns ``(status, cycles, nodes)`` with status 1 (found), 0 (exhausted)
or -1 (node limit hit); ``cycles[j]`` lists the cycles of class ``j``.
"""
from __future__ import annotations


class _Abort(Exception):
    pass


def search(n, mult, classes, groups, node_limit):
    mult = list(mult)
    K = len(classes)
    need = [0] * n
    in_path = [False] * n
    path = []
    result = [[] for _ in range(K)]
    first_key = [None] * K
    lens = [None] * K
    cnts = [None] * K
    for j, (lengths, _cover) in enumerate(classes):
        distinct = sorted(set(lengths), reverse=True)
        lens[j] = distinct
        cnts[j] = [list(lengths).count(L) for L in distinct]
    nodes = [0]

    def feasible(j):
        has2 = False
        ls = lens[j]
        cs = cnts[j]
        for t in range(len(ls)):
            if ls[t] == 2 and cs[t] > 0:
                has2 = True
        for u in range(n):
            if need[u] == 0:
                continue
            row = u * n
            deg = 0
            dbl = False
            for w in range(n):
                if w != u and need[w] > 0 and mult[row + w] > 0:
                    deg += 1
                    if mult[row + w] >= 2:
                        dbl = True
            if deg >= 2:
                continue
            if deg == 1 and has2 and dbl:
                continue
            return False
        return True

    def start_class(j):
        if j == K:
            return True
        cover = classes[j][1]
        for v in range(n):
            need[v] = cover[v]
        ok = place(j)
        return ok

    def place(j):
        v = -1
        for u in range(n):
            if need[u] > 0:
                v = u
                break
        if v < 0:
            if start_class(j + 1):
                return True
            # the next class overwrote ``need``; a finished class has none left
            for u in range(n):
                need[u] = 0
            return False
        if not feasible(j):
            return False
        ls = lens[j]
        cs = cnts[j]
        for t in range(len(ls)):
            if cs[t] == 0:
                continue
            L = ls[t]
            cs[t] -= 1
            path.append(v)
            in_path[v] = True
            found = extend(j, L, v)
            in_path[v] = False
            path.pop()
            cs[t] += 1
            if found:
                return True
        return False

    def key_ok(j, L):
        # identical adjacent classes: first cycles must be non-decreasing
        if j == 0 or groups[j] != groups[j - 1] or result[j]:
            return True
        prev = first_key[j - 1]
        cur = (L, tuple(path))
        return cur >= prev

    def extend(j, L, v):
        k = len(path)
        last = path[-1]
        if k == L:
            if L == 2:
                closing_ok = True
            else:
                closing_ok = mult[last * n + v] > 0
            if not closing_ok:
                return False
            if not key_ok(j, L):
                return False
            if L > 2:
                mult[last * n + v] -= 1
                mult[v * n + last] -= 1
            for u in path:
                need[u] -= 1
            cyc = tuple(path)
            first = not result[j]
            result[j].append(cyc)
            if first:
                first_key[j] = (L, cyc)
            # the next cycle starts with an empty path
            for u in cyc:
                in_path[u] = False
            del path[:]
            done = place(j)
            path.extend(cyc)
            for u in cyc:
                in_path[u] = True
            if done:
                return True
            result[j].pop()
            if first:
                first_key[j] = None
            for u in path:
                need[u] += 1
            if L > 2:
                mult[last * n + v] += 1
                mult[v * n + last] += 1
            return False
        row = last * n
        closing = k == L - 1
        lo = v + 1
        if closing and L > 2:
            lo = max(lo, path[1] + 1)
        for w in range(lo, n):
            if in_path[w] or need[w] == 0:
                continue
            if L == 2:
                if mult[row + w] < 2:
                    continue
            elif mult[row + w] < 1:
                continue
            if closing and L > 2 and mult[w * n + v] < 1:
                continue
            nodes[0] += 1
            if nodes[0] > node_limit:
                raise _Abort
            dec = 2 if L == 2 else 1
            mult[row + w] -= dec
            mult[w * n + last] -= dec
            path.append(w)
            in_path[w] = True
            found = extend(j, L, v)
            in_path[w] = False
            path.pop()
            mult[row + w] += dec
            mult[w * n + last] += dec
            if found:
                return True
        return False

    try:
        ok = start_class(0)
    except _Abort:
        return -1, None, nodes[0]
    if not ok:
        return 0, None, nodes[0]
    return 1, [list(r) for r in result], nodes[0]
