# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled backtracking kernel; mirrors ``_search_py.search`` step for step."""

from libc.stdlib cimport malloc, calloc, free


cdef struct Ctx:
    int n
    int K
    int* mult
    int* need
    char* in_path
    int* path
    int plen
    int* cover      # K * n
    int* lens       # K * n, distinct lengths descending
    int* cnts       # K * n
    int* nd         # K
    int* groups     # K
    int* cbuf       # stacked cycle vertices
    int* cstart     # per stacked cycle: offset into cbuf
    int* clen
    int* cclass
    int ctop        # number of stacked cycles
    int cused       # vertices used in cbuf
    int* cfirst     # per class: stack index of its first cycle or -1
    long long nodes
    long long limit
    int aborted


cdef int feasible(Ctx* c, int j):
    cdef int n = c.n
    cdef int has2 = 0
    cdef int t, u, w, row, deg, dbl, mv
    for t in range(c.nd[j]):
        if c.lens[j * n + t] == 2 and c.cnts[j * n + t] > 0:
            has2 = 1
    for u in range(n):
        if c.need[u] == 0:
            continue
        row = u * n
        deg = 0
        dbl = 0
        for w in range(n):
            if w != u and c.need[w] > 0:
                mv = c.mult[row + w]
                if mv > 0:
                    deg += 1
                    if mv >= 2:
                        dbl = 1
        if deg >= 2:
            continue
        if deg == 1 and has2 and dbl:
            continue
        return 0
    return 1


cdef int start_class(Ctx* c, int j):
    cdef int v
    if j == c.K:
        return 1
    for v in range(c.n):
        c.need[v] = c.cover[j * c.n + v]
    return place(c, j)


cdef int place(Ctx* c, int j):
    cdef int n = c.n
    cdef int v = -1
    cdef int u, t, L, found
    for u in range(n):
        if c.need[u] > 0:
            v = u
            break
    if v < 0:
        if start_class(c, j + 1):
            return 1
        for u in range(n):
            c.need[u] = 0
        return 0
    if not feasible(c, j):
        return 0
    for t in range(c.nd[j]):
        if c.cnts[j * n + t] == 0:
            continue
        L = c.lens[j * n + t]
        c.cnts[j * n + t] -= 1
        c.path[c.plen] = v
        c.plen += 1
        c.in_path[v] = 1
        found = extend(c, j, L, v)
        c.in_path[v] = 0
        c.plen -= 1
        c.cnts[j * n + t] += 1
        if found:
            return 1
        if c.aborted:
            return 0
    return 0


cdef int key_ok(Ctx* c, int j, int L):
    cdef int idx, pl, i, a, b
    if j == 0 or c.groups[j] != c.groups[j - 1] or c.cfirst[j] >= 0:
        return 1
    idx = c.cfirst[j - 1]
    pl = c.clen[idx]
    if L != pl:
        return L > pl
    for i in range(L):
        a = c.path[i]
        b = c.cbuf[c.cstart[idx] + i]
        if a != b:
            return a > b
    return 1


cdef int extend(Ctx* c, int j, int L, int v):
    cdef int n = c.n
    cdef int k = c.plen
    cdef int last = c.path[k - 1]
    cdef int i, u, w, lo, row, closing, dec, found, first, idx, base
    if k == L:
        if L != 2 and c.mult[last * n + v] <= 0:
            return 0
        if not key_ok(c, j, L):
            return 0
        if L > 2:
            c.mult[last * n + v] -= 1
            c.mult[v * n + last] -= 1
        for i in range(L):
            c.need[c.path[i]] -= 1
        idx = c.ctop
        base = c.cused
        c.cstart[idx] = base
        c.clen[idx] = L
        c.cclass[idx] = j
        for i in range(L):
            c.cbuf[base + i] = c.path[i]
        c.ctop += 1
        c.cused += L
        first = c.cfirst[j] < 0
        if first:
            c.cfirst[j] = idx
        for i in range(L):
            c.in_path[c.path[i]] = 0
        c.plen = 0
        found = place(c, j)
        for i in range(L):
            c.path[i] = c.cbuf[base + i]
            c.in_path[c.path[i]] = 1
        c.plen = L
        if found:
            return 1
        c.ctop -= 1
        c.cused -= L
        if first:
            c.cfirst[j] = -1
        for i in range(L):
            c.need[c.path[i]] += 1
        if L > 2:
            c.mult[last * n + v] += 1
            c.mult[v * n + last] += 1
        return 0
    row = last * n
    closing = k == L - 1
    lo = v + 1
    if closing and L > 2 and c.path[1] + 1 > lo:
        lo = c.path[1] + 1
    for w in range(lo, n):
        if c.in_path[w] or c.need[w] == 0:
            continue
        if L == 2:
            if c.mult[row + w] < 2:
                continue
        elif c.mult[row + w] < 1:
            continue
        if closing and L > 2 and c.mult[w * n + v] < 1:
            continue
        c.nodes += 1
        if c.nodes > c.limit:
            c.aborted = 1
            return 0
        dec = 2 if L == 2 else 1
        c.mult[row + w] -= dec
        c.mult[w * n + last] -= dec
        c.path[c.plen] = w
        c.plen += 1
        c.in_path[w] = 1
        found = extend(c, j, L, v)
        c.in_path[w] = 0
        c.plen -= 1
        c.mult[row + w] += dec
        c.mult[w * n + last] += dec
        if found:
            return 1
        if c.aborted:
            return 0
    return 0


def search(int n, mult, classes, groups, long long node_limit):
    cdef Ctx c
    cdef int K = len(classes)
    cdef int total = 0
    cdef int j, v, t, i, ok
    c.n = n
    c.K = K
    c.nodes = 0
    c.limit = node_limit
    c.aborted = 0
    c.plen = 0
    c.ctop = 0
    c.cused = 0
    for lengths, _cover in classes:
        total += sum(lengths)
    c.mult = <int*> malloc(max(1, n * n) * sizeof(int))
    c.need = <int*> calloc(max(1, n), sizeof(int))
    c.in_path = <char*> calloc(max(1, n), sizeof(char))
    c.path = <int*> malloc(max(1, n) * sizeof(int))
    c.cover = <int*> calloc(max(1, K * n), sizeof(int))
    c.lens = <int*> calloc(max(1, K * n), sizeof(int))
    c.cnts = <int*> calloc(max(1, K * n), sizeof(int))
    c.nd = <int*> calloc(max(1, K), sizeof(int))
    c.groups = <int*> calloc(max(1, K), sizeof(int))
    c.cbuf = <int*> malloc(max(1, total) * sizeof(int))
    c.cstart = <int*> malloc(max(1, total) * sizeof(int))
    c.clen = <int*> malloc(max(1, total) * sizeof(int))
    c.cclass = <int*> malloc(max(1, total) * sizeof(int))
    c.cfirst = <int*> malloc(max(1, K) * sizeof(int))
    try:
        for i in range(n * n):
            c.mult[i] = mult[i]
        for j in range(K):
            lengths, cover = classes[j]
            distinct = sorted(set(lengths), reverse=True)
            c.nd[j] = len(distinct)
            for t in range(len(distinct)):
                c.lens[j * n + t] = distinct[t]
                c.cnts[j * n + t] = list(lengths).count(distinct[t])
            for v in range(n):
                c.cover[j * n + v] = cover[v]
            c.groups[j] = groups[j]
            c.cfirst[j] = -1
        ok = start_class(&c, 0)
        if c.aborted:
            return -1, None, c.nodes
        if not ok:
            return 0, None, c.nodes
        result = [[] for _ in range(K)]
        for i in range(c.ctop):
            result[c.cclass[i]].append(tuple(c.cbuf[c.cstart[i] + t] for t in range(c.clen[i])))
        return 1, result, c.nodes
    finally:
        free(c.mult)
        free(c.need)
        free(c.in_path)
        free(c.path)
        free(c.cover)
        free(c.lens)
        free(c.cnts)
        free(c.nd)
        free(c.groups)
        free(c.cbuf)
        free(c.cstart)
        free(c.clen)
        free(c.cclass)
        free(c.cfirst)
