# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels (same contracts as equnif._pure_kernels)."""
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport malloc, free, realloc

BACKEND = "cython"

cdef int64_t ENTRY_LIMIT = 1 << 40


def hilbert_basis_int(rows, bounds):
    cdef Py_ssize_t m = len(rows)
    cdef Py_ssize_t n = len(rows[0]) if m else len(bounds)
    cdef Py_ssize_t i, r, j, nb
    cdef int64_t s, coef
    for r in range(m):
        for i in range(n):
            coef = rows[r][i]
            if coef > (1 << 20) or coef < -(1 << 20):
                raise OverflowError("coefficient outside compiled range")
    cdef int64_t *cols = <int64_t *> malloc(sizeof(int64_t) * (m * n + 1))
    cdef int64_t *bnd = <int64_t *> malloc(sizeof(int64_t) * (n + 1))
    cdef int64_t *q = <int64_t *> malloc(sizeof(int64_t) * (n + 1))
    cdef int64_t *bas = NULL
    cdef Py_ssize_t bas_cap = 0
    cdef bint dominated, le
    try:
        for i in range(n):
            bnd[i] = bounds[i]
            for r in range(m):
                cols[i * m + r] = rows[r][i]
        basis = []
        nb = 0
        bas_cap = 64
        bas = <int64_t *> malloc(sizeof(int64_t) * bas_cap * (n + 1))
        frontier = []
        for i in range(n):
            if bnd[i] == 0:
                continue
            e = tuple(1 if j == i else 0 for j in range(n))
            frontier.append((e, tuple(cols[i * m + r] for r in range(m))))
        while frontier:
            frontier.sort()
            rest = []
            for p, ap in frontier:
                if not any(ap):
                    basis.append(p)
                    if nb == bas_cap:
                        bas_cap *= 2
                        bas = <int64_t *> _grow(bas, bas_cap * (n + 1))
                    for j in range(n):
                        bas[nb * n + j] = p[j]
                    nb += 1
                else:
                    rest.append((p, ap))
            nxt = {}
            for p, ap in rest:
                for i in range(n):
                    if bnd[i] >= 0 and p[i] >= bnd[i]:
                        continue
                    s = 0
                    for r in range(m):
                        s += (<int64_t> ap[r]) * cols[i * m + r]
                    if s >= 0:
                        continue
                    for j in range(n):
                        q[j] = p[j]
                    q[i] += 1
                    if q[i] > ENTRY_LIMIT:
                        raise OverflowError("entry outside compiled range")
                    dominated = False
                    for r in range(nb):
                        le = True
                        for j in range(n):
                            if bas[r * n + j] > q[j]:
                                le = False
                                break
                        if le:
                            dominated = True
                            break
                    if dominated:
                        continue
                    qt = tuple(q[j] for j in range(n))
                    if qt in nxt:
                        continue
                    nxt[qt] = tuple(ap[r] + cols[i * m + r] for r in range(m))
            frontier = list(nxt.items())
        basis.sort()
        return basis
    finally:
        free(cols)
        free(bnd)
        free(q)
        if bas != NULL:
            free(bas)


cdef void *_grow(int64_t *old, Py_ssize_t count) except NULL:
    cdef void *p = realloc(old, sizeof(int64_t) * count)
    if p == NULL:
        raise MemoryError()
    return p


def cover_scan(covers, full, Py_ssize_t m):
    cdef Py_ssize_t k = len(covers)
    cdef Py_ssize_t words = 1
    cdef Py_ssize_t w, j, t, last, c
    if m == 0:
        return 1, int(full == 0)
    top = max([int(x) for x in covers] + [int(full)])
    while top >> (64 * words):
        words += 1
    if words > 4:
        raise OverflowError("cover masks wider than 256 bits")
    cdef uint64_t *cv = <uint64_t *> malloc(sizeof(uint64_t) * 4 * (k + 1))
    cdef uint64_t fl[4]
    cdef uint64_t mask64 = 0xFFFFFFFFFFFFFFFF
    for c in range(k):
        for w in range(4):
            cv[c * 4 + w] = (int(covers[c]) >> (64 * w)) & mask64 if w < words else 0
    for w in range(4):
        fl[w] = (int(full) >> (64 * w)) & mask64 if w < words else 0
    cdef Py_ssize_t *idx = <Py_ssize_t *> malloc(sizeof(Py_ssize_t) * m)
    cdef uint64_t *pref = <uint64_t *> malloc(sizeof(uint64_t) * 4 * (m + 1))
    cdef long long hits = 0
    cdef bint ok
    try:
        for w in range(4):
            pref[w] = 0
        for j in range(m):
            idx[j] = 0
            for w in range(4):
                pref[(j + 1) * 4 + w] = pref[j * 4 + w] | cv[w]
        last = m - 1
        while True:
            for c in range(k):
                ok = True
                for w in range(4):
                    if (pref[last * 4 + w] | cv[c * 4 + w]) != fl[w]:
                        ok = False
                        break
                if ok:
                    hits += 1
            j = last - 1
            while j >= 0 and idx[j] == k - 1:
                j -= 1
            if j < 0:
                break
            idx[j] += 1
            for w in range(4):
                pref[(j + 1) * 4 + w] = pref[j * 4 + w] | cv[idx[j] * 4 + w]
            for t in range(j + 1, last):
                idx[t] = 0
                for w in range(4):
                    pref[(t + 1) * 4 + w] = pref[t * 4 + w] | cv[w]
        return (<object> k) ** (<object> m), hits
    finally:
        free(cv)
        free(idx)
        free(pref)
