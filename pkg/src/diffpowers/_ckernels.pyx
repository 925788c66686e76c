# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot loops in ``_kernels_py``.

Coefficients stay Python integers (or Fractions); only exponent and index
bookkeeping is done in C.
"""

from heapq import heappop, heappush

from ._kernels_py import BudgetExceeded


cdef tuple _neg_key(tuple weights, tuple e):
    cdef Py_ssize_t i, j, n = len(e)
    cdef long s
    cdef tuple row
    out = []
    for row in weights:
        s = 0
        for i in range(n):
            s += <long>row[i] * <long>e[i]
        out.append(-s)
    return tuple(out)


def neg_key(weights, e):
    return _neg_key(tuple(weights), tuple(e))


cdef inline tuple _add_exp(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    return tuple([<long>a[i] + <long>b[i] for i in range(n)])


cdef inline bint _divides(tuple lead, tuple e):
    cdef Py_ssize_t i, n = len(e)
    for i in range(n):
        if <long>e[i] < <long>lead[i]:
            return False
    return True


def mul_terms(dict a, dict b, modulus):
    cdef dict out = {}
    cdef tuple ea, eb, e
    if len(a) < len(b):
        a, b = b, a
    for eb, cb in b.items():
        for ea, ca in a.items():
            e = _add_exp(ea, eb)
            old = out.get(e)
            if old is None:
                out[e] = ca * cb
            else:
                out[e] = old + ca * cb
    if modulus:
        return {e: c % modulus for e, c in out.items() if c % modulus}
    return {e: c for e, c in out.items() if c}


def reduce_terms(dict terms, list basis, weights, modulus, bint field, long long budget):
    cdef dict rem = dict(terms)
    cdef dict out = {}
    cdef dict tail
    cdef tuple wts = tuple(weights)
    cdef tuple e, lead, ge, ne, shift
    cdef list heap
    cdef long long steps = 0
    cdef Py_ssize_t i, n
    heap = [(_neg_key(wts, e), e) for e in rem]
    heap.sort()
    while heap:
        e = heappop(heap)[1]
        c = rem.pop(e, 0)
        if not c:
            continue
        n = len(e)
        for lead, lc, tail in basis:
            if not _divides(lead, e):
                continue
            if field:
                q = c
            else:
                q = c // lc
                if not q:
                    continue
            steps += 1
            if steps > budget:
                raise BudgetExceeded("reduction step budget exhausted")
            shift = tuple([<long>e[i] - <long>lead[i] for i in range(n)])
            for ge, gc in tail.items():
                ne = _add_exp(ge, shift)
                old = rem.get(ne)
                if old is None:
                    v = -q * gc
                else:
                    v = old - q * gc
                if modulus:
                    v %= modulus
                if v:
                    rem[ne] = v
                    if old is None:
                        heappush(heap, (_neg_key(wts, ne), ne))
                elif old is not None:
                    del rem[ne]
            c -= q * lc
            if not c:
                break
        if c:
            out[e] = c
    return out, steps


cdef tuple _xgcd(a, b):
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def hnf_rows(rows, Py_ssize_t ncols, bint transform):
    cdef list H = [list(row) for row in rows]
    cdef Py_ssize_t m = len(H)
    cdef Py_ssize_t piv_row = 0, col, r, j
    cdef list U = None
    cdef list Ra, Rb, Ua, Ub, Rp, Rr, Ur, Up
    if transform:
        U = [[int(i == j) for j in range(m)] for i in range(m)]
    for col in range(ncols):
        if piv_row >= m:
            break
        for r in range(piv_row + 1, m):
            b = H[r][col]
            if not b:
                continue
            a = H[piv_row][col]
            Ra = H[piv_row]
            Rb = H[r]
            if a and b % a == 0:
                q = b // a
                for j in range(col, ncols):
                    Rb[j] = Rb[j] - q * Ra[j]
                if transform:
                    Ua = U[piv_row]
                    Ub = U[r]
                    for j in range(m):
                        Ub[j] = Ub[j] - q * Ua[j]
                continue
            g, s, t = _xgcd(a, b)
            ag = a // g
            bg = b // g
            for j in range(col, ncols):
                x = Ra[j]
                y = Rb[j]
                Ra[j] = s * x + t * y
                Rb[j] = ag * y - bg * x
            if transform:
                Ua = U[piv_row]
                Ub = U[r]
                for j in range(m):
                    x = Ua[j]
                    y = Ub[j]
                    Ua[j] = s * x + t * y
                    Ub[j] = ag * y - bg * x
        a = H[piv_row][col]
        if not a:
            continue
        if a < 0:
            H[piv_row] = [-x for x in H[piv_row]]
            if transform:
                U[piv_row] = [-x for x in U[piv_row]]
            a = -a
        Rp = H[piv_row]
        for r in range(piv_row):
            q = H[r][col] // a
            if q:
                Rr = H[r]
                for j in range(col, ncols):
                    Rr[j] = Rr[j] - q * Rp[j]
                if transform:
                    Ur = U[r]
                    Up = U[piv_row]
                    for j in range(m):
                        Ur[j] = Ur[j] - q * Up[j]
        piv_row += 1
    return H, U, piv_row
