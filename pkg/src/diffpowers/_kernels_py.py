"""Pure-Python hot loops.

These are the reference versions of the routines in ``_ckernels.pyx``; both
modules expose the same functions with the same semantics.  Polynomials are
plain dicts mapping exponent tuples to nonzero coefficients.  ``modulus`` is
0 for coefficients in ZZ or QQ and ``p`` for GF(p).
"""

from heapq import heappop, heappush


class BudgetExceeded(RuntimeError):
    """Raised when a computation runs past its reduction-step budget."""


def mul_terms(a, b, modulus):
    """Product of two term dicts."""
    if len(a) < len(b):
        a, b = b, a
    out = {}
    get = out.get
    for eb, cb in b.items():
        for ea, ca in a.items():
            e = tuple([i + j for i, j in zip(ea, eb)])
            out[e] = get(e, 0) + ca * cb
    if modulus:
        return {e: c % modulus for e, c in out.items() if c % modulus}
    return {e: c for e, c in out.items() if c}


def neg_key(weights, e):
    return tuple([-sum([w * x for w, x in zip(row, e)]) for row in weights])


def reduce_terms(terms, basis, weights, modulus, field, budget):
    """Fully reduce ``terms`` by ``basis``.

    ``basis`` is a list of ``(lead_exp, lead_coef, tail)`` where ``tail`` holds
    the non-leading terms.  Over a field every lead coefficient must be 1; over
    ZZ lead coefficients are positive and reduction is Euclidean (the
    coefficient at a reducible monomial is replaced by its remainder).

    Returns ``(remainder, steps)``.  Raises BudgetExceeded if more than
    ``budget`` reduction steps are needed.
    """
    rem = dict(terms)
    heap = [(neg_key(weights, e), e) for e in rem]
    heap.sort()
    out = {}
    steps = 0
    while heap:
        _, e = heappop(heap)
        c = rem.pop(e, 0)
        if not c:
            continue
        for lead, lc, tail in basis:
            if any([x < y for x, y in zip(e, lead)]):
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
            shift = [x - y for x, y in zip(e, lead)]
            for ge, gc in tail.items():
                ne = tuple([x + y for x, y in zip(ge, shift)])
                old = rem.get(ne)
                v = (0 if old is None else old) - q * gc
                if modulus:
                    v %= modulus
                if v:
                    rem[ne] = v
                    if old is None:
                        heappush(heap, (neg_key(weights, ne), ne))
                elif old is not None:
                    del rem[ne]
            c -= q * lc
            if not c:
                break
        if c:
            out[e] = c
    return out, steps


def _xgcd(a, b):
    """Return (g, s, t) with s*a + t*b == g == gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def hnf_rows(rows, ncols, transform):
    """Row Hermite normal form of an integer matrix given as a list of rows.

    Returns ``(H, U, rank)`` with ``H == U * A``; ``U`` is ``None`` unless
    ``transform`` is true.  Pivots are positive and entries above a pivot lie
    in ``[0, pivot)``.  Zero rows of ``H`` come last.
    """
    H = [list(r) for r in rows]
    m = len(H)
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transform else None
    piv_row = 0
    pivots = []
    for col in range(ncols):
        if piv_row >= m:
            break
        # gcd-combine every nonzero entry below piv_row into piv_row
        for r in range(piv_row + 1, m):
            b = H[r][col]
            if not b:
                continue
            a = H[piv_row][col]
            if a and b % a == 0:
                q = b // a
                Ra, Rb = H[piv_row], H[r]
                for j in range(col, ncols):
                    Rb[j] -= q * Ra[j]
                if transform:
                    Ua, Ub = U[piv_row], U[r]
                    for j in range(m):
                        Ub[j] -= q * Ua[j]
                continue
            g, s, t = _xgcd(a, b)
            ag, bg = a // g, b // g
            Ra, Rb = H[piv_row], H[r]
            for j in range(col, ncols):
                x, y = Ra[j], Rb[j]
                Ra[j] = s * x + t * y
                Rb[j] = ag * y - bg * x
            if transform:
                Ua, Ub = U[piv_row], U[r]
                for j in range(m):
                    x, y = Ua[j], Ub[j]
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
                    Rr[j] -= q * Rp[j]
                if transform:
                    Ur, Up = U[r], U[piv_row]
                    for j in range(m):
                        Ur[j] -= q * Up[j]
        pivots.append(col)
        piv_row += 1
    return H, U, piv_row
