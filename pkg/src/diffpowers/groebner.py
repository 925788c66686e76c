"""Gröbner bases over ZZ (strong) and over the fields QQ and GF(p).

Over ZZ the basis is a *strong* Gröbner basis: every element of the ideal has
a leading term (coefficient included) divisible by the leading term of some
basis element, so Euclidean normal forms decide membership.  The completion
uses S-polynomials together with GCD-polynomials.

    >>> R = PolynomialRing(ZZ, ["x"])
    >>> x, = R.gens
    >>> I = Ideal(R, [4, 2 * x, x ** 2])
    >>> I.contains(2 * x ** 2), I.contains(R(2))
    (True, False)
"""

from __future__ import annotations

import contextlib
import heapq
import itertools
import threading
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

from . import _backend
from ._backend import BudgetExceeded
from .poly import (
    GREVLEX, ZZ, MonomialOrder, Polynomial, PolynomialRing, RingMismatchError,
    is_prime,
)

__all__ = [
    "BudgetExceeded", "CertificateError", "GroebnerBasis", "Ideal",
    "PrimeCertificate", "check_prime_certificate", "colon", "contains",
    "default_budget", "ideal_contains", "ideal_eq", "ideal_power",
    "integer_contraction", "intersect", "normal_form", "saturation",
    "step_budget", "strong_groebner",
]

_DEFAULT_BUDGET = [10 ** 7]


def default_budget() -> int:
    return _DEFAULT_BUDGET[0]


@contextlib.contextmanager
def step_budget(steps: int):
    """Temporarily change the reduction-step budget used by every basis
    computation started inside the block."""
    old = _DEFAULT_BUDGET[0]
    _DEFAULT_BUDGET[0] = int(steps)
    try:
        yield
    finally:
        _DEFAULT_BUDGET[0] = old


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _shift(d: dict, shift: tuple, c, modulus: int) -> dict:
    if modulus:
        return {tuple([a + b for a, b in zip(e, shift)]): v * c % modulus for e, v in d.items()}
    return {tuple([a + b for a, b in zip(e, shift)]): v * c for e, v in d.items()}


def _combine(d1: dict, d2: dict, modulus: int) -> dict:
    out = dict(d1)
    for e, v in d2.items():
        w = out.get(e, 0) + v
        if modulus:
            w %= modulus
        if w:
            out[e] = w
        else:
            out.pop(e, None)
    return out


class _Completion:
    """Buchberger completion on raw term dicts."""

    def __init__(self, ring: PolynomialRing, order: MonomialOrder, budget: int):
        self.ring = ring
        self.dom = ring.domain
        self.field = ring.domain.is_field
        self.mod = ring.domain.modulus
        self.order = order
        self.key = order.key
        self.weights = order.weights(ring.nvars)
        self.budget = budget
        self.used = 0
        self.basis: list[tuple] = []  # (lead, lc, tail)
        self.full: list[dict] = []
        self.pairs: list = []
        self.counter = itertools.count()

    def reduce(self, d: dict) -> dict:
        out, steps = _backend.reduce_terms(
            d, self.basis, self.weights, self.mod, self.field, self.budget - self.used)
        self.used += steps
        return out

    def normalize(self, d: dict) -> dict:
        lead = max(d, key=self.key)
        lc = d[lead]
        if self.field:
            if lc != 1:
                inv = self.dom.inverse(lc)
                d = {e: self.dom.convert(c * inv) for e, c in d.items()}
        elif lc < 0:
            d = {e: -c for e, c in d.items()}
        return d

    def insert(self, d: dict):
        d = self.normalize(d)
        lead = max(d, key=self.key)
        lc = d[lead]
        tail = dict(d)
        del tail[lead]
        j = len(self.basis)
        for i, (li, ci, _) in enumerate(self.basis):
            lcm = tuple(max(a, b) for a, b in zip(li, lead))
            coprime_mono = all(a == 0 or b == 0 for a, b in zip(li, lead))
            coprime_coef = self.field or gcd(ci, lc) == 1
            k = self.key(lcm)
            if not (coprime_mono and coprime_coef):
                heapq.heappush(self.pairs, (k, next(self.counter), "S", i, j))
            if not self.field and ci % lc and lc % ci:
                heapq.heappush(self.pairs, (k, next(self.counter), "G", i, j))
        self.basis.append((lead, lc, tail))
        self.full.append(d)

    def pair_poly(self, kind: str, i: int, j: int) -> dict:
        li, ci, _ = self.basis[i]
        lj, cj, _ = self.basis[j]
        lcm = tuple(max(a, b) for a, b in zip(li, lj))
        si = tuple(a - b for a, b in zip(lcm, li))
        sj = tuple(a - b for a, b in zip(lcm, lj))
        if kind == "S":
            if self.field:
                ai, aj = 1, -1
            else:
                l = ci * cj // gcd(ci, cj)
                ai, aj = l // ci, -(l // cj)
        else:
            _, ai, aj = _xgcd(ci, cj)
        return _combine(_shift(self.full[i], si, ai, self.mod),
                        _shift(self.full[j], sj, aj, self.mod), self.mod)

    def run(self, polys: Iterable[dict]) -> list[dict]:
        for d in polys:
            if d:
                r = self.reduce(d)
                if r:
                    self.insert(r)
        while self.pairs:
            _, _, kind, i, j = heapq.heappop(self.pairs)
            h = self.pair_poly(kind, i, j)
            if not h:
                continue
            r = self.reduce(h)
            if r:
                self.insert(r)
        return self.finish()

    def finish(self) -> list[dict]:
        items = [(lead, lc, d) for (lead, lc, _), d in zip(self.basis, self.full)]
        # drop elements whose leading term is a multiple of another one
        keep = []
        for idx, (lead, lc, d) in enumerate(items):
            redundant = False
            for jdx, (l2, c2, _) in enumerate(items):
                if jdx == idx or any(a < b for a, b in zip(lead, l2)):
                    continue
                if not self.field and lc % c2:
                    continue
                if l2 == lead and (self.field or c2 == lc) and jdx > idx:
                    continue
                redundant = True
                break
            if not redundant:
                keep.append((lead, lc, d))
        keep.sort(key=lambda t: (self.key(t[0]), t[1]))
        reduced = []
        for idx, (lead, lc, d) in enumerate(keep):
            others = [(l2, c2, {e: v for e, v in d2.items() if e != l2})
                      for jdx, (l2, c2, d2) in enumerate(keep) if jdx != idx]
            tail = {e: v for e, v in d.items() if e != lead}
            out, steps = _backend.reduce_terms(
                tail, others, self.weights, self.mod, self.field, self.budget - self.used)
            self.used += steps
            out[lead] = lc
            reduced.append(out)
        return reduced


@dataclass(frozen=True, eq=False)
class GroebnerBasis:
    """A reduced Gröbner basis (strong over ZZ) for a fixed monomial order."""

    ring: PolynomialRing
    elements: tuple[Polynomial, ...]
    order: MonomialOrder
    strong: bool
    _entries: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        key = self.order.key
        entries = []
        for g in self.elements:
            d = g.as_dict()
            lead = max(d, key=key)
            lc = d.pop(lead)
            entries.append((lead, lc, d))
        self._entries[:] = entries

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def reduce(self, f: Polynomial, budget: int | None = None) -> Polynomial:
        if f.ring != self.ring:
            raise RingMismatchError(f"{f.ring} vs {self.ring}")
        dom = self.ring.domain
        out, _ = _backend.reduce_terms(
            f.as_dict(), self._entries, self.order.weights(self.ring.nvars),
            dom.modulus, dom.is_field, default_budget() if budget is None else budget)
        return Polynomial._make(self.ring, out)

    def contains(self, f: Polynomial) -> bool:
        return not self.reduce(f)

    def leading_terms(self):
        return [(lc, lead) for lead, lc, _ in self._entries]


def strong_groebner(I: "Ideal", order: MonomialOrder = GREVLEX,
                    budget: int | None = None) -> GroebnerBasis:
    """Compute (or fetch from the ideal's cache) the reduced basis of ``I``."""
    return I.groebner(order, budget)


def _compute_basis(ring, generators, order, budget) -> GroebnerBasis:
    comp = _Completion(ring, order, default_budget() if budget is None else budget)
    dicts = comp.run(g.as_dict() for g in generators)
    elems = tuple(Polynomial._make(ring, d) for d in dicts)
    return GroebnerBasis(ring, elems, order, strong=not ring.domain.is_field)


class Ideal:
    """Ideal given by generators, with a write-once basis cache per order."""

    def __init__(self, ring: PolynomialRing, generators: Iterable = ()):
        gens = []
        for g in generators:
            g = ring(g)
            if g:
                gens.append(g)
        self.ring = ring
        self.generators: tuple[Polynomial, ...] = tuple(gens)
        self._cache: dict[MonomialOrder, GroebnerBasis] = {}
        self._lock = threading.Lock()

    @classmethod
    def parse(cls, ring: PolynomialRing, text: str) -> "Ideal":
        return cls(ring, [ring.parse(t) for t in text.split(",") if t.strip()])

    def groebner(self, order: MonomialOrder = GREVLEX, budget: int | None = None) -> GroebnerBasis:
        gb = self._cache.get(order)
        if gb is None:
            gb = _compute_basis(self.ring, self.generators, order, budget)
            with self._lock:
                gb = self._cache.setdefault(order, gb)
        return gb

    def contains(self, f) -> bool:
        return self.groebner().contains(self.ring(f))

    __contains__ = contains

    def reduce(self, f) -> Polynomial:
        return self.groebner().reduce(self.ring(f))

    def is_unit(self) -> bool:
        return self.contains(self.ring.one)

    def is_zero(self) -> bool:
        return not self.generators

    def __add__(self, other: "Ideal") -> "Ideal":
        _check_same(self, other)
        return Ideal(self.ring, self.generators + other.generators)

    def __mul__(self, other: "Ideal") -> "Ideal":
        _check_same(self, other)
        return Ideal(self.ring, [f * g for f in self.generators for g in other.generators])

    def __pow__(self, n: int) -> "Ideal":
        return ideal_power(self, n)

    def key(self):
        return (self.ring, self.generators)

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"

    def __repr__(self):
        return f"Ideal{self}"


def _check_same(I: Ideal, J: Ideal):
    if I.ring != J.ring:
        raise RingMismatchError(f"{I.ring} vs {J.ring}")


def ideal_power(I: Ideal, n: int) -> Ideal:
    """``I**n`` generated by all n-fold products of generators."""
    if n < 0:
        raise ValueError("negative ideal power")
    if n == 0:
        return Ideal(I.ring, [1])
    gens = I.generators
    # reduced basis keeps the generator count small before taking products
    if len(gens) > 1:
        gens = I.groebner().elements
    prods = []
    for combo in itertools.combinations_with_replacement(range(len(gens)), n):
        f = I.ring.one
        for i in combo:
            f = f * gens[i]
        prods.append(f)
    return Ideal(I.ring, prods)


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    return gb.reduce(f)


def contains(I: Ideal, f: Polynomial) -> bool:
    return I.contains(f)


def ideal_contains(I: Ideal, J: Ideal) -> bool:
    """True iff ``J`` is contained in ``I``."""
    _check_same(I, J)
    gb = I.groebner()
    return all(gb.contains(g) for g in J.generators)


def ideal_eq(I: Ideal, J: Ideal) -> bool:
    return ideal_contains(I, J) and ideal_contains(J, I)


def _fresh_name(names: Sequence[str], base: str = "t") -> str:
    name = f"_{base}"
    while name in names:
        name += "_"
    return name


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """``I ∩ J`` by eliminating ``t`` from ``t*I + (1 - t)*J``."""
    _check_same(I, J)
    R = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal(R, [])
    T = R.extended([_fresh_name(R.names)])
    t = T.gens[0]
    pos = list(range(1, T.nvars))
    gens = [t * g.change_ring(T, pos) for g in I.generators]
    gens += [(1 - t) * h.change_ring(T, pos) for h in J.generators]
    gb = Ideal(T, gens).groebner(MonomialOrder.elimination(1))
    out = []
    for g in gb.elements:
        d = g.as_dict()
        if all(e[0] == 0 for e in d):
            out.append(Polynomial._make(R, {e[1:]: c for e, c in d.items()}))
    return Ideal(R, out)


def colon(I: Ideal, f: Polynomial) -> Ideal:
    """``(I : f)``; each generator of ``I ∩ (f)`` is divided exactly by ``f``."""
    R = I.ring
    f = R(f)
    if not f:
        raise ValueError("colon by the zero polynomial")
    if f.is_constant() and (R.domain.is_field or f.constant_coefficient() in (1, -1)):
        return Ideal(R, I.generators)
    K = intersect(I, Ideal(R, [f]))
    return Ideal(R, [h.exact_div(f) for h in K.generators])


def saturation(I: Ideal, f: Polynomial, max_iterations: int = 64) -> tuple[Ideal, int]:
    """``(I : f^∞)`` and the least ``k`` with ``(I : f^k) = (I : f^(k+1))``."""
    current = I
    for k in range(max_iterations + 1):
        nxt = colon(current, f)
        if ideal_contains(current, nxt):
            return current, k
        current = nxt
    raise BudgetExceeded(f"saturation did not stabilize within {max_iterations} steps")


def integer_contraction(I: Ideal) -> int:
    """Nonnegative generator of ``I ∩ ZZ`` (0 when the contraction is zero)."""
    if I.ring.domain != ZZ:
        raise RingMismatchError("integer contraction needs ZZ coefficients")
    g = 0
    for h in I.groebner().elements:
        if h.is_constant():
            g = gcd(g, h.constant_coefficient())
    return g


# -- prime certificates -----------------------------------------------------

class CertificateError(ValueError):
    """A certificate is malformed or cannot be checked."""


CERTIFICATE_KINDS = ("trusted", "linear", "p-irreducible", "principal-irreducible")


@dataclass(frozen=True)
class PrimeCertificate:
    """Evidence that an ideal is prime.

    ``linear``: generators are an optional prime integer plus elements
    ``±v - h`` where each pivot variable ``v`` occurs nowhere else.
    ``p-irreducible``: ``(p, f)`` with ``f`` univariate and irreducible mod p.
    ``principal-irreducible``: ``(f)`` with ``f`` univariate, primitive and
    irreducible over QQ (certified by irreducibility modulo some prime).
    ``trusted``: unchecked; reports flag it.
    """

    kind: str
    note: str = ""

    def __post_init__(self):
        if self.kind not in CERTIFICATE_KINDS:
            raise CertificateError(f"unknown certificate kind {self.kind!r}")

    @property
    def trusted(self) -> bool:
        return self.kind == "trusted"


def _unit_exp(n, i):
    return tuple(int(j == i) for j in range(n))


def _check_linear(Q: Ideal) -> bool:
    R = Q.ring
    n = R.nvars
    consts = [g for g in Q.generators if g.is_constant()]
    rest = [g for g in Q.generators if not g.is_constant()]
    if consts:
        if R.domain != ZZ or len(consts) > 1 or not is_prime(abs(consts[0].constant_coefficient())):
            return False
    used = [g.variables() for g in rest]
    for k, g in enumerate(rest):
        others = set().union(*(used[j] for j in range(len(rest)) if j != k)) if len(rest) > 1 else set()
        found = False
        for v in sorted(used[k]):
            i = R.context.index(v)
            c = g.coefficient(_unit_exp(n, i))
            unit = c in (1, -1) if R.domain == ZZ else bool(c)
            if not unit or v in others:
                continue
            if all(e == _unit_exp(n, i) or e[i] == 0 for e in g.as_dict()):
                found = True
                break
        if not found:
            return False
    return True


def _univariate_mod_p(f: Polynomial, p: int) -> list[int] | None:
    """Coefficient list (low degree first) of a univariate ``f`` mod p."""
    vs = f.variables()
    if len(vs) > 1:
        return None
    if not vs:
        return [int(f.constant_coefficient()) % p]
    i = f.context.index(vs.pop())
    deg = f.degree()
    coeffs = [0] * (deg + 1)
    for c, e in f.terms:
        coeffs[e[i]] = int(c) % p
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _divides_mod_p(g: list[int], f: list[int], p: int) -> bool:
    r = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k] * inv % p
        if c:
            for j in range(dg + 1):
                r[k - dg + j] = (r[k - dg + j] - c * g[j]) % p
    return not any(r[:dg])


def irreducible_mod_p(coeffs: list[int], p: int, max_degree: int = 8) -> bool:
    """Exhaustive factor search over GF(p) for a univariate polynomial."""
    deg = len(coeffs) - 1
    if deg < 1 or coeffs[-1] % p == 0:
        return False
    if deg > max_degree:
        raise CertificateError(f"degree {deg} exceeds the exhaustive-search bound {max_degree}")
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if _divides_mod_p(list(low) + [1], coeffs, p):
                return False
    return True


def _check_p_irreducible(Q: Ideal) -> bool:
    R = Q.ring
    if R.domain != ZZ:
        raise CertificateError("p-irreducible certificates need ZZ coefficients")
    if len(Q.generators) != 2:
        return False
    consts = [g for g in Q.generators if g.is_constant()]
    if len(consts) != 1:
        return False
    p = abs(consts[0].constant_coefficient())
    if not is_prime(p):
        return False
    f = next(g for g in Q.generators if not g.is_constant())
    coeffs = _univariate_mod_p(f, p)
    if coeffs is None:
        raise CertificateError("p-irreducible certificate needs a univariate polynomial")
    return irreducible_mod_p(coeffs, p)


def _check_principal_irreducible(Q: Ideal) -> bool:
    R = Q.ring
    if len(Q.generators) != 1:
        return False
    f = Q.generators[0]
    if R.domain.kind == "GF":
        raise CertificateError("principal-irreducible certificates need ZZ or QQ coefficients")
    if len(f.variables()) != 1:
        raise CertificateError("principal-irreducible certificate needs a univariate polynomial")
    if R.domain == ZZ and f.content() != 1:
        return False
    if f.degree() == 1:
        return True
    if R.domain != ZZ:
        from math import lcm
        den = 1
        for c, _ in f.terms:
            den = lcm(den, getattr(c, "denominator", 1))
        f = Polynomial(R, {e: c * den for e, c in f.as_dict().items()})
    lc = f.leading_term()[0]
    for ell in range(2, 200):
        if not is_prime(ell) or int(lc) % ell == 0:
            continue
        coeffs = _univariate_mod_p(f, ell)
        if len(coeffs) - 1 == f.degree() and f.degree() <= 8 and irreducible_mod_p(coeffs, ell):
            return True
    return False


def check_prime_certificate(Q: Ideal, cert: PrimeCertificate) -> bool:
    """Check a certificate; ``trusted`` always passes."""
    if not isinstance(cert, PrimeCertificate):
        raise CertificateError(f"not a certificate: {cert!r}")
    if not Q.generators:
        raise CertificateError("the zero ideal needs no certificate here")
    if cert.kind == "trusted":
        return True
    if cert.kind == "linear":
        return _check_linear(Q)
    if cert.kind == "p-irreducible":
        return _check_p_irreducible(Q)
    return _check_principal_irreducible(Q)
