"""Symbolic, differential, p-differential and mixed differential powers.

Symbolic powers are never built from generators.  For a prime ``Q`` and a
polynomial ``f``, ``f`` lies in ``Q^(n)`` exactly when some element outside
``Q`` multiplies ``f`` into ``Q^n``, i.e. when ``(Q^n : f)`` is not contained
in ``Q``; that colon ideal is what gets computed.

The mixed power at level ``n`` is tested on compositions
``delta^s o D_alpha`` with ``s + |alpha| <= n - 1``, always differentiating
first.  Restricting to the basis operators ``D_alpha`` is enough because
every p-differential power is an ideal and the order-``t`` operators are a
free module on the ``D_alpha``.
"""

from __future__ import annotations

import random
import threading
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .diffops import apply_D, diff_power_witness, multi_indices
from .groebner import (
    Ideal, PrimeCertificate, check_prime_certificate, colon, ideal_contains,
    ideal_power, integer_contraction,
)
from .pderiv import FrobeniusLift, PDerivation, pderive
from .poly import ZZ, Polynomial, PolynomialRing, is_prime

__all__ = [
    "CheckReport", "EquivalenceReport", "PowerQuery", "build_corpus",
    "delta_independence", "diff_stagnation_check", "diff_symbolic_equivalence",
    "mixed_power_membership", "mixed_power_witness", "mixed_symbolic_equivalence",
    "power_of", "separability_counterexample_check", "symbolic_membership",
    "symbolic_membership_quotient", "symbolic_witness",
]

_POWERS: dict = {}
_POWERS_LOCK = threading.Lock()


def power_of(Q: Ideal, n: int) -> Ideal:
    """``Q**n``, cached so its Gröbner basis is computed once per session."""
    key = (Q.ring, Q.generators, n)
    hit = _POWERS.get(key)
    if hit is None:
        hit = ideal_power(Q, n)
        with _POWERS_LOCK:
            hit = _POWERS.setdefault(key, hit)
    return hit


# -- symbolic side ----------------------------------------------------------

def symbolic_witness(Q: Ideal, n: int, f: Polynomial, shortcuts: bool = True):
    """An element ``s`` outside ``Q`` with ``s*f`` in ``Q^n``, or None.

    With ``shortcuts`` the two cheap cases are answered without a colon
    computation: ``f`` in ``Q^n`` (witness 1) and ``f`` outside the prime
    ``Q`` (no witness).
    """
    R = Q.ring
    f = R(f)
    if n < 1:
        raise ValueError("symbolic powers are indexed by n >= 1")
    if not f:
        return R.one
    Qn = power_of(Q, n)
    if shortcuts:
        if Qn.contains(f):
            return R.one
        if not Q.contains(f):
            return None
    J = colon(Qn, f)
    gb = Q.groebner()
    for g in J.generators:
        if not gb.contains(g):
            return g
    return None


def symbolic_membership(Q: Ideal, n: int, f: Polynomial, shortcuts: bool = True) -> bool:
    """``f`` in ``Q^(n)`` for a prime ``Q``; the zero polynomial always is."""
    return symbolic_witness(Q, n, f, shortcuts) is not None


def symbolic_membership_quotient(Q: Ideal, relations: Ideal, n: int, f: Polynomial,
                                 shortcuts: bool = True) -> bool:
    """Symbolic-power membership in ``R/relations`` computed in ``R``.

    ``Q`` is the preimage of the prime of the quotient, so it must contain the
    relations.
    """
    if not ideal_contains(Q, relations):
        raise ValueError("the relations are not contained in Q")
    R = Q.ring
    f = R(f)
    if not f:
        return True
    big = power_of(Q, n) + relations
    if shortcuts:
        if big.contains(f):
            return True
        if not Q.contains(f):
            return False
    gb = Q.groebner()
    return any(not gb.contains(g) for g in colon(big, f).generators)


# -- mixed side ---------------------------------------------------------------

@dataclass
class PowerQuery:
    """Inputs for a power-membership question about ``Q``."""

    Q: Ideal
    n: int
    p: int | None = None
    derivation: PDerivation | None = None
    degree_bound: int | None = None
    certificate: PrimeCertificate | None = None
    variables: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.derivation is not None:
            if self.p is None:
                self.p = self.derivation.p
            elif self.derivation.p != self.p:
                raise ValueError("the derivation's prime differs from p")
            if self.derivation.ring != self.Q.ring:
                raise ValueError("the derivation lives in another ring")
        if self.p is not None:
            if not is_prime(self.p):
                raise ValueError(f"{self.p} is not prime")
            if not self.Q.contains(self.Q.ring(self.p)):
                raise ValueError(f"{self.p} is not in Q")
        if self.certificate is not None and not check_prime_certificate(self.Q, self.certificate):
            raise ValueError(f"certificate {self.certificate.kind!r} does not validate")
        if self.variables is not None:
            self.variables = tuple(self.variables)


def mixed_power_witness(Q: Ideal, n: int, d: PDerivation, f: Polynomial,
                        variables: Iterable[str] | None = None):
    """First ``(s, alpha, value)`` with ``(delta^s o D_alpha)(f)`` outside ``Q``.

    Returns None when every composition with ``s + |alpha| <= n - 1`` lands in
    ``Q``.  Multi-indices are scanned by increasing order, then ``s``.
    """
    if n < 1:
        raise ValueError("mixed powers are indexed by n >= 1")
    gb = Q.groebner()
    for alpha in multi_indices(Q.ring, n - 1, variables):
        g = apply_D(alpha, f)
        for s in range(n - sum(alpha)):
            if s:
                g = pderive(d, g)
            if not gb.contains(g):
                return s, alpha, g
    return None


def mixed_power_membership(q: PowerQuery, f: Polynomial) -> bool:
    if q.derivation is None:
        raise ValueError("mixed powers need a p-derivation")
    return mixed_power_witness(q.Q, q.n, q.derivation, f, q.variables) is None


# -- corpora ------------------------------------------------------------------

def _monomials(nvars: int, D: int):
    if nvars == 0:
        yield ()
        return
    for k in range(D + 1):
        for rest in _monomials(nvars - 1, D - k):
            yield (k,) + rest


def build_corpus(ring: PolynomialRing, generators: Sequence[Polynomial], n: int,
                 D: int = 4, seed: int = 0, p: int | None = None,
                 random_count: int = 100, combo_count: int = 40) -> list[Polynomial]:
    """Deterministic sample of polynomials for equivalence runs.

    In order: ``p^a * m`` for monomials ``m`` with ``a + deg m <= D`` (only
    ``a = 0`` without ``p``), products of 1 to ``n+1`` generators, seeded
    random sparse polynomials (coefficients in [-9, 9], at most 5 terms,
    degree <= D), and seeded random combinations of generator products, which
    land inside the ideal at varying depths.
    """
    rng = random.Random(seed)
    out: list[Polynomial] = []
    seen = set()

    def push(f):
        if f and f not in seen:
            seen.add(f)
            out.append(f)

    mons = sorted(_monomials(ring.nvars, D), key=lambda e: (sum(e), e))
    for e in mons:
        for a in range((D - sum(e) + 1) if p else 1):
            push(ring.monomial(e, (p or 1) ** a))
    gens = list(generators)
    products = []
    level = [ring.one]
    for _ in range(n + 1):
        level = [a * g for a in level for g in gens]
        # dedupe while keeping order
        level = list(dict.fromkeys(level))
        products.append(level)
        for f in level:
            push(f)
    for _ in range(random_count):
        terms = {}
        for _ in range(rng.randint(1, 5)):
            e = rng.choice(mons)
            terms[e] = rng.choice([c for c in range(-9, 10) if c])
        push(Polynomial(ring, terms))
    small = [e for e in mons if sum(e) <= 2]
    for _ in range(combo_count):
        f = ring.zero
        for _ in range(rng.randint(1, 3)):
            k = rng.randint(1, min(n + 1, len(products)))
            g = rng.choice(products[k - 1])
            f = f + g * ring.monomial(rng.choice(small), rng.choice([c for c in range(-5, 6) if c]))
        push(f)
    return out


# -- reports ------------------------------------------------------------------

@dataclass
class EquivalenceReport:
    command: str
    ring: str
    ideal: str
    certificate: str
    n: int
    p: int | None
    lift: str | list | None
    corpus_size: int
    verdicts: list = field(default_factory=list)
    disagreements: list = field(default_factory=list)
    runtime_ms: float = 0.0

    @property
    def agreements(self) -> int:
        return sum(1 for v in self.verdicts if v[2])

    @property
    def agree(self) -> bool:
        return not self.disagreements

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "ring": self.ring,
            "ideal": self.ideal,
            "certificate": self.certificate,
            "n": self.n,
            "p": self.p,
            "lift": self.lift,
            "corpus_size": self.corpus_size,
            "agreements": self.agreements,
            "disagreements": self.disagreements,
            "runtime_ms": round(self.runtime_ms, 3),
        }


@dataclass
class CheckReport:
    """Outcome of a named fixed check (no corpus)."""

    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    runtime_ms: float = 0.0

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details,
                "runtime_ms": round(self.runtime_ms, 3)}


def _cert_label(cert: PrimeCertificate | None) -> str:
    return "trusted (unchecked)" if cert is None or cert.trusted else cert.kind


def _require_prime(Q: Ideal, cert: PrimeCertificate | None):
    if cert is not None and not check_prime_certificate(Q, cert):
        raise ValueError(f"prime certificate {cert.kind!r} does not validate for {Q}")


def diff_symbolic_equivalence(Q: Ideal, n: int, corpus: Sequence[Polynomial],
                              certificate: PrimeCertificate | None = None,
                              variables: Iterable[str] | None = None) -> EquivalenceReport:
    """Compare symbolic and differential membership on every corpus element.

    ``Q`` must contain no nonzero integer.
    """
    start = time.perf_counter()
    _require_prime(Q, certificate)
    if Q.ring.domain == ZZ and integer_contraction(Q) != 0:
        raise ValueError(f"{Q} contains a nonzero integer")
    variables = tuple(variables) if variables is not None else None
    rep = EquivalenceReport("equiv diff", str(Q.ring), str(Q), _cert_label(certificate),
                            n, None, None, len(corpus))
    for f in corpus:
        sym = symbolic_membership(Q, n, f)
        alpha = diff_power_witness(Q, n, f, variables)
        other = alpha is None
        rep.verdicts.append((sym, other, sym == other))
        if sym != other:
            rep.disagreements.append({
                "poly": str(f), "symbolic": sym, "other": other,
                "witness_composition": None if alpha is None else {"s": 0, "alpha": list(alpha)},
                "witness_value": None if alpha is None else str(apply_D(alpha, f)),
            })
    rep.runtime_ms = (time.perf_counter() - start) * 1000
    return rep


def mixed_symbolic_equivalence(q: PowerQuery, corpus: Sequence[Polynomial]) -> EquivalenceReport:
    """Compare symbolic and mixed membership on every corpus element."""
    start = time.perf_counter()
    if q.derivation is None or q.p is None:
        raise ValueError("mixed equivalence needs p and a p-derivation")
    rep = EquivalenceReport("equiv mixed", str(q.Q.ring), str(q.Q), _cert_label(q.certificate),
                            q.n, q.p, q.derivation.lift.describe(), len(corpus))
    for f in corpus:
        sym = symbolic_membership(q.Q, q.n, f)
        w = mixed_power_witness(q.Q, q.n, q.derivation, f, q.variables)
        other = w is None
        rep.verdicts.append((sym, other, sym == other))
        if sym != other:
            rep.disagreements.append({
                "poly": str(f), "symbolic": sym, "other": other,
                "witness_composition": None if w is None else {"s": w[0], "alpha": list(w[1])},
                "witness_value": None if w is None else str(w[2]),
            })
    rep.runtime_ms = (time.perf_counter() - start) * 1000
    return rep


def delta_independence(Q: Ideal, n: int, lifts: Sequence[FrobeniusLift],
                       corpus: Sequence[Polynomial], variables: Iterable[str] | None = None,
                       certificate: PrimeCertificate | None = None) -> EquivalenceReport:
    """Mixed membership verdicts must not depend on the chosen lift."""
    start = time.perf_counter()
    if not lifts:
        raise ValueError("need at least one lift")
    ders = [PDerivation(phi) for phi in lifts]
    p = ders[0].p
    if any(d.p != p for d in ders):
        raise ValueError("all lifts must share the same prime")
    if not Q.contains(Q.ring(p)):
        raise ValueError(f"{p} is not in Q")
    variables = tuple(variables) if variables is not None else None
    rep = EquivalenceReport("equiv delta-independence", str(Q.ring), str(Q),
                            _cert_label(certificate), n, p,
                            [phi.describe() for phi in lifts], len(corpus))
    for f in corpus:
        ws = [mixed_power_witness(Q, n, d, f, variables) for d in ders]
        verdicts = [w is None for w in ws]
        same = len(set(verdicts)) == 1
        rep.verdicts.append((verdicts[0], verdicts, same))
        if not same:
            w = next(w for w in ws if w is not None)
            rep.disagreements.append({
                "poly": str(f), "symbolic": None, "other": verdicts,
                "witness_composition": {"s": w[0], "alpha": list(w[1])},
                "witness_value": str(w[2]),
            })
    rep.runtime_ms = (time.perf_counter() - start) * 1000
    return rep


def diff_stagnation_check(Q: Ideal, n_max: int, f: Polynomial | None = None) -> CheckReport:
    """Differential membership of ``f`` (default: the prime in ``Q``) holds at
    every level while symbolic membership fails from level 2 on."""
    start = time.perf_counter()
    R = Q.ring
    p = integer_contraction(Q)
    if not p:
        raise ValueError(f"{Q} contains no prime integer")
    f = R(p) if f is None else R(f)
    diff = {n: diff_power_witness(Q, n, f) is None for n in range(1, n_max + 1)}
    sym = {n: symbolic_membership(Q, n, f) for n in range(1, n_max + 1)}
    passed = all(diff.values()) and not any(sym[n] for n in range(2, n_max + 1))
    return CheckReport("differential stagnation", passed, {
        "ideal": str(Q), "f": str(f), "differential": diff, "symbolic": sym,
    }, (time.perf_counter() - start) * 1000)


def separability_counterexample_check(p: int = 2) -> CheckReport:
    """The inseparable-residue instance ``Q = (p, x^p - t)`` in ``ZZ[t, x]``.

    With ``w = x^p - t`` the lift ``w -> w^p, x -> x^p`` (so
    ``t -> x^(p^2) - (x^p - t)^p``) gives ``delta(w) = 0``; differentiating
    only in ``x``, ``d/dx(w) = p x^(p-1)`` lies in ``Q``.  Hence ``w`` is in the
    second mixed power, while it is not in ``Q^(2)``.
    """
    start = time.perf_counter()
    R = PolynomialRing(ZZ, ["t", "x"])
    t, x = R.gens
    w = x ** p - t
    Q = Ideal(R, [p, w])
    lift = FrobeniusLift(R, p, {"t": x ** (p * p) - w ** p, "x": x ** p})
    d = PDerivation(lift)
    delta_w = pderive(d, w)
    dx_w = apply_D((0, 1), w)
    mixed = mixed_power_witness(Q, 2, d, w, variables=["x"]) is None
    sym = symbolic_membership(Q, 2, w)
    passed = (not delta_w) and Q.contains(dx_w) and mixed and not sym
    return CheckReport("separability gap", passed, {
        "ideal": str(Q), "w": str(w), "lift": lift.describe(),
        "delta(w)": str(delta_w), "d/dx(w)": str(dx_w),
        "d/dx(w) in Q": Q.contains(dx_w), "mixed(2)": mixed, "symbolic(2)": sym,
    }, (time.perf_counter() - start) * 1000)
