"""Frobenius lifts and the p-derivations they induce.

A lift ``phi`` is an endomorphism of ``ZZ[x_1..x_n]`` with
``phi(x_i) = x_i^p mod p``; it determines ``delta(f) = (phi(f) - f^p) / p``.
``delta`` is not additive: ``delta(f + g) = delta(f) + delta(g) + C_p(f, g)``.

    >>> R = PolynomialRing(ZZ, ["x", "y"])
    >>> d = PDerivation(FrobeniusLift.canonical(R, 2))
    >>> d(R.parse("x + 2"))
    -2*x - 1
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping, Sequence

from .groebner import Ideal
from .poly import ZZ, Polynomial, PolynomialRing, PolynomialSyntaxError, is_prime

__all__ = [
    "AxiomReport", "FrobeniusLift", "LiftError", "PDerivation", "cp",
    "fermat_quotient", "lift_apply", "parse_lift", "pder_power_membership",
    "pder_power_witness", "pderive", "pderive_iter", "verify_axioms",
]


class LiftError(ValueError):
    """A proposed lift does not reduce to Frobenius mod p."""


@dataclass(frozen=True, eq=False)
class FrobeniusLift:
    ring: PolynomialRing
    p: int
    images: Mapping[str, Polynomial]

    def __post_init__(self):
        if self.ring.domain != ZZ:
            raise LiftError("Frobenius lifts are defined over ZZ coefficients")
        if not is_prime(self.p):
            raise LiftError(f"{self.p} is not prime")
        images = dict(self.images)
        for v in self.ring.names:
            if v not in images:
                raise LiftError(f"no image given for variable {v}")
            img = self.ring(images[v])
            images[v] = img
            diff = img - self.ring.gen(v) ** self.p
            if any(c % self.p for c in diff.as_dict().values()):
                raise LiftError(f"{v} -> {img} is not congruent to {v}^{self.p} mod {self.p}")
        extra = set(images) - set(self.ring.names)
        if extra:
            raise LiftError(f"images given for unknown variables {sorted(extra)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def canonical(cls, ring: PolynomialRing, p: int) -> "FrobeniusLift":
        """The lift sending every variable to its p-th power."""
        return cls(ring, p, {v: ring.gen(v) ** p for v in ring.names})

    def __call__(self, f: Polynomial) -> Polynomial:
        return lift_apply(self, f)

    def describe(self) -> str:
        return ", ".join(f"{v} -> {self.images[v]}" for v in self.ring.names)


def lift_apply(phi: FrobeniusLift, f: Polynomial) -> Polynomial:
    if f.ring != phi.ring:
        raise ValueError("polynomial and lift live in different rings")
    return f.substitute(phi.images)


def fermat_quotient(m: int, p: int) -> int:
    """``(m - m^p) / p``, the p-derivation of the integers."""
    num = m - m ** p
    q, r = divmod(num, p)
    assert r == 0
    return q


def cp(f: Polynomial, g: Polynomial, p: int) -> Polynomial:
    """``(f^p + g^p - (f+g)^p) / p``."""
    return (f ** p + g ** p - (f + g) ** p).divexact_integer(p)


def _cp_binomial(f: Polynomial, g: Polynomial, p: int) -> Polynomial:
    out = f.ring.zero
    for i in range(1, p):
        out = out + (f ** i * g ** (p - i)).scale(-(comb(p, i) // p))
    return out


@dataclass(frozen=True)
class AxiomReport:
    pairs_checked: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class PDerivation:
    """The p-derivation attached to a Frobenius lift."""

    def __init__(self, lift: FrobeniusLift, check: bool = True):
        self.lift = lift
        self.p = lift.p
        self.ring = lift.ring
        if check:
            sample = list(self.ring.gens) + [self.ring(2), self.ring(self.p), self.ring(-1)]
            if self(self.ring.one):
                raise LiftError("delta(1) != 0")
            pairs = [(a, b) for a in sample for b in sample[:3]]
            report = verify_axioms(self, pairs)
            if not report.ok:
                raise LiftError(f"axiom violation on {report.violations[0]}")

    def __call__(self, f: Polynomial) -> Polynomial:
        return pderive(self, f)

    def iterate(self, a: int, f: Polynomial) -> Polynomial:
        return pderive_iter(self, a, f)

    def __repr__(self):
        return f"PDerivation(p={self.p}, lift: {self.lift.describe()})"


def pderive(d: PDerivation, f: Polynomial) -> Polynomial:
    num = lift_apply(d.lift, f) - f ** d.p
    try:
        return num.divexact_integer(d.p)
    except ArithmeticError as exc:
        raise LiftError(f"phi(f) - f^p is not divisible by {d.p}") from exc


def pderive_iter(d: PDerivation, a: int, f: Polynomial) -> Polynomial:
    if a < 0:
        raise ValueError("iteration count must be nonnegative")
    for _ in range(a):
        f = pderive(d, f)
    return f


def verify_axioms(d: PDerivation, samples: Iterable[tuple[Polynomial, Polynomial]]) -> AxiomReport:
    """Check the product and sum rules exactly on every pair."""
    p = d.p
    violations = []
    count = 0
    for f, g in samples:
        count += 1
        df, dg = pderive(d, f), pderive(d, g)
        prod = f ** p * dg + g ** p * df + (df * dg).scale(p)
        if pderive(d, f * g) != prod:
            violations.append(("product", f, g))
        if pderive(d, f + g) != df + dg + cp(f, g, p):
            violations.append(("sum", f, g))
    if pderive(d, d.ring.one):
        violations.append(("unit", d.ring.one, d.ring.one))
    return AxiomReport(count, violations)


def pder_power_witness(I: Ideal, n: int, d: PDerivation, f: Polynomial):
    """Least ``a <= n-1`` with ``delta^a(f)`` outside ``I``, or None."""
    if n < 1:
        raise ValueError("p-differential powers are indexed by n >= 1")
    gb = I.groebner()
    g = f
    for a in range(n):
        if a:
            g = pderive(d, g)
        if not gb.contains(g):
            return a
    return None


def pder_power_membership(I: Ideal, n: int, d: PDerivation, f: Polynomial) -> bool:
    return pder_power_witness(I, n, d, f) is None


_LIFT_ITEM = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*->\s*(.+?)\s*$")


def parse_lift(text: str, ring: PolynomialRing, p: int) -> FrobeniusLift:
    """Parse ``lift x -> x^2, y -> y^2`` (the leading keyword is optional).

    Variables that are not mentioned are sent to their p-th power.
    """
    body = text.strip()
    if body.startswith("lift"):
        body = body[4:]
    images = {}
    for item in body.split(","):
        if not item.strip():
            continue
        m = _LIFT_ITEM.match(item)
        if not m:
            raise PolynomialSyntaxError(f"bad lift entry {item.strip()!r}")
        v, rhs = m.groups()
        if v not in ring.names:
            raise LiftError(f"unknown variable {v!r} in lift")
        if v in images:
            raise LiftError(f"variable {v!r} given twice")
        images[v] = ring.parse(rhs)
    for v in ring.names:
        images.setdefault(v, ring.gen(v) ** p)
    return FrobeniusLift(ring, p, images)
