"""Divided-power differential operators on polynomial rings.

``D_alpha`` sends ``z^beta`` to ``binom(beta, alpha) z^(beta - alpha)``; it is
the integral form of ``(1/alpha!) d^alpha``, so it never leaves the
coefficient ring.  The operators of order ``<= n`` form a free module on the
``D_alpha`` with ``|alpha| <= n``, which is why membership in a differential
power only needs to be tested on that basis.

Differentiation can be restricted to a subset of the variables; the others
then behave as constants (the operators are linear over the polynomial ring
in those variables).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .groebner import Ideal
from .lattice import (
    TruncatedLattice, linear_map_matrix, preimage_lattice, truncated_ideal_lattice,
)
from .poly import Polynomial, PolynomialRing

__all__ = [
    "DividedPowerOp", "DiffOperator", "apply_D", "apply_operator", "commutator",
    "diff_power_membership", "diff_power_truncated", "diff_power_witness",
    "leibniz_expand", "multi_indices", "compose_apply",
]


@dataclass(frozen=True)
class DividedPowerOp:
    alpha: tuple[int, ...]

    def __post_init__(self):
        alpha = tuple(int(a) for a in self.alpha)
        if any(a < 0 for a in alpha):
            raise ValueError("multi-index entries must be nonnegative")
        object.__setattr__(self, "alpha", alpha)

    @property
    def order(self) -> int:
        return sum(self.alpha)

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply_D(self.alpha, f)


@dataclass(frozen=True)
class DiffOperator:
    """Finite sum of ``c * D_alpha`` with polynomial coefficients ``c``."""

    terms: tuple[tuple[Polynomial, DividedPowerOp], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((c, op) for c, op in self.terms if c))

    @property
    def order(self) -> int:
        return max((op.order for _, op in self.terms), default=-1)

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply_operator(self, f)


def apply_D(alpha: Sequence[int], f: Polynomial) -> Polynomial:
    alpha = tuple(alpha)
    if len(alpha) != f.ring.nvars:
        raise ValueError(f"multi-index {alpha} does not match {f.ring}")
    if not any(alpha):
        return f
    out = {}
    for e, c in f.as_dict().items():
        if any(b < a for a, b in zip(alpha, e)):
            continue
        k = 1
        for a, b in zip(alpha, e):
            if a:
                k *= comb(b, a)
        out[tuple(b - a for a, b in zip(alpha, e))] = c * k
    return Polynomial(f.ring, out)


def apply_operator(op: DiffOperator, f: Polynomial) -> Polynomial:
    out = f.ring.zero
    for c, d in op.terms:
        out = out + c * apply_D(d.alpha, f)
    return out


def _sub_indices(alpha: Sequence[int]) -> Iterable[tuple[int, ...]]:
    return itertools.product(*(range(a + 1) for a in alpha))


def leibniz_expand(alpha: Sequence[int], f: Polynomial, g: Polynomial) -> Polynomial:
    """``sum_{lam + mu = alpha} D_lam(f) D_mu(g)``, checked against ``D_alpha(fg)``."""
    alpha = tuple(alpha)
    total = f.ring.zero
    for lam in _sub_indices(alpha):
        mu = tuple(a - b for a, b in zip(alpha, lam))
        total = total + apply_D(lam, f) * apply_D(mu, g)
    direct = apply_D(alpha, f * g)
    if total != direct:
        raise AssertionError(f"Leibniz expansion mismatch for alpha={alpha}")
    return total


def commutator(alpha: Sequence[int], g: Polynomial) -> DiffOperator:
    """The operator ``[D_alpha, g] = sum_{0 < lam <= alpha} D_lam(g) D_{alpha-lam}``."""
    alpha = tuple(alpha)
    terms = []
    for lam in _sub_indices(alpha):
        if not any(lam):
            continue
        c = apply_D(lam, g)
        if c:
            terms.append((c, DividedPowerOp(tuple(a - b for a, b in zip(alpha, lam)))))
    return DiffOperator(tuple(terms))


def _positions(ring: PolynomialRing, variables: Iterable[str] | None) -> list[int]:
    if variables is None:
        return list(range(ring.nvars))
    return sorted(ring.context.index(v) for v in variables)


def multi_indices(ring: PolynomialRing, max_order: int,
                  variables: Iterable[str] | None = None) -> list[tuple[int, ...]]:
    """Multi-indices of order ``<= max_order`` supported on ``variables``,
    by increasing order."""
    pos = _positions(ring, variables)
    out = []
    for t in range(max_order + 1):
        for combo in itertools.combinations_with_replacement(pos, t):
            a = [0] * ring.nvars
            for i in combo:
                a[i] += 1
            out.append(tuple(a))
    return out


def diff_power_witness(I: Ideal, n: int, f: Polynomial,
                       variables: Iterable[str] | None = None):
    """First ``alpha`` (``|alpha| <= n-1``) with ``D_alpha(f)`` outside ``I``, or None."""
    if n < 1:
        raise ValueError("differential powers are indexed by n >= 1")
    gb = I.groebner()
    for alpha in multi_indices(I.ring, n - 1, variables):
        if not gb.contains(apply_D(alpha, f)):
            return alpha
    return None


def diff_power_membership(I: Ideal, n: int, f: Polynomial,
                          variables: Iterable[str] | None = None) -> bool:
    """``f`` lies in the n-th differential power of ``I``."""
    return diff_power_witness(I, n, f, variables) is None


def diff_power_truncated(I: Ideal, n: int, D: int,
                         variables: Iterable[str] | None = None) -> TruncatedLattice:
    """Degree-``<= D`` part of the n-th differential power, as a lattice."""
    target = truncated_ideal_lattice(I, D)
    maps, targets = [], []
    for alpha in multi_indices(I.ring, n - 1, variables):
        maps.append(linear_map_matrix(lambda m, a=alpha: apply_D(a, m), I.ring, D, target))
        targets.append(target)
    return preimage_lattice(I.ring, D, maps, targets)


def compose_apply(f: Polynomial, alpha: Sequence[int], s: int, pderivation) -> Polynomial:
    """``(delta^s o D_alpha)(f)``: differentiate first, then iterate delta."""
    return pderivation.iterate(s, apply_D(alpha, f))
