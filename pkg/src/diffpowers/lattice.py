"""Exact integer linear algebra and degree-truncated ideal lattices.

This layer is deliberately brute force: a truncation ``I_{<=D}`` is the row
space of all monomial multiples ``m*g`` (``g`` in a degree-compatible strong
basis, ``deg(m*g) <= D``) put in Hermite normal form.  It is the oracle the
rest of the package is checked against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import _backend
from .groebner import Ideal
from .poly import GREVLEX, ZZ, CoefficientDomain, Polynomial, PolynomialRing

__all__ = [
    "IntMatrix", "TruncatedLattice", "hnf", "kernel_z", "lattice_eq",
    "lattice_member", "linear_map_matrix", "monomials_up_to",
    "preimage_lattice", "truncated_ideal_lattice", "full_lattice",
]


@dataclass(frozen=True)
class IntMatrix:
    entries: tuple[tuple[int, ...], ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for an empty matrix")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(rows, ncols)

    @property
    def nrows(self) -> int:
        return len(self.entries)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.entries)) if other.entries else [()] * other.ncols
        return IntMatrix(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols)
                               for r in self.entries), other.ncols)


def hnf(A: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form ``H = U @ A`` with ``U`` unimodular."""
    H, U, _ = _backend.hnf_rows(A.tolist(), A.ncols, True)
    return IntMatrix.from_rows(H, A.ncols), IntMatrix.from_rows(U, A.nrows)


def kernel_z(A: IntMatrix) -> IntMatrix:
    """Basis of the left kernel ``{v : v @ A = 0}`` over ZZ."""
    H, U, rank = _backend.hnf_rows(A.tolist(), A.ncols, True)
    return IntMatrix.from_rows(U[rank:], A.nrows)


def _field_echelon(rows, ncols, domain: CoefficientDomain, transform: bool):
    """Reduced row echelon form over QQ or GF(p), optionally with transform."""
    p = domain.modulus
    conv = (lambda c: c % p) if p else Fraction
    H = [[conv(x) for x in r] for r in rows]
    m = len(H)
    U = [[conv(int(i == j)) for j in range(m)] for i in range(m)] if transform else None
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, m) if H[i][col]), None)
        if piv is None:
            continue
        H[r], H[piv] = H[piv], H[r]
        if transform:
            U[r], U[piv] = U[piv], U[r]
        inv = pow(H[r][col], -1, p) if p else 1 / H[r][col]
        H[r] = [conv(x * inv) for x in H[r]]
        if transform:
            U[r] = [conv(x * inv) for x in U[r]]
        for i in range(m):
            if i != r and H[i][col]:
                c = H[i][col]
                H[i] = [conv(a - c * b) for a, b in zip(H[i], H[r])]
                if transform:
                    U[i] = [conv(a - c * b) for a, b in zip(U[i], U[r])]
        r += 1
        if r == m:
            break
    return H, U, r


def _echelon(rows, ncols, domain, transform=False):
    if domain == ZZ:
        return _backend.hnf_rows([list(r) for r in rows], ncols, transform)
    return _field_echelon(rows, ncols, domain, transform)


def _left_kernel(rows, ncols, domain):
    _, U, rank = _echelon(rows, ncols, domain, True)
    return U[rank:]


def monomials_up_to(nvars: int, D: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of total degree <= D, decreasing in grevlex."""
    mons = [e for e in itertools.product(range(D + 1), repeat=nvars) if sum(e) <= D]
    return tuple(sorted(mons, key=GREVLEX.key, reverse=True))


@dataclass(frozen=True)
class TruncatedLattice:
    """Canonical (HNF / RREF) basis of a submodule of ``R_{<=D}``."""

    ring: PolynomialRing
    degree_bound: int
    monomials: tuple[tuple[int, ...], ...]
    basis: tuple[tuple, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def dimension(self) -> int:
        return len(self.monomials)

    def vector(self, f: Polynomial) -> list:
        if f.ring != self.ring:
            raise ValueError("polynomial from another ring")
        if f.degree() > self.degree_bound:
            raise ValueError(f"degree {f.degree()} exceeds the bound {self.degree_bound}")
        return [f.coefficient(e) for e in self.monomials]

    def polynomial(self, vec: Sequence) -> Polynomial:
        return Polynomial(self.ring, dict(zip(self.monomials, vec)))

    def basis_polynomials(self) -> list[Polynomial]:
        return [self.polynomial(r) for r in self.basis]


def _make_lattice(ring, D, monomials, rows) -> TruncatedLattice:
    H, _, rank = _echelon(rows, len(monomials), ring.domain)
    return TruncatedLattice(ring, D, monomials, tuple(tuple(r) for r in H[:rank]))


def full_lattice(ring: PolynomialRing, D: int) -> TruncatedLattice:
    mons = monomials_up_to(ring.nvars, D)
    eye = [[int(i == j) for j in range(len(mons))] for i in range(len(mons))]
    return TruncatedLattice(ring, D, mons, tuple(tuple(r) for r in eye))


def truncated_ideal_lattice(I: Ideal, D: int) -> TruncatedLattice:
    """``{f in I : deg f <= D}`` from monomial multiples of a grevlex basis."""
    ring = I.ring
    mons = monomials_up_to(ring.nvars, D)
    index = {e: i for i, e in enumerate(mons)}
    rows = []
    for g in I.groebner(GREVLEX).elements:
        dg = g.degree()
        if dg > D:
            continue
        gd = g.as_dict()
        for m in monomials_up_to(ring.nvars, D - dg):
            row = [0] * len(mons)
            for e, c in gd.items():
                row[index[tuple(a + b for a, b in zip(e, m))]] = c
            rows.append(row)
    return _make_lattice(ring, D, mons, rows)


def linear_map_matrix(func: Callable[[Polynomial], Polynomial], ring: PolynomialRing,
                      D: int, target: TruncatedLattice | None = None) -> list[list]:
    """Matrix (row ``i`` = image of monomial ``i``) of a linear map on ``R_{<=D}``."""
    mons = monomials_up_to(ring.nvars, D)
    tgt = target.monomials if target is not None else mons
    tindex = {e: i for i, e in enumerate(tgt)}
    rows = []
    for e in mons:
        img = func(ring.monomial(e))
        row = [0] * len(tgt)
        for c, te in img.terms:
            if te not in tindex:
                raise ValueError("image leaves the target's monomial index")
            row[tindex[te]] = c
        rows.append(row)
    return rows


def preimage_lattice(ring: PolynomialRing, D: int, maps: Sequence[Sequence[Sequence]],
                     targets: Sequence[TruncatedLattice]) -> TruncatedLattice:
    """``{f in R_{<=D} : f @ M_i in L_i for all i}`` via one stacked kernel."""
    if len(maps) != len(targets):
        raise ValueError("need exactly one target lattice per map")
    mons = monomials_up_to(ring.nvars, D)
    N = len(mons)
    if not maps:
        return full_lattice(ring, D)
    widths = []
    for M, L in zip(maps, targets):
        if len(M) != N or any(len(r) != L.dimension for r in M):
            raise ValueError("map matrix does not match the source/target dimensions")
        widths.append(L.dimension)
    total = sum(widths)
    rows = []
    for i in range(N):
        rows.append([c for M in maps for c in M[i]])
    offset = 0
    for L, w in zip(targets, widths):
        for b in L.basis:
            row = [0] * total
            row[offset:offset + w] = [-c for c in b]
            rows.append(row)
        offset += w
    kern = _left_kernel(rows, total, ring.domain)
    return _make_lattice(ring, D, mons, [k[:N] for k in kern])


def _check_compatible(L1: TruncatedLattice, L2: TruncatedLattice):
    if L1.ring != L2.ring or L1.monomials != L2.monomials:
        raise ValueError("lattices use different monomial indices")


def lattice_eq(L1: TruncatedLattice, L2: TruncatedLattice) -> bool:
    _check_compatible(L1, L2)
    return L1.basis == L2.basis


def lattice_member(L: TruncatedLattice, f: Polynomial) -> bool:
    v = L.vector(f)
    dom = L.ring.domain
    p = dom.modulus
    for row in L.basis:
        pc = next(j for j, x in enumerate(row) if x)
        if not v[pc]:
            continue
        if dom == ZZ:
            q, r = divmod(v[pc], row[pc])
            if r:
                return False
        else:
            q = v[pc]
        v = [a - q * b for a, b in zip(v, row)]
        if p:
            v = [a % p for a in v]
    return not any(v)
