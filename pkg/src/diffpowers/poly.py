"""Sparse multivariate polynomials over ZZ, QQ and GF(p).

A polynomial is stored as a dict from exponent tuples to nonzero coefficients.
Exponent tuples are ordered like the variables of the ring's
:class:`VariableContext`.  Values are immutable once built.

Example::

    >>> R = PolynomialRing(ZZ, ["x", "y"])
    >>> x, y = R.gens
    >>> (x + 2) * (y + 2)
    x*y + 2*x + 2*y + 4
    >>> R.parse("2*x^2 - x*y + 4").degree()
    2
"""

from __future__ import annotations

import builtins
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping

from . import _backend

__all__ = [
    "ZZ", "QQ", "GF", "CoefficientDomain", "VariableContext", "MonomialOrder",
    "LEX", "GRLEX", "GREVLEX", "PolynomialRing", "Polynomial",
    "PolynomialSyntaxError", "RingMismatchError", "add", "mul", "pow",
    "substitute", "divexact_integer", "is_prime", "total_degree",
]


class RingMismatchError(ValueError):
    """Operands live in different rings."""


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        super().__init__(f"{message} at column {pos + 1}" if text else message)
        self.text = text
        self.pos = pos


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def total_degree(e: tuple[int, ...]) -> int:
    return sum(e)


@dataclass(frozen=True)
class CoefficientDomain:
    """One of ZZ, QQ or GF(p); use the module constants and :func:`GF`."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("ZZ", "QQ", "GF"):
            raise ValueError(f"unknown coefficient domain {self.kind!r}")
        if self.kind == "GF" and not is_prime(self.p):
            raise ValueError(f"GF({self.p}): modulus is not prime")
        if self.kind != "GF" and self.p:
            raise ValueError("only GF(p) carries a modulus")

    @property
    def is_field(self) -> bool:
        return self.kind != "ZZ"

    @property
    def modulus(self) -> int:
        return self.p

    @property
    def characteristic(self) -> int:
        return self.p

    def convert(self, c):
        if self.kind == "GF":
            if isinstance(c, Fraction):
                return c.numerator * builtins.pow(c.denominator, -1, self.p) % self.p
            return int(c) % self.p
        if self.kind == "ZZ":
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError(f"{c} is not an integer")
                return c.numerator
            if not isinstance(c, int):
                raise TypeError(f"cannot convert {c!r} to an integer")
            return int(c)
        c = Fraction(c)
        return c.numerator if c.denominator == 1 else c

    def inverse(self, c):
        if self.kind == "GF":
            return builtins.pow(c, -1, self.p)
        if self.kind == "QQ":
            c = 1 / Fraction(c)
            return c.numerator if c.denominator == 1 else c
        if c in (1, -1):
            return c
        raise ZeroDivisionError(f"{c} is not a unit in ZZ")

    def __str__(self):
        return f"GF({self.p})" if self.kind == "GF" else self.kind


ZZ = CoefficientDomain("ZZ")
QQ = CoefficientDomain("QQ")


def GF(p: int) -> CoefficientDomain:
    return CoefficientDomain("GF", p)


@dataclass(frozen=True)
class VariableContext:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ValueError(f"invalid variable name {name!r}")

    @property
    def count(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None


@lru_cache(maxsize=None)
def _weights(kind: str, split: int, n: int) -> tuple[tuple[int, ...], ...]:
    def unit(i, s=1):
        return tuple(s if j == i else 0 for j in range(n))

    def grevlex_block(lo, hi):
        rows = [tuple(1 if lo <= j < hi else 0 for j in range(n))]
        rows += [unit(i, -1) for i in range(hi - 1, lo, -1)]
        return rows

    if kind == "lex":
        rows = [unit(i) for i in range(n)]
    elif kind == "grlex":
        rows = [tuple([1] * n)] + [unit(i) for i in range(n)]
    elif kind == "grevlex":
        rows = grevlex_block(0, n)
    else:
        k = min(split, n)
        rows = grevlex_block(0, k) + grevlex_block(k, n)
    return tuple(rows)


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order given by its kind.

    ``block`` is an elimination order: the first ``split`` variables are
    compared first (graded reverse lexicographic inside each block).
    """

    kind: str
    split: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grlex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    @property
    def degree_compatible(self) -> bool:
        return self.kind in ("grlex", "grevlex")

    def weights(self, n: int) -> tuple[tuple[int, ...], ...]:
        """Weight matrix whose row-wise dot products give the sort key."""
        return _weights(self.kind, self.split, n)

    def key(self, e: tuple[int, ...]):
        return tuple([sum([w * x for w, x in zip(row, e)]) for row in _weights(self.kind, self.split, len(e))])

    @classmethod
    def elimination(cls, split: int) -> "MonomialOrder":
        return cls("block", split)

    def __str__(self):
        return f"block({self.split})" if self.kind == "block" else self.kind


LEX = MonomialOrder("lex")
GRLEX = MonomialOrder("grlex")
GREVLEX = MonomialOrder("grevlex")


@dataclass(frozen=True)
class PolynomialRing:
    domain: CoefficientDomain
    context: VariableContext

    def __init__(self, domain: CoefficientDomain, names: Iterable[str] | VariableContext):
        ctx = names if isinstance(names, VariableContext) else VariableContext(tuple(names))
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "context", ctx)

    @property
    def names(self) -> tuple[str, ...]:
        return self.context.names

    @property
    def nvars(self) -> int:
        return self.context.count

    @cached_property
    def zero_exp(self) -> tuple[int, ...]:
        return (0,) * self.nvars

    @property
    def zero(self) -> "Polynomial":
        return Polynomial._make(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, {self.zero_exp: c})

    def monomial(self, e: tuple[int, ...], c=1) -> "Polynomial":
        return Polynomial(self, {tuple(e): c})

    def gen(self, name: str) -> "Polynomial":
        i = self.context.index(name)
        return Polynomial._make(self, {tuple(int(j == i) for j in range(self.nvars)): 1})

    @property
    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.gen(n) for n in self.names)

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring != self:
                raise RingMismatchError(f"{value.ring} is not {self}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return self.constant(value)

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()

    def with_domain(self, domain: CoefficientDomain) -> "PolynomialRing":
        return PolynomialRing(domain, self.context)

    def extended(self, names: Iterable[str], front: bool = True) -> "PolynomialRing":
        names = tuple(names)
        new = names + self.names if front else self.names + names
        return PolynomialRing(self.domain, new)

    def __str__(self):
        return f"{self.domain}[{', '.join(self.names)}]"


class Polynomial:
    """Immutable sparse polynomial; arithmetic via the usual operators."""

    __slots__ = ("ring", "_d", "_hash")

    def __init__(self, ring: PolynomialRing, terms: Mapping[tuple[int, ...], object]):
        dom = ring.domain
        n = ring.nvars
        d = {}
        for e, c in terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != n or any(x < 0 for x in e):
                raise ValueError(f"bad exponent vector {e} for {ring}")
            c = dom.convert(c)
            if c:
                d[e] = d.get(e, 0) + c
                if dom.modulus:
                    d[e] %= dom.modulus
        self.ring = ring
        self._d = {e: c for e, c in d.items() if c}
        self._hash = None

    @classmethod
    def _make(cls, ring: PolynomialRing, d: dict) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._d = d
        obj._hash = None
        return obj

    # -- structure -----------------------------------------------------
    @property
    def context(self) -> VariableContext:
        return self.ring.context

    @property
    def domain(self) -> CoefficientDomain:
        return self.ring.domain

    def as_dict(self) -> dict:
        return dict(self._d)

    @property
    def terms(self) -> list[tuple[object, tuple[int, ...]]]:
        """(coefficient, exponent) pairs, strictly decreasing in grevlex."""
        key = GREVLEX.key
        return [(self._d[e], e) for e in sorted(self._d, key=key, reverse=True)]

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return [(self._d[e], e) for e in sorted(self._d, key=order.key, reverse=True)]

    def __len__(self):
        return len(self._d)

    def __bool__(self):
        return bool(self._d)

    def is_zero(self) -> bool:
        return not self._d

    def is_constant(self) -> bool:
        return not self._d or (len(self._d) == 1 and self.ring.zero_exp in self._d)

    def constant_coefficient(self):
        return self._d.get(self.ring.zero_exp, 0)

    def coefficient(self, e: tuple[int, ...]):
        return self._d.get(tuple(e), 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._d), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.context.index(name)
        return max((e[i] for e in self._d), default=-1)

    def variables(self) -> set[str]:
        used = set()
        for e in self._d:
            used.update(self.ring.names[i] for i, x in enumerate(e) if x)
        return used

    def leading_exponent(self, order: MonomialOrder = GREVLEX) -> tuple[int, ...]:
        if not self._d:
            raise ValueError("zero polynomial has no leading term")
        return max(self._d, key=order.key)

    def leading_term(self, order: MonomialOrder = GREVLEX):
        e = self.leading_exponent(order)
        return self._d[e], e

    def content(self) -> int:
        from math import gcd
        g = 0
        for c in self._d.values():
            g = gcd(g, int(c))
        return g

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = dict(self._d)
        m = self.domain.modulus
        for e, c in other._d.items():
            v = d.get(e, 0) + c
            if m:
                v %= m
            if v:
                d[e] = v
            else:
                d.pop(e, None)
        return Polynomial._make(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        m = self.domain.modulus
        if m:
            return Polynomial._make(self.ring, {e: (-c) % m for e, c in self._d.items()})
        return Polynomial._make(self.ring, {e: -c for e, c in self._d.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._d or not other._d:
            return self.ring.zero
        return Polynomial._make(
            self.ring, _backend.mul_terms(self._d, other._d, self.domain.modulus))

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        return self * self.ring.constant(c)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._d == other._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._d.items())))
        return self._hash

    # -- maps ----------------------------------------------------------
    def substitute(self, images: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Evaluate the ring homomorphism fixing coefficients and sending
        each variable to its image.  Images may live in another ring with
        the same coefficient domain."""
        names = self.ring.names
        used = self.variables()
        missing = [v for v in names if v in used and v not in images]
        if missing:
            raise KeyError(f"no image for variable(s) {', '.join(missing)}")
        targets = {images[v].ring for v in used}
        if len(targets) > 1:
            raise RingMismatchError("images live in different rings")
        target = targets.pop() if targets else self.ring
        if target.domain != self.domain:
            raise RingMismatchError("substitution must keep the coefficient domain")
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(i, k):
            if (i, k) not in powers:
                powers[(i, k)] = images[names[i]] ** k
            return powers[(i, k)]

        out = target.zero
        for e, c in self._d.items():
            t = target.constant(c)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            out = out + t
        return out

    def divexact_integer(self, m: int) -> "Polynomial":
        if self.domain != ZZ:
            raise RingMismatchError("divexact_integer needs integer coefficients")
        if m == 0:
            raise ZeroDivisionError("division by zero")
        d = {}
        for e, c in self._d.items():
            q, r = divmod(c, m)
            if r:
                raise ArithmeticError(f"coefficient {c} is not divisible by {m}")
            d[e] = q
        return Polynomial._make(self.ring, d)

    def exact_div(self, g: "Polynomial") -> "Polynomial":
        """Quotient ``q`` with ``q * g == self``; raises if ``g`` does not divide."""
        g = self._coerce(g)
        if not g:
            raise ZeroDivisionError("division by the zero polynomial")
        dom = self.domain
        lc, le = g.leading_term(GREVLEX)
        inv = dom.inverse(lc) if dom.is_field else None
        rem = self
        q = {}
        while rem:
            c, e = rem.leading_term(GREVLEX)
            shift = tuple(a - b for a, b in zip(e, le))
            if min(shift, default=0) < 0:
                raise ArithmeticError("polynomial division is not exact")
            if inv is not None:
                k = dom.convert(c * inv)
            else:
                k, r = divmod(c, lc)
                if r:
                    raise ArithmeticError("polynomial division is not exact")
            q[shift] = k
            rem = rem - g * self.ring.monomial(shift, k)
        return Polynomial(self.ring, q)

    def change_ring(self, ring: PolynomialRing, positions: Iterable[int] | None = None) -> "Polynomial":
        """Map into ``ring``; ``positions[i]`` is the index in ``ring`` of
        variable ``i`` (default: match by name)."""
        if positions is None:
            positions = [ring.context.index(v) for v in self.ring.names]
        positions = list(positions)
        n = ring.nvars
        d = {}
        for e, c in self._d.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    ne[positions[i]] = k
            d[tuple(ne)] = c
        return Polynomial(ring, d)

    # -- display -------------------------------------------------------
    def __str__(self):
        if not self._d:
            return "0"
        names = self.ring.names
        parts = []
        for c, e in self.terms:
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k)
            neg = c < 0 if self.domain.kind != "GF" else False
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append(("-" if neg else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return str(self)


def add(f: Polynomial, g: Polynomial) -> Polynomial:
    return f + g


def mul(f: Polynomial, g: Polynomial) -> Polynomial:
    return f * g


def pow(f: Polynomial, k: int) -> Polynomial:  # noqa: A001
    return f ** k


def substitute(f: Polynomial, images: Mapping[str, Polynomial]) -> Polynomial:
    return f.substitute(images)


def divexact_integer(f: Polynomial, m: int) -> Polynomial:
    return f.divexact_integer(m)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\^|\*|\+|-|\(|\)))")


class _Parser:
    """Recursive-descent parser for ``2*x^2 - x*y + 4``-style input."""

    def __init__(self, ring: PolynomialRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
            start = m.start(m.lastindex)
            if m.group(1):
                self.tokens.append(("int", int(m.group(1)), start))
            elif m.group(2):
                self.tokens.append(("name", m.group(2), start))
            else:
                self.tokens.append(("op", m.group(3), start))
            pos = m.end()
        self.i = 0

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", None, len(self.text))

    def _take(self):
        tok = self._peek()
        self.i += 1
        return tok

    def _error(self, msg):
        raise PolynomialSyntaxError(msg, self.text, self._peek()[2])

    def parse(self) -> Polynomial:
        if not self.tokens:
            self._error("empty polynomial")
        f = self._expr()
        if self._peek()[0] != "end":
            self._error(f"unexpected token {self._peek()[1]!r}")
        return f

    def _expr(self):
        f = self._term()
        while self._peek()[:2] in (("op", "+"), ("op", "-")):
            op = self._take()[1]
            g = self._term()
            f = f + g if op == "+" else f - g
        return f

    def _term(self):
        f = self._unary()
        while self._peek()[:2] == ("op", "*"):
            self._take()
            f = f * self._unary()
        return f

    def _unary(self):
        if self._peek()[:2] == ("op", "-"):
            self._take()
            return -self._unary()
        return self._power()

    def _power(self):
        f = self._atom()
        if self._peek()[:2] == ("op", "^"):
            self._take()
            kind, val, _ = self._peek()
            if kind != "int":
                self._error("exponent must be a nonnegative integer literal")
            self._take()
            f = f ** val
        return f

    def _atom(self):
        kind, val, pos = self._peek()
        if kind == "int":
            self._take()
            return self.ring.constant(val)
        if kind == "name":
            self._take()
            try:
                return self.ring.gen(val)
            except KeyError:
                raise PolynomialSyntaxError(f"unknown variable {val!r}", self.text, pos) from None
        if (kind, val) == ("op", "("):
            self._take()
            f = self._expr()
            if self._peek()[:2] != ("op", ")"):
                self._error("expected ')'")
            self._take()
            return f
        self._error("expected a number, variable or '('")
