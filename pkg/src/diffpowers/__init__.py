"""Exact differential, p-differential and mixed differential powers of ideals,
with symbolic-power membership oracles to compare them against."""

from ._backend import BACKEND
from .poly import GF, GREVLEX, LEX, QQ, ZZ, MonomialOrder, Polynomial, PolynomialRing

__version__ = "0.1.0"
