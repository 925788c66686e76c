"""Bundled regression suites with their frozen expected values.

Each suite returns a :class:`~diffpowers.powers.CheckReport`.  Expected values
live in :data:`EXPECTED` and can be overridden (the CLI's ``--expected``) so
that a corrupted value is reported as a failing suite.
"""

from __future__ import annotations

import copy
import time
from typing import Callable

from .diffops import apply_D
from .groebner import (
    Ideal, PrimeCertificate, check_prime_certificate, integer_contraction,
)
from .pderiv import FrobeniusLift, PDerivation, fermat_quotient, pder_power_membership, pderive
from .powers import (
    CheckReport, PowerQuery, build_corpus, delta_independence, diff_stagnation_check,
    diff_symbolic_equivalence, mixed_power_witness, mixed_symbolic_equivalence,
    power_of, separability_counterexample_check, symbolic_membership,
    symbolic_membership_quotient, symbolic_witness,
)
from .poly import ZZ, PolynomialRing

__all__ = ["EXPECTED", "SUITES", "run_suites"]

EXPECTED: dict = {
    "pderivation-example": {
        "delta(x + 2)": "-2*x - 1",
        "delta(y + 2)": "-2*y - 1",
        "delta(2)": "-1",
        "delta(x)": "0",
        "delta(y)": "0",
        "(x+2)(y+2) in a^2": True,
        "(x+2)(y+2) in a<2>_p": False,
    },
    "fermat-valuation": {"primes": [2, 3, 5], "max_exponent": 6},
    "differential-stagnation": {"n_max": 5, "ideals": ["2", "2, x", "3, x"]},
    "order-asymmetry": {
        "D_2(2x)": "0",
        "(d/dx o delta)(2x)": "-2*x",
        "delta^2(2x)": "-x^4",
        "(delta o d/dx)(2x)": "-1",
        "mixed(3)": False,
        "symbolic(3)": False,
        "witness": [1, [1]],
    },
    "quotient-memberships": {"x in Q^(2)": True, "x in m^2 + (y^2 - x*z)": False},
    "separability-gap": {"delta(w)": "0", "d/dx(w)": "2*x", "mixed(2)": True, "symbolic(2)": False},
    "differential-equivalence": {"n": [1, 2, 3], "ideals": ["x - 2, y - 3", "x^2 + 1"]},
    "mixed-equivalence": {"n": [1, 2, 3], "ideals": ["2, x", "2, x^2 + x + 1", "3, x"]},
    "delta-independence": {"n": [1, 2, 3], "lifts": ["x -> x^2", "x -> x^2 + 2*x"]},
    "maximal-ideal-collapse": {"n": [1, 2, 3], "ideals": ["2, x", "3, x", "2, x, y"]},
    "curve-symbolic-square": {
        "witness": "x^5 + x*y^3 + x^2*y*z + z^3",
        "in Q^2": False,
        "in Q^(2)": True,
        "mixed(2)": True,
    },
}


def _ring(*names):
    return PolynomialRing(ZZ, names)


def _timed(fn):
    def wrapper(expected):
        start = time.perf_counter()
        rep = fn(expected)
        rep.runtime_ms = (time.perf_counter() - start) * 1000
        return rep
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def pderivation_example(exp) -> CheckReport:
    """delta for the lift h(x, y) -> h(x^2, y^2) on (4, x+2, y+2)."""
    R = _ring("x", "y")
    x, y = R.gens
    d = PDerivation(FrobeniusLift.canonical(R, 2))
    a = Ideal(R, [4, x + 2, y + 2])
    f = (x + 2) * (y + 2)
    got = {
        "delta(x + 2)": str(d(x + 2)),
        "delta(y + 2)": str(d(y + 2)),
        "delta(2)": str(d(R(2))),
        "delta(x)": str(d(x)),
        "delta(y)": str(d(y)),
        "(x+2)(y+2) in a^2": power_of(a, 2).contains(f),
        "(x+2)(y+2) in a<2>_p": pder_power_membership(a, 2, d, f),
    }
    return CheckReport("pderivation-example", got == exp, got)


@_timed
def fermat_valuation(exp) -> CheckReport:
    """delta(p^n) = p^(n-1) - p^(pn-1), exactly divisible by p^(n-1)."""
    bad = []
    checked = 0
    for p in exp["primes"]:
        for n in range(1, exp["max_exponent"] + 1):
            q = fermat_quotient(p ** n, p)
            checked += 1
            if q != p ** (n - 1) - p ** (p * n - 1) or q % p ** (n - 1) or q % p ** n == 0:
                bad.append([p, n, q])
    return CheckReport("fermat-valuation", not bad, {"checked": checked, "failures": bad})


@_timed
def differential_stagnation(exp) -> CheckReport:
    """p stays in every differential power of a prime containing p."""
    details = {}
    ok = True
    for text in exp["ideals"]:
        names = ("x",) if "x" in text else ()
        R = _ring(*names)
        Q = Ideal.parse(R, text)
        rep = diff_stagnation_check(Q, exp["n_max"])
        details[text] = rep.details
        ok = ok and rep.passed
    return CheckReport("differential-stagnation", ok, details)


@_timed
def order_asymmetry(exp) -> CheckReport:
    """Differentiating before applying delta matters for 2x in (2, x)."""
    R = _ring("x")
    x, = R.gens
    Q = Ideal(R, [2, x])
    d = PDerivation(FrobeniusLift.canonical(R, 2))
    f = 2 * x
    w = mixed_power_witness(Q, 3, d, f)
    got = {
        "D_2(2x)": str(apply_D((2,), f)),
        "(d/dx o delta)(2x)": str(apply_D((1,), d(f))),
        "delta^2(2x)": str(d.iterate(2, f)),
        "(delta o d/dx)(2x)": str(d(apply_D((1,), f))),
        "mixed(3)": w is None,
        "symbolic(3)": symbolic_membership(Q, 3, f),
        "witness": None if w is None else [w[0], list(w[1])],
    }
    in_q = all(Q.contains(R.parse(got[k])) for k in ("D_2(2x)", "(d/dx o delta)(2x)", "delta^2(2x)"))
    ok = got == exp and in_q and not Q.contains(R.parse(got["(delta o d/dx)(2x)"]))
    return CheckReport("order-asymmetry", ok, got)


@_timed
def quotient_memberships(exp) -> CheckReport:
    """x in Q^(2) but not in m^2 for Q = (2, x, y) modulo y^2 - xz."""
    R = _ring("x", "y", "z")
    x, y, z = R.gens
    rel = Ideal(R, [y ** 2 - x * z])
    Q = Ideal(R, [2, x, y])
    m = Ideal(R, [2, x, y, z])
    got = {
        "x in Q^(2)": symbolic_membership_quotient(Q, rel, 2, x),
        "x in m^2 + (y^2 - x*z)": (power_of(m, 2) + rel).contains(x),
    }
    return CheckReport("quotient-memberships", got == exp, got)


@_timed
def separability_gap(exp) -> CheckReport:
    """w = x^2 - t is a mixed square but not a symbolic square."""
    rep = separability_counterexample_check(2)
    got = {k: rep.details[k] for k in ("delta(w)", "d/dx(w)", "mixed(2)", "symbolic(2)")}
    return CheckReport("separability-gap", rep.passed and got == exp, rep.details)


def _corpus_summary(rep):
    return {"n": rep.n, "corpus_size": rep.corpus_size, "agreements": rep.agreements,
            "disagreements": rep.disagreements}


@_timed
def differential_equivalence(exp) -> CheckReport:
    """Symbolic and differential powers agree for primes meeting ZZ in 0."""
    certs = {"x - 2, y - 3": ("x", "y"), "x^2 + 1": ("x",)}
    kinds = {"x - 2, y - 3": "linear", "x^2 + 1": "principal-irreducible"}
    details, ok = {}, True
    for text in exp["ideals"]:
        R = _ring(*certs.get(text, ("x", "y")))
        Q = Ideal.parse(R, text)
        cert = PrimeCertificate(kinds.get(text, "trusted"))
        runs = []
        for n in exp["n"]:
            rep = diff_symbolic_equivalence(Q, n, build_corpus(R, Q.generators, n), cert)
            runs.append(_corpus_summary(rep))
            ok = ok and rep.agree
        details[text] = runs
    return CheckReport("differential-equivalence", ok, details)


_MIXED_SETUP = {
    "2, x": (("x",), 2, "linear"),
    "2, x^2 + x + 1": (("x",), 2, "p-irreducible"),
    "3, x": (("x", "y"), 3, "linear"),
    "2, x, y": (("x", "y"), 2, "linear"),
}


@_timed
def mixed_equivalence(exp) -> CheckReport:
    """Symbolic and mixed differential powers agree for primes containing p."""
    details, ok = {}, True
    for text in exp["ideals"]:
        names, p, kind = _MIXED_SETUP[text]
        R = _ring(*names)
        Q = Ideal.parse(R, text)
        d = PDerivation(FrobeniusLift.canonical(R, p))
        runs = []
        for n in exp["n"]:
            q = PowerQuery(Q, n, p, d, certificate=PrimeCertificate(kind))
            rep = mixed_symbolic_equivalence(q, build_corpus(R, Q.generators, n, p=p))
            runs.append(_corpus_summary(rep))
            ok = ok and rep.agree
        details[text] = runs
    return CheckReport("mixed-equivalence", ok, details)


@_timed
def delta_independence_suite(exp) -> CheckReport:
    """Mixed membership on (2, x) does not depend on the lift."""
    from .pderiv import parse_lift
    R = _ring("x")
    Q = Ideal(R, [2, R.gen("x")])
    lifts = [parse_lift(text, R, 2) for text in exp["lifts"]]
    runs, ok = [], True
    for n in exp["n"]:
        rep = delta_independence(Q, n, lifts, build_corpus(R, Q.generators, n, p=2))
        runs.append(_corpus_summary(rep))
        ok = ok and rep.agree
    return CheckReport("delta-independence", ok, {"runs": runs})


@_timed
def maximal_ideal_collapse(exp) -> CheckReport:
    """For m = (p, x_1..x_d): mixed membership at n iff membership in m^n."""
    details, ok = {}, True
    for text in exp["ideals"]:
        names, p, _ = _MIXED_SETUP[text]
        R = _ring(*names)
        m = Ideal.parse(R, text)
        d = PDerivation(FrobeniusLift.canonical(R, p))
        runs = []
        for n in exp["n"]:
            bad = []
            corpus = build_corpus(R, m.generators, n, p=p)
            for f in corpus:
                if (mixed_power_witness(m, n, d, f) is None) != power_of(m, n).contains(f):
                    bad.append(str(f))
            runs.append({"n": n, "corpus_size": len(corpus), "failures": bad})
            ok = ok and not bad
        details[text] = runs
    return CheckReport("maximal-ideal-collapse", ok, details)


@_timed
def curve_symbolic_square(exp) -> CheckReport:
    """Q = (2) + (x^3 - yz, y^2 - xz, z^2 - x^2 y): Q^(2) is bigger than Q^2."""
    R = _ring("x", "y", "z")
    x, y, z = R.gens
    Q = Ideal(R, [2, x ** 3 - y * z, y ** 2 - x * z, z ** 2 - x ** 2 * y])
    f = R.parse(exp["witness"])
    d = PDerivation(FrobeniusLift.canonical(R, 2))
    s = symbolic_witness(Q, 2, f, shortcuts=False)
    got = {
        "witness": str(f),
        "in Q^2": power_of(Q, 2).contains(f),
        "in Q^(2)": s is not None,
        "mixed(2)": mixed_power_witness(Q, 2, d, f) is None,
    }
    details = dict(got, multiplier=None if s is None else str(s),
                   certificate="trusted (kernel of x, y, z -> t^3, t^4, t^5, plus 2)")
    return CheckReport("curve-symbolic-square", got == exp, details)


SUITES: dict[str, Callable] = {
    "pderivation-example": pderivation_example,
    "fermat-valuation": fermat_valuation,
    "differential-stagnation": differential_stagnation,
    "order-asymmetry": order_asymmetry,
    "quotient-memberships": quotient_memberships,
    "separability-gap": separability_gap,
    "differential-equivalence": differential_equivalence,
    "mixed-equivalence": mixed_equivalence,
    "delta-independence": delta_independence_suite,
    "maximal-ideal-collapse": maximal_ideal_collapse,
    "curve-symbolic-square": curve_symbolic_square,
}


def run_suites(expected: dict | None = None, names=None) -> list[CheckReport]:
    """Run the named suites (all by default) against ``expected`` overrides."""
    exp = copy.deepcopy(EXPECTED)
    for name, values in (expected or {}).items():
        if name not in exp:
            raise KeyError(f"unknown suite {name!r}")
        exp[name].update(values)
    reports = []
    for name in names or SUITES:
        reports.append(SUITES[name](exp[name]))
    return reports
