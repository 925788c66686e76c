"""Command-line front end.

A session file declares the objects a command works on, one per line::

    # comments start with '#'
    ring Z [x, y]              # Z, Q or GF(p); variables may be empty: ring Z []
    prime 2
    ideal Q = 2, x
    lift F : x -> x^2, y -> y^2
    cert Q : linear
    relations Q : y^2 - x*z    # work modulo these for `member symbolic`
    base t                     # variables that are not differentiated

Exit codes: 0 all checks pass, 1 a verified property failed (or a membership
query came out false), 2 input error, 3 step budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field

from . import groebner as gbmod
from ._backend import BudgetExceeded
from .diffops import apply_D, diff_power_witness
from .groebner import (
    CERTIFICATE_KINDS, CertificateError, GroebnerBasis, Ideal, PrimeCertificate,
    check_prime_certificate,
)
from .pderiv import FrobeniusLift, LiftError, PDerivation, parse_lift, pder_power_witness
from .poly import (
    GF, GREVLEX, GRLEX, LEX, QQ, ZZ, Polynomial, PolynomialRing, PolynomialSyntaxError,
    is_prime,
)
from .powers import (
    PowerQuery, build_corpus, delta_independence, diff_symbolic_equivalence,
    mixed_power_witness, mixed_symbolic_equivalence, symbolic_membership_quotient,
    symbolic_witness,
)

__all__ = ["CommandResult", "Session", "SessionError", "main", "parse_session", "run_command"]

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class SessionError(ValueError):
    """Problem in a session file, located by 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.message = message
        self.line = line
        self.column = column


@dataclass
class Session:
    ring: PolynomialRing
    prime: int | None = None
    ideals: dict = field(default_factory=dict)
    lifts: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)
    base: tuple = ()

    @property
    def diff_variables(self) -> tuple[str, ...] | None:
        if not self.base:
            return None
        return tuple(v for v in self.ring.names if v not in self.base)


@dataclass
class CommandResult:
    exit_code: int
    payload: dict

    def render(self, fmt: str = "text") -> str:
        if fmt == "json":
            return json.dumps(self.payload, indent=2)
        return _render_text(self.payload)


# -- session parsing ----------------------------------------------------------

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_RING = re.compile(r"ring\s+(Z|ZZ|Q|QQ|GF\(\s*(\d+)\s*\))\s*\[(.*)\]\s*$")
_PRIME = re.compile(r"prime\s+(\S+)\s*$")
_IDEAL = re.compile(rf"ideal\s+({_NAME})\s*=(.*)$")
_NAMED = re.compile(rf"(lift|cert|relations)\s+({_NAME})\s*:(.*)$")
_BASE = re.compile(r"base\s+(.*)$")


def _split_items(text: str, offset: int):
    """Comma-separated items with the column (0-based) where each starts."""
    pos = offset
    for chunk in text.split(","):
        lead = len(chunk) - len(chunk.lstrip())
        yield chunk.strip(), pos + lead
        pos += len(chunk) + 1


def _parse_poly(ring, text, lineno, col):
    if not text:
        raise SessionError("empty expression", lineno, col + 1)
    try:
        return ring.parse(text)
    except PolynomialSyntaxError as exc:
        msg = str(exc).split(" at column")[0]
        raise SessionError(msg, lineno, col + exc.pos + 1) from None


def _parse_ring(m, lineno) -> PolynomialRing:
    dom, p, names = m.group(1), m.group(2), m.group(3)
    if p is not None:
        if not is_prime(int(p)):
            raise SessionError(f"GF({p}) needs a prime modulus", lineno, m.start(2) + 1)
        domain = GF(int(p))
    else:
        domain = ZZ if dom.startswith("Z") else QQ
    vars_ = []
    for name, col in _split_items(names, m.start(3)):
        if not name and names.strip() == "":
            break
        if not re.fullmatch(_NAME, name):
            raise SessionError(f"bad variable name {name!r}", lineno, col + 1)
        if name in vars_:
            raise SessionError(f"duplicate variable {name!r}", lineno, col + 1)
        vars_.append(name)
    return PolynomialRing(domain, vars_)


def parse_session(text: str) -> Session:
    """Parse a session file; raises :class:`SessionError` with a location."""
    session = None
    names = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        keyword = body.split(None, 1)[0]
        if keyword != "ring" and session is None:
            raise SessionError("missing ring declaration before this line", lineno, indent + 1)
        if keyword == "ring":
            if session is not None:
                raise SessionError("duplicate ring declaration", lineno, indent + 1)
            m = _RING.match(body)
            if not m:
                raise SessionError("expected: ring Z|Q|GF(p) [x, y, ...]", lineno, indent + 1)
            session = Session(_parse_ring(_Shift(m, indent), lineno))
        elif keyword == "prime":
            m = _PRIME.match(body)
            if not m or not m.group(1).isdigit() or not is_prime(int(m.group(1))):
                raise SessionError("expected: prime <prime integer>", lineno, indent + 1)
            if session.prime is not None:
                raise SessionError("duplicate prime declaration", lineno, indent + 1)
            session.prime = int(m.group(1))
        elif keyword == "ideal":
            m = _IDEAL.match(body)
            if not m:
                raise SessionError("expected: ideal NAME = g1, g2, ...", lineno, indent + 1)
            name = m.group(1)
            if name in names:
                raise SessionError(f"duplicate name {name!r}", lineno, indent + m.start(1) + 1)
            gens = [_parse_poly(session.ring, t, lineno, c)
                    for t, c in _split_items(m.group(2), indent + m.start(2))]
            names.add(name)
            session.ideals[name] = Ideal(session.ring, gens)
        elif keyword in ("lift", "cert", "relations"):
            m = _NAMED.match(body)
            if not m:
                raise SessionError(f"expected: {keyword} NAME : ...", lineno, indent + 1)
            _parse_named(session, names, m, lineno, indent)
        elif keyword == "base":
            m = _BASE.match(body)
            base = []
            for v, c in _split_items(m.group(1).replace(" ", ","), indent + m.start(1)):
                if not v:
                    continue
                if v not in session.ring.names:
                    raise SessionError(f"unknown variable {v!r}", lineno, c + 1)
                base.append(v)
            session.base = tuple(base)
        else:
            raise SessionError(f"unknown declaration {keyword!r}", lineno, indent + 1)
    if session is None:
        raise SessionError("missing ring declaration")
    return session


class _Shift:
    """Match wrapper whose ``start`` is offset by the line's indentation."""

    def __init__(self, m, offset):
        self._m, self._off = m, offset

    def group(self, i):
        return self._m.group(i)

    def start(self, i):
        return self._m.start(i) + self._off


def _parse_named(session, names, m, lineno, indent):
    keyword, name, rest = m.group(1), m.group(2), m.group(3)
    rest_col = indent + m.start(3)
    body_col = rest_col + len(rest) - len(rest.lstrip()) + 1
    name_col = indent + m.start(2) + 1
    ring = session.ring
    if keyword == "lift":
        if name in names:
            raise SessionError(f"duplicate name {name!r}", lineno, name_col)
        if session.prime is None:
            raise SessionError("a lift needs a prime declared earlier", lineno, indent + 1)
        if ring.domain != ZZ:
            raise SessionError("lifts need a ring over Z", lineno, indent + 1)
        try:
            lift = parse_lift(rest, ring, session.prime)
        except (LiftError, PolynomialSyntaxError) as exc:
            raise SessionError(str(exc), lineno, body_col) from None
        names.add(name)
        session.lifts[name] = lift
        return
    if name not in session.ideals:
        raise SessionError(f"undeclared ideal {name!r}", lineno, name_col)
    if keyword == "cert":
        kind, _, note = rest.strip().partition(" ")
        if name in session.certificates:
            raise SessionError(f"duplicate certificate for {name!r}", lineno, name_col)
        if kind not in CERTIFICATE_KINDS:
            raise SessionError(f"unknown certificate kind {kind!r}", lineno, body_col)
        cert = PrimeCertificate(kind, note.strip())
        if not check_prime_certificate(session.ideals[name], cert):
            raise SessionError(f"certificate {kind!r} does not validate for {name}",
                               lineno, body_col)
        session.certificates[name] = cert
    else:
        if name in session.relations:
            raise SessionError(f"duplicate relations for {name!r}", lineno, name_col)
        gens = [_parse_poly(ring, t, lineno, c) for t, c in _split_items(rest, rest_col)]
        session.relations[name] = Ideal(ring, gens)


# -- commands -----------------------------------------------------------------

class InputError(ValueError):
    pass


def _pick(mapping, name, what):
    if not mapping:
        raise InputError(f"the session declares no {what}")
    if name is None:
        return next(iter(mapping.items()))
    if name not in mapping:
        raise InputError(f"no {what} named {name!r}")
    return name, mapping[name]


def _derivation(session, lift_name) -> tuple[str, PDerivation]:
    if session.lifts:
        name, lift = _pick(session.lifts, lift_name, "lift")
        return name, PDerivation(lift)
    if lift_name is not None:
        raise InputError(f"no lift named {lift_name!r}")
    if session.prime is None or session.ring.domain != ZZ:
        raise InputError("p-derivations need 'prime p' and a ring over Z")
    return "canonical", PDerivation(FrobeniusLift.canonical(session.ring, session.prime))


def _need(value, flag):
    if value is None:
        raise InputError(f"missing required flag {flag}")
    return value


def _cert_label(cert):
    return "trusted (unchecked)" if cert is None or cert.trusted else cert.kind


def _member(session, args) -> CommandResult:
    n = _need(args.n, "--n")
    if n < 1:
        raise InputError("--n must be at least 1")
    name, Q = _pick(session.ideals, args.ideal, "ideal")
    f = session.ring.parse(_need(args.f, "--f"))
    payload = {"command": f"member {args.kind}", "ring": str(session.ring), "ideal": str(Q),
               "certificate": _cert_label(session.certificates.get(name)), "n": n,
               "p": None, "lift": None, "f": str(f)}
    comp = value = mult = None
    variables = session.diff_variables
    if args.kind == "symbolic":
        rel = session.relations.get(name)
        if rel is not None:
            payload["relations"] = str(rel)
            verdict = symbolic_membership_quotient(Q, rel, n, f)
        else:
            s = symbolic_witness(Q, n, f)
            verdict = s is not None
            mult = None if s is None else str(s)
        payload["witness_multiplier"] = mult
    elif args.kind == "diff":
        alpha = diff_power_witness(Q, n, f, variables)
        verdict = alpha is None
        if alpha is not None:
            comp, value = {"s": 0, "alpha": list(alpha)}, str(apply_D(alpha, f))
    else:
        lname, d = _derivation(session, args.lift)
        payload["p"], payload["lift"] = d.p, d.lift.describe()
        if args.kind == "pder":
            a = pder_power_witness(Q, n, d, f)
            verdict = a is None
            if a is not None:
                comp = {"s": a, "alpha": [0] * session.ring.nvars}
                value = str(d.iterate(a, f))
        else:
            w = mixed_power_witness(Q, n, d, f, variables)
            verdict = w is None
            if w is not None:
                comp, value = {"s": w[0], "alpha": list(w[1])}, str(w[2])
    if args.kind != "symbolic":
        payload["witness_composition"] = comp
        payload["witness_value"] = value
    payload["verdict"] = verdict
    return CommandResult(EXIT_OK if verdict else EXIT_FAILED, payload)


_ORDERS = {"grevlex": GREVLEX, "grlex": GRLEX, "lex": LEX}


def _gb(session, args) -> CommandResult:
    name, I = _pick(session.ideals, args.ideal, "ideal")
    gb: GroebnerBasis = I.groebner(_ORDERS[args.order])
    return CommandResult(EXIT_OK, {
        "command": "gb", "ring": str(session.ring), "ideal": str(I), "order": args.order,
        "basis": [str(g) for g in gb.elements],
    })


def _colon(session, args) -> CommandResult:
    name, I = _pick(session.ideals, args.ideal, "ideal")
    f = session.ring.parse(_need(args.f, "--f"))
    J = gbmod.colon(I, f)
    return CommandResult(EXIT_OK, {
        "command": "colon", "ring": str(session.ring), "ideal": str(I), "f": str(f),
        "colon": [str(g) for g in J.groebner().elements],
    })


def _equiv(session, args) -> CommandResult:
    n = _need(args.n, "--n")
    if n < 1:
        raise InputError("--n must be at least 1")
    name, Q = _pick(session.ideals, args.ideal, "ideal")
    cert = session.certificates.get(name)
    D = 4 if args.degree_bound is None else args.degree_bound
    variables = session.diff_variables
    if args.kind == "diff":
        corpus = build_corpus(session.ring, Q.generators, n, D=D, seed=args.seed)
        rep = diff_symbolic_equivalence(Q, n, corpus, cert, variables)
    elif args.kind == "mixed":
        lname, d = _derivation(session, args.lift)
        corpus = build_corpus(session.ring, Q.generators, n, D=D, seed=args.seed, p=d.p)
        q = PowerQuery(Q, n, d.p, d, D, cert, variables)
        rep = mixed_symbolic_equivalence(q, corpus)
    else:
        if session.prime is None:
            raise InputError("delta-independence needs 'prime p'")
        lifts = list(session.lifts.values())
        canon = FrobeniusLift.canonical(session.ring, session.prime)
        if not any(l.describe() == canon.describe() for l in lifts):
            lifts.insert(0, canon)
        if len(lifts) < 2:
            raise InputError("delta-independence needs a second lift")
        corpus = build_corpus(session.ring, Q.generators, n, D=D, seed=args.seed,
                              p=session.prime)
        rep = delta_independence(Q, n, lifts, corpus, variables, cert)
    payload = rep.to_json()
    return CommandResult(EXIT_OK if rep.agree else EXIT_FAILED, payload)


def _verify_paper(args) -> CommandResult:
    from .suites import run_suites
    expected = None
    if args.expected:
        try:
            with open(args.expected, encoding="utf-8") as fh:
                expected = json.load(fh)
            reports = run_suites(expected)
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            raise InputError(f"bad expected-values file: {exc}") from None
    else:
        reports = run_suites()
    suites = [r.to_json() for r in reports]
    ok = all(r.passed for r in reports)
    return CommandResult(EXIT_OK if ok else EXIT_FAILED, {
        "command": "verify-paper", "suites": suites, "passed": ok,
        "failed": [r.name for r in reports if not r.passed],
    })


def run_command(session: Session | None, args: argparse.Namespace) -> CommandResult:
    """Dispatch parsed arguments; ``session`` may be None for verify-paper."""
    start = time.perf_counter()
    budget = args.budget if args.budget is not None else gbmod.default_budget()
    with gbmod.step_budget(budget):
        if args.command == "verify-paper":
            res = _verify_paper(args)
        else:
            res = {"member": _member, "gb": _gb, "colon": _colon, "equiv": _equiv}[args.command](
                session, args)
    res.payload["runtime_ms"] = round((time.perf_counter() - start) * 1000, 3)
    return res


# -- text rendering -----------------------------------------------------------

def _render_text(payload: dict) -> str:
    cmd = payload["command"]
    lines = []
    if cmd == "verify-paper":
        for s in payload["suites"]:
            lines.append(f"{'PASS' if s['passed'] else 'FAIL'}  {s['name']}  ({s['runtime_ms']:.0f} ms)")
        total = len(payload["suites"])
        bad = payload["failed"]
        lines.append(f"{total - len(bad)}/{total} suites passed"
                     + (f"; failed: {', '.join(bad)}" if bad else ""))
        return "\n".join(lines)
    if cmd == "gb":
        lines.append(f"strong {payload['order']} basis of {payload['ideal']} in {payload['ring']}:")
        lines += [f"  {g}" for g in payload["basis"]]
        return "\n".join(lines)
    if cmd == "colon":
        lines.append(f"{payload['ideal']} : ({payload['f']}) =")
        lines += [f"  {g}" for g in payload["colon"]]
        return "\n".join(lines)
    if cmd.startswith("member"):
        lines.append(f"{cmd} n={payload['n']} f={payload['f']} in {payload['ideal']}: "
                     f"{str(payload['verdict']).lower()}")
        if payload.get("witness_composition"):
            w = payload["witness_composition"]
            lines.append(f"  witness: s={w['s']} alpha={tuple(w['alpha'])} "
                         f"value={payload['witness_value']}")
        if payload.get("witness_multiplier"):
            lines.append(f"  multiplier outside the prime: {payload['witness_multiplier']}")
        return "\n".join(lines)
    lines.append(f"{cmd} n={payload['n']} ideal={payload['ideal']} "
                 f"certificate={payload['certificate']}")
    lines.append(f"  {payload['agreements']}/{payload['corpus_size']} agree")
    for d in payload["disagreements"]:
        lines.append(f"  disagreement on {d['poly']}: {d['symbolic']} vs {d['other']}"
                     f" witness={d['witness_composition']} value={d['witness_value']}")
    return "\n".join(lines)


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="PATH", help="session file ('-' for stdin)")
    common.add_argument("--n", type=int, help="power index")
    common.add_argument("--degree-bound", type=int, help="corpus degree bound (default 4)")
    common.add_argument("--f", metavar="POLY", help="polynomial to test")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--seed", type=int, default=0, help="corpus seed (default 0)")
    common.add_argument("--budget", type=int, help="reduction-step budget per basis")
    common.add_argument("--ideal", metavar="NAME", help="ideal to use (default: first)")
    common.add_argument("--lift", metavar="NAME", help="lift to use (default: first)")

    parser = argparse.ArgumentParser(prog="diffpowers", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    m = sub.add_parser("member", parents=[common], help="membership in a power of an ideal")
    m.add_argument("kind", choices=("symbolic", "diff", "pder", "mixed"))
    g = sub.add_parser("gb", parents=[common], help="strong Groebner basis")
    g.add_argument("--order", choices=tuple(_ORDERS), default="grevlex")
    sub.add_parser("colon", parents=[common], help="colon ideal (I : f)")
    e = sub.add_parser("equiv", parents=[common], help="corpus equivalence check")
    e.add_argument("kind", choices=("diff", "mixed", "delta-independence"))
    v = sub.add_parser("verify-paper", parents=[common], help="run the bundled regression suites")
    v.add_argument("--expected", metavar="PATH", help="JSON overrides for expected values")
    return parser


def _read_session(path: str) -> Session:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return parse_session(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        session = None
        if args.command != "verify-paper":
            session = _read_session(_need(args.input, "--input"))
        result = run_command(session, args)
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SessionError as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, OSError, ValueError, CertificateError, LiftError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(result.render(args.format))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
