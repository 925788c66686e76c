import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from diffpowers.diffops import compose_apply, diff_power_membership
from diffpowers.groebner import Ideal, PrimeCertificate
from diffpowers.pderiv import FrobeniusLift, PDerivation, parse_lift
from diffpowers.powers import (
    EquivalenceReport, PowerQuery, build_corpus, delta_independence, diff_stagnation_check,
    diff_symbolic_equivalence, mixed_power_membership, mixed_power_witness,
    mixed_symbolic_equivalence, separability_counterexample_check, symbolic_membership,
    symbolic_membership_quotient, symbolic_witness,
)
from diffpowers.poly import QQ, ZZ, Polynomial, PolynomialRing

R1 = PolynomialRing(ZZ, ["x"])
X, = R1.gens
R2 = PolynomialRing(ZZ, ["x", "y"])
x, y = R2.gens
R3 = PolynomialRing(ZZ, ["x", "y", "z"])
P2X = Ideal(R1, [2, X])
D2 = PDerivation(FrobeniusLift.canonical(R1, 2))

REPORT_KEYS = {"command", "ring", "ideal", "certificate", "n", "p", "lift", "corpus_size",
               "agreements", "disagreements", "runtime_ms"}


class TestSymbolic:
    def test_examples(self):
        assert symbolic_membership(Ideal(R2, [x, y]), 2, x * y)
        assert not symbolic_membership(P2X, 2, R1(2))
        assert symbolic_membership(P2X, 5, R1.zero)

    def test_principal_prime(self):
        Q = Ideal(R1, [X ** 2 + 1])
        f = (X ** 2 + 1) ** 2
        assert symbolic_membership(Q, 2, f) and not symbolic_membership(Q, 3, f)

    def test_shortcuts_do_not_change_answers(self):
        Q = Ideal.parse(R2, "2, x")
        for f in build_corpus(R2, Q.generators, 2, D=3, seed=1, p=2, random_count=20,
                              combo_count=10):
            for n in (1, 2, 3):
                assert (symbolic_membership(Q, n, f)
                        == symbolic_membership(Q, n, f, shortcuts=False))

    def test_witness_is_valid(self):
        Q = Ideal.parse(R3, "2, x^3 - y*z, y^2 - x*z, z^2 - x^2*y")
        f = R3.parse("x^5 + x*y^3 + x^2*y*z + z^3")
        s = symbolic_witness(Q, 2, f)
        assert s is not None and not Q.contains(s)
        assert (Q ** 2).contains(s * f) and not (Q ** 2).contains(f)

    def test_bad_level(self):
        with pytest.raises(ValueError):
            symbolic_membership(P2X, 0, X)


class TestQuotient:
    def test_cone_example(self):
        Q = Ideal.parse(R3, "2, x, y")
        rel = Ideal.parse(R3, "y^2 - x*z")
        assert symbolic_membership_quotient(Q, rel, 2, R3.parse("x"))
        m = Ideal.parse(R3, "2, x, y, z")
        assert not ((m ** 2) + rel).contains(R3.parse("x"))

    def test_zero_relations_agree(self):
        Q = Ideal.parse(R2, "2, x")
        zero = Ideal(R2, [])
        for f in build_corpus(R2, Q.generators, 2, D=3, seed=4, p=2, random_count=15,
                              combo_count=5):
            assert (symbolic_membership_quotient(Q, zero, 2, f)
                    == symbolic_membership(Q, 2, f))

    def test_relations_outside(self):
        with pytest.raises(ValueError):
            symbolic_membership_quotient(Ideal.parse(R3, "2, x"), Ideal.parse(R3, "y"), 2,
                                         R3.parse("x"))


class TestMixed:
    def test_examples(self):
        q3 = PowerQuery(P2X, 3, 2, D2)
        assert not mixed_power_membership(q3, 2 * X)
        s, alpha, value = mixed_power_witness(P2X, 3, D2, 2 * X)
        assert (s, tuple(alpha), value) == (1, (1,), R1(-1))
        assert mixed_power_membership(PowerQuery(P2X, 2, 2, D2), 2 * X)
        s, alpha, value = mixed_power_witness(P2X, 3, D2, R1(4))
        assert (s, tuple(alpha), value) == (2, (0,), R1(-21))

    def test_query_validation(self):
        with pytest.raises(ValueError):
            PowerQuery(P2X, 0)
        with pytest.raises(ValueError):
            PowerQuery(Ideal(R1, [X]), 2, 2)
        with pytest.raises(ValueError):
            PowerQuery(P2X, 2, 3, D2)
        with pytest.raises(ValueError):
            PowerQuery(P2X, 2, 4)
        with pytest.raises(ValueError):
            PowerQuery(Ideal(R1, [2, X ** 2]), 2, 2, D2, certificate=PrimeCertificate("linear"))
        assert PowerQuery(P2X, 2, derivation=D2).p == 2

    def test_restricted_variables(self):
        S = PolynomialRing(ZZ, ["t", "x"])
        t, w = S.gens
        Q = Ideal(S, [S(2), w ** 2 - t])
        d = PDerivation(FrobeniusLift(S, 2, {"t": w ** 4 - (w ** 2 - t) ** 2, "x": w ** 2}))
        f = w ** 2 - t
        assert mixed_power_witness(Q, 2, d, f, variables=["x"]) is None
        assert mixed_power_witness(Q, 2, d, f) == (0, (1, 0), S(-1))

    @settings(max_examples=60, deadline=None)
    @given(st.dictionaries(st.integers(0, 4), st.integers(-12, 12), max_size=4),
           st.integers(1, 3), st.sampled_from(["", "x -> x^2 + 2*x", "x -> x^2 + 2"]))
    def test_against_definition_oracle(self, terms, n, lift):
        f = Polynomial(R1, {(k,): c for k, c in terms.items()})
        phi = parse_lift(lift, R1, 2)
        images = {k: str(v) for k, v in phi.images.items()}
        in_q = lambda g: oracles.in_p_x_power(g, 2, 1)
        expected = oracles.mixed_member(f, n, 2, in_q, images)
        assert mixed_power_membership(PowerQuery(P2X, n, 2, PDerivation(phi)), f) == expected
        # for this prime the mixed power is the ordinary power (p, x)^n
        assert expected == oracles.in_p_x_power(f, 2, n)


class TestCorpus:
    def test_contents(self):
        corpus = build_corpus(R1, P2X.generators, 2, D=3, seed=0, p=2)
        for a in range(4):
            for b in range(4 - a):
                assert R1.monomial((b,), 2 ** a) in corpus
        assert X * X * X in corpus and R1(8) in corpus
        assert len(set(corpus)) == len(corpus) and all(corpus)

    def test_without_prime(self):
        corpus = build_corpus(R2, [x - 2, y - 3], 2, D=2, seed=0, random_count=0, combo_count=0)
        assert R2(2) not in corpus
        assert (x - 2) * (y - 3) * (x - 2) in corpus

    def test_deterministic(self):
        a = build_corpus(R2, [R2(3), x], 2, seed=9, p=3)
        b = build_corpus(R2, [R2(3), x], 2, seed=9, p=3)
        c = build_corpus(R2, [R2(3), x], 2, seed=10, p=3)
        assert a == b and a != c


class TestEquivalence:
    def test_translated_point(self):
        Q = Ideal.parse(R2, "x - 2, y - 3")
        corpus = build_corpus(R2, Q.generators, 3, D=3, seed=2, random_count=30, combo_count=15)
        for n in (1, 2, 3):
            rep = diff_symbolic_equivalence(Q, n, corpus, PrimeCertificate("linear"))
            assert rep.agree and rep.agreements == len(corpus)
            for f in corpus[:60]:
                assert symbolic_membership(Q, n, f) == oracles.in_translated_power(f, (2, 3), n)

    def test_principal(self):
        Q = Ideal(R1, [X ** 2 + 1])
        corpus = build_corpus(R1, Q.generators, 3, D=4, seed=3, random_count=30)
        for n in (1, 2, 3):
            rep = diff_symbolic_equivalence(Q, n, corpus, PrimeCertificate("principal-irreducible"))
            assert rep.agree
            for f in corpus:
                assert diff_power_membership(Q, n, f) == oracles.in_principal_power(f, X ** 2 + 1, n)

    def test_rational_trivial(self):
        S = PolynomialRing(QQ, ["x"])
        Q = Ideal(S, [S.gen("x")])
        f = S.gen("x") ** 2
        assert symbolic_membership(Q, 2, f) and diff_power_membership(Q, 2, f)

    def test_rejects_integer_contraction(self):
        with pytest.raises(ValueError):
            diff_symbolic_equivalence(P2X, 2, [X])

    def test_mixed_against_oracles(self):
        g = [1, 1, 1]
        Q = Ideal(R1, [R1(2), X ** 2 + X + 1])
        q = PowerQuery(Q, 2, 2, D2, certificate=PrimeCertificate("p-irreducible"))
        corpus = build_corpus(R1, Q.generators, 2, D=4, seed=5, p=2, random_count=40)
        rep = mixed_symbolic_equivalence(q, corpus)
        assert rep.agree
        for f in corpus:
            assert symbolic_membership(Q, 2, f) == oracles.in_p_g_power(f, 2, g, 2)

    def test_mixed_three_two_variables(self):
        Q = Ideal.parse(R2, "3, x")
        d = PDerivation(parse_lift("x -> x^3, y -> y^3", R2, 3))
        corpus = build_corpus(R2, Q.generators, 2, D=3, seed=6, p=3, random_count=30)
        rep = mixed_symbolic_equivalence(PowerQuery(Q, 2, 3, d), corpus)
        assert rep.agree and rep.lift == "x -> x^3, y -> y^3"
        for f in corpus:
            assert symbolic_membership(Q, 2, f) == oracles.in_p_x_power(f, 3, 2)

    def test_report_schema(self):
        corpus = build_corpus(R1, P2X.generators, 2, D=2, seed=0, p=2, random_count=5)
        rep = mixed_symbolic_equivalence(PowerQuery(P2X, 2, 2, D2), corpus)
        out = rep.to_json()
        assert set(out) == REPORT_KEYS
        assert out["corpus_size"] == len(corpus) == out["agreements"]
        assert out["certificate"] == "trusted (unchecked)"
        json.dumps(out)

    def test_disagreement_entries(self):
        # differential powers cannot see p: the constant 2 separates them
        rep = EquivalenceReport("equiv diff", "ZZ[x]", "(2, x)", "linear", 2, None, None, 1)
        rep.verdicts.append((False, True, False))
        rep.disagreements.append({"poly": "2", "symbolic": False, "other": True,
                                  "witness_composition": None, "witness_value": None})
        assert not rep.agree and rep.agreements == 0
        entry = rep.to_json()["disagreements"][0]
        assert set(entry) == {"poly", "symbolic", "other", "witness_composition", "witness_value"}


class TestLiftIndependence:
    def test_two_lifts(self):
        lifts = [FrobeniusLift.canonical(R1, 2), parse_lift("x -> x^2 + 2*x", R1, 2)]
        corpus = build_corpus(R1, P2X.generators, 3, D=4, seed=7, p=2, random_count=40)
        for n in (1, 2, 3):
            assert delta_independence(P2X, n, lifts, corpus).agree

    def test_single_lift(self):
        rep = delta_independence(P2X, 2, [FrobeniusLift.canonical(R1, 2)], [X, 2 * X])
        assert rep.agree and rep.agreements == 2

    def test_both_reject(self):
        lifts = [FrobeniusLift.canonical(R1, 2), parse_lift("x -> x^2 + 2", R1, 2)]
        for phi in lifts:
            d = PDerivation(phi)
            assert mixed_power_witness(P2X, 3, d, 2 * X) is not None
            # delta(d/dx(2x)) = delta(2) = -1 whatever the lift
            assert compose_apply(2 * X, (1,), 1, d) == R1(-1)
        rep = delta_independence(P2X, 3, lifts, [2 * X])
        assert rep.agree and rep.verdicts[0][1] == [False, False]

    def test_mixed_primes(self):
        lifts = [FrobeniusLift.canonical(R1, 2), FrobeniusLift.canonical(R1, 3)]
        with pytest.raises(ValueError):
            delta_independence(Ideal(R1, [6, X]), 2, lifts, [X])


class TestChecks:
    def test_stagnation(self):
        R0 = PolynomialRing(ZZ, [])
        rep = diff_stagnation_check(Ideal(R0, [R0(2)]), 5)
        assert rep.passed
        rep = diff_stagnation_check(P2X, 3)
        assert rep.passed and rep.details["differential"][3] and not rep.details["symbolic"][3]
        assert diff_stagnation_check(Ideal(R1, [3, X]), 3).passed

    def test_stagnation_needs_prime(self):
        with pytest.raises(ValueError):
            diff_stagnation_check(Ideal(R1, [X]), 3)

    def test_separability(self):
        rep = separability_counterexample_check()
        d = rep.details
        assert rep.passed and d["delta(w)"] == "0" and d["d/dx(w)"] == "2*x"
        assert d["mixed(2)"] and not d["symbolic(2)"]
