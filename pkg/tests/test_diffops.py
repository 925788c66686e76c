import itertools
import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from diffpowers.diffops import (
    DiffOperator, DividedPowerOp, apply_D, apply_operator, commutator, compose_apply,
    diff_power_membership, diff_power_truncated, diff_power_witness, leibniz_expand,
    multi_indices,
)
from diffpowers.groebner import Ideal
from diffpowers.lattice import lattice_eq, lattice_member, truncated_ideal_lattice
from diffpowers.poly import QQ, ZZ, Polynomial, PolynomialRing
from diffpowers.powers import power_of

R1 = PolynomialRing(ZZ, ["x"])
X, = R1.gens
R = PolynomialRing(ZZ, ["x", "y"])
x, y = R.gens

polys = st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)), st.integers(-9, 9),
                        max_size=5).map(lambda d: Polynomial(R, d))
alphas = st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda a: sum(a) <= 3)


class TestExamples:
    def test_apply_D(self):
        assert apply_D((2,), X ** 3) == 3 * X
        assert apply_D((1, 1), x ** 2 * y) == 2 * x
        f = x ** 3 * y - 7
        assert apply_D((0, 0), f) == f

    def test_apply_operator(self):
        op = DiffOperator(((X, DividedPowerOp((1,))),))
        assert apply_operator(op, X ** 2) == 2 * X ** 2
        op = DiffOperator(((R1.one, DividedPowerOp((1,))), (R1.one, DividedPowerOp((2,)))))
        assert apply_operator(op, X ** 2) == 2 * X + 1
        assert apply_operator(DiffOperator(()), X ** 5) == R1.zero

    def test_leibniz_examples(self):
        assert leibniz_expand((1,), X, X) == 2 * X == apply_D((1,), X ** 2)
        assert leibniz_expand((2,), X, X) == R1.one == apply_D((2,), X ** 2)

    def test_commutators(self):
        op = commutator((1,), X)
        assert op.order == 0 and op.terms[0][0] == R1.one
        op = commutator((2,), X)
        for k in range(5):
            f = X ** k
            assert op(f) == apply_D((1,), f)
        assert commutator((0,), X ** 2 + 1).terms == ()

    def test_membership_examples(self):
        Z = PolynomialRing(ZZ, [])
        for n in range(1, 6):
            assert diff_power_membership(Ideal(Z, [Z(2)]), n, Z(2))
        RQ = PolynomialRing(QQ, ["x", "y"])
        assert not diff_power_membership(Ideal(RQ, RQ.gens), 2, RQ.gen("x"))
        assert diff_power_witness(Ideal(RQ, RQ.gens), 2, RQ.gen("x")) == (1, 0)
        assert diff_power_membership(Ideal(R1, [X ** 2 + 1]), 2, (X ** 2 + 1) ** 2)

    def test_truncated_examples(self):
        Q1 = PolynomialRing(QQ, ["x"])
        I = Ideal(Q1, [Q1.gen("x")])
        L = diff_power_truncated(I, 2, 3)
        assert sorted(str(f) for f in L.basis_polynomials()) == ["x^2", "x^3"]
        J = Ideal.parse(R, "x^2 + y, 3")
        assert lattice_eq(diff_power_truncated(J, 1, 3), truncated_ideal_lattice(J, 3))
        P = Ideal.parse(R, "x - 2, y - 3")
        assert lattice_eq(diff_power_truncated(P, 2, 2), truncated_ideal_lattice(power_of(P, 2), 2))

    def test_restricted_variables(self):
        # differentiating only in x treats y as a constant
        I = Ideal(R, [y])
        assert diff_power_membership(I, 3, y, variables=["x"])
        assert not diff_power_membership(I, 2, y)
        assert multi_indices(R, 2, ["x"]) == [(0, 0), (1, 0), (2, 0)]

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            apply_D((1,), x)
        with pytest.raises(ValueError):
            DividedPowerOp((-1, 0))
        with pytest.raises(ValueError):
            diff_power_membership(Ideal(R, [x]), 0, x)


class TestProperties:
    @given(alphas, polys)
    def test_matches_scaled_derivatives(self, alpha, f):
        assert apply_D(alpha, f) == oracles.divided_power(alpha, f)

    @given(alphas, polys, polys)
    def test_leibniz(self, alpha, f, g):
        assert leibniz_expand(alpha, f, g) == apply_D(alpha, f * g)

    @given(alphas.filter(any), polys, polys)
    def test_commutator(self, alpha, g, f):
        op = commutator(alpha, g)
        assert op.order < sum(alpha)
        assert op(f) == apply_D(alpha, g * f) - g * apply_D(alpha, f)

    @given(alphas, alphas, polys)
    def test_composition_is_binomial_multiple(self, a, b, f):
        # D_a D_b = prod binom(a_i + b_i, a_i) D_(a+b): the D_alpha are closed under
        # composition, so operators of order <= n - 1 are polynomial combinations of them
        k = 1
        for ai, bi in zip(a, b):
            k *= comb(ai + bi, ai)
        ab = tuple(i + j for i, j in zip(a, b))
        assert apply_D(a, apply_D(b, f)) == apply_D(ab, f).scale(k)

    @settings(max_examples=60, deadline=None)
    @given(st.sampled_from(["x - 2, y - 3", "2, x", "x, y^2", "x^2 + 1"]), polys,
           st.integers(1, 3), st.randoms(use_true_random=False))
    def test_basis_suffices(self, text, f, n, rnd):
        # membership via the D_alpha basis agrees with random operators of order <= n - 1
        I = Ideal.parse(R, text)
        member = diff_power_membership(I, n, f)
        basis = multi_indices(R, n - 1)
        for _ in range(5):
            terms = tuple((oracles.random_poly(rnd, R, max_terms=2, max_deg=2), DividedPowerOp(a))
                          for a in rnd.sample(basis, min(3, len(basis))))
            if member:
                assert I.contains(DiffOperator(terms)(f))
        if not member:
            alpha = diff_power_witness(I, n, f)
            assert not I.contains(apply_D(alpha, f))

    def test_truncation_matches_membership(self):
        rng = random.Random(5)
        for text in ("x - 2, y - 3", "2, x", "x^2, y", "3, x + y"):
            I = Ideal.parse(R, text)
            for n in (1, 2, 3):
                L = diff_power_truncated(I, n, 3)
                for _ in range(15):
                    f = oracles.random_poly(rng, R, max_deg=3)
                    assert lattice_member(L, f) == diff_power_membership(I, n, f)
                for b in L.basis_polynomials():
                    assert diff_power_membership(I, n, b)

    def test_compose_apply(self):
        from diffpowers.pderiv import FrobeniusLift, PDerivation
        d = PDerivation(FrobeniusLift.canonical(R1, 2))
        assert compose_apply(2 * X, (1,), 1, d) == R1(-1)
        assert compose_apply(2 * X, (0,), 0, d) == 2 * X
