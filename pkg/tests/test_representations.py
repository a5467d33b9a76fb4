import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bellbound.errors import RepresentationError, UnsupportedPhaseError
from bellbound.oracle import decode_indices, index_to_assignment
from bellbound.representations import (
    GenericBellFunction,
    correlation_vector,
    dimension_sum,
    eval_cosine,
    eval_cotangent,
    eval_product,
    eval_sign_form,
    sign_vector,
)
from bellbound.scenario import Assignment, BellScenario


def assignments(n, d):
    digits = st.lists(st.integers(0, d - 1), min_size=n, max_size=n)
    return st.builds(lambda a, b: Assignment(tuple(a), tuple(b)), digits, digits)


def direct_gbf(n, d, nu, a):
    """Textbook evaluation with roots of unity written out, independent of the library."""
    w = cmath.exp(2j * math.pi / d)
    total = 0
    for p in range(1, d):
        term = w ** (nu * p)
        for al, be in zip(a.alpha, a.beta):
            term *= w ** (p * al) + w ** (p / 2) * w ** (p * be)
        total += term
    return (total + total.conjugate()).real / 2**n


class TestProductForm:
    @given(st.integers(1, 4), st.integers(2, 5), st.sampled_from(["1/4", "-1/4", "1/3", "-1/2", "1"]),
           st.data())
    def test_matches_direct(self, n, d, nu, data):
        s = BellScenario(n, d, nu)
        a = data.draw(assignments(n, d))
        assert eval_product(s, a) == pytest.approx(direct_gbf(n, d, float(s.nu), a), abs=1e-12)

    def test_chsh_cosine_line(self):
        # sqrt2 [cos pi(a1+a2+1/4) + cos pi(a1+b2+3/4) + cos pi(b1+a2+3/4) + cos pi(b1+b2+5/4)]
        s = BellScenario(2, 2, Fraction(1, 4))
        for idx in range(16):
            a = index_to_assignment(idx, 2, 2)
            (a1, a2), (b1, b2) = a.alpha, a.beta
            hand = math.sqrt(2) * (
                math.cos(math.pi * (a1 + a2 + 0.25)) + math.cos(math.pi * (a1 + b2 + 0.75))
                + math.cos(math.pi * (b1 + a2 + 0.75)) + math.cos(math.pi * (b1 + b2 + 1.25))
            )
            assert 2**1.5 * eval_product(s, a) == pytest.approx(hand, abs=1e-12)

    def test_witness_terms(self):
        s = BellScenario(2, 2, Fraction(1, 4))
        assert 2**1.5 * eval_cosine(s, Assignment((1, 1), (0, 0))) == pytest.approx(2.0)

    def test_batch_matches_scalar(self):
        s = BellScenario(3, 3, Fraction(1, 3))
        f = GenericBellFunction(s, scale=2.5)
        alpha, beta = decode_indices(0, s.n_assignments, 3, 3)
        values = f.batch(alpha, beta)
        for i in range(0, s.n_assignments, 37):
            assert values[i] == pytest.approx(f(index_to_assignment(i, 3, 3)), abs=1e-12)


class TestCosineAndCotangent:
    @settings(max_examples=200)
    @given(st.integers(1, 6), st.integers(2, 6), st.sampled_from(["1/4", "-1/4", "3/4", "5/4"]),
           st.data())
    def test_forms_agree_for_odd_quarters(self, n, d, nu, data):
        s = BellScenario(n, d, nu)
        a = data.draw(assignments(n, d))
        p = eval_product(s, a)
        assert eval_cosine(s, a) == pytest.approx(p, abs=1e-9)
        assert eval_cotangent(s, a) == pytest.approx(p, abs=1e-9)

    @given(st.integers(1, 4), st.integers(2, 5), st.sampled_from(["1/3", "-1/2", "0", "2/5"]),
           st.data())
    def test_cosine_general_nu(self, n, d, nu, data):
        s = BellScenario(n, d, nu)
        a = data.draw(assignments(n, d))
        assert eval_cosine(s, a) == pytest.approx(eval_product(s, a), abs=1e-9)

    def test_cotangent_rejects_even_arguments(self):
        with pytest.raises(RepresentationError):
            eval_cotangent(BellScenario(2, 3, "-1/2"), Assignment((0, 0), (0, 0)))
        with pytest.raises(RepresentationError):
            eval_cotangent(BellScenario(2, 3, "1/3"), Assignment((0, 0), (0, 0)))


class TestDimensionSum:
    @pytest.mark.parametrize("d", [2, 3, 7, 50])
    @pytest.mark.parametrize("r", [0, 1, 2, 3])
    def test_against_direct(self, d, r):
        for m in range(-2 * d, 3 * d):
            theta = math.pi * (4 * m + r) / (2 * d)
            direct = sum(math.cos(n * theta) for n in range(1, d))
            assert dimension_sum(m, r, d) == pytest.approx(direct, abs=1e-11)

    @given(st.integers(2, 60), st.integers(0, 3), st.integers(-10**6, 10**6))
    def test_large_m_is_periodic(self, d, r, m):
        # exact integer reduction of each angle keeps the reference accurate
        direct = math.fsum(math.cos(math.pi * ((n * (4 * m + r)) % (4 * d)) / (2 * d))
                           for n in range(1, d))
        assert dimension_sum(m, r, d) == pytest.approx(direct, abs=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            dimension_sum(0, 4, 3)
        with pytest.raises(ValueError):
            dimension_sum(0, 1, 1)


class TestSignVector:
    def test_sign_follows_cosine(self):
        # pattern entry gamma is the sign of cos(pi(c + 2 gamma)/4)
        for c in range(8):
            expected = tuple(int(np.sign(round(math.cos(math.pi * (c + 2 * g) / 4), 12)))
                             for g in range(4))
            assert sign_vector(c).period4 == expected

    def test_negative_c_wraps(self):
        assert sign_vector(-1) == sign_vector(7)

    def test_expand(self):
        assert sign_vector(1).expand(5).tolist() == [1, -1, -1, 1, 1, -1]

    def test_scale(self):
        assert sign_vector(1).scale(2) == pytest.approx(2**-1.5)
        assert sign_vector(2).scale(3) == pytest.approx(0.25)

    def test_correlation_vector_by_hand(self):
        a = Assignment((0, 1), (1, 0))  # A=(1,-1), B=(-1,1)
        # gamma0: A1A2=-1; gamma1: A1B2 + B1A2 = 1 + 1; gamma2: B1B2 = -1
        assert correlation_vector(a).tolist() == [-1, 2, -1]

    def test_correlation_vector_rejects_d3(self):
        with pytest.raises(RepresentationError):
            correlation_vector(Assignment((2,), (0,)))

    @pytest.mark.parametrize("c", range(8))
    def test_sign_form_exhaustive(self, c):
        for n in range(1, 6):
            s = BellScenario(n, 2, Fraction(c, 4))
            for idx in range(s.n_assignments):
                a = index_to_assignment(idx, n, 2)
                assert eval_sign_form(s, a) == pytest.approx(eval_product(s, a), abs=1e-9)

    def test_sign_form_needs_quarter(self):
        with pytest.raises(UnsupportedPhaseError):
            eval_sign_form(BellScenario(2, 2, "1/3"), Assignment((0, 0), (0, 0)))
        with pytest.raises(RepresentationError):
            eval_sign_form(BellScenario(2, 3), Assignment((0, 0), (0, 0)))
