import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bellbound.errors import BudgetExceededError, DomainError
from bellbound.oracle import (
    SearchResult,
    assignment_to_index,
    brute_force_max,
    decode_indices,
    index_to_assignment,
    verify_constraints,
)
from bellbound.representations import GenericBellFunction, eval_product
from bellbound.scenario import Assignment, BellScenario


def naive_max(s):
    """Nested-loop reference maximum."""
    d, n = s.n_outcomes, s.n_parties
    best = -np.inf
    for digits in itertools.product(range(d), repeat=2 * n):
        best = max(best, eval_product(s, Assignment(digits[:n], digits[n:])))
    return best


class TestIndexing:
    @given(st.integers(1, 5), st.integers(2, 5), st.data())
    def test_round_trip(self, n, d, data):
        idx = data.draw(st.integers(0, d ** (2 * n) - 1))
        a = index_to_assignment(idx, n, d)
        assert assignment_to_index(a, d) == idx

    def test_alpha_digits_first(self):
        assert index_to_assignment(1, 2, 3) == Assignment((1, 0), (0, 0))
        assert index_to_assignment(9, 2, 3) == Assignment((0, 0), (1, 0))

    def test_decode_matches_scalar(self):
        alpha, beta = decode_indices(5, 40, 2, 3)
        for i, idx in enumerate(range(5, 40)):
            a = index_to_assignment(idx, 2, 3)
            assert tuple(alpha[i]) == a.alpha and tuple(beta[i]) == a.beta

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            index_to_assignment(16, 2, 2)


class TestBruteForce:
    @pytest.mark.parametrize("n, d, nu", [(2, 2, "1/4"), (2, 3, "1/3"), (3, 2, "-1/2"), (2, 4, "3/4")])
    def test_matches_naive(self, n, d, nu):
        s = BellScenario(n, d, nu)
        assert brute_force_max(s).max_value == pytest.approx(naive_max(s), abs=1e-12)

    def test_deterministic_across_threads_and_chunks(self):
        s = BellScenario(4, 3, "1/4")
        ref = brute_force_max(s, threads=1)
        for threads, chunk in [(2, 1000), (4, 777), (3, 1 << 17)]:
            r = brute_force_max(s, threads=threads, chunk=chunk)
            assert r.max_value == ref.max_value
            assert r.argmax == ref.argmax
            assert r.argmax_count == ref.argmax_count

    def test_witnesses_sorted_and_capped(self):
        s = BellScenario(4, 3)
        r = brute_force_max(s, witness_cap=5, chunk=100)
        assert len(r.argmax) == 5
        idx = [assignment_to_index(a, 3) for a in r.argmax]
        assert idx == sorted(idx)
        full = brute_force_max(s, witness_cap=10**6)
        assert full.argmax[:5] == r.argmax
        assert full.argmax_count == len(full.argmax) == r.argmax_count

    def test_every_witness_attains_max(self):
        s = BellScenario(3, 3)
        r = brute_force_max(s, witness_cap=1000)
        for a in r.argmax:
            assert eval_product(s, a) == pytest.approx(r.max_value, abs=1e-12)

    def test_budget(self):
        with pytest.raises(BudgetExceededError) as info:
            brute_force_max(BellScenario(3, 3), budget=100)
        assert info.value.required == 3**6

    def test_scalar_evaluator(self):
        s = BellScenario(2, 2)
        r = brute_force_max(s, lambda a: -sum(a.alpha) - sum(a.beta))
        assert r.max_value == 0
        assert r.argmax == [Assignment((0, 0), (0, 0))]

    def test_scaled_chsh(self):
        s = BellScenario(2, 2, "-1/4")
        r = brute_force_max(s, GenericBellFunction(s, scale=2**1.5))
        assert r.max_value == pytest.approx(2.0, abs=1e-12)
        assert r.assignments_scanned == 16

    @pytest.mark.parametrize("n, d, nu", [(3, 3, "1/4"), (3, 3, "1/3"), (2, 5, "-1/2"), (4, 2, "-3/4")])
    def test_symmetry_reduction_is_exact(self, n, d, nu):
        s = BellScenario(n, d, nu)
        full = brute_force_max(s)
        red = brute_force_max(s, reduce_symmetry=True)
        assert red.max_value == pytest.approx(full.max_value, abs=1e-12)
        assert red.assignments_scanned == d ** (n + 1)
        for a in red.argmax:
            assert a.alpha[:-1] == (0,) * (n - 1)
            assert eval_product(s, a) == pytest.approx(full.max_value, abs=1e-12)

    def test_result_round_trip(self):
        r = brute_force_max(BellScenario(2, 2))
        assert SearchResult.from_dict(r.to_dict()) == r


class TestConstraints:
    def test_witness_structure(self):
        s = BellScenario(2, 2, Fraction(1, 4))
        rep = verify_constraints(s, Assignment((1, 1), (0, 0)))
        assert rep.ok
        assert rep.terms == [1, 7, 5]
        assert rep.difference == -2

    def test_varies_in_k(self):
        s = BellScenario(2, 3)
        rep = verify_constraints(s, Assignment((0, 1), (0, 0)))
        assert not rep.constant_in_k and not rep.ok
        assert rep.notes
