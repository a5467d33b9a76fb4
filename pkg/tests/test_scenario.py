import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from bellbound.errors import DomainError, UnsupportedPhaseError
from bellbound.scenario import (
    Assignment,
    BellScenario,
    argument_table,
    argument_value,
    combination_value,
    parse_nu,
    rank_from_subset,
    subset_from_rank,
    subsets,
    symmetric_residue,
)


class TestParseNu:
    @pytest.mark.parametrize(
        "text, expected",
        [("1/4", Fraction(1, 4)), ("-3/4", Fraction(-3, 4)), ("2/8", Fraction(1, 4)),
         ("2", Fraction(2)), (" 1/3 ", Fraction(1, 3)), (-1, Fraction(-1))],
    )
    def test_accepts_exact_forms(self, text, expected):
        assert parse_nu(text) == expected

    @pytest.mark.parametrize("bad", [0.25, "a/4", "1/0", True])
    def test_rejects(self, bad):
        with pytest.raises(UnsupportedPhaseError):
            parse_nu(bad)


class TestBellScenario:
    def test_quarter_class(self):
        assert BellScenario(3, 2, "1/4").odd_arguments
        assert BellScenario(3, 2, "-1/2").quarter_class
        assert not BellScenario(3, 2, "-1/2").odd_arguments
        assert not BellScenario(3, 2, "1/3").quarter_class

    def test_four_nu_requires_quarter(self):
        with pytest.raises(UnsupportedPhaseError):
            BellScenario(2, 3, "1/3").four_nu

    @pytest.mark.parametrize("n, d", [(0, 2), (2, 1), (-1, 3)])
    def test_domain(self, n, d):
        with pytest.raises(DomainError):
            BellScenario(n, d)

    def test_check_rejects_out_of_range(self):
        s = BellScenario(2, 3)
        with pytest.raises(DomainError):
            s.check(Assignment((0, 3), (0, 0)))
        with pytest.raises(DomainError):
            s.check(Assignment((0,), (0,)))

    def test_counts(self):
        s = BellScenario(3, 4)
        assert s.modulus == 16
        assert s.n_assignments == 4**6


class TestAssignment:
    def test_round_trip(self):
        a = Assignment((1, 0, 2), (0, 2, 1))
        assert Assignment.from_dict(a.to_dict()) == a

    def test_swapped(self):
        a = Assignment((1, 0), (0, 1))
        assert a.swapped() == Assignment((0, 1), (1, 0))

    def test_length_mismatch(self):
        with pytest.raises(DomainError):
            Assignment((0, 1), (0,))


class TestSubsetRanking:
    def test_examples(self):
        assert subset_from_rank(4, 2, 1) == (1, 2)
        assert subset_from_rank(4, 2, 6) == (3, 4)
        assert subset_from_rank(3, 0, 1) == ()
        assert subset_from_rank(5, 5, 1) == (1, 2, 3, 4, 5)

    @pytest.mark.parametrize("n", range(0, 9))
    def test_matches_itertools_order(self, n):
        # itertools.combinations yields subsets in the same lexicographic order
        for gamma in range(n + 1):
            expected = list(itertools.combinations(range(1, n + 1), gamma))
            got = [subset_from_rank(n, gamma, k) for k in range(1, comb(n, gamma) + 1)]
            assert got == expected

    @given(st.integers(0, 20).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(0, n)).flatmap(
            lambda t: st.tuples(st.just(t[0]), st.just(t[1]), st.integers(1, comb(t[0], t[1])))
        )
    ))
    def test_rank_inverts_unrank(self, args):
        n, gamma, k = args
        assert rank_from_subset(n, subset_from_rank(n, gamma, k)) == k

    @pytest.mark.parametrize("args", [(3, 4, 1), (3, 1, 0), (3, 1, 4), (-1, 0, 1)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            subset_from_rank(*args)

    def test_rank_rejects_bad_sites(self):
        with pytest.raises(DomainError):
            rank_from_subset(3, (0, 1))
        with pytest.raises(DomainError):
            rank_from_subset(3, (1, 1))

    def test_subsets_enumeration_size(self):
        assert sum(1 for _ in subsets(6)) == 2**6


class TestArgumentValues:
    def test_combination_value(self):
        a = Assignment((1, 2, 3), (10, 20, 30))
        # gamma=1, k=2 -> B at site 2
        assert combination_value(a, 1, 2) == 1 + 20 + 3
        assert combination_value(a, 3, 1) == 60

    def test_chsh_witness_arguments(self):
        s = BellScenario(2, 2, Fraction(1, 4))
        table = argument_table(s, Assignment((1, 1), (0, 0)))
        assert table == [[1], [7, 7], [5]]

    @given(st.integers(2, 5), st.integers(2, 5), st.data())
    def test_table_matches_pointwise(self, n, d, data):
        s = BellScenario(n, d, Fraction(1, 4))
        digits = st.lists(st.integers(0, d - 1), min_size=n, max_size=n)
        a = Assignment(tuple(data.draw(digits)), tuple(data.draw(digits)))
        table = argument_table(s, a)
        for gamma in range(n + 1):
            for k in range(1, comb(n, gamma) + 1):
                assert table[gamma][k - 1] == argument_value(s, a, gamma, k)
                assert table[gamma][k - 1] % 2 == 1

    @pytest.mark.parametrize("x, m, r", [(0, 8, 0), (4, 8, 4), (5, 8, -3), (-2, 8, -2), (15, 16, -1)])
    def test_symmetric_residue(self, x, m, r):
        assert symmetric_residue(x, m) == r
