"""Core types: Bell scenarios, LHV assignments, subset ranking, argument values.

Site indices are 1-based throughout, matching the usual ``alpha_1 ... alpha_N``
labelling.  Combination functions ``C^gamma_k`` are indexed by the number of
beta-type parameters ``gamma`` and a 1-based rank ``k`` into the
lexicographically ordered size-``gamma`` subsets of ``{1, ..., N}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence, Union

from .errors import DomainError, UnsupportedPhaseError

__all__ = [
    "BellScenario",
    "Assignment",
    "parse_nu",
    "subset_from_rank",
    "rank_from_subset",
    "subsets",
    "combination_value",
    "argument_value",
    "argument_table",
    "symmetric_residue",
]

NuLike = Union[Fraction, int, str]


def parse_nu(value: NuLike) -> Fraction:
    """Parse ``"c/4"``, ``"-3/4"``, ``"2"`` or a number into a reduced Fraction.

    Floats are rejected: the quarter-class test must be exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise UnsupportedPhaseError(f"nu must be exact, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UnsupportedPhaseError(f"cannot parse nu from {value!r}") from exc


@dataclass(frozen=True)
class BellScenario:
    """An ``(N, d, nu)`` generic Bell function instance."""

    n_parties: int
    n_outcomes: int
    nu: Fraction = Fraction(1, 4)

    def __post_init__(self):
        if int(self.n_parties) != self.n_parties or self.n_parties < 1:
            raise DomainError(f"n_parties must be >= 1, got {self.n_parties}")
        if int(self.n_outcomes) != self.n_outcomes or self.n_outcomes < 2:
            raise DomainError(f"n_outcomes must be >= 2, got {self.n_outcomes}")
        object.__setattr__(self, "nu", parse_nu(self.nu))

    @property
    def quarter_class(self) -> bool:
        """True when ``nu = c/4`` for an integer ``c``."""
        return (4 * self.nu).denominator == 1

    @property
    def four_nu(self) -> int:
        if not self.quarter_class:
            raise UnsupportedPhaseError(f"4*nu is not an integer for nu={self.nu}")
        return int(4 * self.nu)

    @property
    def quarter_residue(self) -> int:
        """``c mod 8`` for ``nu = c/4``."""
        return self.four_nu % 8

    @property
    def odd_arguments(self) -> bool:
        """True when every argument value ``4C + 2*gamma + 4*nu`` is odd."""
        return self.quarter_class and self.four_nu % 2 == 1

    @property
    def modulus(self) -> int:
        return 4 * self.n_outcomes

    @property
    def n_assignments(self) -> int:
        return self.n_outcomes ** (2 * self.n_parties)

    def check(self, a: "Assignment") -> "Assignment":
        """Raise DomainError unless ``a`` is a valid assignment for this scenario."""
        if len(a.alpha) != self.n_parties or len(a.beta) != self.n_parties:
            raise DomainError(
                f"assignment has {len(a.alpha)}/{len(a.beta)} sites, "
                f"scenario has N={self.n_parties}"
            )
        d = self.n_outcomes
        if any(not 0 <= x < d for x in a.alpha + a.beta):
            raise DomainError(f"assignment entries must be residues mod {d}: {a}")
        return a

    def __str__(self):
        return f"N={self.n_parties}, d={self.n_outcomes}, nu={self.nu}"


@dataclass(frozen=True)
class Assignment:
    """Deterministic local strategy: outcome residues ``alpha_j``, ``beta_j``."""

    alpha: tuple
    beta: tuple

    def __post_init__(self):
        alpha = tuple(int(x) for x in self.alpha)
        beta = tuple(int(x) for x in self.beta)
        if len(alpha) != len(beta):
            raise DomainError("alpha and beta must have the same length")
        if any(x < 0 for x in alpha + beta):
            raise DomainError("assignment entries must be nonnegative residues")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def n_parties(self) -> int:
        return len(self.alpha)

    def swapped(self) -> "Assignment":
        """Exchange the roles of the two measurements at every site."""
        return Assignment(self.beta, self.alpha)

    def to_dict(self) -> dict:
        return {"alpha": list(self.alpha), "beta": list(self.beta)}

    @classmethod
    def from_dict(cls, data: dict) -> "Assignment":
        return cls(tuple(data["alpha"]), tuple(data["beta"]))


def _check_gamma_k(n: int, gamma: int, k: int):
    if n < 0:
        raise DomainError(f"N must be nonnegative, got {n}")
    if not 0 <= gamma <= n:
        raise DomainError(f"gamma must lie in [0, {n}], got {gamma}")
    if not 1 <= k <= comb(n, gamma):
        raise DomainError(f"k must lie in [1, {comb(n, gamma)}], got {k}")


def subset_from_rank(n: int, gamma: int, k: int) -> tuple:
    """Return the ``k``-th (1-based) size-``gamma`` subset of ``{1..n}``.

    Subsets are ordered lexicographically on their sorted site lists, so the
    subset holding a beta at the lowest differing site comes first.

    >>> subset_from_rank(4, 2, 1), subset_from_rank(4, 2, 6)
    ((1, 2), (3, 4))
    """
    _check_gamma_k(n, gamma, k)
    r = k - 1
    out = []
    x = 1
    for i in range(1, gamma + 1):
        while r >= comb(n - x, gamma - i):
            r -= comb(n - x, gamma - i)
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def rank_from_subset(n: int, subset) -> int:
    """Inverse of :func:`subset_from_rank`."""
    s = sorted(set(subset))
    if len(s) != len(tuple(subset)):
        raise DomainError(f"repeated site index in {subset!r}")
    if s and (s[0] < 1 or s[-1] > n):
        raise DomainError(f"site indices must lie in [1, {n}], got {subset!r}")
    gamma = len(s)
    r = 0
    prev = 0
    for i, x in enumerate(s, start=1):
        for y in range(prev + 1, x):
            r += comb(n - y, gamma - i)
        prev = x
    return r + 1


@lru_cache(maxsize=None)
def _subset_list(n: int, gamma: int) -> tuple:
    return tuple(subset_from_rank(n, gamma, k) for k in range(1, comb(n, gamma) + 1))


def subsets(n: int) -> Iterator[tuple]:
    """Yield ``(gamma, k, sites)`` for every combination function of ``n`` parties."""
    for gamma in range(n + 1):
        for k, sites in enumerate(_subset_list(n, gamma), start=1):
            yield gamma, k, sites


def _combination(alpha: Sequence[int], beta: Sequence[int], sites) -> int:
    picked = set(sites)
    return sum(b if j in picked else a for j, (a, b) in enumerate(zip(alpha, beta), 1))


def combination_value(a: Assignment, gamma: int, k: int) -> int:
    """``C^gamma_k``: alphas off the ranked subset plus betas on it (not reduced)."""
    sites = subset_from_rank(a.n_parties, gamma, k)
    return _combination(a.alpha, a.beta, sites)


def argument_value(s: BellScenario, a: Assignment, gamma: int, k: int) -> int:
    """``(4C^gamma_k + 2*gamma + 4*nu) mod 4d``; requires integer ``4*nu``."""
    four_nu = s.four_nu
    return (4 * combination_value(a, gamma, k) + 2 * gamma + four_nu) % s.modulus


def argument_table(s: BellScenario, a: Assignment) -> list:
    """All argument values, ``table[gamma][k-1]``, each reduced mod 4d."""
    s.check(a)
    four_nu = s.four_nu
    m = s.modulus
    table = [[] for _ in range(s.n_parties + 1)]
    for gamma, _, sites in subsets(s.n_parties):
        c = _combination(a.alpha, a.beta, sites)
        table[gamma].append((4 * c + 2 * gamma + four_nu) % m)
    return table


def symmetric_residue(x: int, modulus: int) -> int:
    """Representative of ``x`` in ``(-modulus/2, modulus/2]``."""
    r = x % modulus
    if r > modulus // 2:
        r -= modulus
    return r
