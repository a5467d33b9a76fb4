"""Local-realistic bounds of GBFs by constraint counting.

When the argument values ``A^gamma_k`` are the same for every ``k`` at fixed
``gamma`` (the "argument terms"), they form an arithmetic sequence in
``gamma`` mod 4d whose common difference is ``4(beta_j - alpha_j) + 2`` for
every site.  The GBF then collapses to ``N + 1`` weighted cotangents:

    G = 2^-N * sum_gamma binom(N, gamma) * s_gamma * cot(pi A^gamma / 4d) - 1

with ``s_gamma = +1`` when ``A^gamma = 1 (mod 4)`` and ``-1`` otherwise.  The
anchored procedure pins the two most degenerate argument terms to the value
making their cotangent ``cot(pi/4d)`` and propagates the rest.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional

import numpy as np

from .errors import DomainError, UnsupportedPhaseError, WitnessNotFoundError
from .representations import eval_product
from .scenario import Assignment, BellScenario, NuLike, argument_table, parse_nu

__all__ = [
    "GammaSelection",
    "ArgumentSequence",
    "BoundReport",
    "select_gammas",
    "max_constraint",
    "propagate_sequence",
    "anchored_sequence",
    "sequence_value",
    "counting_bound",
    "sequence_bound",
    "closed_bound_even",
    "closed_bound_odd",
    "closed_bound",
    "trial_bound",
    "trial_ratios",
    "svetlichny_bound",
    "assignment_for_sequence",
    "witness_assignment",
    "CHSH_QUANTUM",
]

CHSH_QUANTUM = 2.0 * math.sqrt(2.0)


def _cot(x: float) -> float:
    return 1.0 / math.tan(x)


@dataclass(frozen=True)
class GammaSelection:
    """Most degenerate gammas: ``gamma1`` maximises ``binom(N, gamma)``."""

    n_parties: int
    gamma1: tuple
    gamma2: tuple
    parities: dict

    @property
    def anchors(self) -> tuple:
        """Default pair of adjacent gammas, lower one first."""
        if len(self.gamma1) == 2:
            return self.gamma1
        g = self.gamma1[0]
        return (g - 1, g) if g >= 1 else (g, g + 1)


def _parity(g: int) -> str:
    return "even" if g % 2 == 0 else "odd"


def select_gammas(n: int) -> GammaSelection:
    if n < 1:
        raise DomainError(f"N must be >= 1, got {n}")
    if n % 2 == 0:
        g1 = (n // 2,)
        g2 = tuple(g for g in (n // 2 - 1, n // 2 + 1) if 0 <= g <= n)
        parities = {"gamma1": _parity(g1[0]), "gamma2": _parity(g2[0])}
    else:
        g1 = ((n - 1) // 2, (n + 1) // 2)
        g2 = ()
        parities = {"gamma1": "odd and even", "gamma2": None}
    return GammaSelection(n, g1, g2, parities)


def max_constraint(gamma: int, nu: NuLike) -> int:
    """Residue (+1 or -1, mod 4d) at which the ``gamma`` cotangent term is largest.

    The term is ``cot(s * pi A / 4d)`` with ``s = (-1)^(gamma + 2 nu - 1/2)``,
    maximal at ``A = s``.  Requires ``4 nu`` odd.
    """
    nu = parse_nu(nu)
    four_nu = 4 * nu
    if four_nu.denominator != 1 or four_nu.numerator % 2 == 0:
        raise UnsupportedPhaseError(f"max constraint needs odd 4*nu, got nu={nu}")
    exponent = gamma + 2 * nu - Fraction(1, 2)
    return 1 if exponent.numerator % 2 == 0 else -1


@dataclass(frozen=True)
class ArgumentSequence:
    """Argument terms ``A^gamma = anchor_value + (gamma - anchor_gamma) * D`` mod 4d."""

    anchor_gamma: int
    anchor_value: int
    common_difference: int
    modulus: int

    def term(self, gamma: int) -> int:
        return (
            self.anchor_value + (gamma - self.anchor_gamma) * self.common_difference
        ) % self.modulus

    def terms(self, n_parties: int) -> list:
        return [self.term(g) for g in range(n_parties + 1)]


def propagate_sequence(
    anchor: tuple, difference: int, n_parties: int, modulus: int
) -> list:
    """All ``N + 1`` argument terms from one anchor ``(gamma, residue)`` and ``D``."""
    gamma, value = anchor
    return ArgumentSequence(gamma, value % modulus, difference % modulus, modulus).terms(
        n_parties
    )


def anchored_sequence(n: int, d: int, nu: NuLike = Fraction(1, 4), side: int = -1):
    """Sequence fixed by the maximum constraints on the two most degenerate gammas.

    For even ``N`` the partner of ``gamma1 = N/2`` is ``gamma1 + side``; odd ``N``
    has two equally degenerate gammas and ``side`` is ignored.
    """
    sel = select_gammas(n)
    if n % 2 == 0:
        if side not in (-1, 1):
            raise DomainError("side must be -1 or +1")
        g = sel.gamma1[0]
        lo, hi = sorted((g, g + side))
    else:
        lo, hi = sel.gamma1
    m = 4 * d
    p, q = max_constraint(lo, nu), max_constraint(hi, nu)
    return ArgumentSequence(lo, p % m, (q - p) % m, m)


def sequence_value(seq: ArgumentSequence, n: int, d: int) -> float:
    """GBF value of an assignment whose argument terms follow ``seq``."""
    m = 4 * d
    total = 0.0
    for g, a in enumerate(seq.terms(n)):
        if a % 2 == 0:
            raise UnsupportedPhaseError(f"even argument term {a} at gamma={g}")
        sign = 1 if a % 4 == 1 else -1
        total += comb(n, g) * sign * _cot(math.pi * a / m)
    return total / 2**n - 1.0


def counting_bound(n: int, d: int, nu: NuLike = Fraction(1, 4), side: int = -1) -> float:
    """Value of the anchored constraint assignment (see :func:`anchored_sequence`)."""
    return sequence_value(anchored_sequence(n, d, nu, side), n, d)


def sequence_bound(n: int, d: int, nu: NuLike = Fraction(1, 4)):
    """Best GBF value over every realisable constant-in-k argument sequence.

    Realisable sequences are exactly those with ``A^0 = 4 nu (mod 4)`` and
    ``D = 2 (mod 4)``; there are ``d^2`` of them.  Returns ``(value, sequence)``,
    ties broken towards the smallest ``(A^0, D)``.
    """
    nu = parse_nu(nu)
    four_nu = 4 * nu
    if four_nu.denominator != 1 or four_nu.numerator % 2 == 0:
        raise UnsupportedPhaseError(f"sequence bound needs odd 4*nu, got nu={nu}")
    m = 4 * d
    best = None
    for a0 in range(int(four_nu) % 4, m, 4):
        for diff in range(2, m, 4):
            seq = ArgumentSequence(0, a0, diff, m)
            v = sequence_value(seq, n, d)
            if best is None or v > best[0] + 1e-12:
                best = (v, seq)
    return best


def closed_bound_even(n: int, d: int) -> float:
    """Closed form of the anchored ``nu = 1/4`` bound for even ``N``.

    ``2^-N [ sum_{z<N/2} (-1)^z binom(N+1, N/2-z) cot(pi(2z+1)/4d)
    + (-1)^(N/2) cot(pi(N+1)/4d) ] - 1``; the last term is the ``gamma = N``
    argument term ``N + 1``.
    """
    if n < 2 or n % 2:
        raise DomainError(f"closed_bound_even needs even N >= 2, got {n}")
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    h = n // 2
    s = sum(
        (-1) ** z * comb(n + 1, h - z) * _cot(math.pi * (2 * z + 1) / (4 * d))
        for z in range(h)
    )
    s += (-1) ** h * _cot(math.pi * (n + 1) / (4 * d))
    return s / 2**n - 1.0


def closed_bound_odd(n: int, d: int) -> float:
    """``2^-(N-1) sum_{z=0}^{(N-1)/2} (-1)^z binom(N, (N-1)/2 - z) cot(pi(2z+1)/4d) - 1``."""
    if n < 1 or n % 2 == 0:
        raise DomainError(f"closed_bound_odd needs odd N >= 1, got {n}")
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    h = (n - 1) // 2
    s = sum(
        (-1) ** z * comb(n, h - z) * _cot(math.pi * (2 * z + 1) / (4 * d))
        for z in range(h + 1)
    )
    return s / 2 ** (n - 1) - 1.0


def closed_bound(n: int, d: int) -> float:
    return closed_bound_even(n, d) if n % 2 == 0 else closed_bound_odd(n, d)


def trial_bound(d: int) -> float:
    """Every cotangent term at its maximum ``cot(pi/4d)``, ignoring constraints."""
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    return _cot(math.pi / (4 * d)) - 1.0


def trial_ratios(dmax: int):
    """``d``, trial bounds and ``trial/(d - 1)`` ratios for ``d = 2..dmax`` as arrays."""
    if dmax < 2:
        raise DomainError(f"dmax must be >= 2, got {dmax}")
    d = np.arange(2, dmax + 1, dtype=np.int64)
    trial = 1.0 / np.tan(np.pi / (4.0 * d)) - 1.0
    return d, trial, trial / (d - 1.0)


def svetlichny_bound(n: int) -> float:
    """Svetlichny-Collins local bound as a sum of ``cos(pi(2z+1)/4)`` terms.

    Each anchored cotangent term ``(-1)^z cot(pi(2z+1)/8)`` equals
    ``2 cos(pi(2z+1)/4) + 1`` at ``d = 2``; the alternating sign is absorbed by
    the evenness of cosine, so none appears here.
    """
    if n < 2:
        raise DomainError(f"N must be >= 2, got {n}")

    def c(z):
        return math.cos(math.pi * (2 * z + 1) / 4)

    if n % 2 == 0:
        h = n // 2
        s = sum(comb(n + 1, h - z) * c(z) for z in range(h)) + c(h)
        return s / 2 ** ((n - 1) / 2)
    h = (n - 1) // 2
    s = sum(comb(n, h - z) * c(z) for z in range(h + 1))
    return s / 2 ** ((n - 2) / 2)


def assignment_for_sequence(s: BellScenario, seq: ArgumentSequence) -> Assignment:
    """Solve ``A^0 = 4 sum(alpha) + 4 nu`` and ``D = 4 (beta_j - alpha_j) + 2`` mod 4d."""
    d = s.n_outcomes
    a0 = seq.term(0)
    lift = a0 - s.four_nu
    if lift % 4 or (seq.common_difference - 2) % 4:
        raise UnsupportedPhaseError(f"sequence {seq} is not realisable for nu={s.nu}")
    total_alpha = (lift // 4) % d
    shift = ((seq.common_difference - 2) // 4) % d
    alpha = (total_alpha,) + (0,) * (s.n_parties - 1)
    beta = tuple((x + shift) % d for x in alpha)
    return Assignment(alpha, beta)


def witness_assignment(
    s: BellScenario,
    target: Optional[float] = None,
    tol: float = 1e-9,
    random_tries: int = 20000,
    exhaustive_limit: int = 10**7,
    seed: int = 0,
) -> Assignment:
    """Assignment meeting the maximum constraints and attaining ``target``.

    ``target`` defaults to the anchored counting bound.  The analytic solution
    is tried first, then random assignments, then (for small scenarios) every
    assignment in index order.
    """
    if not s.odd_arguments:
        raise UnsupportedPhaseError(f"witness search needs odd 4*nu, got nu={s.nu}")
    n, d = s.n_parties, s.n_outcomes
    seq = anchored_sequence(n, d, s.nu)
    if target is None:
        target = sequence_value(seq, n, d)
    wanted = seq.terms(n)

    def hits(a: Assignment) -> bool:
        table = argument_table(s, a)
        lo = seq.anchor_gamma
        if set(table[lo]) != {wanted[lo]} or set(table[lo + 1]) != {wanted[lo + 1]}:
            return False
        return abs(eval_product(s, a) - target) <= tol

    a = assignment_for_sequence(s, seq)
    if hits(a):
        return a
    rng = random.Random(seed)
    for _ in range(random_tries):
        a = Assignment(
            tuple(rng.randrange(d) for _ in range(n)),
            tuple(rng.randrange(d) for _ in range(n)),
        )
        if hits(a):
            return a
    if s.n_assignments <= exhaustive_limit:
        from .oracle import index_to_assignment

        for idx in range(s.n_assignments):
            a = index_to_assignment(idx, n, d)
            if hits(a):
                return a
    raise WitnessNotFoundError(
        f"no assignment with argument terms {wanted} reaching {target} for {s}"
    )


@dataclass
class BoundReport:
    scenario: BellScenario
    closed_form: Optional[float]
    trial_bound: float
    brute_force: Optional[float] = None
    witnesses: list = field(default_factory=list)
    quantum_reference: Optional[float] = None
    elapsed_ms: int = 0

    def to_dict(self) -> dict:
        s = self.scenario
        return {
            "scenario": {"n": s.n_parties, "d": s.n_outcomes, "nu": str(s.nu)},
            "closed_form": self.closed_form,
            "brute_force": self.brute_force,
            "trial_bound": self.trial_bound,
            "quantum_reference": self.quantum_reference,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "elapsed_ms": self.elapsed_ms,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BoundReport":
        sc = data["scenario"]
        return cls(
            scenario=BellScenario(sc["n"], sc["d"], parse_nu(sc["nu"])),
            closed_form=data["closed_form"],
            trial_bound=data["trial_bound"],
            brute_force=data["brute_force"],
            witnesses=[Assignment.from_dict(w) for w in data["witnesses"]],
            quantum_reference=data["quantum_reference"],
            elapsed_ms=data["elapsed_ms"],
        )
