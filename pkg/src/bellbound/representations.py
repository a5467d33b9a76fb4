"""Equivalent evaluations of the generic Bell function ``G^nu_N``.

Four forms are provided:

* :func:`eval_product` -- direct complex evaluation of the phase product,
* :func:`eval_cosine` -- the triple cosine sum over powers, gammas and ranks,
* :func:`eval_cotangent` -- the power sum collapsed into cotangents
  (odd argument values only),
* :func:`eval_sign_form` -- for ``d = 2`` and ``nu = c/4``, a sign vector
  dotted with the correlation vector.

:class:`GenericBellFunction` bundles the product form with a vectorised batch
evaluator used by the exhaustive oracle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import RepresentationError, UnsupportedPhaseError
from .scenario import Assignment, BellScenario, _combination, subsets

__all__ = [
    "eval_product",
    "eval_cosine",
    "eval_cotangent",
    "dimension_sum",
    "SignVector",
    "sign_vector",
    "correlation_vector",
    "eval_sign_form",
    "GenericBellFunction",
]

# Table of sign-vector periods indexed by c mod 8 (nu = c/4).
_SIGN_PERIODS = {
    0: (1, 0, -1, 0),
    1: (1, -1, -1, 1),
    2: (0, -1, 0, 1),
    3: (-1, -1, 1, 1),
    4: (-1, 0, 1, 0),
    5: (-1, 1, 1, -1),
    6: (0, 1, 0, -1),
    7: (1, 1, -1, -1),
}


def eval_product(s: BellScenario, a: Assignment) -> float:
    """Direct evaluation of ``2^-N sum_n w^{nu n} prod_j (A_j^n + w^{n/2} B_j^n) + c.c.``"""
    s.check(a)
    d = s.n_outcomes
    nu = float(s.nu)
    total = 0j
    for n in range(1, d):
        term = cmath.exp(2j * math.pi * nu * n / d)
        half = cmath.exp(1j * math.pi * n / d)
        for al, be in zip(a.alpha, a.beta):
            term *= cmath.exp(2j * math.pi * n * al / d) + half * cmath.exp(
                2j * math.pi * n * be / d
            )
        total += term
    return 2.0 * total.real / 2**s.n_parties


def eval_cosine(s: BellScenario, a: Assignment) -> float:
    s.check(a)
    d = s.n_outcomes
    four_nu = float(4 * s.nu)
    total = 0.0
    for gamma, _, sites in subsets(s.n_parties):
        arg = 4 * _combination(a.alpha, a.beta, sites) + 2 * gamma + four_nu
        for n in range(1, d):
            total += math.cos(n * math.pi * arg / (2 * d))
    return total / 2 ** (s.n_parties - 1)


def dimension_sum(m: int, r: int, d: int) -> float:
    """Closed form of ``sum_{n=1}^{d-1} cos(n*theta)`` for ``theta = pi(4m+r)/(2d)``.

    ``r = 1`` and ``r = 3`` give ``+cot(theta/2)/2 - 1/2`` and
    ``-cot(theta/2)/2 - 1/2``; ``r = 2`` gives 0; ``r = 0`` gives ``-1`` unless
    theta is a multiple of ``2*pi``, where every cosine is 1.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if r not in (0, 1, 2, 3):
        raise ValueError(f"r must be one of 0..3, got {r}")
    if r == 0:
        return float(d - 1) if m % d == 0 else -1.0
    if r == 2:
        return 0.0
    # cot has period pi, so reduce the half-angle numerator mod 4d first
    half = math.pi * ((4 * m + r) % (4 * d)) / (4 * d)
    cot = 1.0 / math.tan(half)
    return (cot - 1.0) / 2 if r == 1 else (-cot - 1.0) / 2


def eval_cotangent(s: BellScenario, a: Assignment) -> float:
    """Cotangent form; valid only when every argument value is odd.

    Terms with argument ``= 1 (mod 4)`` enter with a plus sign, those with
    ``= 3 (mod 4)`` with a minus sign.
    """
    s.check(a)
    if not s.quarter_class:
        raise RepresentationError(f"cotangent form needs integer 4*nu, got nu={s.nu}")
    four_nu = s.four_nu
    d = s.n_outcomes
    total = 0.0
    for gamma, _, sites in subsets(s.n_parties):
        arg = 4 * _combination(a.alpha, a.beta, sites) + 2 * gamma + four_nu
        if arg % 2 == 0:
            raise RepresentationError(
                f"even argument value {arg} at gamma={gamma}; cotangent form "
                f"does not apply for nu={s.nu}"
            )
        sign = 1 if arg % 4 == 1 else -1
        total += sign / math.tan(math.pi * (arg % (4 * d)) / (4 * d))
    return total / 2**s.n_parties - 1.0


@dataclass(frozen=True)
class SignVector:
    """Period-4 sign pattern of the ``nu = c/4`` GBF at ``d = 2``."""

    c: int
    period4: tuple

    @property
    def odd(self) -> bool:
        return self.c % 2 == 1

    def scale(self, n_parties: int) -> float:
        """Common coefficient magnitude: ``2^-(N-1/2)`` (odd c) or ``2^-(N-1)``."""
        return 2.0 ** -(n_parties - 0.5) if self.odd else 2.0 ** -(n_parties - 1)

    def expand(self, n_parties: int) -> np.ndarray:
        """Length ``N+1`` vector whose entry ``gamma`` is ``period4[gamma % 4]``."""
        return np.array([self.period4[g % 4] for g in range(n_parties + 1)])


def sign_vector(c: int) -> SignVector:
    c %= 8
    return SignVector(c, _SIGN_PERIODS[c])


def correlation_vector(a: Assignment) -> np.ndarray:
    """Entry ``gamma`` sums all products with ``gamma`` B-measurements.

    Outcomes are the exact integers ``A_j = (-1)^alpha_j``, ``B_j = (-1)^beta_j``;
    the vector is the coefficient list of ``prod_j (A_j + x B_j)``.
    """
    if any(x > 1 for x in a.alpha + a.beta):
        raise RepresentationError("correlation vector needs d = 2 residues")
    poly = np.array([1], dtype=np.int64)
    for al, be in zip(a.alpha, a.beta):
        poly = np.convolve(poly, np.array([1 - 2 * al, 1 - 2 * be], dtype=np.int64))
    return poly


def eval_sign_form(s: BellScenario, a: Assignment) -> float:
    if s.n_outcomes != 2:
        raise RepresentationError(f"sign-vector form needs d = 2, got d={s.n_outcomes}")
    if not s.quarter_class:
        raise UnsupportedPhaseError(
            f"sign-vector form needs nu to be a multiple of 1/4, got {s.nu}"
        )
    s.check(a)
    sv = sign_vector(s.four_nu)
    return sv.scale(s.n_parties) * float(sv.expand(s.n_parties) @ correlation_vector(a))


class GenericBellFunction:
    """Callable GBF for one scenario, with a vectorised ``batch`` method.

    ``batch(alpha, beta)`` takes integer arrays of shape ``(M, N)`` and returns
    the ``M`` values; it is the product form evaluated with per-site lookup
    tables, so it agrees with :func:`eval_product` to rounding.
    """

    def __init__(self, scenario: BellScenario, scale: float = 1.0):
        self.scenario = scenario
        self.scale = scale
        d = scenario.n_outcomes
        nu = float(scenario.nu)
        roots = np.exp(2j * np.pi * np.arange(d) / d)
        self._tables = []
        for n in range(1, d):
            site = roots[:, None] ** n + np.exp(1j * np.pi * n / d) * roots[None, :] ** n
            phase = np.exp(2j * np.pi * nu * n / d)
            self._tables.append((phase, site))
        self._norm = 2.0 * scale / 2**scenario.n_parties

    def __call__(self, a: Assignment) -> float:
        return self.scale * eval_product(self.scenario, a)

    def batch(self, alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
        total = np.zeros(alpha.shape[0], dtype=complex)
        for phase, site in self._tables:
            total += phase * np.prod(site[alpha, beta], axis=1)
        return self._norm * total.real

    def __repr__(self):
        return f"GenericBellFunction({self.scenario}, scale={self.scale})"
