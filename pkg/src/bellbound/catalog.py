"""Named (N, 2) Bell functions and their reductions to the generic Bell function.

Every evaluator works on ``d = 2`` assignments through the outcomes
``A_j = (-1)^alpha_j`` and ``B_j = (-1)^beta_j``, either one
:class:`Assignment` at a time or on ``(M, N)`` digit arrays via ``batch``.

The Svetlichny-Collins functions are built from the Collins-normalised Mermin
recursion ``MC_N`` (local bound 1), not from the unnormalised ``M_N``; only
that reading reproduces the tabulated phases and scales.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .bounds import CHSH_QUANTUM
from .errors import DomainError, ReductionMismatchError
from .oracle import decode_indices, index_to_assignment
from .representations import GenericBellFunction, sign_vector
from .scenario import Assignment, BellScenario

__all__ = [
    "NAMES",
    "NamedFunction",
    "Reduction",
    "SignFormCheck",
    "chsh",
    "mermin",
    "svetlichny3",
    "ardehali",
    "mermin_collins",
    "svetlichny_collins",
    "named_function",
    "swap_measurements",
    "reduction_parameters",
    "reduce_to_gbf",
    "fit_scale",
    "sign_form",
    "compare_sign_form",
    "chsh_operator",
    "quantum_reference",
]

log = logging.getLogger(__name__)

NAMES = (
    "chsh",
    "mermin",
    "svetlichny1_3",
    "svetlichny2_3",
    "ardehali",
    "mermin_collins",
    "svetlichny_collins",
)


def _canonical(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    aliases = {"mc": "mermin_collins", "sc": "svetlichny_collins", "s1_3": "svetlichny1_3",
               "s2_3": "svetlichny2_3"}
    key = aliases.get(key, key)
    if key not in NAMES:
        raise DomainError(f"unknown function {name!r}; choose from {', '.join(NAMES)}")
    return key


def _outcomes(alpha: np.ndarray, beta: np.ndarray):
    return 1 - 2 * np.asarray(alpha, dtype=np.int64), 1 - 2 * np.asarray(beta, dtype=np.int64)


@dataclass(frozen=True)
class NamedFunction:
    """A catalog function of ``n_parties`` two-outcome parties.

    ``kernel(A, B)`` maps ``(M, N)`` arrays of ``+-1`` outcomes to ``M`` values.
    """

    name: str
    n_parties: int
    kernel: Callable

    def batch(self, alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
        A, B = _outcomes(alpha, beta)
        return np.asarray(self.kernel(A, B), dtype=float)

    def __call__(self, a: Assignment) -> float:
        if a.n_parties != self.n_parties:
            raise DomainError(f"{self.name} has {self.n_parties} parties, got {a.n_parties}")
        if any(x > 1 for x in a.alpha + a.beta):
            raise DomainError("catalog functions take d = 2 residues")
        return float(self.batch(np.array([a.alpha]), np.array([a.beta]))[0])

    @property
    def scenario(self) -> BellScenario:
        return BellScenario(self.n_parties, 2, reduction_parameters(self.name, self.n_parties)[0])


def swap_measurements(f: NamedFunction) -> NamedFunction:
    """The primed function: ``A_j`` and ``B_j`` exchanged at every site."""
    name = f.name[:-1] if f.name.endswith("'") else f.name + "'"
    return NamedFunction(name, f.n_parties, lambda A, B, k=f.kernel: k(B, A))


def _chsh_kernel(A, B):
    return A[:, 0] * A[:, 1] + A[:, 0] * B[:, 1] + B[:, 0] * A[:, 1] - B[:, 0] * B[:, 1]


def chsh() -> NamedFunction:
    return NamedFunction("chsh", 2, _chsh_kernel)


def _mermin_kernel(A, B):
    plus = np.prod(A + 1j * B, axis=1)
    minus = np.prod(A - 1j * B, axis=1)
    return ((plus - minus) / 2j).real


def mermin(n: int) -> NamedFunction:
    """``M_N = (1/2i)[prod (A_j + i B_j) - prod (A_j - i B_j)]``."""
    if n < 1:
        raise DomainError(f"N must be >= 1, got {n}")
    return NamedFunction("mermin", n, _mermin_kernel)


_S3_SIGNS = {
    # coefficient of the product with B at the given sites
    1: {(): 1, (0,): 1, (1,): 1, (2,): 1, (0, 1): -1, (0, 2): -1, (1, 2): -1, (0, 1, 2): -1},
    2: {(): 1, (0,): -1, (1,): -1, (2,): -1, (0, 1): -1, (0, 2): -1, (1, 2): -1, (0, 1, 2): 1},
}


def svetlichny3(variant: int) -> NamedFunction:
    if variant not in _S3_SIGNS:
        raise DomainError(f"variant must be 1 or 2, got {variant}")
    signs = _S3_SIGNS[variant]

    def kernel(A, B):
        total = np.zeros(A.shape[0])
        for sites, coef in signs.items():
            term = np.ones(A.shape[0])
            for j in range(3):
                term = term * (B[:, j] if j in sites else A[:, j])
            total += coef * term
        return total

    return NamedFunction(f"svetlichny{variant}_3", 3, kernel)


def _correlations(A, B) -> np.ndarray:
    """Correlation vectors, shape ``(M, N+1)``: entry gamma sums products with gamma B's."""
    out = np.ones((A.shape[0], 1))
    for j in range(A.shape[1]):
        nxt = np.zeros((A.shape[0], out.shape[1] + 1))
        nxt[:, :-1] += out * A[:, j : j + 1]
        nxt[:, 1:] += out * B[:, j : j + 1]
        out = nxt
    return out


def _pattern(period, length):
    return np.array([period[g % 4] for g in range(length)], dtype=float)


def ardehali(n: int) -> NamedFunction:
    """``(-,0,+,0,...) . C_{N-1} sqrt2 A_N + (0,+,0,-,...) . C_{N-1} sqrt2 B_N``."""
    if n < 2:
        raise DomainError(f"N must be >= 2, got {n}")

    def kernel(A, B):
        corr = _correlations(A[:, :-1], B[:, :-1])
        first = corr @ _pattern((-1, 0, 1, 0), n)
        second = corr @ _pattern((0, 1, 0, -1), n)
        return math.sqrt(2) * (first * A[:, -1] + second * B[:, -1])

    return NamedFunction("ardehali", n, kernel)


def _mc_kernel(A, B):
    n = A.shape[1]
    if n == 1:
        return A[:, 0].astype(float)
    head = _mc_kernel(A[:, :-1], B[:, :-1])
    head_primed = _mc_kernel(B[:, :-1], A[:, :-1])
    return 0.5 * head * (A[:, -1] + B[:, -1]) + 0.5 * head_primed * (A[:, -1] - B[:, -1])


def mermin_collins(n: int) -> NamedFunction:
    """``MC_N = MC_{N-1}(A_N + B_N)/2 + MC'_{N-1}(A_N - B_N)/2``, ``MC_1 = A_1``."""
    if n < 1:
        raise DomainError(f"N must be >= 1, got {n}")
    return NamedFunction("mermin_collins", n, _mc_kernel)


def svetlichny_collins(n: int) -> NamedFunction:
    """``MC_N`` for even ``N``; ``(MC_N + MC'_N)/2`` for odd ``N``."""
    if n < 2:
        raise DomainError(f"N must be >= 2, got {n}")
    if n % 2 == 0:
        return NamedFunction("svetlichny_collins", n, _mc_kernel)
    return NamedFunction(
        "svetlichny_collins", n, lambda A, B: 0.5 * (_mc_kernel(A, B) + _mc_kernel(B, A))
    )


def named_function(name: str, n: Optional[int] = None) -> NamedFunction:
    key = _canonical(name)
    fixed = {"chsh": 2, "svetlichny1_3": 3, "svetlichny2_3": 3}
    if key in fixed:
        if n is not None and n != fixed[key]:
            raise DomainError(f"{key} is defined for N={fixed[key]} only, got N={n}")
        return {"chsh": chsh, "svetlichny1_3": lambda: svetlichny3(1),
                "svetlichny2_3": lambda: svetlichny3(2)}[key]()
    if n is None:
        raise DomainError(f"{key} needs N")
    return {"mermin": mermin, "ardehali": ardehali, "mermin_collins": mermin_collins,
            "svetlichny_collins": svetlichny_collins}[key](n)


def reduction_parameters(name: str, n: int):
    """``(nu, log2_scale)`` such that ``f = 2^log2_scale * G^nu_N``."""
    key = _canonical(name)
    if key == "chsh":
        return Fraction(-1, 4), Fraction(3, 2)
    if key == "mermin":
        return Fraction(-1, 2), Fraction(n - 1)
    if key == "svetlichny1_3":
        return Fraction(-1, 4), Fraction(5, 2)
    if key == "svetlichny2_3":
        return Fraction(1, 4), Fraction(5, 2)
    if key == "ardehali":
        return Fraction(1), Fraction(2 * n - 1, 2)
    if key == "mermin_collins" or (key == "svetlichny_collins" and n % 2 == 0):
        return Fraction(1 - n, 4), Fraction(n - 1, 2)
    return Fraction(-n, 4), Fraction(n - 2, 2)


@dataclass
class Reduction:
    name: str
    n_parties: int
    nu: Fraction
    log2_scale: Fraction
    verified: Optional[bool]
    max_residual: Optional[float] = None
    fitted_scale: Optional[float] = None

    @property
    def scale(self) -> float:
        return 2.0 ** float(self.log2_scale)

    @property
    def gbf_form(self) -> BellScenario:
        return BellScenario(self.n_parties, 2, self.nu)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n_parties,
            "nu": str(self.nu),
            "log2_scale": str(self.log2_scale),
            "scale": self.scale,
            "verified": self.verified,
            "max_residual": self.max_residual,
            "fitted_scale": self.fitted_scale,
        }


def _all_d2(n: int):
    return decode_indices(0, 4**n, n, 2)


def fit_scale(f: NamedFunction, nu) -> tuple:
    """Least-squares ``s`` in ``f ~ s * G^nu_N`` over all assignments, and the max residual."""
    alpha, beta = _all_d2(f.n_parties)
    fv = f.batch(alpha, beta)
    gv = GenericBellFunction(BellScenario(f.n_parties, 2, nu)).batch(alpha, beta)
    den = float(gv @ gv)
    s = float(fv @ gv) / den if den else float("nan")
    return s, float(np.max(np.abs(fv - s * gv)))


def reduce_to_gbf(name: str, n: Optional[int] = None, verify: bool = True,
                  tol: float = 1e-9) -> Reduction:
    """Tabulated ``(nu, scale)`` for a named function, checked at every assignment.

    Raises :class:`ReductionMismatchError` with the first counterexample when the
    pointwise comparison fails.
    """
    f = named_function(name, n)
    n = f.n_parties
    nu, log2_scale = reduction_parameters(f.name, n)
    red = Reduction(f.name, n, nu, log2_scale, None)
    if not verify:
        return red
    if n > 8:
        raise DomainError(f"pointwise verification is limited to N <= 8, got {n}")
    alpha, beta = _all_d2(n)
    fv = f.batch(alpha, beta)
    gv = red.scale * GenericBellFunction(red.gbf_form).batch(alpha, beta)
    diff = np.abs(fv - gv)
    red.max_residual = float(diff.max())
    red.fitted_scale, _ = fit_scale(f, nu)
    if red.max_residual > tol:
        first = int(np.flatnonzero(diff > tol)[0])
        a = index_to_assignment(first, n, 2)
        red.verified = False
        raise ReductionMismatchError(
            f"{f.name} (N={n}) != 2^{log2_scale} G^{nu}_{n} at {a}: "
            f"{fv[first]} vs {gv[first]}",
            counterexample=a,
        )
    red.verified = True
    log.debug("%s N=%d: fitted scale %.12g, tabulated %.12g", f.name, n,
              red.fitted_scale, red.scale)
    return red


# Sign-vector forms (c, log2 coefficient) as tabulated alongside the reductions.
def _sign_form_parameters(key: str, n: int):
    if key == "chsh":
        return -1, Fraction(0)
    if key == "mermin":
        return -2, Fraction(0)
    if key == "svetlichny1_3":
        return -1, Fraction(0)
    if key == "svetlichny2_3":
        return 1, Fraction(0)
    if key == "ardehali":
        return 4, Fraction(1, 2)
    if key == "mermin_collins" or (key == "svetlichny_collins" and n % 2 == 0):
        return 1 - n, Fraction(-n, 2)
    return -n, Fraction(-(n + 1), 2)


def sign_form(name: str, n: Optional[int] = None) -> NamedFunction:
    """``coefficient * S^{c/4} . C_N`` with the tabulated coefficient."""
    f = named_function(name, n)
    c, log2_coef = _sign_form_parameters(f.name, f.n_parties)
    signs = sign_vector(c).expand(f.n_parties).astype(float)
    coef = 2.0 ** float(log2_coef)
    return NamedFunction(f"{f.name}[sign]", f.n_parties,
                         lambda A, B: coef * (_correlations(A, B) @ signs))


@dataclass
class SignFormCheck:
    name: str
    n_parties: int
    proportional: bool
    ratio: float
    flagged: bool
    max_residual: float

    @property
    def exact(self) -> bool:
        return self.proportional and abs(self.ratio - 1.0) < 1e-9


def compare_sign_form(name: str, n: Optional[int] = None, tol: float = 1e-9) -> SignFormCheck:
    """Compare a function with its sign-vector form up to one overall factor.

    Both sides are normalised by their value at the all-zero assignment; when
    that value is zero the check is flagged and the first assignment where the
    sign form is nonzero is used instead.
    """
    f = named_function(name, n)
    g = sign_form(name, n)
    alpha, beta = _all_d2(f.n_parties)
    fv = f.batch(alpha, beta)
    gv = g.batch(alpha, beta)
    flagged = bool(abs(gv[0]) < tol)
    ref = 0 if not flagged else int(np.flatnonzero(np.abs(gv) > tol)[0])
    ratio = float(fv[ref] / gv[ref])
    resid = float(np.max(np.abs(fv - ratio * gv)))
    return SignFormCheck(f.name, f.n_parties, resid <= tol, ratio, flagged, resid)


_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)


def chsh_operator() -> np.ndarray:
    """Optimal CHSH Bell operator as a 4x4 matrix.

    ``e^{-i pi/4}/sqrt2 (sx + i sy) (x) (e^{i pi/4} sx + e^{-i pi/4} sy) + h.c.``
    which equals ``2 sqrt2 (s+ s- + s- s+)``.
    """
    w = np.exp(-1j * np.pi / 4)
    left = _SX + 1j * _SY
    right = np.conj(w) * _SX + w * _SY
    half = w / math.sqrt(2) * np.kron(left, right)
    return half + half.conj().T


def quantum_reference(target, validate: bool = False) -> float:
    """``2 sqrt2`` for CHSH; ``d - 1`` for a GBF scenario.

    With ``validate`` the CHSH value is checked against the largest eigenvalue
    of :func:`chsh_operator`.
    """
    if isinstance(target, BellScenario):
        return float(target.n_outcomes - 1)
    if isinstance(target, str) and _canonical(target) == "chsh":
        if validate:
            top = float(np.linalg.eigvalsh(chsh_operator()).max())
            if abs(top - CHSH_QUANTUM) > 1e-12:
                raise ReductionMismatchError(f"CHSH operator eigenvalue {top} != 2 sqrt2")
        return CHSH_QUANTUM
    raise DomainError(f"no quantum reference for {target!r}")
