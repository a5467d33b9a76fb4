"""Exhaustive local-hidden-variable search over all ``d^(2N)`` assignments.

Assignments are indexed in mixed radix ``d``: digits ``0..N-1`` are the alphas
and digits ``N..2N-1`` the betas, least significant digit first.  The index
range is cut into fixed-size contiguous partitions that are scanned
independently (optionally on a thread pool) and merged in index order, so the
result does not depend on the thread count.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import BudgetExceededError, DomainError
from .representations import GenericBellFunction
from .scenario import Assignment, BellScenario, argument_table, symmetric_residue

__all__ = [
    "DEFAULT_BUDGET",
    "DEFAULT_WITNESS_CAP",
    "SearchTask",
    "SearchResult",
    "ConstraintReport",
    "index_to_assignment",
    "assignment_to_index",
    "decode_indices",
    "make_tasks",
    "brute_force_max",
    "verify_constraints",
    "default_threads",
]

DEFAULT_BUDGET = 10**8
DEFAULT_WITNESS_CAP = 64
ARGMAX_RTOL = 1e-12
CHUNK = 1 << 17


def default_threads() -> int:
    env = os.environ.get("BELLBOUND_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def index_to_assignment(idx: int, n: int, d: int) -> Assignment:
    total = d ** (2 * n)
    if not 0 <= idx < total:
        raise DomainError(f"index {idx} outside [0, {total})")
    digits = []
    for _ in range(2 * n):
        idx, r = divmod(idx, d)
        digits.append(r)
    return Assignment(tuple(digits[:n]), tuple(digits[n:]))


def assignment_to_index(a: Assignment, d: int) -> int:
    idx = 0
    for digit in reversed(a.alpha + a.beta):
        idx = idx * d + digit
    return idx


def decode_indices(start: int, stop: int, n: int, d: int):
    """Alpha and beta digit arrays, each ``(stop - start, n)``, for an index range."""
    idx = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((idx.size, 2 * n), dtype=np.int64)
    for j in range(2 * n):
        idx, digits[:, j] = np.divmod(idx, d)
    return digits[:, :n], digits[:, n:]


@dataclass(frozen=True)
class SearchTask:
    scenario: BellScenario
    evaluator: Callable
    start: int
    stop: int


@dataclass
class SearchResult:
    max_value: float
    argmax: list
    assignments_scanned: int
    argmax_count: int
    elapsed_ms: int = 0
    reduced: bool = False

    def to_dict(self) -> dict:
        return {
            "max_value": self.max_value,
            "argmax": [a.to_dict() for a in self.argmax],
            "assignments_scanned": self.assignments_scanned,
            "argmax_count": self.argmax_count,
            "elapsed_ms": self.elapsed_ms,
            "reduced": self.reduced,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SearchResult":
        return cls(
            max_value=data["max_value"],
            argmax=[Assignment.from_dict(w) for w in data["argmax"]],
            assignments_scanned=data["assignments_scanned"],
            argmax_count=data["argmax_count"],
            elapsed_ms=data.get("elapsed_ms", 0),
            reduced=data.get("reduced", False),
        )


@dataclass
class _Partial:
    max_value: float
    indices: list
    count: int
    scanned: int


def _tolerance(value: float) -> float:
    return ARGMAX_RTOL * max(1.0, abs(value))


def _evaluate(evaluator, alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    batch = getattr(evaluator, "batch", None)
    if batch is not None:
        return np.asarray(batch(alpha, beta), dtype=float)
    return np.array(
        [evaluator(Assignment(tuple(a), tuple(b))) for a, b in zip(alpha, beta)],
        dtype=float,
    )


def _reduced_digits(start: int, stop: int, n: int, d: int):
    # reduced index digits: alpha_N, beta_1..beta_N; alpha_1..alpha_{N-1} = 0
    idx = np.arange(start, stop, dtype=np.int64)
    a_last = idx % d
    rest = idx // d
    beta = np.empty((idx.size, n), dtype=np.int64)
    for j in range(n):
        rest, beta[:, j] = np.divmod(rest, d)
    alpha = np.zeros((idx.size, n), dtype=np.int64)
    alpha[:, n - 1] = a_last
    return alpha, beta


def _scan(task: SearchTask, cap: int, reduced: bool) -> _Partial:
    s = task.scenario
    n, d = s.n_parties, s.n_outcomes
    if reduced:
        alpha, beta = _reduced_digits(task.start, task.stop, n, d)
    else:
        alpha, beta = decode_indices(task.start, task.stop, n, d)
    values = _evaluate(task.evaluator, alpha, beta)
    best = float(values.max())
    hits = np.flatnonzero(values >= best - _tolerance(best))
    if reduced:
        weights = d ** np.arange(2 * n, dtype=np.int64)
        full = np.concatenate([alpha[hits[:cap]], beta[hits[:cap]]], axis=1) @ weights
        indices = [int(i) for i in full]
    else:
        indices = [task.start + int(i) for i in hits[:cap]]
    return _Partial(best, indices, int(hits.size), task.stop - task.start)


def make_tasks(scenario: BellScenario, evaluator, total: int, chunk: int = CHUNK):
    return [
        SearchTask(scenario, evaluator, start, min(start + chunk, total))
        for start in range(0, total, chunk)
    ]


def brute_force_max(
    scenario: BellScenario,
    evaluator: Optional[Callable] = None,
    threads: Optional[int] = None,
    witness_cap: int = DEFAULT_WITNESS_CAP,
    budget: int = DEFAULT_BUDGET,
    reduce_symmetry: bool = False,
    chunk: int = CHUNK,
) -> SearchResult:
    """Maximise ``evaluator`` over every deterministic assignment of ``scenario``.

    ``evaluator`` defaults to the scenario's GBF.  It is called on
    :class:`Assignment` objects unless it exposes a vectorised
    ``batch(alpha, beta)`` method, which is preferred.

    Values within ``1e-12`` (relative, floored at 1) of the maximum count as
    argmaxes; the first ``witness_cap`` of them by assignment index are returned.

    With ``reduce_symmetry`` only assignments with ``alpha_1 = ... = alpha_{N-1}
    = 0`` are scanned.  This is exact for functions whose every term takes one
    outcome from each site (a shift of site ``j`` by ``+s`` and site ``N`` by
    ``-s`` then leaves all values unchanged), which holds for every GBF and every
    catalog function; witnesses then come from the reduced slice only.
    """
    started = time.perf_counter()
    if evaluator is None:
        evaluator = GenericBellFunction(scenario)
    n, d = scenario.n_parties, scenario.n_outcomes
    total = d ** (n + 1) if reduce_symmetry else d ** (2 * n)
    if total > budget:
        raise BudgetExceededError(total, budget)
    tasks = make_tasks(scenario, evaluator, total, chunk)
    threads = threads or default_threads()
    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda t: _scan(t, witness_cap, reduce_symmetry), tasks))
    else:
        parts = [_scan(t, witness_cap, reduce_symmetry) for t in tasks]

    best = max(p.max_value for p in parts)
    floor = best - _tolerance(best)
    indices = []
    count = 0
    for p in parts:
        if p.max_value >= floor:
            indices.extend(p.indices)
            count += p.count
    indices.sort()
    witnesses = [index_to_assignment(i, n, d) for i in indices[:witness_cap]]
    return SearchResult(
        max_value=best,
        argmax=witnesses,
        assignments_scanned=sum(p.scanned for p in parts),
        argmax_count=count,
        elapsed_ms=int(1000 * (time.perf_counter() - started)),
        reduced=reduce_symmetry,
    )


@dataclass
class ConstraintReport:
    """Structure of an assignment's argument values (see :func:`verify_constraints`)."""

    table: list
    terms: Optional[list]
    constant_in_k: bool
    arithmetic: bool
    difference: Optional[int]
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.constant_in_k and self.arithmetic


def verify_constraints(s: BellScenario, a: Assignment) -> ConstraintReport:
    """Check that argument values are constant in ``k`` and arithmetic in ``gamma``.

    ``difference`` is the common difference as a symmetric residue mod 4d.
    """
    table = argument_table(s, a)
    m = s.modulus
    notes = []
    constant = all(len(set(row)) == 1 for row in table)
    if not constant:
        bad = [g for g, row in enumerate(table) if len(set(row)) != 1]
        notes.append(f"argument values vary with k at gamma={bad}")
        return ConstraintReport(table, None, False, False, None, notes)
    terms = [row[0] for row in table]
    if len(terms) < 2:
        return ConstraintReport(table, terms, True, True, 0, notes)
    diff = (terms[1] - terms[0]) % m
    arithmetic = all((terms[g + 1] - terms[g]) % m == diff for g in range(len(terms) - 1))
    if not arithmetic:
        notes.append(f"argument terms {terms} are not an arithmetic sequence mod {m}")
    return ConstraintReport(
        table, terms, True, arithmetic, symmetric_residue(diff, m) if arithmetic else None, notes
    )
