"""Local bounds of generic Bell functions for N parties and d outcomes."""

__version__ = "0.1.0"

from .bounds import (
    CHSH_QUANTUM,
    BoundReport,
    closed_bound,
    counting_bound,
    max_constraint,
    select_gammas,
    sequence_bound,
    svetlichny_bound,
    trial_bound,
    witness_assignment,
)
from .catalog import NAMES, named_function, quantum_reference, reduce_to_gbf
from .errors import (
    BellBoundError,
    BudgetExceededError,
    DomainError,
    ReductionMismatchError,
    RepresentationError,
    UnsupportedPhaseError,
    WitnessNotFoundError,
)
from .oracle import brute_force_max, verify_constraints
from .representations import (
    GenericBellFunction,
    eval_cosine,
    eval_cotangent,
    eval_product,
    eval_sign_form,
)
from .scenario import Assignment, BellScenario, parse_nu, rank_from_subset, subset_from_rank
