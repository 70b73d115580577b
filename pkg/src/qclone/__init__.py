"""Lower bounds on the noise any quantum-copying machine must introduce.

The package evaluates the closed-form bounds, verifies the identities and
inequalities they rest on against randomly sampled machines, and searches
the space of admissible machines for the smallest achievable error.
"""

from .bounds import (
    BOUND_KINDS,
    EQUAL_EXACT,
    EQUAL_SIMPLIFIED,
    PERFECT_FIRST,
    SUM,
    BoundSample,
    Eq21Coefficients,
    ErrorPair,
    SchwarzViolationError,
    asymptotic_near_one,
    asymptotic_small,
    eq21_coefficients,
    evaluate_bound,
    feasible,
    maximize_over_z,
    region12_feasible,
    rhs_general,
    sum_min,
    sum_min_peak,
    x2_min_perfect,
    x_equal_min_exact,
    x_equal_min_simplified,
)
from .hilbert import (
    CopyScenario,
    Decomposition,
    decompose,
    gamma_prime,
    gamma_prime_norm,
    inner,
    norm,
    tensor,
)
from .machine import (
    MachineResult,
    Objective,
    OutputPair,
    canonical_inputs,
    evaluate_machine,
    optimize_machine,
    sample_pair,
)
from .verify import (
    SuiteReport,
    Violation,
    check_cross_schwarz,
    check_machine_schwarz,
    check_unitarity_identity,
    oracle_bisect_equal_error,
    oracle_bisect_perfect_first,
    run_suite,
)

__version__ = "0.1.0"
