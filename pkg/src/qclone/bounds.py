"""Closed-form lower bounds on copying noise and their feasibility predicates.

Every function here is a pure scalar map.  ``z`` is the overlap of the two
states being copied, ``n`` the number of copies produced (the output carries
``n + 1`` copy slots), and error magnitudes ``x`` live in ``[0, 1]``.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

ATOL = 1e-12

# Bound kinds, shared with the CLI and verification suite.
SUM = "sum"
EQUAL_EXACT = "equal_error_exact"
EQUAL_SIMPLIFIED = "equal_error_simplified"
PERFECT_FIRST = "perfect_first"
BOUND_KINDS = (EQUAL_EXACT, EQUAL_SIMPLIFIED, PERFECT_FIRST, SUM)

__all__ = [
    "ATOL",
    "SUM",
    "EQUAL_EXACT",
    "EQUAL_SIMPLIFIED",
    "PERFECT_FIRST",
    "BOUND_KINDS",
    "ErrorPair",
    "Eq21Coefficients",
    "BoundSample",
    "SchwarzViolationError",
    "eq21_coefficients",
    "rhs_general",
    "feasible",
    "region12_feasible",
    "x2_min_perfect",
    "x_equal_min_exact",
    "x_equal_min_simplified",
    "sum_min",
    "sum_min_peak",
    "evaluate_bound",
    "maximize_over_z",
    "asymptotic_small",
    "asymptotic_near_one",
]


class ErrorPair(NamedTuple):
    """Error magnitudes (x1, x2) for the two copied states."""

    x1: float
    x2: float


class Eq21Coefficients(NamedTuple):
    """Polynomial coefficients of the exact equal-error bound."""

    r1: float
    r2: float
    r3: float


class BoundSample(NamedTuple):
    """One evaluated bound value on a (z, n) grid."""

    z: float
    n: int
    value: float
    kind: str


class SchwarzViolationError(ValueError):
    """Machine-state overlap exceeds the Schwarz cap; not mere infeasibility."""


def _check_z(z: float) -> float:
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"overlap z must lie in [0, 1], got {z}")
    return float(z)


def _check_n(n: int) -> int:
    if n < 1:
        raise ValueError(f"copy count n must be >= 1, got {n}")
    return int(n)


def _check_unit_interval(value: float, name: str) -> float:
    """Validate a [0, 1] quantity, forgiving roundoff-level overshoot."""
    if not -ATOL <= value <= 1.0 + ATOL:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return min(1.0, max(0.0, float(value)))


def _safe_sqrt(radicand: float, name: str) -> float:
    """sqrt with clamping of roundoff-level negatives; larger ones raise."""
    if radicand < -ATOL:
        raise ValueError(f"negative radicand in {name}: {radicand}")
    return math.sqrt(max(0.0, radicand))


def eq21_coefficients(z: float) -> Eq21Coefficients:
    z = _check_z(z)
    r1 = 2 + 3 * z + 2 * z**2 + z**3
    r2 = 1 + 3 * z + 3 * z**2 + 4 * z**3 + 3 * z**4 + z**5 + z**6
    r3 = 5 + 5 * z + 3 * z**2 + 3 * z**3
    return Eq21Coefficients(r1, r2, r3)


def rhs_general(z: float, n: int, e: ErrorPair) -> float:
    """Right-hand side of the unitarity constraint for n copies.

    z^(n+1) c1 c2 + x1 x2 + sqrt(1 - z^(2(n+1))) (x1 c2 + x2 c1)
    with c_i = sqrt(1 - x_i^2).  A copying machine exists only where
    ``z <= rhs_general(z, n, e)``.
    """
    z = _check_z(z)
    n = _check_n(n)
    x1 = _check_unit_interval(e[0], "x1")
    x2 = _check_unit_interval(e[1], "x2")
    t = z ** (n + 1)
    c1 = _safe_sqrt(1.0 - x1 * x1, "1 - x1^2")
    c2 = _safe_sqrt(1.0 - x2 * x2, "1 - x2^2")
    return t * c1 * c2 + x1 * x2 + _safe_sqrt(1.0 - t * t, "1 - z^(2n+2)") * (x1 * c2 + x2 * c1)


def feasible(z: float, n: int, e: ErrorPair) -> bool:
    """Whether the error pair is compatible with unitarity at this overlap."""
    return _check_z(z) <= rhs_general(z, n, e) + ATOL


def region12_feasible(
    z: float, eta11: float, eta22: float, eta12_abs: float, n: int = 1
) -> bool:
    """Membership in the admissible (eta11, eta22, |eta12|) region.

    This is the three-parameter constraint prior to eliminating the
    machine-state overlap via the Schwarz cap; ``eta12_abs`` beyond
    sqrt(eta11 * eta22) is a structural error, not infeasibility.  ``n``
    generalizes the exponents for multi-copy machines (default single copy).
    """
    z = _check_z(z)
    n = _check_n(n)
    eta11 = _check_unit_interval(eta11, "eta11")
    eta22 = _check_unit_interval(eta22, "eta22")
    eta12_abs = _check_unit_interval(eta12_abs, "|eta12|")
    cap = math.sqrt(eta11 * eta22)
    if eta12_abs > cap + ATOL:
        raise SchwarzViolationError(
            f"|eta12| = {eta12_abs} exceeds Schwarz cap sqrt(eta11 eta22) = {cap}"
        )
    t = z ** (n + 1)
    rhs = (
        t * eta12_abs
        + math.sqrt((1.0 - eta11) * (1.0 - eta22))
        + _safe_sqrt(1.0 - t * t, "1 - z^(2n+2)")
        * (math.sqrt(eta11 * (1.0 - eta22)) + math.sqrt(eta22 * (1.0 - eta11)))
    )
    return z <= rhs + ATOL


def x2_min_perfect(z: float, n: int) -> float:
    """Minimal error on the second state when the first is copied perfectly.

    Equals sin(arcsin z - arcsin z^(n+1)): with x2 = sin(theta) the
    constraint reads sin(arcsin z^(n+1) + theta) >= z, and the first
    crossing is at theta = arcsin z - arcsin z^(n+1).
    """
    z = _check_z(z)
    n = _check_n(n)
    return math.sin(math.asin(z) - math.asin(z ** (n + 1)))


def x_equal_min_exact(z: float) -> float:
    """Minimal equal error for a single copy, [(r1 - 2 sqrt(r2)) / r3]^(1/2)."""
    r1, r2, r3 = eq21_coefficients(z)
    return _safe_sqrt((r1 - 2.0 * math.sqrt(r2)) / r3, "equal-error radicand")


def x_equal_min_simplified(z: float, n: int) -> float:
    """Minimal equal error for n copies under the relaxed constraint.

    {[1 + (1 - z^(n+1)) (z - z^(n+1))]^(1/2) - 1} / (1 - z^(n+1)); the
    removable singularity at z = 1 is defined by its limit, 0.
    """
    z = _check_z(z)
    n = _check_n(n)
    if z == 1.0:
        return 0.0
    t = z ** (n + 1)
    return (_safe_sqrt(1.0 + (1.0 - t) * (z - t), "equal-error radicand") - 1.0) / (1.0 - t)


def sum_min(z: float, n: int) -> float:
    """Lower bound on the total error x1 + x2: 2 {[1 + z - z^(n+1)]^(1/2) - 1}."""
    z = _check_z(z)
    n = _check_n(n)
    return 2.0 * (_safe_sqrt(1.0 + z - z ** (n + 1), "sum-bound radicand") - 1.0)


def sum_min_peak(n: int) -> tuple[float, float]:
    """Overlap maximizing the total-error bound, and the peak value.

    The maximizer is z* = (n+1)^(-1/n); for n = 1 this is exactly 1/2 and
    the value sqrt(5) - 2.
    """
    n = _check_n(n)
    z_star = (n + 1.0) ** (-1.0 / n)
    value = 2.0 * (math.sqrt(1.0 + z_star * (n / (n + 1.0))) - 1.0)
    return z_star, value


_BOUND_FNS: dict[str, Callable[[float, int], float]] = {
    EQUAL_EXACT: lambda z, n: x_equal_min_exact(z),
    EQUAL_SIMPLIFIED: x_equal_min_simplified,
    PERFECT_FIRST: x2_min_perfect,
    SUM: sum_min,
}


def evaluate_bound(kind: str, z: float, n: int) -> float:
    """Evaluate the named bound; the exact equal-error kind requires n = 1."""
    if kind not in _BOUND_FNS:
        raise ValueError(f"unknown bound kind {kind!r}, expected one of {BOUND_KINDS}")
    if kind == EQUAL_EXACT and n != 1:
        raise ValueError("the exact equal-error bound is defined for n = 1 only")
    return _BOUND_FNS[kind](z, _check_n(n))


def _golden_section_max(
    f: Callable[[float], float], lo: float, hi: float, tol: float
) -> tuple[float, float]:
    """Deterministic golden-section maximization on [lo, hi]."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = f(d)
    z_star = 0.5 * (lo + hi)
    return z_star, f(z_star)


def maximize_over_z(
    kind: str, n: int, tol: float = 1e-10, grid_points: int = 1001
) -> tuple[float, float]:
    """Global maximum of the selected bound over z in [0, 1].

    Coarse grid scan followed by golden-section refinement around the best
    grid cell; deterministic for fixed arguments.
    """
    if tol <= 0.0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    if grid_points < 1001:
        raise ValueError(f"grid must have at least 1001 points, got {grid_points}")
    f = lambda z: evaluate_bound(kind, z, n)
    values = [f(i / (grid_points - 1)) for i in range(grid_points)]
    i_best = max(range(grid_points), key=values.__getitem__)
    lo = max(0.0, (i_best - 1) / (grid_points - 1))
    hi = min(1.0, (i_best + 1) / (grid_points - 1))
    z_star, value = _golden_section_max(f, lo, hi, tol)
    # Keep the grid point if refinement landed on a worse value (flat cells).
    if values[i_best] > value:
        return i_best / (grid_points - 1), values[i_best]
    return z_star, value


def asymptotic_small(eps: float, n: int) -> float:
    """First-order equal-error bound for nearly orthogonal states: eps / 2.

    Approximates x_equal_min_simplified(eps, n); independent of n.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    _check_n(n)
    return 0.5 * eps


def asymptotic_near_one(eps: float, n: int) -> float:
    """First-order equal-error bound for nearly identical states: n eps / 2.

    Approximates x_equal_min_simplified(1 - eps, n); grows linearly with
    the number of copies.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return 0.5 * _check_n(n) * eps
