"""Admissible copying machines and error-minimizing search over them.

For two fixed inputs, unitarity of a copying transformation is exactly the
statement that the two output vectors are unit and have inner product equal
to the input overlap ``z``.  Machines are therefore represented directly as
such output pairs, and the optimizer searches this set for the smallest
achievable error, reporting the remaining gap to the corresponding closed
-form lower bound.  Whether the bounds are attainable is an open question;
results carry a gap, never a tightness claim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import bounds
from .hilbert import CopyScenario, Decomposition, as_state, decompose, inner

# Constructed pairs must satisfy the overlap constraint to this tolerance.
PAIR_ATOL = 1e-12
# No machine may beat a bound by more than solver noise.
GAP_TOL = 1e-9

OBJECTIVE_KINDS = ("sum", "max", "weighted")

__all__ = [
    "PAIR_ATOL",
    "GAP_TOL",
    "OBJECTIVE_KINDS",
    "Objective",
    "OutputPair",
    "MachineResult",
    "canonical_inputs",
    "sample_pair",
    "evaluate_machine",
    "objective_score",
    "reference_bound",
    "optimize_machine",
]


@dataclass(frozen=True)
class Objective:
    """What to minimize over machines.

    ``sum`` minimizes x1 + x2 (total error), ``max`` the larger error, and
    ``weighted`` the combination w1*x1 + w2*x2 for callers who copy one
    state more often than the other.
    """

    kind: str = "sum"
    w1: float = 1.0
    w2: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in OBJECTIVE_KINDS:
            raise ValueError(f"objective kind must be one of {OBJECTIVE_KINDS}, got {self.kind!r}")
        if self.kind == "weighted":
            if self.w1 < 0 or self.w2 < 0 or self.w1 + self.w2 <= 0:
                raise ValueError(f"weights must be nonnegative with positive sum, got {self.w1}, {self.w2}")


@dataclass(frozen=True)
class OutputPair:
    """The two machine outputs; unit vectors with inner product z."""

    psi1: np.ndarray
    psi2: np.ndarray
    scenario: CopyScenario

    def __post_init__(self) -> None:
        object.__setattr__(self, "psi1", as_state(self.psi1, "psi1"))
        object.__setattr__(self, "psi2", as_state(self.psi2, "psi2"))
        dim = self.scenario.dim_out
        if self.psi1.shape != (dim,) or self.psi2.shape != (dim,):
            raise ValueError(
                f"output vectors must have dimension {dim}, got "
                f"{self.psi1.shape[0]} and {self.psi2.shape[0]}"
            )
        for name, psi in (("psi1", self.psi1), ("psi2", self.psi2)):
            nv = float(np.linalg.norm(psi))
            if abs(nv - 1.0) > PAIR_ATOL * 1e3:
                raise ValueError(f"{name} must be unit, got norm {nv!r}")
        overlap = inner(self.psi1, self.psi2)
        if abs(overlap - self.scenario.z) > PAIR_ATOL:
            raise ValueError(
                f"<psi1|psi2> = {overlap} violates the overlap constraint z = {self.scenario.z}"
            )


@dataclass
class MachineResult:
    """Outcome of an optimizer run, with the gap to the matching bound."""

    pair: OutputPair
    errors: bounds.ErrorPair
    objective_value: float
    bound_value: float
    starts: int
    converged: bool
    gap: float = field(init=False)

    def __post_init__(self) -> None:
        self.gap = self.objective_value - self.bound_value
        if self.gap < -GAP_TOL:
            raise ValueError(
                f"machine beats the lower bound by {-self.gap}; bound or decomposition is broken"
            )


def canonical_inputs(scenario: CopyScenario) -> tuple[np.ndarray, np.ndarray]:
    """The fixed input pair: s1 = e0 and s2 = z e0 + sqrt(1 - z^2) e1."""
    s1 = np.zeros(scenario.d_in, dtype=complex)
    s1[0] = 1.0
    s2 = np.zeros(scenario.d_in, dtype=complex)
    s2[0] = scenario.z
    s2[1] = math.sqrt(1.0 - scenario.z**2)
    return s1, s2


def _orthonormalize(w: np.ndarray, against: np.ndarray) -> np.ndarray | None:
    """Gram-Schmidt step; None when w is numerically parallel to `against`.

    Projects twice: a single pass leaves O(eps * |w| / |w_perp|) overlap
    when w is nearly parallel, which optimizer line searches do produce.
    """
    scale = np.linalg.norm(w)
    if not 1e-300 < scale < 1e100:
        return None
    for _ in range(2):
        w = w - np.vdot(against, w) * against
    nw = np.linalg.norm(w)
    if nw < 1e-13 * scale:
        return None
    return w / nw


def _pair_vectors(z: float, psi1: np.ndarray, w: np.ndarray) -> np.ndarray:
    """psi2 = z psi1 + sqrt(1 - z^2) w for unit w orthogonal to psi1."""
    return z * psi1 + math.sqrt(1.0 - z * z) * w


def sample_pair(scenario: CopyScenario, seed) -> OutputPair:
    """Draw a uniformly random admissible machine, deterministic in the seed.

    psi1 is a normalized complex Gaussian vector; psi2 combines psi1 with an
    independent draw orthonormalized against it so the overlap constraint
    holds by construction.
    """
    rng = np.random.default_rng(seed)
    dim = scenario.dim_out
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    psi1 = v / np.linalg.norm(v)
    for _ in range(100):
        draw = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        w = _orthonormalize(draw, psi1)
        if w is not None:
            return OutputPair(psi1, _pair_vectors(scenario.z, psi1, w), scenario)
    raise RuntimeError("could not draw a direction orthogonal to psi1 in 100 attempts")


def evaluate_machine(pair: OutputPair) -> bounds.ErrorPair:
    """Error magnitudes of the two outputs against the canonical inputs."""
    d1, d2 = machine_decompositions(pair)
    return bounds.ErrorPair(min(1.0, d1.x), min(1.0, d2.x))


def machine_decompositions(pair: OutputPair) -> tuple[Decomposition, Decomposition]:
    """Ideal/error splits of both outputs (shared by checks and reports)."""
    s1, s2 = canonical_inputs(pair.scenario)
    return (
        decompose(pair.psi1, s1, pair.scenario),
        decompose(pair.psi2, s2, pair.scenario),
    )


def objective_score(e: bounds.ErrorPair, objective: Objective) -> float:
    if objective.kind == "sum":
        return e.x1 + e.x2
    if objective.kind == "max":
        return max(e.x1, e.x2)
    return objective.w1 * e.x1 + objective.w2 * e.x2


def reference_bound(scenario: CopyScenario, objective: Objective) -> float:
    """The closed-form lower bound matching the objective.

    sum: the total-error bound.  max: the equal-error bound (exact for one
    copy, relaxed otherwise), valid because raising both errors to their
    maximum stays feasible.  weighted: min(w1, w2) times the total-error
    bound, the immediate consequence w1 x1 + w2 x2 >= min(w) (x1 + x2).
    """
    z, n = scenario.z, scenario.n
    if objective.kind == "sum":
        return bounds.sum_min(z, n)
    if objective.kind == "max":
        if n == 1:
            return bounds.x_equal_min_exact(z)
        return bounds.x_equal_min_simplified(z, n)
    return min(objective.w1, objective.w2) * bounds.sum_min(z, n)


class _MachineObjective:
    """Objective over unconstrained real parameters.

    The parameter vector packs (re, im) of a raw psi1 direction and, unless
    z = 1, of a raw second direction; normalization and Gram-Schmidt inside
    the evaluation keep every iterate exactly on the constraint surface.
    Degenerate parameter points (vanishing norms) score a large penalty.
    """

    PENALTY = 4.0

    def __init__(self, scenario: CopyScenario, objective: Objective):
        self.scenario = scenario
        self.objective = objective
        self.dim = scenario.dim_out
        self.n_params = 2 * self.dim if scenario.z == 1.0 else 4 * self.dim
        s1, s2 = canonical_inputs(scenario)
        self._s = (s1, s2)
        self._shape = (scenario.d_in,) * scenario.n_slots + (scenario.d_x,)
        self._s_pow = (self._copies_power(s1), self._copies_power(s2))

    def _copies_power(self, s: np.ndarray) -> np.ndarray:
        out = np.ones(1, dtype=complex)
        for _ in range(self.scenario.n_slots):
            out = np.kron(out, s)
        return out

    def _error(self, psi: np.ndarray, which: int) -> float:
        q = psi.reshape(self._shape)
        s_conj = np.conj(self._s[which])
        for _ in range(self.scenario.n_slots):
            q = np.tensordot(s_conj, q, axes=([0], [0]))
        return float(np.linalg.norm(psi - np.kron(self._s_pow[which], q)))

    def vectors(self, params: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
        if not np.all(np.isfinite(params)):
            return None
        d = self.dim
        v1 = params[:d] + 1j * params[d : 2 * d]
        n1 = np.linalg.norm(v1)
        # Huge scales overflow the norm and would alias to a spurious
        # zero vector; every machine has a moderate-scale representative.
        if not 1e-12 < n1 < 1e100:
            return None
        psi1 = v1 / n1
        if self.scenario.z == 1.0:
            return psi1, psi1
        w = _orthonormalize(params[2 * d : 3 * d] + 1j * params[3 * d :], psi1)
        if w is None:
            return None
        return psi1, _pair_vectors(self.scenario.z, psi1, w)

    def __call__(self, params: np.ndarray) -> float:
        vecs = self.vectors(params)
        if vecs is None:
            return self.PENALTY
        psi1, psi2 = vecs
        e = bounds.ErrorPair(self._error(psi1, 0), self._error(psi2, 1))
        return objective_score(e, self.objective)


def optimize_machine(
    scenario: CopyScenario,
    objective: Objective = Objective("sum"),
    *,
    starts: int = 16,
    max_iters: int = 20000,
    ftol: float = 1e-12,
    seed: int = 0,
    method: str = "powell",
) -> MachineResult:
    """Multi-start derivative-free minimization over admissible machines.

    Each start draws an independent random initial point from a private
    stream derived from (seed, start index), runs the local minimizer, and
    restarts it from its own result until the improvement drops below ftol.
    The best start wins, ties broken by start index.  ``method`` is any
    gradient-free ``scipy.optimize.minimize`` method; Powell is the default
    because it converges to much tighter objective values than Nelder-Mead
    on this landscape (which has exactly flat phase directions).
    """
    if starts < 1:
        raise ValueError(f"starts must be >= 1, got {starts}")
    fun = _MachineObjective(scenario, objective)

    best: tuple[float, int, np.ndarray, bool] | None = None
    for i in range(starts):
        rng = np.random.default_rng([seed, i])
        x = rng.standard_normal(fun.n_params)
        f_prev = math.inf
        converged = False
        for _ in range(4):
            res = minimize(
                fun,
                x,
                method=method,
                options={"maxiter": max_iters, "ftol": ftol, "xtol": 1e-12},
            )
            x = res.x
            converged = bool(res.success)
            if f_prev - res.fun < 10.0 * ftol:
                break
            f_prev = res.fun
        f_final = float(res.fun)
        if best is None or f_final < best[0]:
            best = (f_final, i, x.copy(), converged)

    assert best is not None
    _, _, x_best, converged = best
    vecs = fun.vectors(x_best)
    if vecs is None:  # penalty point survived; only possible if all starts failed
        raise RuntimeError("optimizer never left the degenerate-parameter region")
    pair = OutputPair(vecs[0], vecs[1], scenario)
    errors = evaluate_machine(pair)
    return MachineResult(
        pair=pair,
        errors=errors,
        objective_value=objective_score(errors, objective),
        bound_value=reference_bound(scenario, objective),
        starts=starts,
        converged=converged,
    )
