"""Finite-dimensional complex vector algebra for copying machines.

State vectors are plain 1-D ``numpy`` arrays of complex amplitudes.  The
central operation is :func:`decompose`, which splits a machine output into
its ideal part (perfect copies times a machine state) and the orthogonal
error part, together with the scalar error magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Tolerance for algebraic identities (orthogonality, Pythagoras, norms).
ATOL = 1e-12
# Inputs whose norm deviates from 1 by more than this are rejected rather
# than silently renormalized.
UNIT_TOL = 1e-9

__all__ = [
    "ATOL",
    "UNIT_TOL",
    "CopyScenario",
    "Decomposition",
    "as_state",
    "tensor",
    "inner",
    "norm",
    "require_unit",
    "decompose",
    "gamma_prime",
    "gamma_prime_norm",
]


@dataclass(frozen=True)
class CopyScenario:
    """Problem instance: overlap, copy count, and mode dimensions.

    ``z`` is the (real, nonnegative) inner product of the two states to be
    copied; every bound depends only on its modulus, so phases are fixed
    away.  A machine for this scenario maps each input to a vector with
    ``n + 1`` copy slots of dimension ``d_in`` plus one machine slot of
    dimension ``d_x``.
    """

    z: float
    n: int = 1
    d_in: int = 2
    d_x: int = 2

    def __post_init__(self) -> None:
        if not 0.0 <= self.z <= 1.0:
            raise ValueError(f"overlap z must lie in [0, 1], got {self.z}")
        if self.n < 1:
            raise ValueError(f"copy count n must be >= 1, got {self.n}")
        if self.d_in < 2:
            raise ValueError(f"input dimension must be >= 2, got {self.d_in}")
        if self.d_x < 1:
            raise ValueError(f"machine dimension must be >= 1, got {self.d_x}")

    @property
    def n_slots(self) -> int:
        """Number of copy slots in the output (original plus n copies)."""
        return self.n + 1

    @property
    def dim_out(self) -> int:
        """Dimension of the full output space, d_in^(n+1) * d_x."""
        return self.d_in ** self.n_slots * self.d_x


@dataclass(frozen=True)
class Decomposition:
    """Split of one machine output into ideal and error parts.

    ``gamma`` is the projection onto the perfect-copies subspace,
    ``phi = psi - gamma`` the error component, ``q`` the (unnormalized)
    machine-mode vector riding along with the perfect copies,
    ``eta = ||q||^2`` and ``x = ||phi||``.  For a unit input,
    ``eta + x**2 == 1``.
    """

    gamma: np.ndarray
    phi: np.ndarray
    q: np.ndarray
    eta: float
    x: float


def as_state(v, name: str = "state") -> np.ndarray:
    """Coerce ``v`` to an immutable 1-D complex array."""
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must be nonempty")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def tensor(u, v) -> np.ndarray:
    """Tensor product with u-major (lexicographic) amplitude ordering."""
    return np.kron(as_state(u, "u"), as_state(v, "v"))


def inner(u, v) -> complex:
    """Inner product, conjugate-linear in the first argument."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return complex(np.vdot(u, v))


def norm(v) -> float:
    return float(np.linalg.norm(np.asarray(v, dtype=complex)))


def require_unit(v: np.ndarray, name: str = "state") -> None:
    """Reject vectors that are not normalized to within UNIT_TOL."""
    nv = norm(v)
    if abs(nv - 1.0) > UNIT_TOL:
        raise ValueError(f"{name} must be unit (|norm - 1| <= {UNIT_TOL}), got norm {nv!r}")


def _slot_shape(scenario: CopyScenario) -> tuple[int, ...]:
    return (scenario.d_in,) * scenario.n_slots + (scenario.d_x,)


def _machine_component(psi: np.ndarray, s: np.ndarray, scenario: CopyScenario) -> np.ndarray:
    """Contract <s| against every copy slot, leaving the machine-mode vector."""
    q = psi.reshape(_slot_shape(scenario))
    s_conj = np.conj(s)
    for _ in range(scenario.n_slots):
        q = np.tensordot(s_conj, q, axes=([0], [0]))
    return q


def _copies_power(s: np.ndarray, scenario: CopyScenario) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for _ in range(scenario.n_slots):
        out = np.kron(out, s)
    return out


def _check_dims(psi: np.ndarray, s: np.ndarray, scenario: CopyScenario) -> None:
    if psi.shape != (scenario.dim_out,):
        raise ValueError(
            f"output vector has dimension {psi.shape[0]}, scenario requires {scenario.dim_out}"
        )
    if s.shape != (scenario.d_in,):
        raise ValueError(
            f"input state has dimension {s.shape[0]}, scenario requires {scenario.d_in}"
        )


def decompose(psi, s, scenario: CopyScenario) -> Decomposition:
    """Split the machine output ``psi`` into ideal and error parts.

    ``gamma`` is ``P psi`` with ``P = (|s><s|)^(n+1) (x) I`` acting on the
    copy slots, realized without forming the projector: the machine
    component ``q`` is obtained by contraction and the ideal part is
    ``s^(n+1) (x) q``.  Both ``psi`` and ``s`` must be unit vectors.
    """
    psi = np.asarray(psi, dtype=complex)
    s = np.asarray(s, dtype=complex)
    _check_dims(psi, s, scenario)
    require_unit(psi, "output vector")
    require_unit(s, "input state")

    q = _machine_component(psi, s, scenario)
    gamma = np.kron(_copies_power(s, scenario), q)
    phi = psi - gamma
    eta = float(np.vdot(q, q).real)
    x = float(np.linalg.norm(phi))
    return Decomposition(gamma=gamma, phi=phi, q=q, eta=eta, x=x)


def gamma_prime(gamma, s_other, scenario: CopyScenario) -> tuple[np.ndarray, float]:
    """Component of an ideal part orthogonal to the *other* state's projector.

    ``gamma`` is the ideal part of one output (generally subnormalized, with
    norm sqrt(eta)); the result is ``(I - P_other) gamma`` and its norm.  For
    a product-form ideal part the norm obeys the closed form
    :func:`gamma_prime_norm`.
    """
    gamma = np.asarray(gamma, dtype=complex)
    s_other = np.asarray(s_other, dtype=complex)
    _check_dims(gamma, s_other, scenario)
    require_unit(s_other, "input state")

    q_other = _machine_component(gamma, s_other, scenario)
    projected = np.kron(_copies_power(s_other, scenario), q_other)
    residue = gamma - projected
    return residue, float(np.linalg.norm(residue))


def gamma_prime_norm(eta: float, z: float, n: int) -> float:
    """Closed form [eta * (1 - z^(2(n+1)))]^(1/2) for the residue norm."""
    if not 0.0 <= eta <= 1.0 + ATOL:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"z must lie in [0, 1], got {z}")
    return math.sqrt(max(0.0, eta) * max(0.0, 1.0 - z ** (2 * (n + 1))))
