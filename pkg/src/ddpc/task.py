"""Finite-horizon quadratic tracking task and certainty-equivalent design.

The task is to steer the output of a SISO system toward a constant reference
over T steps, minimizing the expected sum of per-step input and tracking
penalties. With the stacked input-output map G the deterministic surrogate
cost is

    F(u, y) = u' Q u + (y - y_ref)' R (y - y_ref),    y = G u,

whose unique minimizer is u* = (Q + G'RG)^{-1} G'R y_ref. Designing against
an estimated map instead of the true one yields a suboptimality gap that is
sandwiched between (mu/2) and (nu/2) times the squared input error, with
mu, nu the extreme eigenvalues of Q + G'RG.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .lti import LtiSystem, noise_factor
from .matops import as_matrix

GAP_CLAMP = 1e-12


@dataclass(frozen=True)
class ControlTask:
    """Horizon, per-step positive weights, and the scalar output reference."""

    horizon: int
    input_weights: np.ndarray
    output_weights: np.ndarray
    y_ref: float

    def __post_init__(self):
        T = self.horizon
        if T < 1:
            raise ValueError(f"horizon must be >= 1, got {T}")
        q = np.asarray(self.input_weights, dtype=float).ravel()
        r = np.asarray(self.output_weights, dtype=float).ravel()
        if q.size != T or r.size != T:
            raise ValueError(f"weights must have length {T}, got {q.size} and {r.size}")
        if np.any(q <= 0) or np.any(r <= 0):
            raise ValueError("all stage weights must be strictly positive")
        q.flags.writeable = False
        r.flags.writeable = False
        object.__setattr__(self, "input_weights", q)
        object.__setattr__(self, "output_weights", r)
        object.__setattr__(self, "y_ref", float(self.y_ref))

    @classmethod
    def constant(cls, horizon: int, q: float = 1.0, r: float = 1.0, y_ref: float = 1.0):
        """Task with time-invariant weights q, r."""
        return cls(horizon, np.full(horizon, q), np.full(horizon, r), y_ref)

    @property
    def reference(self) -> np.ndarray:
        """Stacked reference vector (y_ref, ..., y_ref)."""
        return np.full(self.horizon, self.y_ref)


@dataclass(frozen=True)
class DesignOutcome:
    """A designed input with its realized gap and distance to the optimum."""

    u_hat: np.ndarray
    gap: float
    distance_to_optimum: float


def cost(task: ControlTask, u, y) -> float:
    """Quadratic tracking cost u'Qu + (y - y_ref)'R(y - y_ref)."""
    u = np.asarray(u, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if u.size != task.horizon or y.size != task.horizon:
        raise ValueError(f"u and y must have length {task.horizon}")
    d = y - task.reference
    return float(u @ (task.input_weights * u) + d @ (task.output_weights * d))


def design_hessian(task: ControlTask, io_map) -> np.ndarray:
    """The SPD matrix Q + G'RG governing the design problem."""
    g = as_matrix(io_map, "io_map")
    T = task.horizon
    if g.shape != (T, T):
        raise ValueError(f"io_map must be {T}x{T}, got {g.shape}")
    return np.diag(task.input_weights) + g.T @ (task.output_weights[:, None] * g)


def optimal_input(task: ControlTask, io_map) -> np.ndarray:
    """Minimizer of the deterministic cost against the given input-output map.

    Solves (Q + G'RG) u = G'R y_ref by Cholesky factorization; the matrix is
    SPD because every input weight is strictly positive.
    """
    g = as_matrix(io_map, "io_map")
    h = design_hessian(task, g)
    rhs = g.T @ (task.output_weights * task.reference)
    c, low = scipy.linalg.cho_factor(h)
    return scipy.linalg.cho_solve((c, low), rhs)


def certainty_equivalent_input(task: ControlTask, io_map_estimate) -> np.ndarray:
    """Design input for an estimated map; same formula as optimal_input."""
    return optimal_input(task, io_map_estimate)


def suboptimality_gap(task: ControlTask, io_map, u_hat) -> DesignOutcome:
    """Excess true cost of u_hat over the model-based optimum.

    Both costs are evaluated against the true map. Tiny negative values from
    floating-point cancellation (above -1e-12) are clamped to zero; anything
    more negative signals a broken optimizer and raises.
    """
    g = as_matrix(io_map, "io_map")
    u_hat = np.asarray(u_hat, dtype=float).ravel()
    u_star = optimal_input(task, g)
    gap = cost(task, u_hat, g @ u_hat) - cost(task, u_star, g @ u_star)
    if gap < -GAP_CLAMP:
        raise ValueError(
            f"negative suboptimality gap {gap:.3e}: optimal_input is inconsistent"
        )
    return DesignOutcome(
        u_hat=u_hat,
        gap=max(gap, 0.0),
        distance_to_optimum=float(np.linalg.norm(u_hat - u_star)),
    )


def convexity_constants(task: ControlTask, io_map) -> tuple[float, float]:
    """Strong-convexity and gradient-Lipschitz constants (mu, nu) of the design objective.

    The objective u -> F(u, G u) is quadratic with Hessian 2(Q + G'RG), so
    mu = 2 lambda_min(Q + G'RG) and nu = 2 lambda_max(Q + G'RG); 0 < mu <= nu.
    These are exactly the constants for which
    (mu/2) ||u - u*||^2 <= Gap(u) <= (nu/2) ||u - u*||^2.
    """
    vals = np.linalg.eigvalsh(design_hessian(task, io_map))
    return 2.0 * float(vals[0]), 2.0 * float(vals[-1])


def montecarlo_expected_cost(
    task: ControlTask,
    io_map,
    noise_map,
    sys: LtiSystem,
    u,
    trials: int,
    rng: np.random.Generator,
    return_stderr: bool = False,
):
    """Sample mean of the noisy cost F(u, G u + v) over fresh noise draws.

    v is the noise-output contribution G' w with w ~ N(0, omega_w) per step.
    With return_stderr=True also returns the standard error of the mean.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    g = as_matrix(io_map, "io_map")
    gprime = as_matrix(noise_map, "noise_map")
    u = np.asarray(u, dtype=float).ravel()
    T = task.horizon
    F = noise_factor(sys.omega_w)
    w = rng.standard_normal((trials, T, sys.order)) @ F.T
    v = w.reshape(trials, T * sys.order) @ gprime.T
    d = (g @ u - task.reference)[None, :] + v
    costs = float(u @ (task.input_weights * u)) + (d * d) @ task.output_weights
    mean = float(np.mean(costs))
    if not return_stderr:
        return mean
    se = float(np.std(costs, ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
    return mean, se
