"""Direct data-driven design: optimize over the span of recorded behaviors.

The design never identifies a model. It searches for the cheapest behavior
in the column space of the recorded input matrix U (restricted away from
Ker(U), where "free" output energy is pure noise), which is equivalent to a
certainty-equivalent design against the implicit map Y U^+. The deviation of
that implicit map from the truth is Delta = V U^+, whose Frobenius norm
concentrates at a rate governed by a Chebyshev-type tail bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .matops import as_matrix, default_rank_tol, min_singular_value, pinv
from .task import ControlTask


@dataclass(frozen=True)
class BehaviorDataset:
    """Input/output data from N experiments, one length-T behavior per column.

    V, when available (simulation only), holds the per-experiment noise
    contribution to the outputs, so that Y = G U + V for the generating map.
    """

    U: np.ndarray
    Y: np.ndarray
    V: np.ndarray | None = None

    def __post_init__(self):
        U = as_matrix(self.U, "U")
        Y = as_matrix(self.Y, "Y")
        if U.shape != Y.shape:
            raise ValueError(f"U and Y must have the same shape, got {U.shape} vs {Y.shape}")
        V = self.V
        if V is not None:
            V = as_matrix(V, "V")
            if V.shape != U.shape:
                raise ValueError(f"V must have shape {U.shape}, got {V.shape}")
            V.flags.writeable = False
        U.flags.writeable = False
        Y.flags.writeable = False
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "V", V)

    @property
    def horizon(self) -> int:
        return self.U.shape[0]

    @property
    def n_experiments(self) -> int:
        return self.U.shape[1]


@dataclass(frozen=True)
class DirectDiagnostics:
    """Implicit-model-error magnitude with the matching tail-bound evaluator."""

    delta_frobenius: float
    sigma_min_emp: float
    horizon: int
    n_experiments: int
    noise_output_var: float
    input_var: float

    def bound(self, eps: float) -> float:
        """Tail-probability bound for ||Delta||_F >= eps at these parameters."""
        return error_tail_bound(
            self.horizon,
            self.n_experiments,
            eps,
            self.noise_output_var,
            self.input_var,
            self.sigma_min_emp,
        )


def direct_design(task: ControlTask, data: BehaviorDataset, rank_tol: float | None = None) -> np.ndarray:
    """Design input from data alone, restricted to the column space of U.

    Minimizes u'Qu + (G_impl u - y_ref)'R(G_impl u - y_ref) over u in Col(U)
    with the implicit map G_impl = Y U^+. The minimizer is unique because the
    input weights are strictly positive; it equals
    U (U'QU + Y|U' R Y|U)^+ Y|U' R y_ref with Y|U = Y U^+ U, computed here on
    an orthonormal basis of Col(U) (rank <= T) instead of through the N x N
    pseudoinverse, which is what makes large-N sweeps affordable.
    """
    U = data.U
    T = data.horizon
    if task.horizon != T:
        raise ValueError(f"task horizon {task.horizon} != data horizon {T}")
    if rank_tol is None:
        rank_tol = default_rank_tol(U)
    W, s, Vt = np.linalg.svd(U, full_matrices=False)
    rank = int(np.sum(s > rank_tol * s[0])) if s.size else 0
    if rank == 0:
        return np.zeros(T)
    basis = W[:, :rank]
    # implicit map restricted to the basis: (Y U^+) basis = Y V_r S_r^{-1}
    g_basis = data.Y @ (Vt[:rank].T * (1.0 / s[:rank]))
    r_w = task.output_weights[:, None]
    h = basis.T @ (task.input_weights[:, None] * basis) + g_basis.T @ (r_w * g_basis)
    rhs = g_basis.T @ (task.output_weights * task.reference)
    c, low = scipy.linalg.cho_factor(h)
    coeffs = scipy.linalg.cho_solve((c, low), rhs)
    return basis @ coeffs


def implicit_model_error(data: BehaviorDataset, rank_tol: float | None = None) -> np.ndarray:
    """The implicit model error Delta = V U^+ (requires the noise matrix)."""
    if data.V is None:
        raise ValueError("implicit model error needs the noise matrix V (simulation diagnostic)")
    return data.V @ pinv(data.U, rank_tol)


def error_tail_bound(
    horizon: int,
    n_experiments: int,
    eps: float,
    noise_output_var: float,
    input_var: float,
    sigma_min_emp: float,
) -> float:
    """Chebyshev-type bound on P{||Delta||_F >= eps}.

    Evaluates T^2 / (N eps^2) * sigma_w sigma_u / sigma_min(Sigma_uu)^2 with
    sigma_w the worst per-step output-noise variance and sigma_u the input
    variance. The value may exceed 1, in which case it is vacuous but still
    reported.
    """
    if eps <= 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    if n_experiments < 1:
        raise ValueError(f"n_experiments must be >= 1, got {n_experiments}")
    if sigma_min_emp <= 0:
        raise ValueError(
            "empirical input covariance is singular (sigma_min = "
            f"{sigma_min_emp:g}); the bound requires it invertible"
        )
    return (
        horizon**2
        / (n_experiments * eps**2)
        * noise_output_var
        * input_var
        / sigma_min_emp**2
    )


def direct_diagnostics(
    data: BehaviorDataset,
    noise_output_var: float,
    input_var: float,
    rank_tol: float | None = None,
) -> DirectDiagnostics:
    """Bundle ||Delta||_F and sigma_min of the empirical input covariance."""
    delta = implicit_model_error(data, rank_tol)
    sigma_uu = data.U @ data.U.T / data.n_experiments
    return DirectDiagnostics(
        delta_frobenius=float(np.linalg.norm(delta)),
        sigma_min_emp=min_singular_value(sigma_uu),
        horizon=data.horizon,
        n_experiments=data.n_experiments,
        noise_output_var=noise_output_var,
        input_var=input_var,
    )
