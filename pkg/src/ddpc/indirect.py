"""Indirect design: identify a low-order kernel model, then design against it.

Every noise-free length-L window of a SISO behavior satisfies a scalar
recurrence

    y_s + a_1 y_{s-1} + ... + a_{L-1} y_{s-L+1}
        + b_1 u_{s-1} + ... + b_{L-1} u_{s-L+1} = 0,

an ARX-type relation whose coefficient vectors annihilate the stacked
window Hankel matrices. The identification step estimates the free
coefficients by ordinary least squares over all windows of all experiments
(the leading output coefficient is pinned to 1 and the trailing input
coefficient to 0, which the true relation satisfies for any order above the
state dimension). The identified model is then assembled into a full
input-output map by inverting its unit-lower-triangular output operator, and
the certainty-equivalent design is applied to the result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .direct import BehaviorDataset
from .lti import LtiSystem, impulse_response
from .matops import hankel, least_squares_min_norm, lower_toeplitz
from .task import ControlTask, certainty_equivalent_input


@dataclass(frozen=True)
class KernelModel:
    """Scalar kernel (delay-operator) representation of order L.

    output_coeffs[k] weights the output k steps before the newest one
    (output_coeffs[0] is pinned to 1); input_coeffs[k] weights the input
    k + 1 steps back (input_coeffs[-1] is pinned to 0). For every noise-free
    behavior,

        sum_k output_coeffs[k] * y_{s-k} + sum_k input_coeffs[k] * u_{s-1-k} = 0.
    """

    order: int
    output_coeffs: np.ndarray
    input_coeffs: np.ndarray

    def __post_init__(self):
        L = self.order
        if L < 1:
            raise ValueError(f"model order must be >= 1, got {L}")
        m = np.asarray(self.output_coeffs, dtype=float).ravel()
        n = np.asarray(self.input_coeffs, dtype=float).ravel()
        if m.size != L or n.size != L:
            raise ValueError(f"coefficient vectors must have length {L}")
        if m[0] != 1.0:
            raise ValueError(f"leading output coefficient must be exactly 1, got {m[0]}")
        if n[-1] != 0.0:
            raise ValueError(f"trailing input coefficient must be exactly 0, got {n[-1]}")
        m.flags.writeable = False
        n.flags.writeable = False
        object.__setattr__(self, "output_coeffs", m)
        object.__setattr__(self, "input_coeffs", n)


@dataclass(frozen=True)
class HankelStack:
    """Window-depth-L Hankel blocks of all experiments, concatenated.

    Column j of HU is a length-L input window and the same column of HY is
    the matching output window (shifted one step ahead, since outputs start
    at y_1). A dataset of N length-T behaviors yields N(T - L + 1) columns.
    """

    HU: np.ndarray
    HY: np.ndarray

    def __post_init__(self):
        if self.HU.shape != self.HY.shape:
            raise ValueError("HU and HY must have the same shape")

    @property
    def order(self) -> int:
        return self.HU.shape[0]

    @property
    def n_windows(self) -> int:
        return self.HU.shape[1]


def build_hankel_stack(data: BehaviorDataset, order: int) -> HankelStack:
    """Reorganize length-T behaviors into all their length-`order` windows."""
    T = data.horizon
    if not 1 <= order <= T:
        raise ValueError(f"order must satisfy 1 <= order <= {T}, got {order}")
    width = T - order + 1
    if data.n_experiments * width <= 64:
        hu = np.hstack([hankel(data.U[:, k], order) for k in range(data.n_experiments)])
        hy = np.hstack([hankel(data.Y[:, k], order) for k in range(data.n_experiments)])
        return HankelStack(HU=hu, HY=hy)
    # strided fast path, experiment-major column order as above
    def stack(z):
        windows = np.lib.stride_tricks.sliding_window_view(z, order, axis=0)
        return windows.transpose(2, 1, 0).reshape(order, -1)

    return HankelStack(HU=stack(data.U), HY=stack(data.Y))


def identify(stack: HankelStack, rank_tol: float | None = None) -> KernelModel:
    """Constrained least-squares fit of the kernel coefficients.

    With the two pinned coefficients eliminated, each window contributes the
    residual

        y_newest + sum_{k>=1} output_coeffs[k] y_{newest-k}
                 + sum_{k<L-1} input_coeffs[k] u_{newest-1-k},

    and the 2L - 2 free coefficients solve an ordinary least-squares problem
    (minimum-norm solution when the regressors are rank deficient). The
    attained value of identification_objective is the minimum over all
    feasible coefficient pairs.
    """
    L = stack.order
    if L == 1:
        return KernelModel(order=1, output_coeffs=np.ones(1), input_coeffs=np.zeros(1))
    # regressor columns: outputs one..L-1 steps back, then inputs one..L-1 back
    regressors = np.vstack([stack.HY[L - 2 :: -1], stack.HU[L - 1 : 0 : -1]]).T
    newest = stack.HY[-1]
    theta = least_squares_min_norm(regressors, -newest, rank_tol)
    out = np.concatenate([[1.0], theta[: L - 1]])
    inp = np.concatenate([theta[L - 1 :], [0.0]])
    return KernelModel(order=L, output_coeffs=out, input_coeffs=inp)


def identification_objective(stack: HankelStack, model: KernelModel) -> float:
    """Mean squared window residual of a kernel model on a Hankel stack.

    Equals w' S w for the stacked coefficient vector (inputs then outputs,
    oldest first) and the sample second-moment matrix S of the stacked
    window columns.
    """
    if model.order != stack.order:
        raise ValueError("model order does not match stack depth")
    w = np.concatenate([model.input_coeffs[::-1], model.output_coeffs[::-1]])
    residuals = w @ np.vstack([stack.HU, stack.HY])
    return float(residuals @ residuals) / stack.n_windows


def true_kernel(sys: LtiSystem, order: int) -> KernelModel:
    """Exact kernel of a known system, usable for any order above its dimension.

    The output coefficients are the characteristic polynomial of the state
    matrix (padded with zeros), which annihilates the extended observability
    matrix by Cayley-Hamilton; the input coefficients follow by convolving
    them with the impulse response.
    """
    n = sys.order
    if order < n + 1:
        raise ValueError(f"kernel order must be >= state dimension + 1 = {n + 1}, got {order}")
    out = np.zeros(order)
    out[: n + 1] = np.poly(sys.A)
    out[0] = 1.0
    markov = impulse_response(sys, order)
    inp = -np.convolve(out, markov)[: order - 1]
    inp = np.concatenate([inp, [0.0]])
    return KernelModel(order=order, output_coeffs=out, input_coeffs=inp)


def kernel_io_map(model: KernelModel, horizon: int) -> np.ndarray:
    """Assemble the T x T input-output map -M^{-1} N_in of a kernel model.

    M and N_in are the lower-triangular Toeplitz operators of the output and
    input coefficients; M is unit lower triangular, hence always invertible.
    """
    if horizon < model.order:
        raise ValueError(f"horizon must be >= model order {model.order}, got {horizon}")
    pad = np.zeros(horizon - model.order)
    m_op = lower_toeplitz(np.concatenate([model.output_coeffs, pad]))
    n_op = lower_toeplitz(np.concatenate([model.input_coeffs, pad]))
    return -scipy.linalg.solve_triangular(m_op, n_op, lower=True, unit_diagonal=True)


def indirect_design(
    task: ControlTask,
    data: BehaviorDataset,
    order: int,
    rank_tol: float | None = None,
) -> np.ndarray:
    """Identify a kernel model of the given order and design against it."""
    stack = build_hankel_stack(data, order)
    model = identify(stack, rank_tol)
    return certainty_equivalent_input(task, kernel_io_map(model, task.horizon))
