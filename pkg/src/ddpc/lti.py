"""Ground-truth stochastic SISO LTI systems and their trajectory operators.

The state recursion is x_{t+1} = A x_t + B u_t + w_t with output y_t = C x_t,
x_0 = 0 and process noise w_t ~ N(0, omega_w). Over a horizon T the stacked
output satisfies y = G u + G' w, where G is the lower-triangular Toeplitz
matrix of Markov parameters and G' is its process-noise counterpart; both are
assembled here.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .matops import as_matrix, lower_toeplitz, min_singular_value

RANK_CHECK_TOL = 1e-8


class GenerationError(RuntimeError):
    """Raised when rejection sampling of a random system exhausts its attempts."""


@dataclass(frozen=True)
class LtiSystem:
    """SISO state-space system (A, B, C) with process-noise covariance omega_w.

    A is n x n, B is n x 1, C is 1 x n. omega_w is a symmetric PSD n x n
    covariance; it defaults to zero (noise-free). Instances are immutable.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    omega_w: np.ndarray | None = None

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        n = A.shape[0]
        if A.shape != (n, n):
            raise ValueError(f"A must be square, got {A.shape}")
        B = as_matrix(self.B, "B").reshape(n, 1)
        C = as_matrix(self.C, "C").reshape(1, n)
        omega = self.omega_w
        if omega is None:
            omega = np.zeros((n, n))
        omega = as_matrix(omega, "omega_w")
        if omega.shape != (n, n):
            raise ValueError(f"omega_w must be {n}x{n}, got {omega.shape}")
        if not np.allclose(omega, omega.T, atol=1e-12):
            raise ValueError("omega_w must be symmetric")
        for name, value in (("A", A), ("B", B), ("C", C), ("omega_w", omega)):
            value.flags.writeable = False
            object.__setattr__(self, name, value)

    @property
    def order(self) -> int:
        return self.A.shape[0]

    def with_noise(self, omega_w) -> "LtiSystem":
        """Same dynamics with a different process-noise covariance."""
        return replace(self, omega_w=np.asarray(omega_w, dtype=float))


@dataclass(frozen=True)
class Trajectory:
    """One simulated length-T behavior: inputs u_0..u_{T-1}, outputs y_1..y_T.

    v = y - G u is the cumulative process-noise contribution to the output
    (identically zero when omega_w = 0).
    """

    u: np.ndarray
    y: np.ndarray
    v: np.ndarray = field(repr=False)


def observability_matrix(sys: LtiSystem, steps: int | None = None) -> np.ndarray:
    """Stacked observability matrix [C; CA; ...; CA^{steps-1}]."""
    steps = sys.order if steps is None else steps
    rows = []
    row = sys.C
    for _ in range(steps):
        rows.append(row)
        row = row @ sys.A
    return np.vstack(rows)


def controllability_matrix(sys: LtiSystem, steps: int | None = None) -> np.ndarray:
    """Stacked controllability matrix [B, AB, ..., A^{steps-1}B]."""
    steps = sys.order if steps is None else steps
    cols = []
    col = sys.B
    for _ in range(steps):
        cols.append(col)
        col = sys.A @ col
    return np.hstack(cols)


def satisfies_rank_conditions(sys: LtiSystem, tol: float = RANK_CHECK_TOL) -> bool:
    """True when (A, C) is observable and both (A, B) and (A, AB) are controllable.

    The extra (A, AB) condition is what the delay-operator identification
    route requires. Rank is tested via the smallest singular value of the
    n-step matrices.
    """
    if min_singular_value(observability_matrix(sys)) <= tol:
        return False
    if min_singular_value(controllability_matrix(sys)) <= tol:
        return False
    shifted = replace(sys, B=sys.A @ sys.B)
    return min_singular_value(controllability_matrix(shifted)) > tol


def random_system(
    n: int,
    rng: np.random.Generator,
    max_attempts: int = 100,
    spectral_radius: float | None = None,
) -> LtiSystem:
    """Draw (A, B, C) with i.i.d. standard-normal entries, rejection-sampled.

    Draws are repeated until the observability/controllability rank checks
    pass (generic random matrices almost always do on the first try).
    spectral_radius, when given, rescales A to that spectral radius; the
    default leaves A unnormalized. omega_w is left at zero for the caller
    to set via with_noise.
    """
    if n < 1:
        raise ValueError(f"system order must be >= 1, got {n}")
    for _ in range(max_attempts):
        A = rng.normal(size=(n, n))
        B = rng.normal(size=(n, 1))
        C = rng.normal(size=(1, n))
        if spectral_radius is not None:
            rho = np.max(np.abs(np.linalg.eigvals(A)))
            if rho > 0:
                A = A * (spectral_radius / rho)
        sys = LtiSystem(A, B, C)
        if satisfies_rank_conditions(sys):
            return sys
    raise GenerationError(
        f"no order-{n} system passing the rank checks in {max_attempts} attempts"
    )


def noise_factor(omega_w: np.ndarray) -> np.ndarray:
    """Matrix square root F with F F^T = omega_w, for sampling w ~ N(0, omega_w).

    Uses Cholesky when the covariance is positive definite and falls back to
    an eigendecomposition for PSD-but-singular matrices; eigenvalues above
    -1e-12 are clamped to zero, anything more negative is rejected.
    """
    omega_w = np.asarray(omega_w, dtype=float)
    if not np.any(omega_w):
        return np.zeros_like(omega_w)
    try:
        return np.linalg.cholesky(omega_w)
    except np.linalg.LinAlgError:
        vals, vecs = np.linalg.eigh(omega_w)
        if np.min(vals) < -1e-12:
            raise ValueError(
                f"omega_w is not PSD (min eigenvalue {np.min(vals):.3e})"
            ) from None
        return vecs * np.sqrt(np.clip(vals, 0.0, None))


def impulse_response(sys: LtiSystem, horizon: int) -> np.ndarray:
    """Markov parameters (CB, CAB, ..., CA^{horizon-1}B) as a flat array."""
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    out = np.empty(horizon)
    col = sys.B
    for t in range(horizon):
        out[t] = (sys.C @ col).item()
        col = sys.A @ col
    return out


def input_output_map(sys: LtiSystem, horizon: int) -> np.ndarray:
    """T x T lower-triangular Toeplitz map from stacked inputs to outputs.

    First column is the impulse response (CB, CAB, ..., CA^{T-1}B); the
    leading L x L block for any L <= T equals input_output_map(sys, L).
    """
    return lower_toeplitz(impulse_response(sys, horizon))


def noise_output_map(sys: LtiSystem, horizon: int) -> np.ndarray:
    """T x (n*T) block-Toeplitz map from stacked process noise to outputs.

    Block (i, j) is the 1 x n row CA^{i-j} for i >= j and zero otherwise;
    it is input_output_map with B replaced by the identity.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    n = sys.order
    rows = np.empty((horizon, n))
    row = sys.C
    for t in range(horizon):
        rows[t] = row
        row = row @ sys.A
    out = np.zeros((horizon, n * horizon))
    for i in range(horizon):
        for j in range(i + 1):
            out[i, j * n : (j + 1) * n] = rows[i - j]
    return out


def extended_observability(sys: LtiSystem, depth: int) -> np.ndarray:
    """Observability matrix of the given depth, row k = CA^{k-1}."""
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    return observability_matrix(sys, depth)


def noise_output_variance(sys: LtiSystem, horizon: int) -> float:
    """Variance of the final stacked noise output, sum_t CA^t omega_w A^t' C'.

    Monotone non-decreasing in the horizon; zero for a noise-free system.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    total = 0.0
    row = sys.C
    for _ in range(horizon):
        total += (row @ sys.omega_w @ row.T).item()
        row = row @ sys.A
    return total


def simulate(sys: LtiSystem, u, rng: np.random.Generator) -> Trajectory:
    """Simulate one behavior from x_0 = 0 under the given input sequence.

    Process noise is drawn as a (T, n) standard-normal block mapped through
    noise_factor(omega_w), one row per step. The stored v is computed as
    y - G u.
    """
    u = np.asarray(u, dtype=float).ravel()
    T = u.size
    if T < 1:
        raise ValueError("input sequence must have length >= 1")
    n = sys.order
    F = noise_factor(sys.omega_w)
    w = rng.standard_normal((T, n)) @ F.T
    x = np.zeros(n)
    y = np.empty(T)
    for t in range(T):
        x = sys.A @ x + sys.B[:, 0] * u[t] + w[t]
        y[t] = (sys.C @ x).item()
    v = y - input_output_map(sys, T) @ u
    return Trajectory(u=u, y=y, v=v)
