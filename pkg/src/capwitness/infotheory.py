"""Entropies, coherent information and closed-form capacities (all in bits)."""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize

from . import linalg
from .channels import DampingParams, DephasingParams, KrausChannel, apply_extended
from .errors import InvalidArgument, NumericalFailure

PROB_NEG_TOL = 1e-12
PROB_SUM_TOL = 1e-9


def as_prob_vector(p) -> np.ndarray:
    """Validate a probability vector, zeroing roundoff-level negatives."""
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0:
        raise InvalidArgument("empty probability vector")
    if p.min() < -PROB_NEG_TOL:
        raise InvalidArgument(f"probability {p.min():.3e} is negative")
    if abs(p.sum() - 1) > PROB_SUM_TOL:
        raise InvalidArgument(f"probabilities sum to {p.sum():.12g}")
    return np.clip(p, 0.0, None)


def xlogx(x):
    """Elementwise x*log2(x), with 0*log 0 = 0."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log2(x[pos])
    return out


def shannon(p) -> float:
    p = as_prob_vector(p)
    return float(max(0.0, -xlogx(p).sum()))


def binary_entropy(x: float) -> float:
    if not (0.0 <= x <= 1.0):
        raise InvalidArgument(f"binary entropy argument {x} is outside [0, 1]")
    return float(-(xlogx(x) + xlogx(1 - x)))


def von_neumann(rho) -> float:
    evals = linalg.clamp_spectrum(linalg.eigvalsh(rho))
    return float(max(0.0, -xlogx(evals).sum()))


def purification(rho) -> np.ndarray:
    """Canonical purification sum_i sqrt(l_i) |i>_R |v_i>, ordered (R, S)."""
    rho = linalg.as_matrix(rho)
    evals, evecs = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    evals = linalg.clamp_spectrum(evals)
    d = rho.shape[0]
    psi = np.zeros(d * d, dtype=complex)
    for i in range(d):
        psi += np.sqrt(evals[i]) * np.kron(np.eye(d)[i], evecs[:, i])
    return psi


def entropy_exchange(ch: KrausChannel, rho, psi=None) -> float:
    """Entropy of (id_R x E)(|psi><psi|) for a purification ``psi`` of ``rho``.

    ``psi`` defaults to the eigendecomposition purification; any other
    purification with an equally sized reference may be passed instead.
    """
    if psi is None:
        psi = purification(rho)
    joint = apply_extended(ch, psi, [ch.dim])
    return von_neumann(joint)


def coherent_info(ch: KrausChannel, rho) -> float:
    out = sum(k @ rho @ k.conj().T for k in ch.kraus)
    return von_neumann(out) - entropy_exchange(ch, rho)


def capacity_dephasing_exact(params: DephasingParams) -> float:
    p, mu = params.p, params.mu
    h2 = binary_entropy
    return 2 - p * h2((1 - p) * (1 - mu)) - (1 - p) * h2(p * (1 - mu)) - h2(p)


def capacity_depolarizing_fc(p: float) -> float:
    """Capacity per two uses of the fully correlated depolarizing channel."""
    return 2 - binary_entropy(p) - p * np.log2(3)


def capacity_depolarizing_fc_qudit(d: int, p: float, log_leading: bool = False) -> float:
    """Fully correlated qudit depolarizing capacity.

    The leading term is ``d`` by default. ``log_leading=True`` uses
    ``2*log2(d)`` instead, the log-dimension of two qudits; both agree at d = 2.
    """
    if d < 2:
        raise InvalidArgument("d must be at least 2")
    lead = 2 * np.log2(d) if log_leading else d
    return float(lead - binary_entropy(p) - p * np.log2(d * d - 1))


def damping_objective(alpha: float, beta: float, delta: float, eta: float) -> float:
    """Single-letter coherent information of the fully correlated damping
    channel for the diagonal input diag(alpha, beta, beta, delta)."""
    lost = (1 - eta) * delta
    return float(
        -xlogx(alpha + lost) - 2 * xlogx(beta) - xlogx(eta * delta)
        + xlogx(1 - lost) + xlogx(lost)
    )


def damping_grid_max(eta: float, step: float = 1 / 200):
    """Best point of a barycentric grid over alpha + 2 beta + delta = 1."""
    n = int(round(1 / step))
    # grid over (alpha, 2*beta, delta) barycentric coordinates
    i, j = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    mask = i + j <= n
    alpha = i[mask] / n
    beta = j[mask] / (2 * n)
    delta = np.clip(1 - alpha - 2 * beta, 0.0, None)
    lost = (1 - eta) * delta
    vals = (-xlogx(alpha + lost) - 2 * xlogx(beta) - xlogx(eta * delta)
            + xlogx(1 - lost) + xlogx(lost))
    k = int(np.argmax(vals))
    return float(vals[k]), (float(alpha[k]), float(beta[k]), float(delta[k]))


def _project(a, d):
    # nearest-by-scaling point of {alpha, delta >= 0, alpha + delta <= 1}
    a, d = max(a, 0.0), max(d, 0.0)
    s = a + d
    if s > 1:
        a, d = a / s, d / s
    return a, d


def capacity_damping_exact(params: DampingParams, tol: float = 1e-9, maxiter: int = 2000) -> float:
    """Quantum capacity per two uses of fully correlated amplitude damping.

    Below eta = 1/2 the value is log2(3) (the decoherence-free subspace).
    Above, the single-letter objective is maximized over the simplex by a
    coarse grid followed by Nelder-Mead refinement in (alpha, delta).
    """
    eta = params.eta
    if eta <= 0.5:
        return float(np.log2(3))
    grid_val, (a0, _, d0) = damping_grid_max(eta)

    def neg(x):
        # infeasible points score as their projection minus a distance penalty
        a, d = _project(*x)
        gap = np.hypot(x[0] - a, x[1] - d)
        return -damping_objective(a, (1 - a - d) / 2, d, eta) + 10 * gap

    # the optimum can sit a hair inside the delta = 0 edge, so the starting
    # simplex steps inward from the grid point rather than along the edge
    h = 1e-3
    start = [[a0, d0], [a0 - h if a0 + d0 + h > 1 else a0, d0 + h],
             [a0 - h if a0 >= h else a0 + h, d0]]
    res = minimize(neg, x0=[a0, d0], method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": tol, "maxiter": maxiter,
                            "initial_simplex": start})
    if not res.success:
        raise NumericalFailure("damping capacity maximization did not converge",
                               {"eta": eta, "nit": res.nit, "message": res.message,
                                "grid_value": grid_val})
    return float(max(grid_val, -res.fun))


def depolarizing_pair_weights(p: float, mu: float) -> dict:
    """Distinct joint weights of the correlated depolarizing channel:
    identity-identity, equal flips, unequal flips, one flip."""
    q = p / 3
    return {
        "00": (1 - mu) * (1 - p) ** 2 + mu * (1 - p),
        "11": (1 - mu) * q ** 2 + mu * q,
        "12": (1 - mu) * q ** 2,
        "01": (1 - mu) * q * (1 - p),
    }


def depolarizing_detected_closed_form(p: float, mu: float) -> float:
    """2 + p00 log p00 + 3 p11 log p11 + 6 p12 log p12 + 6 p01 log p01."""
    w = depolarizing_pair_weights(p, mu)
    return float(2 + xlogx(w["00"]) + 3 * xlogx(w["11"]) + 6 * xlogx(w["12"]) + 6 * xlogx(w["01"]))
