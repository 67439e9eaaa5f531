"""Small dense complex linear algebra.

Matrices are plain ``numpy`` arrays of dtype complex128. Four-qubit objects
use the subsystem order (R_A, A, R_B, B) with big-endian binary indices, so
index ``8*r_a + 4*a + 2*r_b + b`` labels the basis ket |r_a a r_b b>.
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgument, InvalidState

HERMITIAN_TOL = 1e-10
CLAMP_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"i": I2, "x": X, "y": Y, "z": Z}


def as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidArgument(f"expected a square matrix, got shape {m.shape}")
    return m


def kron(*ops) -> np.ndarray:
    """Kronecker product of one or more matrices (or vectors), left to right."""
    return reduce(np.kron, [np.asarray(op, dtype=complex) for op in ops])


def dag(m) -> np.ndarray:
    return np.asarray(m).conj().T


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    return np.outer(psi, psi.conj())


def normalize(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise InvalidArgument("cannot normalize the zero vector")
    return psi / norm


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def partial_trace(m, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    ``dims`` gives the subsystem dimensions in tensor order. The kept
    subsystems come back in their original relative order.
    """
    m = as_matrix(m)
    dims = [int(d) for d in dims]
    if any(d <= 0 for d in dims) or int(np.prod(dims)) != m.shape[0]:
        raise InvalidArgument(f"dims {dims} do not match matrix dimension {m.shape[0]}")
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise InvalidArgument(f"keep must be a nonempty subset of 0..{len(dims) - 1}")

    n = len(dims)
    t = m.reshape(dims + dims)
    traced = [k for k in range(n) if k not in keep]
    # trace highest index first so the remaining axis numbers stay valid
    for k in reversed(traced):
        n_cur = t.ndim // 2
        t = np.trace(t, axis1=k, axis2=k + n_cur)
    d_keep = int(np.prod([dims[k] for k in keep]))
    return t.reshape(d_keep, d_keep)


def eigvalsh(m) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix."""
    m = as_matrix(m)
    if not is_hermitian(m):
        raise InvalidArgument("eigvalsh requires a Hermitian matrix")
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def clamp_spectrum(evals, tol: float = CLAMP_TOL) -> np.ndarray:
    """Zero out roundoff-level negative eigenvalues of a PSD matrix."""
    evals = np.asarray(evals, dtype=float)
    if evals.size and evals.min() < -tol:
        raise InvalidState(f"eigenvalue {evals.min():.3e} is below -{tol:g}")
    return np.where(evals < 0, 0.0, evals)


def check_density_matrix(rho, tol: float = 1e-9) -> np.ndarray:
    rho = as_matrix(rho)
    if not is_hermitian(rho, tol):
        raise InvalidState("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1) > tol:
        raise InvalidState(f"density matrix has trace {np.trace(rho).real:.12g}")
    clamp_spectrum(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)))
    return rho


def permute_subsystems(m, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder the tensor factors of an operator.

    Factor ``k`` of the result is factor ``order[k]`` of the input.
    """
    m = as_matrix(m)
    dims = list(dims)
    n = len(dims)
    t = m.reshape(dims + dims)
    t = t.transpose(list(order) + [n + k for k in order])
    d = m.shape[0]
    return t.reshape(d, d)


def permute_vector(psi, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    return psi.reshape(dims).transpose(order).reshape(-1)
