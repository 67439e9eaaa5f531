"""Kraus-form channels: the correlated Pauli families, fully correlated
amplitude damping, the single-qubit unitary example, and user-supplied
channels loaded from JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import linalg
from .errors import InvalidArgument

COMPLETENESS_TOL = 1e-10
FILE_COMPLETENESS_TOL = 1e-8

# Pauli index orders used by the two correlated families
DEPHASING_PAULIS = (linalg.I2, linalg.Z)
DEPOLARIZING_PAULIS = (linalg.I2, linalg.Z, linalg.X, linalg.Y)


@dataclass(frozen=True)
class KrausChannel:
    dim: int
    kraus: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ops:
            raise InvalidArgument("a channel needs at least one Kraus operator")
        for k in ops:
            if k.shape != (self.dim, self.dim):
                raise InvalidArgument(
                    f"Kraus operator of shape {k.shape} does not match dim {self.dim}")
            k.setflags(write=False)
        object.__setattr__(self, "kraus", ops)

    def completeness_error(self) -> float:
        total = sum(k.conj().T @ k for k in self.kraus)
        return float(np.max(np.abs(total - np.eye(self.dim))))

    def validate(self, tol: float = COMPLETENESS_TOL) -> "KrausChannel":
        err = self.completeness_error()
        if err > tol:
            raise InvalidArgument(f"Kraus operators are not trace preserving (error {err:.3e})")
        return self


@dataclass(frozen=True)
class DephasingParams:
    p: float
    mu: float

    def __post_init__(self):
        _check_unit("p", self.p)
        _check_unit("mu", self.mu)


@dataclass(frozen=True)
class DepolarizingParams:
    p: float
    mu: float

    def __post_init__(self):
        _check_unit("p", self.p)
        _check_unit("mu", self.mu)

    @property
    def marginal(self) -> np.ndarray:
        return np.array([1 - self.p, self.p / 3, self.p / 3, self.p / 3])


@dataclass(frozen=True)
class DampingParams:
    eta: float

    def __post_init__(self):
        _check_unit("eta", self.eta)


def _check_unit(name, value):
    if not (0.0 <= value <= 1.0):
        raise InvalidArgument(f"{name} must lie in [0, 1], got {value}")


def markov_pauli_probs(marginal, mu: float) -> np.ndarray:
    """Joint probabilities of a two-step Markov chain with the given marginal.

    ``joint[i1*n + i2] = marginal[i1] * ((1 - mu) * marginal[i2] + mu * [i1 == i2])``
    """
    _check_unit("mu", mu)
    marginal = np.asarray(marginal, dtype=float)
    if np.any(marginal < 0) or abs(marginal.sum() - 1) > 1e-9:
        raise InvalidArgument("marginal must be a probability vector")
    n = marginal.size
    cond = (1 - mu) * np.tile(marginal, (n, 1)) + mu * np.eye(n)
    return (marginal[:, None] * cond).ravel()


def _pauli_channel(paulis, joint) -> KrausChannel:
    n = len(paulis)
    ops = []
    for i1 in range(n):
        for i2 in range(n):
            w = joint[i1 * n + i2]
            if w > 0:
                ops.append(np.sqrt(w) * np.kron(paulis[i1], paulis[i2]))
    return KrausChannel(4, tuple(ops))


def build_dephasing(params: DephasingParams) -> KrausChannel:
    joint = markov_pauli_probs([1 - params.p, params.p], params.mu)
    return _pauli_channel(DEPHASING_PAULIS, joint)


def build_depolarizing(params: DepolarizingParams) -> KrausChannel:
    joint = markov_pauli_probs(params.marginal, params.mu)
    return _pauli_channel(DEPOLARIZING_PAULIS, joint)


def build_damping(params: DampingParams) -> KrausChannel:
    """Fully correlated amplitude damping: only |11> decays, to |00>."""
    eta = params.eta
    b1 = np.diag([1, 1, 1, np.sqrt(eta)]).astype(complex)
    b2 = np.zeros((4, 4), dtype=complex)
    b2[0, 3] = np.sqrt(1 - eta)
    ops = (b1, b2) if eta < 1 else (b1,)
    return KrausChannel(4, ops)


def build_unitary_example(eps: Sequence[int]) -> KrausChannel:
    """U = (I + i * sum_a eps_a sigma_a) / 2 with eps_a = +-1."""
    eps = tuple(int(e) for e in eps)
    if len(eps) != 3 or any(e not in (-1, 1) for e in eps):
        raise InvalidArgument(f"eps must be three signs +-1, got {eps}")
    u = 0.5 * (linalg.I2 + 1j * (eps[0] * linalg.X + eps[1] * linalg.Y + eps[2] * linalg.Z))
    return KrausChannel(2, (u,))


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel(dim, (np.eye(dim, dtype=complex),))


def apply(ch: KrausChannel, rho) -> np.ndarray:
    rho = linalg.as_matrix(rho)
    if rho.shape[0] != ch.dim:
        raise InvalidArgument(f"state dimension {rho.shape[0]} does not match channel dim {ch.dim}")
    return sum(k @ rho @ k.conj().T for k in ch.kraus)


def _interleave_orders(n_ref: int):
    """Index permutations between (R_1, S_1, R_2, S_2, ...) and (R_1.., S_1..)."""
    interleaved = [i for k in range(n_ref) for i in (k, n_ref + k)]
    to_grouped = np.argsort(interleaved).tolist()
    return interleaved, to_grouped


def apply_extended(ch: KrausChannel, psi, ref_dims: Sequence[int]) -> np.ndarray:
    """Send the system part of ``psi`` through ``ch``, leaving references alone.

    With a single reference the global order is (R, S). With several
    references the system splits into factors of the same sizes and the
    global order interleaves them, (R_1, S_1, R_2, S_2, ...); for two qubit
    pairs this is (R_A, A, R_B, B).
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    ref_dims = [int(d) for d in ref_dims]
    d_ref = int(np.prod(ref_dims))
    if psi.size != d_ref * ch.dim:
        raise InvalidArgument(
            f"state of size {psi.size} does not fit references {ref_dims} and channel dim {ch.dim}")
    n_ref = len(ref_dims)
    if n_ref > 1:
        if int(np.prod(ref_dims)) != ch.dim:
            raise InvalidArgument("interleaved extension needs system factors matching ref_dims")
        dims = [d for d in ref_dims for _ in (0, 1)]
        interleaved, to_grouped = _interleave_orders(n_ref)
        grouped = linalg.permute_vector(psi, dims, to_grouped)
    else:
        grouped = psi
    # rows: reference index, columns: system index
    mat = grouped.reshape(d_ref, ch.dim)
    out = np.zeros((psi.size, psi.size), dtype=complex)
    for k in ch.kraus:
        phi = (mat @ k.T).reshape(-1)
        out += np.outer(phi, phi.conj())
    if n_ref > 1:
        out = linalg.permute_subsystems(out, ref_dims + ref_dims, interleaved)
    return out


def load_kraus_file(path) -> KrausChannel:
    """Read a channel from JSON: ``{"dim": n, "kraus": [[[re, im], ...], ...]}``."""
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    try:
        dim = int(data["dim"])
        mats = []
        for m in data["kraus"]:
            arr = np.asarray(m, dtype=float)
            if arr.shape != (dim, dim, 2):
                raise InvalidArgument(
                    f"{path}: Kraus operator {len(mats)} has shape {arr.shape[:-1]}, expected ({dim}, {dim})")
            mats.append(arr[..., 0] + 1j * arr[..., 1])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidArgument):
            raise
        raise InvalidArgument(f"{path}: malformed Kraus file ({exc})") from exc
    return KrausChannel(dim, tuple(mats)).validate(FILE_COMPLETENESS_TOL)


def dump_kraus(ch: KrausChannel) -> str:
    ops = [[[[float(z.real), float(z.imag)] for z in row] for row in k] for k in ch.kraus]
    return json.dumps({"dim": ch.dim, "kraus": ops}, indent=1)
