"""Finite-statistics simulation of the nine same-axis local settings.

Setting (w1, w2) measures Pauli axis w1 on both qubits of the pair
(R_A, A) and w2 on both qubits of (R_B, B). Each record holds the 16 joint
+-1 outcome counts, indexed big-endian over (R_A, A, R_B, B) with bit 0
meaning eigenvalue +1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .errors import InvalidArgument
from .infotheory import von_neumann
from .witness import (DEFAULT_SEARCH, ProductBasis, SearchSpec, accessible_labels,
                      accessible_span_check, minimize_entropy, probability_vector)

AXES = "xyz"
SETTINGS = tuple(itertools.product(AXES, repeat=2))
N_QUBITS = 4


@dataclass(frozen=True)
class MeasurementSetting:
    w1: str
    w2: str

    def __post_init__(self):
        if self.w1 not in AXES or self.w2 not in AXES:
            raise InvalidArgument(f"setting axes must be in {AXES!r}, got ({self.w1}, {self.w2})")

    @property
    def index(self) -> int:
        return SETTINGS.index((self.w1, self.w2))


ALL_SETTINGS = tuple(MeasurementSetting(a, b) for a, b in SETTINGS)


@dataclass
class MeasurementRecord:
    """Outcome counts for one setting. ``shots=None`` marks an
    infinite-statistics record whose ``counts`` are exact probabilities."""

    setting: MeasurementSetting
    shots: Optional[int]
    counts: np.ndarray

    def __post_init__(self):
        self.counts = np.asarray(self.counts)
        if self.counts.shape != (16,):
            raise InvalidArgument("a record needs 16 outcome counts")
        if self.shots is not None and int(self.counts.sum()) != self.shots:
            raise InvalidArgument("counts do not sum to shots")

    @property
    def frequencies(self) -> np.ndarray:
        total = self.counts.sum()
        return self.counts / total


@dataclass
class WitnessEstimate:
    q_det_hat: float
    ci_low: float
    ci_high: float
    shots_per_setting: int
    seed: int
    s_out_hat: float = float("nan")
    h_min_hat: float = float("nan")


# eigenvectors of each axis, columns ordered (+1, -1)
_EIGVECS = {
    "x": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "y": np.array([[1, 1], [1j, -1j]], dtype=complex) / np.sqrt(2),
    "z": np.eye(2, dtype=complex),
}


def outcome_probabilities(xi, setting: MeasurementSetting) -> np.ndarray:
    u = linalg.kron(_EIGVECS[setting.w1], _EIGVECS[setting.w1],
                    _EIGVECS[setting.w2], _EIGVECS[setting.w2])
    p = np.real(np.einsum("ia,ij,ja->a", u.conj(), xi, u))
    return np.clip(p, 0.0, None) / np.clip(p, 0.0, None).sum()


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def simulate_setting(xi, setting: MeasurementSetting, shots: int, seed: int) -> MeasurementRecord:
    xi = linalg.check_density_matrix(xi)
    if xi.shape != (16, 16):
        raise InvalidArgument("simulate_setting expects a four-qubit state")
    if shots <= 0:
        raise InvalidArgument("shots must be positive")
    p = outcome_probabilities(xi, setting)
    counts = _rng(seed).multinomial(int(shots), p)
    return MeasurementRecord(setting, int(shots), counts)


def simulate_all(xi, shots: int, seed: int) -> list:
    """One record per setting; setting k draws from the stream seeded seed + k."""
    return [simulate_setting(xi, s, shots, seed + s.index) for s in ALL_SETTINGS]


def exact_records(xi) -> list:
    xi = linalg.as_matrix(xi)
    return [MeasurementRecord(s, None, outcome_probabilities(xi, s)) for s in ALL_SETTINGS]


# -- linear inversion ------------------------------------------------------

def _compatible(label: str, setting) -> bool:
    w1, w2 = setting
    return all(c in ("i", w1) for c in label[:2]) and all(c in ("i", w2) for c in label[2:])


def _sign_vector(label: str) -> np.ndarray:
    """(-1)^(sum of outcome bits on the non-identity qubits), per outcome."""
    bits = np.array([[(o >> (N_QUBITS - 1 - q)) & 1 for q in range(N_QUBITS)] for o in range(16)])
    mask = np.array([c != "i" for c in label])
    return (-1.0) ** (bits[:, mask].sum(axis=1))


def _estimator(labels: Sequence[str]) -> np.ndarray:
    """C[label, setting, outcome]: expectation = sum C * frequency.

    Expectations available from several settings are averaged over all of
    them with equal weight (all settings use the same shot count).
    """
    c = np.zeros((len(labels), len(SETTINGS), 16))
    for i, lab in enumerate(labels):
        comp = [k for k, s in enumerate(SETTINGS) if _compatible(lab, s)]
        sign = _sign_vector(lab)
        for k in comp:
            c[i, k] = sign / len(comp)
    return c


_ACCESSIBLE = accessible_labels(2)
_ACC_EST = _estimator(_ACCESSIBLE)
_ACC_PAULIS = np.array([linalg.kron(*[linalg.PAULI[ch] for ch in lab]) for lab in _ACCESSIBLE])

_SYS_LABELS = ["i" + a + "i" + b for a in "ixyz" for b in "ixyz"]
_SYS_EST = _estimator(_SYS_LABELS)
_SYS_PAULIS = np.array([linalg.kron(linalg.PAULI[lab[1]], linalg.PAULI[lab[3]]) for lab in _SYS_LABELS])


def _frequency_table(records) -> np.ndarray:
    records = list(records)
    if len(records) != len(SETTINGS):
        raise InvalidArgument(f"expected {len(SETTINGS)} records, got {len(records)}")
    table = np.zeros((len(SETTINGS), 16))
    seen = set()
    for r in records:
        k = r.setting.index
        if k in seen:
            raise InvalidArgument(f"duplicate record for setting {SETTINGS[k]}")
        seen.add(k)
        table[k] = r.frequencies
    return table


def pseudo_state(records) -> np.ndarray:
    """Linear-inversion estimate of the four-qubit output, restricted to the
    measurable Pauli span. It need not be positive, but reproduces the
    outcome probability of every accessible projector."""
    table = _frequency_table(records)
    return _pseudo_from_table(table)


def _pseudo_from_table(table) -> np.ndarray:
    expect = np.einsum("lso,so->l", _ACC_EST, table)
    return np.einsum("l,lij->ij", expect, _ACC_PAULIS) / 16


def estimate_probability_vector(records, basis: ProductBasis) -> np.ndarray:
    if not accessible_span_check(basis):
        raise InvalidArgument("basis is not accessible from the local settings")
    return probability_vector(pseudo_state(records), basis)


def project_to_density(m) -> np.ndarray:
    """Nearest unit-trace PSD matrix in Frobenius norm.

    Eigenvalues are projected onto the probability simplex (clamping the
    negative part and shifting the rest), eigenvectors are kept.
    """
    m = 0.5 * (m + m.conj().T)
    evals, evecs = np.linalg.eigh(m)
    mu = evals[::-1]
    css = np.cumsum(mu)
    k = np.arange(1, mu.size + 1)
    rho = np.nonzero(mu - (css - 1) / k > 0)[0][-1]
    shift = (css[rho] - 1) / (rho + 1)
    lam = np.clip(evals - shift, 0.0, None)
    return (evecs * lam) @ evecs.conj().T


def _reduced_from_table(table) -> np.ndarray:
    expect = np.einsum("lso,so->l", _SYS_EST, table)
    raw = np.einsum("l,lij->ij", expect, _SYS_PAULIS) / 4
    return project_to_density(raw)


def estimate_reduced_state(records) -> np.ndarray:
    """Pauli tomography of the system pair (A, B), made physical."""
    return _reduced_from_table(_frequency_table(records))


def _q_from_table(table, search):
    s_out = von_neumann(_reduced_from_table(table))
    m = minimize_entropy(_pseudo_from_table(table), search)
    return s_out, m.h_min


def estimate_q_det(records, search: SearchSpec = DEFAULT_SEARCH, resamples: int = 200,
                   seed: int = 0, level: float = 0.95) -> WitnessEstimate:
    """Point estimate of Q_DET with a basic (pivotal) bootstrap interval.

    Each resample redraws every setting's counts from a multinomial with the
    observed frequencies. The interval reflects the bootstrap deviations
    about the point estimate, ``[2q - q*_hi, 2q - q*_lo]``, and is widened
    if needed so that it contains the point estimate.
    """
    records = list(records)
    shots = [r.shots for r in records]
    if any(s is not None and s <= 0 for s in shots):
        raise InvalidArgument("records need a positive number of shots")
    table = _frequency_table(records)
    s_hat, h_hat = _q_from_table(table, search)
    q_hat = s_hat - h_hat
    finite = all(s is not None for s in shots)
    if not finite or resamples <= 0:
        n_shots = shots[0] if finite else 0
        return WitnessEstimate(q_hat, q_hat, q_hat, n_shots, seed, s_hat, h_hat)

    boot = bootstrap_replicates(records, search, resamples, seed)
    alpha = (1 - level) / 2
    lo, hi = np.quantile(boot, [alpha, 1 - alpha])
    ci_low, ci_high = 2 * q_hat - hi, 2 * q_hat - lo
    return WitnessEstimate(q_hat, float(min(ci_low, q_hat)), float(max(ci_high, q_hat)),
                           int(shots[0]), seed, s_hat, h_hat)


def bootstrap_replicates(records, search: SearchSpec, resamples: int, seed: int) -> np.ndarray:
    """Q_DET recomputed on multinomial resamples of every setting's counts."""
    table = _frequency_table(records)
    n = np.zeros(len(SETTINGS), dtype=np.int64)
    for r in records:
        n[r.setting.index] = r.shots
    rng = _rng(seed)
    boot = np.empty(resamples)
    for b in range(resamples):
        t = np.array([rng.multinomial(n[k], table[k]) / n[k] for k in range(len(SETTINGS))])
        s_b, h_b = _q_from_table(t, search)
        boot[b] = s_b - h_b
    return boot


# -- record dump format ------------------------------------------------------

def _bits_to_str(o: int) -> str:
    return "".join("-" if (o >> (N_QUBITS - 1 - q)) & 1 else "+" for q in range(N_QUBITS))


def _str_to_bits(s: str) -> int:
    if len(s) != N_QUBITS or any(c not in "+-" for c in s):
        raise InvalidArgument(f"bad outcome string {s!r}")
    return int("".join("1" if c == "-" else "0" for c in s), 2)


def dump_records(records, seed: int) -> str:
    records = list(records)
    shots = records[0].shots
    lines = [f"# shots {shots} seed {seed}"]
    for r in records:
        for o in range(16):
            lines.append(f"{r.setting.w1} {r.setting.w2} {_bits_to_str(o)} {int(r.counts[o])}")
    return "\n".join(lines) + "\n"


def load_records(text: str):
    """Parse a record dump; returns (records, seed)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise InvalidArgument("line 1: missing '# shots N seed S' header")
    head = lines[0].lstrip("#").split()
    try:
        shots = int(head[head.index("shots") + 1])
        seed = int(head[head.index("seed") + 1])
    except (ValueError, IndexError) as exc:
        raise InvalidArgument(f"line 1: malformed header ({exc})") from exc
    counts = {}
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 4:
            raise InvalidArgument(f"line {lineno}: expected 4 fields")
        w1, w2, bits, cnt = parts
        key = MeasurementSetting(w1, w2)
        counts.setdefault(key, np.zeros(16, dtype=np.int64))[_str_to_bits(bits)] = int(cnt)
    records = [MeasurementRecord(s, shots, counts[s]) for s in ALL_SETTINGS if s in counts]
    return records, seed
