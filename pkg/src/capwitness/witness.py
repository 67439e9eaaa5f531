"""Capacity witness: measurement bases reachable from same-axis local Pauli
settings, entropy minimization over them, and the detected bound
Q_DET = S[E(rho)] - H(p).

Every basis vector in the B1/B2/B3 families has the form
``cos(t) * x + sin(t) * y`` for fixed two-qubit vectors x, y, with t = theta
for the first two vectors and t = phi for the last two. Outcome
probabilities of a product basis are therefore bilinear in
(cos^2, cos*sin, sin*cos, sin^2) of at most two angles, which lets the grid
search evaluate whole angle grids with small matrix products.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from . import linalg
from .channels import KrausChannel, apply, apply_extended
from .errors import InvalidArgument
from .infotheory import as_prob_vector, von_neumann

FAMILIES = ("B1", "B2", "B3")
ORTHO_TOL = 1e-10
SPAN_TOL = 1e-9

_SQ2 = np.sqrt(0.5)
PHI_PLUS = np.array([_SQ2, 0, 0, _SQ2], dtype=complex)
PHI_MINUS = np.array([_SQ2, 0, 0, -_SQ2], dtype=complex)
PSI_PLUS = np.array([0, _SQ2, _SQ2, 0], dtype=complex)
PSI_MINUS = np.array([0, _SQ2, -_SQ2, 0], dtype=complex)


def bell_states():
    """(Phi+, Phi-, Psi+, Psi-) on one (reference, system) pair."""
    return PHI_PLUS.copy(), PHI_MINUS.copy(), PSI_PLUS.copy(), PSI_MINUS.copy()


# (x, y) per slot; slot vector = cos(t) x + sin(t) y
_SLOTS = {
    "B1": ((PHI_PLUS, PHI_MINUS), (PHI_MINUS, -PHI_PLUS),
           (PSI_PLUS, PSI_MINUS), (PSI_MINUS, -PSI_PLUS)),
    "B2": ((PHI_PLUS, PSI_PLUS), (PSI_PLUS, -PHI_PLUS),
           (PHI_MINUS, PSI_MINUS), (PSI_MINUS, -PHI_MINUS)),
    "B3": ((PHI_PLUS, 1j * PSI_MINUS), (PSI_MINUS, 1j * PHI_PLUS),
           (PHI_MINUS, 1j * PSI_PLUS), (PSI_PLUS, 1j * PHI_MINUS)),
}


def _slot_tensor(family: str) -> np.ndarray:
    """Array of shape (4 slots, 2, 4): the (x, y) generators of each slot."""
    if family not in _SLOTS:
        raise InvalidArgument(f"unknown basis family {family!r}")
    return np.array([[x, y] for x, y in _SLOTS[family]])


@dataclass(frozen=True)
class PairBasisSpec:
    family: str
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidArgument(f"unknown basis family {self.family!r}")


@dataclass(frozen=True)
class DampingLabel:
    a: float

    @property
    def b(self) -> float:
        return float(np.sqrt(max(0.0, 1 - self.a ** 2)))


@dataclass(frozen=True)
class ProductBasis:
    """Orthonormal basis of the joint (reference, system) space; rows of
    ``vectors`` are the basis kets."""

    vectors: np.ndarray
    label: object

    def check_orthonormal(self, tol: float = ORTHO_TOL) -> bool:
        gram = self.vectors.conj() @ self.vectors.T
        return bool(np.max(np.abs(gram - np.eye(len(gram)))) <= tol)


def pair_basis(spec: PairBasisSpec) -> np.ndarray:
    """The four vectors of one pair basis, as rows."""
    z = _slot_tensor(spec.family)
    angles = (spec.theta, spec.theta, spec.phi, spec.phi)
    return np.array([np.cos(t) * z[k, 0] + np.sin(t) * z[k, 1] for k, t in enumerate(angles)])


def product_basis(spec1: PairBasisSpec, spec2: Optional[PairBasisSpec] = None) -> ProductBasis:
    """Tensor-product basis over the pairs (R_A, A) and (R_B, B).

    With ``spec2`` omitted the result is the single-pair basis of ``spec1``.
    """
    v1 = pair_basis(spec1)
    if spec2 is None:
        return ProductBasis(v1, (spec1,))
    v2 = pair_basis(spec2)
    vecs = np.array([np.kron(a, b) for a in v1 for b in v2])
    return ProductBasis(vecs, (spec1, spec2))


def _ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


# computational (R_A A, R_B B) products carrying no weight on the damping output
DAMPING_NULL_KETS = (
    "0001", "0010", "1101", "1110",
    "0100", "0101", "0110", "0111",
    "1000", "1001", "1011",
)
DAMPING_DECAY_KET = "1010"


def damping_basis(a: float) -> ProductBasis:
    """Eleven null computational products, |10>|10>, then chi_1..chi_4."""
    if not (-1.0 <= a <= 1.0):
        raise InvalidArgument(f"a must lie in [-1, 1], got {a}")
    b = np.sqrt(max(0.0, 1 - a * a))
    u = a * PHI_PLUS + b * PHI_MINUS
    w = -b * PHI_PLUS + a * PHI_MINUS
    vecs = [_ket(s) for s in DAMPING_NULL_KETS] + [_ket(DAMPING_DECAY_KET)]
    vecs += [np.kron(u, u), np.kron(u, w), np.kron(w, u), np.kron(w, w)]
    return ProductBasis(np.array(vecs), DampingLabel(float(a)))


# -- accessibility ----------------------------------------------------------

PAIR_SPAN_LABELS = ("ii", "xi", "ix", "xx", "yi", "iy", "yy", "zi", "iz", "zz")


def _pauli_string(labels: str) -> np.ndarray:
    return linalg.kron(*[linalg.PAULI[c] for c in labels])


def accessible_labels(n_pairs: int):
    """Pauli strings whose expectations follow from the nine same-axis settings."""
    return ["".join(parts) for parts in itertools.product(PAIR_SPAN_LABELS, repeat=n_pairs)]


def _all_labels(n_qubits: int):
    return ["".join(parts) for parts in itertools.product("ixyz", repeat=n_qubits)]


def pauli_coefficients(op, n_qubits: int) -> dict:
    """Coefficients c_P of op = sum_P c_P P (Pauli strings)."""
    d = 2 ** n_qubits
    return {lab: np.trace(_pauli_string(lab) @ op) / d for lab in _all_labels(n_qubits)}


@dataclass
class SpanCheck:
    ok: bool
    residuals: np.ndarray

    def __bool__(self):
        return self.ok


def accessible_span_check(basis: ProductBasis, tol: float = SPAN_TOL) -> SpanCheck:
    """True iff every basis projector is a combination of measurable Paulis.

    ``residuals[i]`` is the Frobenius norm of the part of projector i lying
    outside the measurable span.
    """
    d = basis.vectors.shape[1]
    n_qubits = int(round(np.log2(d)))
    n_pairs = n_qubits // 2
    inside = set(accessible_labels(n_pairs))
    outside = [lab for lab in _all_labels(n_qubits) if lab not in inside]
    mats = np.array([_pauli_string(lab) for lab in outside])
    res = []
    for v in basis.vectors:
        proj = linalg.projector(v)
        coeffs = np.einsum("kij,ji->k", mats, proj) / d
        res.append(np.sqrt(d * np.sum(np.abs(coeffs) ** 2)))
    res = np.array(res)
    return SpanCheck(bool(np.all(res <= tol)), res)


# -- probabilities -----------------------------------------------------------

def _normalize_probs(p: np.ndarray) -> np.ndarray:
    p = np.clip(np.real(p), 0.0, 1.0)
    total = p.sum()
    return p / total if total > 0 else p


def probability_vector(xi, basis: ProductBasis) -> np.ndarray:
    """Outcome probabilities <v_i|xi|v_i>, clamped to [0, 1] and renormalized.

    For a genuine density matrix the clamping is a no-op up to roundoff; for
    the linear-inversion estimates of the shot simulator it repairs small
    negative values.
    """
    xi = linalg.as_matrix(xi)
    vecs = basis.vectors
    if vecs.shape[1] != xi.shape[0]:
        raise InvalidArgument("basis and state dimensions differ")
    raw = np.einsum("ki,ij,kj->k", vecs.conj(), xi, vecs).real
    return _normalize_probs(raw)


# -- entropy minimization -----------------------------------------------------

@dataclass(frozen=True)
class SearchSpec:
    """What minimize_entropy scans.

    families: pair-basis families for the product scan (may be empty).
    damping: also scan the damping-specific basis set.
    full: independent angles per pair and mixed families across pairs;
        otherwise both pairs share family and angles.
    grid_points: uniform grid over [0, 2*pi] per angle (721 -> step pi/360).
    refine: coordinate-wise bounded line search from the best grid point.
    """

    families: tuple = FAMILIES
    damping: bool = False
    full: bool = False
    grid_points: int = 721
    refine: bool = True
    angle_tol: float = 1e-7


DEFAULT_SEARCH = SearchSpec()
DAMPING_SEARCH = SearchSpec(families=("B1",), damping=True)
BELL_ONLY = SearchSpec(families=("B1",), grid_points=1, refine=False)


def _angle_grid(n: int) -> np.ndarray:
    """Distinct bases of the uniform n-point grid over [0, 2*pi].

    Shifting any family angle by pi/2 only permutes the basis vectors (up to
    phases), so grid points beyond pi/2 repeat bases already on the grid.
    """
    if n < 1:
        raise InvalidArgument("grid_points must be positive")
    if n == 1:
        return np.zeros(1)
    step = 2 * np.pi / (n - 1)
    m = int(np.floor((np.pi / 2) / step + 1e-9))
    return step * np.arange(m + 1)


def _trig_weights(t) -> np.ndarray:
    """Rows (c^2, c s, s c, s^2) for angles t."""
    c, s = np.cos(t), np.sin(t)
    return np.stack([c * c, c * s, s * c, s * s], axis=-1)


def _neg_xlogx(p):
    p = np.maximum(p, 0.0)
    return -p * np.log2(np.maximum(p, 1e-300))


def _entropy_from_parts(a_sum, s_sum):
    # entropy of the clipped, renormalized vector from sum(-p log p) and sum(p)
    return a_sum / s_sum + np.log2(s_sum)


class _PairModel:
    """Quadratic forms of a state in the slot generators of one family pair."""

    def __init__(self, xi: np.ndarray, fam1: str, fam2: Optional[str]):
        self.fam1, self.fam2 = fam1, fam2
        z1 = _slot_tensor(fam1)
        if fam2 is None:
            # g[k, a, a'] = <z1_ka| xi |z1_ka'>
            g = np.einsum("kai,ij,kbj->kab", z1.conj(), xi, z1)
            self.g1 = g.reshape(4, 4).real
        else:
            z2 = _slot_tensor(fam2)
            t = xi.reshape(4, 4, 4, 4)
            g = np.einsum("kai,lbj,ijmn,kcm,ldn->klabcd", z1.conj(), z2.conj(), t, z1, z2)
            # index order (alpha, alpha') x (beta, beta')
            g = g.transpose(0, 1, 2, 4, 3, 5).reshape(4, 4, 4, 4)
            self.g2 = g.real

    def single_block_terms(self, w):
        """Per-slot probabilities for one pair: shape (4, N)."""
        return self.g1 @ w.T

    def block(self, k, l, w1, w2):
        """p_kl on the grid (t1, t2): shape (len(w1), len(w2))."""
        return w1 @ self.g2[k, l] @ w2.T

    def probs_at(self, th1, ph1, th2=None, ph2=None) -> np.ndarray:
        if self.fam2 is None:
            w = _trig_weights(np.array([th1, th1, ph1, ph1]))
            return np.einsum("ka,ka->k", self.g1, w)
        a1 = (th1, th1, ph1, ph1)
        a2 = (th2, th2, ph2, ph2)
        w1 = _trig_weights(np.array(a1))
        w2 = _trig_weights(np.array(a2))
        return np.einsum("ka,klab,lb->kl", w1, self.g2, w2).ravel()


def _entropy_of_raw(raw) -> float:
    p = np.clip(raw, 0.0, None)
    s = p.sum()
    return float(_entropy_from_parts(_neg_xlogx(p).sum(), s))


@dataclass
class _Candidate:
    h: float
    key: tuple
    angles: tuple
    fams: tuple


def _better(c: _Candidate, best: Optional[_Candidate]) -> bool:
    return best is None or c.h < best.h


def _scan_single(model: _PairModel, grid, spec: SearchSpec) -> _Candidate:
    w = _trig_weights(grid)
    p = model.g1 @ w.T  # (4, N) rows: slot probability as function of its angle
    p = np.maximum(p, 0.0)
    a_th = _neg_xlogx(p[0]) + _neg_xlogx(p[1])
    a_ph = _neg_xlogx(p[2]) + _neg_xlogx(p[3])
    s_th = p[0] + p[1]
    s_ph = p[2] + p[3]
    h = _entropy_from_parts(a_th[:, None] + a_ph[None, :], s_th[:, None] + s_ph[None, :])
    i, j = np.unravel_index(int(np.argmin(h)), h.shape)
    return _Candidate(float(h[i, j]), (model.fam1,), (grid[i], grid[j]), (model.fam1,))


def _block_sums(model: _PairModel, w):
    """For slot groups (theta-slots, phi-slots) of each pair, the grids of
    sum(-p log p) and sum(p) as functions of the two relevant angles."""
    groups = ((0, 1), (2, 3))
    a = {}
    s = {}
    for g1, g2 in itertools.product(range(2), repeat=2):
        a_acc = 0.0
        s_acc = 0.0
        for k in groups[g1]:
            for l in groups[g2]:
                p = np.maximum(model.block(k, l, w, w), 0.0)
                a_acc = a_acc + _neg_xlogx(p)
                s_acc = s_acc + p
        a[g1, g2] = a_acc
        s[g1, g2] = s_acc
    return a, s


def _scan_symmetric(model: _PairModel, grid) -> _Candidate:
    w = _trig_weights(grid)
    groups = ((0, 1), (2, 3))
    n = grid.size
    a_tot = np.zeros((n, n))
    s_tot = np.zeros((n, n))
    # same-group blocks depend on one shared angle: theta1 = theta2, phi1 = phi2
    for g, axis in ((0, 0), (1, 1)):
        for k in groups[g]:
            for l in groups[g]:
                p = np.maximum(np.einsum("na,ab,nb->n", w, model.g2[k, l], w), 0.0)
                term_a, term_s = _neg_xlogx(p), p
                if axis == 0:
                    a_tot += term_a[:, None]
                    s_tot += term_s[:, None]
                else:
                    a_tot += term_a[None, :]
                    s_tot += term_s[None, :]
    # mixed blocks: rows theta, columns phi
    for k in groups[0]:
        for l in groups[1]:
            p = np.maximum(model.block(k, l, w, w), 0.0)
            a_tot += _neg_xlogx(p)
            s_tot += p
    for k in groups[1]:
        for l in groups[0]:
            p = np.maximum(model.block(k, l, w, w), 0.0).T
            a_tot += _neg_xlogx(p)
            s_tot += p
    h = _entropy_from_parts(a_tot, s_tot)
    i, j = np.unravel_index(int(np.argmin(h)), h.shape)
    return _Candidate(float(h[i, j]), (model.fam1, model.fam2),
                      (grid[i], grid[j], grid[i], grid[j]), (model.fam1, model.fam2))


def _minplus(f, g):
    """out[x, y] = min_z f[x, z] + g[y, z], with the arg-min z."""
    n = f.shape[0]
    out = np.empty((n, g.shape[0]))
    arg = np.empty((n, g.shape[0]), dtype=np.int64)
    for x in range(n):
        tot = f[x][None, :] + g
        arg[x] = np.argmin(tot, axis=1)
        out[x] = tot[np.arange(g.shape[0]), arg[x]]
    return out, arg


def _scan_full(model: _PairModel, grid) -> _Candidate:
    """Exact minimum over the four-angle grid (theta1, phi1, theta2, phi2).

    The objective is the entropy of the clipped but unnormalized vector,
    which equals the true entropy whenever the state is positive; it splits
    into four two-angle terms arranged in a cycle, so two min-plus products
    give the exact grid minimum.
    """
    w = _trig_weights(grid)
    a, _ = _block_sums(model, w)
    # a[0,0](th1, th2), a[0,1](th1, ph2), a[1,0](ph1, th2), a[1,1](ph1, ph2)
    m1, arg_th2 = _minplus(a[0, 0], a[1, 0])
    m2, arg_ph2 = _minplus(a[0, 1], a[1, 1])
    tot = m1 + m2
    i, j = np.unravel_index(int(np.argmin(tot)), tot.shape)
    angles = (grid[i], grid[j], grid[arg_th2[i, j]], grid[arg_ph2[i, j]])
    h = _entropy_of_raw(model.probs_at(*angles))
    return _Candidate(h, (model.fam1, model.fam2), angles, (model.fam1, model.fam2))


def _refine(objective, x0, step, tol, sweeps=30):
    x = list(x0)
    best = objective(x)
    for _ in range(sweeps):
        start = best
        for i in range(len(x)):
            def f1(t, i=i):
                y = list(x)
                y[i] = t
                return objective(y)
            r = minimize_scalar(f1, bounds=(x[i] - step, x[i] + step), method="bounded",
                                options={"xatol": tol})
            if r.fun < best:
                best = float(r.fun)
                x[i] = float(r.x)
        if start - best <= 1e-15:
            break
    return best, tuple(x)


def _damping_fixed_probs(xi):
    idx = [int(s, 2) for s in DAMPING_NULL_KETS] + [int(DAMPING_DECAY_KET, 2)]
    return np.real(np.diag(xi))[idx]


def _damping_chi_model(xi):
    model = _PairModel(xi, "B1", "B1")
    return model


def _damping_chi_probs(model, theta):
    # chi_1..chi_4 are the B1 theta-slot products with a common angle
    w = _trig_weights(np.atleast_1d(theta))
    return np.array([np.einsum("na,ab,nb->n", w, model.g2[k, l], w)
                     for k in (0, 1) for l in (0, 1)])


def _damping_entropy(fixed, model, theta):
    chi = np.maximum(_damping_chi_probs(model, theta), 0.0)
    f = np.maximum(fixed, 0.0)
    a_sum = _neg_xlogx(f).sum() + _neg_xlogx(chi).sum(axis=0)
    s_sum = f.sum() + chi.sum(axis=0)
    return _entropy_from_parts(a_sum, s_sum)


def _canonical_damping_a(theta: float) -> float:
    # (a, b) and (-a, -b) give the same chi set, so fold b onto b >= 0
    a, b = np.cos(theta), np.sin(theta)
    return float(a if b >= 0 else -a)


@dataclass
class EntropyMinimum:
    h_min: float
    basis: ProductBasis
    probs: np.ndarray

    @property
    def label(self):
        return self.basis.label

    def __iter__(self):
        return iter((self.h_min, self.basis.label, self.probs))


def _basis_from_candidate(c: _Candidate, n_pairs: int) -> ProductBasis:
    if c.fams == ("damping",):
        return damping_basis(_canonical_damping_a(c.angles[0]))
    wrap = lambda t: float(np.mod(t, 2 * np.pi))
    if n_pairs == 1:
        return product_basis(PairBasisSpec(c.fams[0], wrap(c.angles[0]), wrap(c.angles[1])))
    th1, ph1, th2, ph2 = c.angles
    return product_basis(PairBasisSpec(c.fams[0], wrap(th1), wrap(ph1)),
                         PairBasisSpec(c.fams[1], wrap(th2), wrap(ph2)))


def minimize_entropy(xi, search: SearchSpec = DEFAULT_SEARCH) -> EntropyMinimum:
    """Smallest Shannon entropy of outcome probabilities over the searched bases.

    Works on one pair (4x4 states) or two pairs (16x16 states). Candidates
    are compared in the order: families as listed (family pairs in
    lexicographic order in full mode), then the damping set; a later
    candidate replaces the incumbent only if strictly better.
    """
    xi = linalg.as_matrix(xi)
    d = xi.shape[0]
    if d not in (4, 16):
        raise InvalidArgument("minimize_entropy expects a 4x4 or 16x16 state")
    n_pairs = 1 if d == 4 else 2
    grid = _angle_grid(search.grid_points)
    step = grid[1] - grid[0] if grid.size > 1 else 0.0
    best = None
    models = {}

    if n_pairs == 1:
        for fam in search.families:
            model = _PairModel(xi, fam, None)
            models[(fam,)] = model
            cand = _scan_single(model, grid, search)
            if _better(cand, best):
                best = cand
    else:
        if search.full:
            fam_pairs = list(itertools.product(search.families, repeat=2))
        else:
            fam_pairs = [(f, f) for f in search.families]
        for f1, f2 in fam_pairs:
            model = _PairModel(xi, f1, f2)
            models[(f1, f2)] = model
            cand = _scan_symmetric(model, grid) if f1 == f2 else None
            if search.full:
                full = _scan_full(model, grid)
                if cand is None or full.h < cand.h:
                    cand = full
            if _better(cand, best):
                best = cand
        if search.damping:
            fixed = _damping_fixed_probs(xi)
            chi_model = models.get(("B1", "B1")) or _damping_chi_model(xi)
            models["damping"] = chi_model
            h = _damping_entropy(fixed, chi_model, grid)
            i = int(np.argmin(h))
            cand = _Candidate(float(h[i]), ("damping",), (grid[i],), ("damping",))
            if _better(cand, best):
                best = cand

    if best is None:
        raise InvalidArgument("search specification selects no bases")

    if search.refine and step > 0:
        if best.fams == ("damping",):
            model = models["damping"]
            obj = lambda x: float(_damping_entropy(fixed, model, x[0])[0])
        elif n_pairs == 1:
            model = models[best.fams]
            obj = lambda x: _entropy_of_raw(model.probs_at(*x))
        elif search.full:
            model = models[best.fams]
            obj = lambda x: _entropy_of_raw(model.probs_at(*x))
        else:
            model = models[best.fams]
            obj = lambda x: _entropy_of_raw(model.probs_at(x[0], x[1], x[0], x[1]))
        x0 = best.angles if (search.full or best.fams == ("damping",) or n_pairs == 1) \
            else best.angles[:2]
        h_ref, x_ref = _refine(obj, x0, step, search.angle_tol)
        if h_ref < best.h:
            if len(x_ref) == 2 and n_pairs == 2:
                x_ref = (x_ref[0], x_ref[1], x_ref[0], x_ref[1])
            best = _Candidate(h_ref, best.key, x_ref, best.fams)

    basis = _basis_from_candidate(best, n_pairs)
    probs = probability_vector(xi, basis)
    h = float(_entropy_of_raw(probs))
    return EntropyMinimum(h, basis, probs)


# -- the witness ----------------------------------------------------------

@dataclass
class DetectionResult:
    q_det: float
    s_out: float
    h_min: float
    optimal_basis: object
    prob_vector: np.ndarray
    extras: dict = field(default_factory=dict)


def default_input(n_pairs: int = 2) -> np.ndarray:
    """|Phi+> on every (reference, system) pair."""
    return linalg.kron(*([PHI_PLUS] * n_pairs))


def output_state(ch: KrausChannel, psi=None) -> np.ndarray:
    """Joint (references + system) output state for input ``psi``."""
    n_pairs = 2 if ch.dim == 4 else 1
    if psi is None:
        psi = default_input(n_pairs)
    return apply_extended(ch, psi, [2] * n_pairs)


def reduced_input(psi, n_pairs: int) -> np.ndarray:
    keep = [2 * k + 1 for k in range(n_pairs)]
    return linalg.partial_trace(linalg.projector(psi), [2] * (2 * n_pairs), keep)


def q_det(ch: KrausChannel, psi=None, search: SearchSpec = DEFAULT_SEARCH) -> DetectionResult:
    """Detected capacity bound S[E(rho)] - min H(p) for input ``psi``.

    ``psi`` defaults to |Phi+>|Phi+> (or |Phi+> for a single-qubit channel).
    Negative values mean nothing was detected and are returned as-is.
    """
    if ch.dim not in (2, 4):
        raise InvalidArgument("q_det supports one- and two-qubit channels")
    n_pairs = 2 if ch.dim == 4 else 1
    if psi is None:
        psi = default_input(n_pairs)
    psi = linalg.normalize(psi)
    if psi.size != 4 ** n_pairs:
        raise InvalidArgument(f"input must have {4 ** n_pairs} amplitudes")
    s_out = von_neumann(apply(ch, reduced_input(psi, n_pairs)))
    xi = apply_extended(ch, psi, [2] * n_pairs)
    m = minimize_entropy(xi, search)
    return DetectionResult(s_out - m.h_min, s_out, m.h_min, m.label, m.probs)


def damping_literal_bound(eta: float, probs) -> dict:
    """Composition H(s) - H2((1-eta)/4) - H(q) for a damping-basis outcome
    vector, under both readings of q (raw chi weights, or renormalized)."""
    from .infotheory import binary_entropy, shannon

    s_vec = [(2 - eta) / 4, 0.25, 0.25, eta / 4]
    q = np.asarray(probs, dtype=float)[12:16]
    raw = float(-np.sum(np.where(q > 0, q * np.log2(np.where(q > 0, q, 1)), 0.0)))
    total = q.sum()
    norm = shannon(q / total) if total > 0 else 0.0
    base = shannon(s_vec) - binary_entropy((1 - eta) / 4)
    return {"raw_q": base - raw, "normalized_q": base - norm}


def adaptive_input(ch: KrausChannel, guess) -> DetectionResult:
    """Witness for a single-qubit channel with input (I_R x guess^dagger)|Phi+>,
    measured in the Bell basis."""
    guess = linalg.as_matrix(guess)
    if guess.shape != (2, 2) or ch.dim != 2:
        raise InvalidArgument("adaptive_input works with single-qubit channels")
    if np.max(np.abs(guess.conj().T @ guess - np.eye(2))) > 1e-10:
        raise InvalidArgument("guess must be unitary")
    psi = np.kron(np.eye(2), guess.conj().T) @ PHI_PLUS
    return q_det(ch, psi, BELL_ONLY)
