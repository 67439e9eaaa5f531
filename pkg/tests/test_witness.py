import numpy as np
import pytest

import oracles
from capwitness import linalg
from capwitness.channels import (DampingParams, DephasingParams, DepolarizingParams, KrausChannel,
                                 build_damping, build_dephasing, build_depolarizing,
                                 build_unitary_example, identity_channel)
from capwitness.errors import InvalidArgument
from capwitness.infotheory import entropy_exchange, shannon, von_neumann
from capwitness.witness import (BELL_ONLY, DAMPING_SEARCH, DEFAULT_SEARCH, DampingLabel,
                                PairBasisSpec, ProductBasis, SearchSpec, accessible_span_check,
                                adaptive_input, bell_states, damping_basis, damping_literal_bound,
                                minimize_entropy, output_state, pair_basis, probability_vector,
                                product_basis, q_det)

PHI_P, PHI_M, PSI_P, PSI_M = bell_states()
MIXED = np.eye(4) / 4
BELL_BELL = product_basis(PairBasisSpec("B1"), PairBasisSpec("B1"))


def counterexample_basis():
    """One-pair basis with the real superposition (Phi+ + Psi-)/sqrt 2."""
    s = 1 / np.sqrt(2)
    vecs = np.array([s * (PHI_P + PSI_M), s * (PHI_P - PSI_M), PHI_M, PSI_P])
    return ProductBasis(vecs, "counterexample")


# -- Bell states and pair bases --------------------------------------------

def test_bell_states():
    assert abs(np.vdot(PHI_P, PHI_M)) < 1e-15
    assert np.allclose(linalg.kron(linalg.Z, linalg.I2) @ PHI_P, PHI_M)
    assert np.allclose(linalg.kron(linalg.X, linalg.X) @ PHI_P, PHI_P)
    assert np.allclose(np.array(bell_states()), oracles.BELL)


def test_b1_at_zero_is_bell_basis():
    assert np.allclose(pair_basis(PairBasisSpec("B1", 0, 0)), [PHI_P, PHI_M, PSI_P, PSI_M])


def test_b2_quarter_turn_contains_uniform_state():
    vecs = pair_basis(PairBasisSpec("B2", np.pi / 4, np.pi / 4))
    assert np.allclose(vecs[0], np.full(4, 0.5))


def test_b3_carries_imaginary_phase():
    vecs = pair_basis(PairBasisSpec("B3", np.pi / 4, 0))
    assert np.allclose(vecs[0], (PHI_P + 1j * PSI_M) / np.sqrt(2))


@pytest.mark.parametrize("family", ["B1", "B2", "B3"])
def test_pair_bases_orthonormal(family):
    rng = np.random.default_rng(0)
    for theta, phi in rng.uniform(0, 2 * np.pi, size=(20, 2)):
        v = pair_basis(PairBasisSpec(family, theta, phi))
        assert np.allclose(v.conj() @ v.T, np.eye(4), atol=1e-12)


def test_unknown_family():
    with pytest.raises(InvalidArgument):
        PairBasisSpec("B4")


def test_product_basis_on_product_state_factorizes():
    rng = np.random.default_rng(1)
    r1, r2 = oracles.random_density(rng, 4), oracles.random_density(rng, 4)
    s1, s2 = PairBasisSpec("B2", 0.3, 1.1), PairBasisSpec("B3", 2.0, 0.7)
    p = probability_vector(np.kron(r1, r2), product_basis(s1, s2))
    p1 = probability_vector(r1, product_basis(s1))
    p2 = probability_vector(r2, product_basis(s2))
    assert np.allclose(p, np.outer(p1, p2).ravel(), atol=1e-12)


def test_bell_product_on_dephasing_output():
    p = probability_vector(oracles.dephasing_output(0.2, 0.5), BELL_BELL)
    # order: slots (Phi+, Phi-, Psi+, Psi-) on each pair
    assert p[0] == pytest.approx(0.72) and p[5] == pytest.approx(0.12)
    assert p[1] == pytest.approx(0.08) and p[4] == pytest.approx(0.08)
    assert np.allclose(np.delete(p, [0, 1, 4, 5]), 0, atol=1e-12)


def test_bell_product_on_depolarizing_output():
    p = probability_vector(oracles.depolarizing_output(0.15, 0.0), BELL_BELL)
    marg = np.array([0.85, 0.05, 0.05, 0.05])
    # Bell slot order (Phi+, Phi-, Psi+, Psi-) corresponds to Paulis (I, Z, X, Y)
    assert np.allclose(p, np.outer(marg, marg).ravel(), atol=1e-12)
    assert p[0] == pytest.approx(0.7225)
    mu = 0.4
    p = probability_vector(oracles.depolarizing_output(0.15, mu), BELL_BELL)
    assert p[0] == pytest.approx((1 - mu) * 0.85 ** 2 + mu * 0.85)


# -- damping basis ---------------------------------------------------------

def test_damping_basis_at_a1():
    b = damping_basis(1.0)
    chis = b.vectors[12:]
    expect = [np.kron(x, y) for x in (PHI_P, PHI_M) for y in (PHI_P, PHI_M)]
    assert np.allclose(chis, expect)
    assert isinstance(b.label, DampingLabel) and b.label.b == 0


@pytest.mark.parametrize("eta", [0.0, 0.36, 0.81, 1.0])
def test_damping_chi1_overlap(eta):
    xi = oracles.damping_output(eta)
    p = probability_vector(xi, damping_basis(1.0))
    assert p[12] == pytest.approx((3 + np.sqrt(eta)) ** 2 / 16, abs=1e-12)


def test_damping_basis_total_probability():
    rng = np.random.default_rng(2)
    for eta, a in rng.uniform(size=(20, 2)):
        raw = np.einsum("ki,ij,kj->k", damping_basis(2 * a - 1).vectors.conj(),
                        oracles.damping_output(eta), damping_basis(2 * a - 1).vectors).real
        assert raw.sum() == pytest.approx(1, abs=1e-12)


def test_damping_basis_rejects_bad_a():
    with pytest.raises(InvalidArgument):
        damping_basis(1.5)


@pytest.mark.parametrize("eta", [0.0, 0.25, 0.5, 0.9])
def test_damping_null_and_decay_entries(eta):
    xi = output_state(build_damping(DampingParams(eta)))
    for a in (1.0, 0.6, -0.3):
        p = probability_vector(xi, damping_basis(a))
        assert np.max(np.abs(p[:11])) <= 1e-12
        assert abs(p[11] - (1 - eta) / 4) <= 1e-12


# -- accessibility ---------------------------------------------------------

def test_bell_bell_is_accessible():
    assert accessible_span_check(BELL_BELL)


def test_counterexample_is_not_accessible():
    chk = accessible_span_check(counterexample_basis())
    assert not chk
    assert chk.residuals[0] > 0.1 and chk.residuals[2] < 1e-12


def test_generated_bases_are_accessible():
    rng = np.random.default_rng(3)
    for _ in range(30):
        f1, f2 = rng.choice(["B1", "B2", "B3"], size=2)
        t = rng.uniform(0, 2 * np.pi, size=4)
        b = product_basis(PairBasisSpec(f1, t[0], t[1]), PairBasisSpec(f2, t[2], t[3]))
        assert b.check_orthonormal()
        assert accessible_span_check(b)
    for a in np.linspace(-1, 1, 9):
        assert accessible_span_check(damping_basis(a))
        assert damping_basis(a).check_orthonormal()


# -- probability vectors and the search ------------------------------------

def test_probability_vector_dimension_check():
    with pytest.raises(InvalidArgument):
        probability_vector(np.eye(4) / 4, BELL_BELL)


def test_damping_identity_is_pure_on_chi1():
    p = probability_vector(output_state(build_damping(DampingParams(1.0))), damping_basis(1.0))
    assert p[12] == pytest.approx(1) and np.allclose(np.delete(p, 12), 0, atol=1e-12)


def test_minimize_dephasing_at_bell_product():
    m = minimize_entropy(oracles.dephasing_output(0.2, 0.5))
    assert m.h_min == pytest.approx(shannon([0.72, 0.12, 0.08, 0.08]), abs=1e-9)
    h, label, probs = m
    assert h == m.h_min and probs.shape == (16,)


def test_minimize_depolarizing():
    xi = oracles.depolarizing_output(0.1, 0.3)
    joint = oracles.markov_joint([0.9, 0.1 / 3, 0.1 / 3, 0.1 / 3], 0.3)
    assert minimize_entropy(xi).h_min == pytest.approx(oracles.h(joint), abs=1e-9)


def test_minimize_damping_identity():
    m = minimize_entropy(oracles.damping_output(1.0), DAMPING_SEARCH)
    assert m.h_min == pytest.approx(0, abs=1e-9)


def test_search_is_deterministic():
    xi = oracles.damping_output(0.4)
    a, b = minimize_entropy(xi, DAMPING_SEARCH), minimize_entropy(xi, DAMPING_SEARCH)
    assert a.h_min == b.h_min and a.label == b.label


@pytest.mark.parametrize("seed", range(6))
def test_minimum_below_random_bases(seed):
    rng = np.random.default_rng(100 + seed)
    ch = KrausChannel(4, tuple(oracles.random_isometry_kraus(rng, 2)))
    xi = output_state(ch)
    sym = minimize_entropy(xi).h_min
    full = minimize_entropy(xi, SearchSpec(full=True)).h_min
    assert full <= sym + 1e-12
    for _ in range(40):
        fam = rng.choice(["B1", "B2", "B3"])
        t, f = rng.uniform(0, 2 * np.pi, size=2)
        spec = PairBasisSpec(fam, t, f)
        assert shannon(probability_vector(xi, product_basis(spec, spec))) >= sym - 1e-9
        f1, f2 = rng.choice(["B1", "B2", "B3"], size=2)
        t = rng.uniform(0, 2 * np.pi, size=4)
        b = product_basis(PairBasisSpec(f1, t[0], t[1]), PairBasisSpec(f2, t[2], t[3]))
        # grid step pi/360 plus refinement: the full scan is within 1e-6 of any point
        assert shannon(probability_vector(xi, b)) >= full - 1e-6


def test_enlarging_search_never_increases_minimum():
    rng = np.random.default_rng(7)
    xi = output_state(KrausChannel(4, tuple(oracles.random_isometry_kraus(rng, 3))))
    specs = [SearchSpec(families=("B1",)), SearchSpec(families=("B1", "B2")), DEFAULT_SEARCH,
             SearchSpec(damping=True), SearchSpec(damping=True, full=True)]
    vals = [minimize_entropy(xi, s).h_min for s in specs]
    assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


def test_empty_search_rejected():
    with pytest.raises(InvalidArgument):
        minimize_entropy(oracles.dephasing_output(0.1, 0.1), SearchSpec(families=()))


# -- q_det -----------------------------------------------------------------

def test_q_det_fields_consistent():
    r = q_det(build_dephasing(DephasingParams(0.3, 0.2)))
    assert r.q_det == pytest.approx(r.s_out - r.h_min, abs=1e-12)
    assert r.s_out == pytest.approx(2)
    assert r.prob_vector.sum() == pytest.approx(1)


@pytest.mark.parametrize("p,mu", [(0.01, 0.0), (0.2, 0.5), (0.5, 1.0), (0.3, 0.77)])
def test_q_det_dephasing(p, mu):
    assert q_det(build_dephasing(DephasingParams(p, mu))).q_det == pytest.approx(
        oracles.dephasing_capacity(p, mu), abs=1e-9)


def test_q_det_depolarizing_fully_correlated():
    r = q_det(build_depolarizing(DepolarizingParams(0.15, 1.0)))
    assert r.q_det == pytest.approx(1.152416, abs=1e-5)


def test_q_det_damping_identity():
    assert q_det(build_damping(DampingParams(1.0)), search=DAMPING_SEARCH).q_det == pytest.approx(2)


@pytest.mark.parametrize("make", [
    lambda: build_dephasing(DephasingParams(0.2, 0.4)),
    lambda: build_depolarizing(DepolarizingParams(0.1, 0.6)),
    lambda: build_damping(DampingParams(1.0)),
])
def test_equality_when_basis_diagonalizes(make):
    ch = make()
    r = q_det(ch, search=SearchSpec(damping=True))
    assert r.h_min == pytest.approx(entropy_exchange(ch, MIXED), abs=1e-9)


def test_q_det_rejects_wrong_input_size():
    with pytest.raises(InvalidArgument):
        q_det(identity_channel(4), psi=np.ones(4) / 2)


def test_unitary_example_non_adaptive():
    ch = build_unitary_example((1, 1, 1))
    r = adaptive_input(ch, np.eye(2))
    assert r.h_min == pytest.approx(2, abs=1e-9)
    assert r.q_det == pytest.approx(-1, abs=1e-9)


def test_unitary_example_adaptive():
    ch = build_unitary_example((1, 1, 1))
    r = adaptive_input(ch, ch.kraus[0])
    assert r.h_min == pytest.approx(0, abs=1e-9)
    assert r.q_det == pytest.approx(1, abs=1e-9)


def test_identity_adaptive():
    assert adaptive_input(identity_channel(2), np.eye(2)).q_det == pytest.approx(1, abs=1e-9)


def test_adaptive_rejects_non_unitary_guess():
    with pytest.raises(InvalidArgument):
        adaptive_input(identity_channel(2), np.diag([1, 0.5]))


def test_damping_literal_bound_readings():
    eta = 0.75
    r = q_det(build_damping(DampingParams(eta)), search=SearchSpec(families=(), damping=True))
    lit = damping_literal_bound(eta, r.prob_vector)
    q = r.prob_vector[12:]
    s_part = oracles.h([(2 - eta) / 4, 0.25, 0.25, eta / 4]) - oracles.h2((1 - eta) / 4)
    assert lit["raw_q"] == pytest.approx(s_part + float(np.sum(q * np.log2(q))), abs=1e-12)
    assert lit["normalized_q"] == pytest.approx(s_part - oracles.h(q / q.sum()), abs=1e-12)
    assert von_neumann(np.diag([(2 - eta) / 4, 0.25, 0.25, eta / 4])) == pytest.approx(r.s_out)
