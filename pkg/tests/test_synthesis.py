import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symdiag.angles import SymmetryViolation, ThetaVector, random_symmetric_theta, rotation_angles
from symdiag.circuit import CNOT, RZ, Circuit, dense_unitary, extract_diagonal, gate_counts, max_phase_error, schedule_depth
from symdiag.resources import alg1_cnot, alg1_depth_bound, baseline_cnot, mirror_cnot
from symdiag.sequences import to_index
from symdiag.synthesis import (
    ALG1,
    BASELINE,
    MIRROR,
    alg1_layout,
    depth_reduction_pass,
    gray_walk,
    synthesize,
    synthesize_general,
    synthesize_mirror,
    synthesize_symmetric,
)

# measured with the ASAP scheduler; widths 2..12
DEPTH_BEFORE = [3, 6, 13, 25, 46, 84, 155, 292, 561, 1094, 2155]
DEPTH_AFTER = [3, 6, 10, 20, 39, 75, 144, 279, 546, 1077, 2136]


def phi_index(bits):
    return to_index(bits)


def test_layout_for_four_qubits():
    steps = alg1_layout(4)
    flat = [(t, c, k) for step in steps[1:] for t, c, k in step]
    assert steps[0] == [(3, 0, -1), (2, 0, -1), (1, 0, -1)]
    assert flat == [
        (3, 1, phi_index("1001")),
        (3, 2, phi_index("0101")),
        (2, 1, phi_index("1010")),
        (3, 1, phi_index("1111")),
        (1, 0, phi_index("1100")),
        (2, 1, phi_index("0110")),
        (3, 2, phi_index("0011")),
    ]


def test_four_qubit_listing_and_depths(rng):
    theta = random_symmetric_theta(4, rng)
    r = synthesize_symmetric(theta)
    phi = r.angles.values
    expected = [("C", 3, 0), ("C", 2, 0), ("C", 1, 0)]
    for t, c, bits in [(3, 1, "1001"), (3, 2, "0101"), (2, 1, "1010"), (3, 1, "1111"),
                       (1, 0, "1100"), (2, 1, "0110"), (3, 2, "0011")]:
        expected += [("R", t, phi[phi_index(bits)]), ("C", t, c)]
    got = [("C", g.target, g.control) if g.kind == CNOT else ("R", g.target, g.angle) for g in r.circuit.ops]
    assert got == expected
    assert schedule_depth(r.circuit) == 13


def test_depth_pass_four_qubit_listing(rng):
    theta = random_symmetric_theta(4, rng)
    r = depth_reduction_pass(synthesize_symmetric(theta))
    phi = r.angles.values

    def R(t, bits):
        return ("R", t, phi[phi_index(bits)])

    expected = [
        ("C", 3, 0), ("C", 1, 0), R(3, "1001"), ("C", 2, 0), ("C", 3, 1),
        R(3, "0101"), R(2, "1010"), R(1, "1100"), ("C", 3, 2),
        ("C", 2, 1), R(3, "1111"), ("C", 3, 1), ("C", 1, 0), R(2, "0110"),
        ("C", 2, 1), R(3, "0011"), ("C", 3, 2),
    ]
    got = [("C", g.target, g.control) if g.kind == CNOT else ("R", g.target, g.angle) for g in r.circuit.ops]
    assert got == expected
    assert schedule_depth(r.circuit) == 10
    assert r.depth_reduced and r.report.depth == 10


@pytest.mark.parametrize("m", range(1, 9))
def test_symmetric_matches_dense_oracle(m, rng):
    theta = random_symmetric_theta(m, rng)
    for r in (synthesize_symmetric(theta), synthesize(theta, ALG1, depth_pass=True)):
        u = dense_unitary(r.circuit)
        np.testing.assert_allclose(u, np.diag(np.exp(1j * theta.values)), atol=1e-10)


@pytest.mark.parametrize("m", range(2, 13))
def test_counts_and_depths(m):
    theta = random_symmetric_theta(m, np.random.default_rng(m))
    r = synthesize_symmetric(theta)
    assert gate_counts(r.circuit) == (alg1_cnot(m), 2 ** (m - 1) - 1)
    assert r.report.cnot == r.report.formula_cnot
    assert schedule_depth(r.circuit) == DEPTH_BEFORE[m - 2]
    assert r.report.depth <= alg1_depth_bound(m, reduced=False)
    p = depth_reduction_pass(r)
    assert gate_counts(p.circuit) == gate_counts(r.circuit)
    assert schedule_depth(p.circuit) == DEPTH_AFTER[m - 2]
    assert 2 ** (m - 1) <= p.report.depth <= alg1_depth_bound(m)
    assert max_phase_error(extract_diagonal(p.circuit), np.exp(1j * theta.values)) < 1e-9


def test_depth_pass_leaves_other_results_alone(rng):
    theta = random_symmetric_theta(3, rng)
    r = synthesize_symmetric(theta)
    assert depth_reduction_pass(r) is r
    b = synthesize_general(random_symmetric_theta(5, rng))
    assert depth_reduction_pass(b) is b
    p = depth_reduction_pass(synthesize_symmetric(random_symmetric_theta(5, rng)))
    assert depth_reduction_pass(p) is p


def test_global_phase_is_minus_half_phi0(rng):
    theta = random_symmetric_theta(4, rng)
    r = synthesize_symmetric(theta)
    assert r.circuit.global_phase == pytest.approx(-rotation_angles(theta).phi0 / 2)
    # the gates alone are off by exactly the declared factor
    bare = extract_diagonal(Circuit(4, r.circuit.ops))
    np.testing.assert_allclose(bare * np.exp(1j * r.circuit.global_phase), np.exp(1j * theta.values), atol=1e-12)


def test_symmetric_rejects_unsymmetric():
    with pytest.raises(SymmetryViolation):
        synthesize_symmetric(ThetaVector(2, [0.0, 1.0, 2.0, 3.0]))
    with pytest.raises(SymmetryViolation):
        synthesize_mirror(ThetaVector(2, [0.0, 1.0, 2.0, 3.0]))


@pytest.mark.parametrize("m", range(2, 13))
def test_baseline_counts_and_correctness(m):
    rng = np.random.default_rng(100 + m)
    theta = ThetaVector(m, rng.uniform(-np.pi, np.pi, 2**m))
    r = synthesize_general(theta)
    assert gate_counts(r.circuit) == (baseline_cnot(m), 2**m - 1)
    assert max_phase_error(extract_diagonal(r.circuit), np.exp(1j * theta.values)) < 1e-9


def test_baseline_drops_zero_rotations_for_symmetric_input(rng):
    theta = random_symmetric_theta(4, rng)
    r = synthesize_general(theta, keep_zero_rz=False)
    assert gate_counts(r.circuit) == (14, 7)
    assert max_phase_error(extract_diagonal(r.circuit), np.exp(1j * theta.values)) < 1e-12


@pytest.mark.parametrize("m", range(2, 13))
def test_mirror_counts_and_agreement(m):
    theta = random_symmetric_theta(m, np.random.default_rng(200 + m))
    r = synthesize_mirror(theta)
    assert gate_counts(r.circuit)[0] == mirror_cnot(m)
    d_alg1 = extract_diagonal(synthesize_symmetric(theta).circuit)
    assert max_phase_error(extract_diagonal(r.circuit), d_alg1) < 1e-9


@pytest.mark.parametrize("k", range(0, 6))
def test_gray_walk_visits_every_parity_once(k):
    controls = list(range(k))
    walk = gray_walk(k, controls)
    masks = [mask for mask, _ in walk]
    assert len(set(masks)) == 2**k
    assert all(mask >> k & 1 for mask in masks)
    # applying the walk's CNOTs returns every mask to the start
    for (mask, nxt), (next_mask, _) in zip(walk, walk[1:] + walk[:1]):
        if nxt >= 0:
            assert mask ^ next_mask == 1 << nxt


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**32 - 1), st.sampled_from([ALG1, MIRROR, BASELINE]))
def test_every_method_implements_the_diagonal(m, seed, method):
    theta = random_symmetric_theta(m, np.random.default_rng(seed))
    if method == MIRROR and m < 2:
        with pytest.raises(ValueError):
            synthesize(theta, method)
        return
    r = synthesize(theta, method)
    assert max_phase_error(extract_diagonal(r.circuit), np.exp(1j * theta.values)) < 1e-9


def test_unknown_method():
    with pytest.raises(ValueError):
        synthesize(ThetaVector(1, [0.0, 0.0]), "nope")


def test_single_qubit():
    theta = ThetaVector(1, [0.4, 0.4])
    r = synthesize_symmetric(theta)
    assert gate_counts(r.circuit) == (0, 1)
    assert all(g.kind == RZ for g in r.circuit.ops)
    assert max_phase_error(extract_diagonal(r.circuit), np.exp(1j * theta.values)) < 1e-12
