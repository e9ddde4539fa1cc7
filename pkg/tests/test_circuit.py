import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symdiag.circuit import (
    CNOT,
    RZ,
    Circuit,
    FBlock,
    Gate,
    LengthMismatch,
    NotDiagonal,
    apply_to_basis,
    basis_action,
    cnot,
    dense_unitary,
    dumps,
    equivalent_up_to_global_phase,
    expand_fblock,
    extract_diagonal,
    from_gates,
    gate_counts,
    loads,
    max_phase_error,
    rz,
    schedule_depth,
    schedule_layers,
    to_qasm,
)

from conftest import random_circuit


def test_fblock_expansion_order():
    phi = 0.3
    assert expand_fblock(FBlock(3, 1, phi)) == [rz(3, phi), cnot(3, 1)]
    assert FBlock(1, 0, 0.0).expand() == [rz(1, 0.0), cnot(1, 0)]
    assert FBlock(2, 1, np.pi).expand() == [Gate(RZ, 2, None, np.pi), Gate(CNOT, 2, 1)]


def test_gate_validation():
    with pytest.raises(ValueError):
        cnot(1, 1)
    with pytest.raises(ValueError):
        Gate("H", 0)
    with pytest.raises(ValueError):
        Circuit(2, (cnot(2, 0),))
    with pytest.raises(ValueError):
        Circuit(0)


def test_qubit_zero_is_most_significant():
    c = Circuit(3, (cnot(2, 0),))
    # q = 0b100: qubit 0 set, so qubit 2 (least significant) flips
    assert apply_to_basis(c, 0b100) == (0b101, 0.0)
    assert apply_to_basis(c, 0b001) == (0b001, 0.0)


def test_rz_phase_convention():
    c = Circuit(2, (rz(1, 0.8),))
    assert apply_to_basis(c, 0b00)[1] == pytest.approx(-0.4)
    assert apply_to_basis(c, 0b01)[1] == pytest.approx(0.4)


def test_extract_diagonal_includes_global_phase():
    c = Circuit(1, (rz(0, 1.0),), global_phase=0.25)
    d = extract_diagonal(c)
    np.testing.assert_allclose(d, np.exp(1j * np.array([-0.5 + 0.25, 0.5 + 0.25])))


def test_not_diagonal_reports_first_bad_index():
    with pytest.raises(NotDiagonal) as info:
        extract_diagonal(Circuit(2, (cnot(1, 0),)))
    assert info.value.index == 2 and info.value.image == 3


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), width=st.integers(1, 5), n=st.integers(0, 40))
def test_basis_action_matches_dense_unitary(seed, width, n):
    c = random_circuit(np.random.default_rng(seed), width, n)
    u = dense_unitary(c)
    idx, phase = basis_action(c)
    for q in range(2**width):
        expected = np.zeros(2**width, dtype=complex)
        expected[idx[q]] = np.exp(1j * (phase[q] + c.global_phase))
        np.testing.assert_allclose(u[:, q], expected, atol=1e-12)
        assert apply_to_basis(c, q)[0] == idx[q]
        assert apply_to_basis(c, q)[1] == pytest.approx(phase[q], abs=1e-12)


def test_equivalence_is_phase_blind_and_detects_errors():
    d = np.exp(1j * np.linspace(0, 3, 8))
    assert equivalent_up_to_global_phase(d, d * np.exp(0.7j))
    bad = d.copy()
    bad[5] *= np.exp(1e-6j)
    assert not equivalent_up_to_global_phase(d, bad)
    assert max_phase_error(d, bad) == pytest.approx(1e-6, rel=1e-3)
    with pytest.raises(LengthMismatch):
        equivalent_up_to_global_phase(d, d[:4])


def test_schedule_depth_asap():
    c = Circuit(4, (cnot(1, 0), rz(2, 0.1), rz(3, 0.2), cnot(3, 2), cnot(2, 1)))
    layers = schedule_layers(c)
    assert [len(layer) for layer in layers] == [3, 1, 1]
    assert schedule_depth(c) == 3
    assert schedule_depth(Circuit(2)) == 0


def test_gate_counts():
    c = from_gates(3, [FBlock(2, 1, 0.1), cnot(1, 0), rz(0, 0.2)])
    assert gate_counts(c) == (2, 2)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), width=st.integers(1, 6))
def test_text_format_round_trip(seed, width):
    c = random_circuit(np.random.default_rng(seed), width, 25)
    assert loads(dumps(c)) == c


def test_text_format_header_and_errors():
    c = Circuit(2, (cnot(1, 0), rz(0, 0.5)), global_phase=0.125)
    text = dumps(c)
    assert text.splitlines() == ["width=2 global_phase=0.125", "CNOT 1 0", "RZ 0 0.5"]
    with pytest.raises(ValueError):
        loads("width=2\nH 0\n")
    with pytest.raises(ValueError):
        loads("")


def test_qasm_export():
    q = to_qasm(Circuit(2, (cnot(1, 0), rz(1, 0.5)), 0.25))
    assert "qreg q[2];" in q
    assert "cx q[0],q[1];" in q
    assert "rz(0.5) q[1];" in q
    assert "// global_phase 0.25" in q
