"""Pauli-algebra tests with a 2x2 Kronecker-product oracle."""

import numpy as np
import pytest

from vqsm.errors import CapacityError
from vqsm.pauli import (
    QubitHamiltonian,
    pauli_dense,
    pauli_key_from_label,
    pauli_mul,
    pauli_word_label,
    popcount,
)

_I = np.eye(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]])
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_SINGLE = {"I": _I, "X": _X, "Y": _Y, "Z": _Z}


def _kron_word(label):
    """Dense matrix from a label with leftmost char = qubit 0 (the LSB)."""
    mat = np.array([[1.0]], dtype=complex)
    for ch in label:  # qubit 0 varies fastest, so it is the rightmost factor
        mat = np.kron(_SINGLE[ch], mat)
    return mat


def _random_label(rng, n):
    return "".join(rng.choice(list("IXYZ")) for _ in range(n))


def test_popcount():
    assert list(popcount(np.array([0, 1, 3, 255, 2**20 - 1]))) == [0, 1, 2, 8, 20]


def test_label_round_trip():
    for label in ("IXZY", "XXXX", "IIII", "YZIX"):
        key = pauli_key_from_label(label)
        assert pauli_word_label(key, 4) == label


def test_invalid_label():
    with pytest.raises(ValueError):
        pauli_key_from_label("XQ")


def test_dense_single_qubit_z():
    assert np.allclose(pauli_dense(pauli_key_from_label("Z"), 1), np.diag([1, -1]))


def test_dense_matches_kron_oracle():
    rng = np.random.default_rng(0)
    for n in (1, 2, 3, 4):
        for _ in range(10):
            label = _random_label(rng, n)
            assert np.allclose(
                pauli_dense(pauli_key_from_label(label), n), _kron_word(label), atol=1e-12
            )


def test_product_matches_kron_oracle():
    rng = np.random.default_rng(1)
    for n in (1, 2, 3, 4):
        for _ in range(20):
            la, lb = _random_label(rng, n), _random_label(rng, n)
            key, phase = pauli_mul(pauli_key_from_label(la), pauli_key_from_label(lb))
            lhs = _kron_word(la) @ _kron_word(lb)
            rhs = phase * pauli_dense(key, n)
            assert np.allclose(lhs, rhs, atol=1e-12)


def test_product_associative():
    rng = np.random.default_rng(2)
    for _ in range(30):
        ka = pauli_key_from_label(_random_label(rng, 4))
        kb = pauli_key_from_label(_random_label(rng, 4))
        kc = pauli_key_from_label(_random_label(rng, 4))
        k_ab, p_ab = pauli_mul(ka, kb)
        k_left, p_left = pauli_mul(k_ab, kc)
        k_bc, p_bc = pauli_mul(kb, kc)
        k_right, p_right = pauli_mul(ka, k_bc)
        assert k_left == k_right
        assert p_ab * p_left == pytest.approx(p_bc * p_right)


def _random_hamiltonian(rng, n, n_terms=6):
    terms = {}
    while len(terms) < n_terms:
        key = pauli_key_from_label(_random_label(rng, n))
        if key != (0, 0):
            terms[key] = rng.normal()
    return QubitHamiltonian(n, terms, constant=rng.normal()).canonicalize()


def test_identity_only_hamiltonian():
    ham = QubitHamiltonian(2, {(0, 0): 1.2}, constant=0.3).canonicalize()
    assert ham.n_terms == 0
    assert np.allclose(ham.dense_matrix(), 1.5 * np.eye(4))


def test_apply_matches_dense():
    rng = np.random.default_rng(3)
    for n in (2, 4):
        ham = _random_hamiltonian(rng, n)
        dense = ham.dense_matrix()
        for _ in range(5):
            v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
            assert np.allclose(ham.apply(v), dense @ v, atol=1e-12)


def test_apply_matches_dense_above_dense_cache_cutoff():
    rng = np.random.default_rng(4)
    n = QubitHamiltonian.DENSE_APPLY_QUBITS + 1
    ham = _random_hamiltonian(rng, n, n_terms=4)
    v = rng.normal(size=1 << n)
    assert np.allclose(ham.apply(v), ham.dense_matrix() @ v, atol=1e-12)


def test_hermitian_and_real_expectation():
    rng = np.random.default_rng(5)
    ham = _random_hamiltonian(rng, 3)
    dense = ham.dense_matrix()
    assert np.allclose(dense, dense.conj().T, atol=1e-12)
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    v /= np.linalg.norm(v)
    assert abs(ham.expectation(v).imag) < 1e-12


def test_canonicalize_prunes_and_realifies():
    ham = QubitHamiltonian(2, {(1, 0): 1e-14, (2, 0): 0.5 + 1e-12j})
    ham.canonicalize()
    assert ham.terms == {(2, 0): 0.5}
    with pytest.raises(ValueError):
        QubitHamiltonian(1, {(1, 0): 1j}).canonicalize()


def test_text_round_trip():
    rng = np.random.default_rng(6)
    ham = _random_hamiltonian(rng, 3)
    back = QubitHamiltonian.from_text(ham.to_text())
    assert back.n_qubits == ham.n_qubits
    assert back.constant == pytest.approx(ham.constant, abs=1e-15)
    assert set(back.terms) == set(ham.terms)
    for key, coeff in ham.terms.items():
        assert back.terms[key] == pytest.approx(coeff, abs=1e-15)


def test_from_text_errors():
    with pytest.raises(ValueError):
        QubitHamiltonian.from_text("")
    with pytest.raises(ValueError):
        QubitHamiltonian.from_text("0.5 XZ\n0.25 XYZ\n")


def test_dense_capacity_guard():
    ham = QubitHamiltonian(15, {(1, 0): 1.0})
    with pytest.raises(CapacityError):
        ham.dense_matrix()
