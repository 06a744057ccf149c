"""Exact statevector simulation of the Ry/CNOT hardware-efficient ansatz.

States are numpy complex arrays of length 2^n with qubit 0 as the least
significant bit of the basis index. Gate application mutates in place.
"""

from dataclasses import dataclass, field

import numpy as np


def zero_state(n_qubits):
    vec = np.zeros(1 << n_qubits, dtype=complex)
    vec[0] = 1.0
    return vec


def _check_qubit(n_qubits, qubit):
    if not 0 <= qubit < n_qubits:
        raise IndexError(f"qubit {qubit} out of range for {n_qubits} qubits")


def apply_ry(state, qubit, angle):
    """In-place single-qubit rotation exp(-i angle Y / 2)."""
    n_qubits = state.size.bit_length() - 1
    _check_qubit(n_qubits, qubit)
    view = state.reshape(1 << (n_qubits - qubit - 1), 2, 1 << qubit)
    c, s = np.cos(angle / 2.0), np.sin(angle / 2.0)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = c * a0 - s * a1
    view[:, 1, :] = s * a0 + c * a1
    return state


_CNOT_INDEX_CACHE = {}


def apply_cnot(state, control, target):
    """In-place controlled-X."""
    n_qubits = state.size.bit_length() - 1
    _check_qubit(n_qubits, control)
    _check_qubit(n_qubits, target)
    if control == target:
        raise IndexError("control and target must differ")
    key = (n_qubits, control, target)
    if key not in _CNOT_INDEX_CACHE:
        idx = np.arange(state.size)
        src = idx[(idx >> control) & 1 == 1]
        _CNOT_INDEX_CACHE[key] = (src, src ^ (1 << target))
    src, flipped = _CNOT_INDEX_CACHE[key]
    state[src], state[flipped] = state[flipped].copy(), state[src].copy()
    return state


@dataclass(frozen=True)
class HeaCircuit:
    """Ry/CNOT hardware-efficient ansatz: an initial Ry layer on every qubit,
    then n_layers repetitions of [entangling CNOT chain, Ry layer]."""

    n_qubits: int
    n_layers: int
    entangler: str = "linear"  # or "all_to_all"

    def __post_init__(self):
        if self.entangler not in ("linear", "all_to_all"):
            raise ValueError(f"unknown entangler {self.entangler!r}")

    @property
    def n_params(self):
        return (self.n_layers + 1) * self.n_qubits

    @property
    def cnot_count(self):
        if self.entangler == "linear":
            per_layer = self.n_qubits - 1
        else:
            per_layer = self.n_qubits * (self.n_qubits - 1) // 2
        return self.n_layers * per_layer

    def entangler_pairs(self):
        if self.entangler == "linear":
            return [(q, q + 1) for q in range(self.n_qubits - 1)]
        return [(a, b) for a in range(self.n_qubits) for b in range(a + 1, self.n_qubits)]


def run_hea(circ: HeaCircuit, params, initial_state=None):
    """Prepare the ansatz state U(theta)|0...0> (or from a supplied state)."""
    params = np.asarray(params, dtype=float)
    if params.size != circ.n_params:
        raise ValueError(f"expected {circ.n_params} parameters, got {params.size}")
    state = zero_state(circ.n_qubits) if initial_state is None else initial_state.astype(complex)
    k = 0
    for q in range(circ.n_qubits):
        apply_ry(state, q, params[k])
        k += 1
    pairs = circ.entangler_pairs()
    for _ in range(circ.n_layers):
        for c, t in pairs:
            apply_cnot(state, c, t)
        for q in range(circ.n_qubits):
            apply_ry(state, q, params[k])
            k += 1
    return state


def overlap(bra, ket):
    if bra.shape != ket.shape:
        raise ValueError("statevector dimensions differ")
    return np.vdot(bra, ket)


def matrix_element(bra, hamiltonian, ket):
    """<bra|H|ket> via term-wise sparse Pauli application (ideal, infinite shots)."""
    if bra.shape != ket.shape:
        raise ValueError("statevector dimensions differ")
    return np.vdot(bra, hamiltonian.apply(ket))


@dataclass(frozen=True)
class GateCostModel:
    """CNOT costs assumed when promoting the circuit to a Hadamard-test version."""

    controlled_ry_cnots: int = 2
    toffoli_cnots: int = 6


@dataclass(frozen=True)
class ResourceEstimate:
    params: int
    cnot_native: int
    cnot_hadamard_test: int
    assumptions: dict = field(default_factory=dict)


def estimate_resources(n_qubits, n_layers, entangler="linear", model=None) -> ResourceEstimate:
    """Parameter and CNOT counts for the ansatz, native and Hadamard-test promoted.

    The Hadamard-test figure assumes two controlled copies of the circuit:
    every Ry becomes a controlled-Ry and every CNOT a Toffoli, at the costs
    recorded in the assumptions.
    """
    if model is None:
        model = GateCostModel()
    circ = HeaCircuit(n_qubits, n_layers, entangler)
    params = circ.n_params
    native = circ.cnot_count
    hadamard = 2 * (model.controlled_ry_cnots * params + model.toffoli_cnots * native)
    return ResourceEstimate(
        params=params,
        cnot_native=native,
        cnot_hadamard_test=hadamard,
        assumptions={
            "controlled_ry_cnots": model.controlled_ry_cnots,
            "toffoli_cnots": model.toffoli_cnots,
            "controlled_circuits": 2,
        },
    )
