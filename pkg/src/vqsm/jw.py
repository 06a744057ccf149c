"""Jordan-Wigner mapping of molecular-orbital Hamiltonians and determinant tools.

Spin-orbital ordering is blocked: all alpha orbitals first (qubits 0..n_orb-1,
in MO order) then all beta (qubits n_orb..2*n_orb-1). Qubit q occupied maps to
bit q of the computational basis index.
"""

import numpy as np

from vqsm.chem import MOIntegrals
from vqsm.pauli import QubitHamiltonian, pauli_mul, popcount


def spin_orbital(orbital, spin, n_orb):
    """Qubit index for (spatial orbital, spin); spin 0 = alpha, 1 = beta."""
    return orbital + spin * n_orb


def _ladder(p, dagger):
    """Jordan-Wigner ladder operator as a two-term Pauli sum.

    a_p(!) = Z_0 ... Z_{p-1} (X_p -+ i Y_p) / 2
    """
    chain = (1 << p) - 1
    x_term = ((1 << p, chain), 0.5)
    y_sign = -0.5j if dagger else 0.5j
    y_term = ((1 << p, chain | (1 << p)), y_sign)
    return [x_term, y_term]


def _multiply_sums(a, b):
    out = {}
    for key_a, ca in a:
        for key_b, cb in b:
            key, phase = pauli_mul(key_a, key_b)
            out[key] = out.get(key, 0.0) + ca * cb * phase
    return list(out.items())


def jordan_wigner(mo: MOIntegrals) -> QubitHamiltonian:
    """Map MO integrals to a qubit Hamiltonian on 2 * n_orb qubits."""
    n = mo.n_orb
    n_qubits = 2 * n
    ham = QubitHamiltonian(n_qubits, constant=mo.e_nuc)

    creators = {}
    annihilators = {}
    for q in range(n_qubits):
        creators[q] = _ladder(q, dagger=True)
        annihilators[q] = _ladder(q, dagger=False)

    def accumulate(terms, weight):
        for key, coeff in terms:
            ham.add_term(key, weight * coeff)

    # One-electron part: sum_{sigma,ij} h_ij a+_{i sigma} a_{j sigma}
    for sigma in (0, 1):
        for i in range(n):
            for j in range(n):
                hij = mo.h[i, j]
                if abs(hij) < 1e-14:
                    continue
                prod = _multiply_sums(
                    creators[spin_orbital(i, sigma, n)],
                    annihilators[spin_orbital(j, sigma, n)],
                )
                accumulate(prod, hij)

    # Two-electron part, chemists' notation:
    # 1/2 sum_{sigma,tau,ijkl} (ij|kl) a+_{i sigma} a+_{k tau} a_{l tau} a_{j sigma}
    for sigma in (0, 1):
        for tau in (0, 1):
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        for l in range(n):
                            gval = mo.g[i, j, k, l]
                            if abs(gval) < 1e-14:
                                continue
                            p = spin_orbital(i, sigma, n)
                            q = spin_orbital(k, tau, n)
                            r = spin_orbital(l, tau, n)
                            s = spin_orbital(j, sigma, n)
                            if p == q or r == s:
                                continue  # a+a+ or aa on the same mode vanishes
                            prod = _multiply_sums(creators[p], creators[q])
                            prod = _multiply_sums(prod, annihilators[r])
                            prod = _multiply_sums(prod, annihilators[s])
                            accumulate(prod, 0.5 * gval)

    return ham.canonicalize()


def number_operator(n_qubits) -> QubitHamiltonian:
    """Total particle number N = sum_q (I - Z_q) / 2."""
    ham = QubitHamiltonian(n_qubits, constant=n_qubits / 2.0)
    for q in range(n_qubits):
        ham.add_term((0, 1 << q), -0.5)
    return ham


def sz_operator(n_qubits) -> QubitHamiltonian:
    """Spin projection S_z = (N_alpha - N_beta) / 2 in the blocked ordering."""
    n_orb = n_qubits // 2
    ham = QubitHamiltonian(n_qubits, constant=0.0)
    for q in range(n_qubits):
        sign = 1.0 if q < n_orb else -1.0
        ham.add_term((0, 1 << q), -0.25 * sign)
    return ham


class Determinant:
    """Occupation bitstring over 2 * n_orb spin orbitals."""

    def __init__(self, occupation_mask, n_qubits):
        if occupation_mask < 0 or occupation_mask >= (1 << n_qubits):
            raise ValueError(f"occupation {occupation_mask:#x} does not fit {n_qubits} qubits")
        self.mask = occupation_mask
        self.n_qubits = n_qubits

    @classmethod
    def from_occupations(cls, n_orb, n_alpha, n_beta):
        """Aufbau filling of the lowest alpha/beta orbitals."""
        mask = 0
        for i in range(n_alpha):
            mask |= 1 << i
        for i in range(n_beta):
            mask |= 1 << (n_orb + i)
        return cls(mask, 2 * n_orb)

    @property
    def n_elec(self):
        return bin(self.mask).count("1")

    @property
    def sz2(self):
        n_orb = self.n_qubits // 2
        alpha = bin(self.mask & ((1 << n_orb) - 1)).count("1")
        return 2 * alpha - self.n_elec

    def __repr__(self):
        bits = "".join(str((self.mask >> q) & 1) for q in range(self.n_qubits))
        return f"Determinant({bits})"


def determinant_state(det: Determinant) -> np.ndarray:
    """Computational basis statevector with amplitude 1 at the occupation index."""
    vec = np.zeros(1 << det.n_qubits, dtype=complex)
    vec[det.mask] = 1.0
    return vec


def sector_indices(n_qubits, n_elec, sz2):
    """Basis indices whose alpha/beta occupations match (n_elec, sz2)."""
    n_orb = n_qubits // 2
    idx = np.arange(1 << n_qubits)
    alpha = popcount(idx & ((1 << n_orb) - 1))
    total = popcount(idx)
    beta = total - alpha
    keep = (total == n_elec) & (alpha - beta == sz2)
    return idx[keep]
