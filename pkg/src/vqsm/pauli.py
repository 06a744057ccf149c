"""Pauli-string algebra and weighted-sum qubit Hamiltonians.

A Pauli word on n qubits is stored as a pair of bit masks (x_mask, z_mask):
X where only the x bit is set, Z where only the z bit is set, Y where both
are. Qubit 0 is the least significant bit of the computational basis index.
The true (self-adjoint) word relates to the symplectic product X^x Z^z by
W(x, z) = i^{popcount(x & z)} X^x Z^z.
"""

import numpy as np

from vqsm.errors import CapacityError

COEFF_PRUNE_TOL = 1e-12
DENSE_QUBIT_GUARD = 14

_POP16 = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.int64)


def popcount(arr):
    """Vectorized population count for masks below 2^32."""
    arr = np.asarray(arr, dtype=np.int64)
    return _POP16[arr & 0xFFFF] + _POP16[(arr >> 16) & 0xFFFF]


def pauli_mul(key1, key2):
    """Product of two Pauli words. Returns ((x, z), phase) with W1 W2 = phase * W."""
    x1, z1 = key1
    x2, z2 = key2
    x3, z3 = x1 ^ x2, z1 ^ z2
    # Phase from the per-qubit Y factors and from commuting Z^z1 past X^x2.
    k = (
        bin(x1 & z1).count("1")
        + bin(x2 & z2).count("1")
        - bin(x3 & z3).count("1")
        + 2 * bin(z1 & x2).count("1")
    )
    return (x3, z3), 1j ** (k % 4)


def pauli_word_label(key, n_qubits):
    """Human-readable word, leftmost character = qubit 0."""
    x, z = key
    chars = []
    for q in range(n_qubits):
        xb, zb = (x >> q) & 1, (z >> q) & 1
        chars.append("IXZY"[xb + 2 * zb])
    return "".join(chars)


def pauli_key_from_label(label):
    x = z = 0
    for q, ch in enumerate(label.strip().upper()):
        if ch == "X":
            x |= 1 << q
        elif ch == "Z":
            z |= 1 << q
        elif ch == "Y":
            x |= 1 << q
            z |= 1 << q
        elif ch != "I":
            raise ValueError(f"invalid Pauli character {ch!r}")
    return x, z


def pauli_dense(key, n_qubits):
    """Dense 2^n x 2^n matrix of a single Pauli word."""
    x, z = key
    dim = 1 << n_qubits
    idx = np.arange(dim)
    phase = (1j) ** bin(x & z).count("1")
    signs = 1.0 - 2.0 * (popcount(idx & z) & 1)
    mat = np.zeros((dim, dim), dtype=complex)
    mat[idx ^ x, idx] = phase * signs
    return mat


class QubitHamiltonian:
    """Weighted sum of Pauli words plus an identity constant.

    Coefficients are real after canonicalization (the molecular Hamiltonians
    this package builds are real in a real orbital basis); terms below
    COEFF_PRUNE_TOL are dropped.
    """

    # Below this size apply() goes through a cached dense matrix: one matvec
    # beats term-wise application by an order of magnitude for hot loops.
    DENSE_APPLY_QUBITS = 10

    def __init__(self, n_qubits, terms=None, constant=0.0):
        self.n_qubits = n_qubits
        self.terms = dict(terms) if terms else {}
        self.constant = constant
        self._apply_cache = None
        self._dense_cache = None

    def canonicalize(self, tol=COEFF_PRUNE_TOL):
        """Fold the identity into the constant, drop tiny terms, realify coefficients."""
        identity = self.terms.pop((0, 0), 0.0)
        self.constant += complex(identity).real
        cleaned = {}
        for key, coeff in self.terms.items():
            coeff = complex(coeff)
            if abs(coeff.imag) > 1e-9:
                raise ValueError(
                    f"non-real coefficient {coeff} for {pauli_word_label(key, self.n_qubits)}"
                )
            if abs(coeff.real) > tol:
                cleaned[key] = coeff.real
        self.terms = cleaned
        self._apply_cache = None
        self._dense_cache = None
        return self

    @property
    def n_terms(self):
        return len(self.terms)

    def add_term(self, key, coeff):
        self.terms[key] = self.terms.get(key, 0.0) + coeff
        self._apply_cache = None
        self._dense_cache = None

    def _term_arrays(self):
        if self._apply_cache is None:
            dim = 1 << self.n_qubits
            idx = np.arange(dim)
            perms, phases = [], []
            for (x, z), coeff in self.terms.items():
                y_phase = (1j) ** bin(x & z).count("1")
                signs = 1.0 - 2.0 * (popcount(idx & z) & 1)
                perms.append(idx ^ x)
                phases.append(coeff * y_phase * signs)
            self._apply_cache = (perms, phases)
        return self._apply_cache

    def apply(self, vec):
        """H @ vec, via a cached dense matrix for small registers or term-wise
        sparse Pauli application for larger ones."""
        vec = np.asarray(vec)
        if self.n_qubits <= self.DENSE_APPLY_QUBITS:
            if self._dense_cache is None:
                self._dense_cache = self.dense_matrix()
            return self._dense_cache @ vec.astype(complex)
        out = self.constant * vec.astype(complex)
        for perm, phase in zip(*self._term_arrays()):
            out[perm] += phase * vec
        return out

    def dense_matrix(self):
        if self.n_qubits > DENSE_QUBIT_GUARD:
            raise CapacityError(
                f"dense realization refused for n_qubits={self.n_qubits} "
                f"(guard {DENSE_QUBIT_GUARD})"
            )
        dim = 1 << self.n_qubits
        mat = self.constant * np.eye(dim, dtype=complex)
        idx = np.arange(dim)
        for perm, phase in zip(*self._term_arrays()):
            mat[perm, idx] += phase
        return mat

    def expectation(self, vec):
        return np.vdot(vec, self.apply(vec))

    def to_text(self):
        """One term per line: 'coeff PAULIWORD' (leftmost char = qubit 0)."""
        lines = []
        if self.constant != 0.0:
            lines.append(f"{self.constant:.17g} {'I' * self.n_qubits}")
        for key in sorted(self.terms):
            lines.append(f"{self.terms[key]:.17g} {pauli_word_label(key, self.n_qubits)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        terms = {}
        constant = 0.0
        n_qubits = None
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            coeff_str, word = line.split()
            if n_qubits is None:
                n_qubits = len(word)
            elif len(word) != n_qubits:
                raise ValueError(f"inconsistent word length in {line!r}")
            key = pauli_key_from_label(word)
            coeff = float(coeff_str)
            if key == (0, 0):
                constant += coeff
            else:
                terms[key] = terms.get(key, 0.0) + coeff
        if n_qubits is None:
            raise ValueError("empty Pauli-list text")
        return cls(n_qubits, terms, constant).canonicalize()

    def __repr__(self):
        return (
            f"QubitHamiltonian(n_qubits={self.n_qubits}, n_terms={self.n_terms}, "
            f"constant={self.constant:.6f})"
        )
