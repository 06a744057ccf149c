"""Two-level cost functions and the reduced density block.

All three costs act on the effective 2x2 Hamiltonian assembled from the
reference vector and an orthogonalized variational trial vector.
"""

from dataclasses import dataclass

import numpy as np

from vqsm.errors import DegenerateGapError

DEGENERATE_GAP_TOL = 1e-12


@dataclass(frozen=True)
class TwoLevelBlock:
    """Hermitian 2x2 effective Hamiltonian; h10 = conj(h01) implicitly."""

    h00: float
    h11: float
    h01: complex

    @property
    def gap(self):
        """Delta = h11 - h00."""
        return self.h11 - self.h00

    def as_matrix(self):
        return np.array(
            [[self.h00, np.conj(self.h01)], [self.h01, self.h11]], dtype=complex
        )


@dataclass(frozen=True)
class TwoLevelGround:
    energy: float
    omega: float
    nu: int


def gain_energy(block: TwoLevelBlock) -> float:
    """Energy gained by coupling the reference to the trial level.

    Evaluates Delta/2 * [1 - sqrt(1 + 4|h01|^2/Delta^2)] verbatim, so the
    result is negative iff Delta > 0: the Delta < 0 branch is positive and
    acts as a penalty that keeps the reference weight above one half.
    """
    delta = block.gap
    if abs(delta) < DEGENERATE_GAP_TOL:
        raise DegenerateGapError(
            f"two-level gap {delta:.3e} below guard; gain energy is unstable"
        )
    coupling = abs(block.h01) ** 2
    return delta / 2.0 * (1.0 - np.sqrt(1.0 + 4.0 * coupling / delta**2))


def interaction_energy(block: TwoLevelBlock) -> float:
    """Negative modulus of the reference-trial coupling, -|h01|.

    Zero iff the trial state is H-decoupled from the reference, which is what
    makes the cost blind to states outside the reference's symmetry sector.
    """
    return -abs(block.h01)


def tridiag_cost(h_sub: np.ndarray) -> float:
    """Coupling between the two newest subspace vectors, -|H_sub[n, n-1]|."""
    h_sub = np.asarray(h_sub)
    n = h_sub.shape[0] - 1
    if n < 1:
        raise ValueError("subspace must contain at least two vectors")
    return -abs(h_sub[n, n - 1])


def two_level_ground(block: TwoLevelBlock) -> TwoLevelGround:
    """Exact ground state of the 2x2 block.

    omega is the modulus of the ground-state component on the first basis
    vector; nu fixes the sign so the trial component is nonnegative.
    """
    delta = block.gap
    coupling = abs(block.h01)
    energy = (block.h00 + block.h11) / 2.0 - np.sqrt(delta**2 / 4.0 + coupling**2)
    if coupling == 0.0:
        if block.h00 <= block.h11:
            return TwoLevelGround(energy=block.h00, omega=1.0, nu=1)
        return TwoLevelGround(energy=block.h11, omega=0.0, nu=1)
    vals, vecs = np.linalg.eigh(block.as_matrix())
    ground = vecs[:, 0]
    # Global phase: make the reference component real nonnegative, so that
    # ground = omega * e0 + nu * sqrt(1 - omega^2) * e1 with omega in [0, 1].
    if abs(ground[0]) > 0:
        ground = ground * np.exp(-1j * np.angle(ground[0]))
    omega = abs(ground[0])
    nu = 1 if ground[1].real >= 0 else -1
    return TwoLevelGround(energy=vals[0], omega=float(omega), nu=nu)


def gamma_block(omega: float) -> np.ndarray:
    """Idempotent 2x2 ground-state density block parameterized by omega."""
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega must lie in [0, 1], got {omega}")
    w2 = omega**2
    cross = np.sqrt(w2 * (1.0 - w2))
    return np.array([[w2, cross], [cross, 1.0 - w2]])
