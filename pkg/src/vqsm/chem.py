"""STO-3G electronic structure for hydrogen geometries.

Only s-type Gaussians are needed (every center is a hydrogen atom), so all
one- and two-electron integrals have closed forms involving a single Boys
function F0. Geometries are specified in Angstrom at the API surface and
converted to Bohr internally.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf

from vqsm.errors import GeometryError, ScfError

BOHR_IN_ANGSTROM = 0.52917721067

# STO-3G hydrogen 1s parameters (Basis Set Exchange).
STO3G_H_EXPONENTS = np.array([3.42525091, 0.62391373, 0.16885540])
STO3G_H_COEFFICIENTS = np.array([0.15432897, 0.53532814, 0.44463454])


@dataclass(frozen=True)
class Geometry:
    """Hydrogen-atom arrangement with net charge and spin occupation.

    atoms: list of 3-vectors in Angstrom.
    """

    atoms: tuple
    net_charge: int = 0
    n_alpha: int = None
    n_beta: int = None

    def __post_init__(self):
        atoms = tuple(tuple(float(x) for x in a) for a in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        n_elec = len(atoms) - self.net_charge
        n_alpha = self.n_alpha
        n_beta = self.n_beta
        if n_alpha is None and n_beta is None:
            n_beta = n_elec // 2
            n_alpha = n_elec - n_beta
        object.__setattr__(self, "n_alpha", n_alpha)
        object.__setattr__(self, "n_beta", n_beta)
        if n_alpha + n_beta != n_elec:
            raise GeometryError(
                f"n_alpha + n_beta = {n_alpha + n_beta} inconsistent with "
                f"{len(atoms)} atoms and net charge {self.net_charge}"
            )
        if not (n_alpha >= n_beta >= 0):
            raise GeometryError(f"require n_alpha >= n_beta >= 0, got ({n_alpha}, {n_beta})")
        pts = np.asarray(atoms, dtype=float)
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if np.linalg.norm(pts[i] - pts[j]) <= 1e-6:
                    raise GeometryError(f"atoms {i} and {j} coincide")

    @property
    def n_atoms(self):
        return len(self.atoms)

    @property
    def n_elec(self):
        return self.n_alpha + self.n_beta

    @property
    def sz2(self):
        """Twice the spin projection, n_alpha - n_beta."""
        return self.n_alpha - self.n_beta

    def coords_bohr(self):
        return np.asarray(self.atoms, dtype=float) / BOHR_IN_ANGSTROM


def chain_geometry(n_atoms, d, net_charge=0, n_alpha=None, n_beta=None):
    """Collinear H_n chain with spacing d (Angstrom) along x."""
    atoms = [(i * d, 0.0, 0.0) for i in range(n_atoms)]
    return Geometry(atoms, net_charge, n_alpha, n_beta)


def ring_geometry(n_atoms, d, net_charge=0, n_alpha=None, n_beta=None):
    """Regular H_n polygon with edge length d (Angstrom) in the xy plane."""
    radius = d / (2.0 * np.sin(np.pi / n_atoms))
    atoms = [
        (radius * np.cos(2 * np.pi * k / n_atoms), radius * np.sin(2 * np.pi * k / n_atoms), 0.0)
        for k in range(n_atoms)
    ]
    return Geometry(atoms, net_charge, n_alpha, n_beta)


@dataclass(frozen=True)
class ContractedShell:
    """Contracted s-type Gaussian: center in Bohr, primitive norms folded in."""

    center: tuple
    exponents: tuple
    coefficients: tuple

    @classmethod
    def sto3g_hydrogen(cls, center_bohr):
        exps = STO3G_H_EXPONENTS
        # Fold primitive normalization into the contraction, then rescale so
        # the contracted self-overlap is exactly 1.
        coeffs = STO3G_H_COEFFICIENTS * (2.0 * exps / np.pi) ** 0.75
        s_self = 0.0
        for ai, ci in zip(exps, coeffs):
            for aj, cj in zip(exps, coeffs):
                s_self += ci * cj * (np.pi / (ai + aj)) ** 1.5
        coeffs = coeffs / np.sqrt(s_self)
        return cls(tuple(center_bohr), tuple(exps), tuple(coeffs))

    def self_overlap(self):
        s = 0.0
        for ai, ci in zip(self.exponents, self.coefficients):
            for aj, cj in zip(self.exponents, self.coefficients):
                s += ci * cj * (np.pi / (ai + aj)) ** 1.5
        return s


@dataclass(frozen=True)
class IntegralSet:
    """AO-basis integrals in atomic units."""

    S: np.ndarray
    T: np.ndarray
    V: np.ndarray
    eri: np.ndarray
    e_nuc: float

    @property
    def n_orb(self):
        return self.S.shape[0]


@dataclass(frozen=True)
class MOIntegrals:
    """MO-basis Hamiltonian data: h one-electron, g two-electron (chemists' notation)."""

    h: np.ndarray
    g: np.ndarray
    e_nuc: float
    n_elec: int

    @property
    def n_orb(self):
        return self.h.shape[0]


def boys_f0(x):
    """Boys function F0(x) = (1/2) sqrt(pi/x) erf(sqrt(x)), with a series branch near 0."""
    if x < 0:
        raise ValueError(f"boys_f0 requires x >= 0, got {x}")
    if x < 1e-6:
        return 1.0 - x / 3.0 + x * x / 10.0 - x * x * x / 42.0
    sx = np.sqrt(x)
    return 0.5 * np.sqrt(np.pi / x) * erf(sx)


def _primitive_data(shells):
    """Flatten shells into (center, exponent, coefficient) primitive lists."""
    centers, exps, coefs, owner = [], [], [], []
    for i, sh in enumerate(shells):
        for a, c in zip(sh.exponents, sh.coefficients):
            centers.append(sh.center)
            exps.append(a)
            coefs.append(c)
            owner.append(i)
    return np.asarray(centers), np.asarray(exps), np.asarray(coefs), np.asarray(owner)


def build_integrals(geom: Geometry) -> IntegralSet:
    """Closed-form s-type STO-3G integrals for a hydrogen geometry."""
    coords = geom.coords_bohr()
    shells = [ContractedShell.sto3g_hydrogen(c) for c in coords]
    n = len(shells)

    S = np.zeros((n, n))
    T = np.zeros((n, n))
    V = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            A = np.asarray(shells[i].center)
            B = np.asarray(shells[j].center)
            rab2 = float(np.dot(A - B, A - B))
            s = t = v = 0.0
            for a, ca in zip(shells[i].exponents, shells[i].coefficients):
                for b, cb in zip(shells[j].exponents, shells[j].coefficients):
                    p = a + b
                    mu = a * b / p
                    ovl = (np.pi / p) ** 1.5 * np.exp(-mu * rab2)
                    s += ca * cb * ovl
                    t += ca * cb * mu * (3.0 - 2.0 * mu * rab2) * ovl
                    P = (a * A + b * B) / p
                    for C in coords:  # unit nuclear charges
                        rpc2 = float(np.dot(P - C, P - C))
                        v -= ca * cb * 2.0 * np.pi / p * np.exp(-mu * rab2) * boys_f0(p * rpc2)
            S[i, j] = S[j, i] = s
            T[i, j] = T[j, i] = t
            V[i, j] = V[j, i] = v

    eri = np.zeros((n, n, n, n))
    # Loop over unique (ij|kl) with 8-fold symmetry.
    for i in range(n):
        for j in range(i + 1):
            for k in range(i + 1):
                lmax = j if k == i else k
                for l in range(lmax + 1):
                    val = _eri_contracted(shells[i], shells[j], shells[k], shells[l])
                    for (p, q, r, s_) in (
                        (i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                        (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i),
                    ):
                        eri[p, q, r, s_] = val

    e_nuc = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            e_nuc += 1.0 / np.linalg.norm(coords[i] - coords[j])

    return IntegralSet(S=S, T=T, V=V, eri=eri, e_nuc=e_nuc)


def _eri_contracted(sa, sb, sc, sd):
    """(ab|cd) for four contracted s shells."""
    A, B = np.asarray(sa.center), np.asarray(sb.center)
    C, D = np.asarray(sc.center), np.asarray(sd.center)
    rab2 = float(np.dot(A - B, A - B))
    rcd2 = float(np.dot(C - D, C - D))
    val = 0.0
    for a, ca in zip(sa.exponents, sa.coefficients):
        for b, cb in zip(sb.exponents, sb.coefficients):
            p = a + b
            Kab = np.exp(-a * b / p * rab2)
            P = (a * A + b * B) / p
            for c, cc in zip(sc.exponents, sc.coefficients):
                for d, cd in zip(sd.exponents, sd.coefficients):
                    q = c + d
                    Kcd = np.exp(-c * d / q * rcd2)
                    Q = (c * C + d * D) / q
                    rpq2 = float(np.dot(P - Q, P - Q))
                    pref = 2.0 * np.pi ** 2.5 / (p * q * np.sqrt(p + q))
                    val += (
                        ca * cb * cc * cd
                        * pref * Kab * Kcd
                        * boys_f0(p * q / (p + q) * rpq2)
                    )
    return val


@dataclass
class ScfConfig:
    density_tol: float = 1e-10
    energy_tol: float = 1e-12
    max_cycles: int = 1000
    damping: float = 0.3
    damping_cycles: int = 5
    level_shift: float = 0.5  # Hartree, added to the virtual block of the Fock matrix


@dataclass
class ScfResult:
    C: np.ndarray
    energy: float
    energy_history: list = field(default_factory=list)
    n_cycles: int = 0


def rhf_scf(ints: IntegralSet, n_elec: int, cfg: ScfConfig = None) -> ScfResult:
    """Closed-shell restricted Hartree-Fock with Loewdin orthogonalization.

    Fixed density damping over the first few cycles; no DIIS (systems are tiny).
    The returned energy includes the nuclear repulsion.
    """
    if cfg is None:
        cfg = ScfConfig()
    if n_elec % 2 != 0:
        raise ValueError(f"rhf_scf requires an even electron count, got {n_elec}")
    if n_elec > 2 * ints.n_orb:
        raise ValueError(f"{n_elec} electrons do not fit in {ints.n_orb} orbitals")
    n_occ = n_elec // 2

    hcore = ints.T + ints.V
    s_vals, s_vecs = np.linalg.eigh(ints.S)
    if s_vals.min() <= 0:
        raise ScfError("overlap matrix not positive-definite")
    X = s_vecs @ np.diag(s_vals ** -0.5) @ s_vecs.T
    Xi = s_vecs @ np.diag(s_vals ** 0.5) @ s_vecs.T

    def solve_fock(F, D_prev=None):
        Fp = X.T @ F @ X
        if D_prev is not None and cfg.level_shift > 0:
            # Shift the virtual block up; stabilizes the occupied-space choice
            # when the HOMO-LUMO gap closes (stretched geometries).
            occ_proj = 0.5 * Xi @ D_prev @ Xi
            Fp = Fp + cfg.level_shift * (np.eye(Fp.shape[0]) - occ_proj)
        _, Cp = np.linalg.eigh(Fp)
        return X @ Cp

    def converge(D):
        C = None
        energy = np.inf
        history = []
        for cycle in range(1, cfg.max_cycles + 1):
            J = np.einsum("ijkl,kl->ij", ints.eri, D)
            K = np.einsum("ikjl,kl->ij", ints.eri, D)
            F = hcore + J - 0.5 * K
            new_energy = 0.5 * np.sum(D * (hcore + F)) + ints.e_nuc
            history.append(new_energy)
            C = solve_fock(F, D)
            D_new = 2.0 * C[:, :n_occ] @ C[:, :n_occ].T
            # Damp the early cycles, and keep damping while the density is
            # still moving a lot (stretched geometries oscillate without it).
            if cycle <= cfg.damping_cycles or np.max(np.abs(D_new - D)) > 0.05:
                D_new = (1.0 - cfg.damping) * D_new + cfg.damping * D
            d_change = np.max(np.abs(D_new - D))
            e_change = abs(new_energy - energy)
            D, energy = D_new, new_energy
            if d_change < cfg.density_tol and e_change < cfg.energy_tol:
                return ScfResult(
                    C=C, energy=energy, energy_history=history, n_cycles=cycle
                )
        raise ScfError(
            f"SCF not converged after {cfg.max_cycles} cycles", last_energy=energy
        )

    C0 = solve_fock(hcore)
    result = converge(2.0 * C0[:, :n_occ] @ C0[:, :n_occ].T)

    # Poor-man's internal stability escape: with degenerate frontier orbitals
    # (square rings) the plain iteration can settle on a stationary point that
    # is not the RHF minimum. Re-converge from a 45-degree HOMO-LUMO rotation
    # and keep whichever solution is lower.
    while n_occ < ints.n_orb:
        C_rot = result.C.copy()
        homo, lumo = C_rot[:, n_occ - 1].copy(), C_rot[:, n_occ].copy()
        C_rot[:, n_occ - 1] = (homo + lumo) / np.sqrt(2.0)
        try:
            escaped = converge(2.0 * C_rot[:, :n_occ] @ C_rot[:, :n_occ].T)
        except ScfError:
            break
        if escaped.energy < result.energy - 1e-10:
            result = escaped
        else:
            break
    return result


def transform_to_mo(ints: IntegralSet, C: np.ndarray, n_elec: int) -> MOIntegrals:
    """AO -> MO transformation. C must be orthonormal with respect to S."""
    ortho = C.T @ ints.S @ C
    if not np.allclose(ortho, np.eye(C.shape[1]), atol=1e-8):
        raise ValueError("orbital coefficients are not S-orthonormal")
    h = C.T @ (ints.T + ints.V) @ C
    g = np.einsum("pi,qj,pqrs,rk,sl->ijkl", C, C, ints.eri, C, C, optimize=True)
    return MOIntegrals(h=h, g=g, e_nuc=ints.e_nuc, n_elec=n_elec)


def mo_integrals_for(geom: Geometry, scf_cfg: ScfConfig = None):
    """Convenience path: integrals + neutral closed-shell RHF + MO transform.

    Charged/open-shell species reuse the orbitals of the closed-shell system
    with the same atoms; only the occupation (guess determinant) changes.
    """
    ints = build_integrals(geom)
    if geom.n_atoms % 2 == 0:
        n_ref = geom.n_atoms  # neutral closed-shell reference
    elif geom.n_elec % 2 == 0:
        n_ref = geom.n_elec  # odd chain, closed-shell ion (e.g. H3-)
    else:
        n_ref = geom.n_elec - 1
    scf = rhf_scf(ints, n_ref, scf_cfg)
    mo = transform_to_mo(ints, scf.C, geom.n_elec)
    return mo, scf
