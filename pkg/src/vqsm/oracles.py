"""Classical reference solvers: sector FCI, Lanczos/Householder tridiagonalization,
the closed-form interaction optimum, and brute-force reflection minimization."""

from dataclasses import dataclass, field

import numpy as np

from vqsm.errors import CapacityError, DegenerateGapError, EigenstateReached
from vqsm.costs import TwoLevelBlock, gain_energy, interaction_energy
from vqsm.jw import sector_indices
from vqsm.pauli import QubitHamiltonian

FCI_SECTOR_GUARD = 4096
BREAKDOWN_TOL = 1e-10


@dataclass
class TridiagonalMatrix:
    """(alpha, beta) bands with the orthonormal basis that produced them."""

    alpha: np.ndarray
    beta: np.ndarray
    basis: np.ndarray  # columns are the basis vectors

    @property
    def n_steps(self):
        return self.alpha.size

    def as_matrix(self):
        return (
            np.diag(self.alpha)
            + np.diag(self.beta, 1)
            + np.diag(self.beta, -1)
        )

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.as_matrix())


@dataclass
class SpectrumSlice:
    e0: float
    e1: float
    sector: tuple
    ground_vector: np.ndarray
    eigenvalues: np.ndarray = field(default=None, repr=False)


def fci_solve(hamiltonian: QubitHamiltonian, sector=None) -> SpectrumSlice:
    """Dense exact diagonalization, optionally restricted to an (n_elec, sz2) sector.

    The ground vector is embedded back into the full 2^n space.
    """
    n = hamiltonian.n_qubits
    if sector is None:
        idx = np.arange(1 << n)
    else:
        idx = sector_indices(n, *sector)
    if idx.size > FCI_SECTOR_GUARD:
        raise CapacityError(f"sector dimension {idx.size} exceeds guard {FCI_SECTOR_GUARD}")
    dense = hamiltonian.dense_matrix()
    sub = dense[np.ix_(idx, idx)]
    vals, vecs = np.linalg.eigh(sub)
    ground = np.zeros(1 << n, dtype=complex)
    ground[idx] = vecs[:, 0]
    e1 = vals[1] if vals.size > 1 else vals[0]
    return SpectrumSlice(
        e0=float(vals[0]), e1=float(e1), sector=sector, ground_vector=ground,
        eigenvalues=vals,
    )


def _as_apply(h):
    if isinstance(h, QubitHamiltonian):
        return h.apply
    mat = np.asarray(h)
    return lambda v: mat @ v


def lanczos(h, v0, n_steps) -> TridiagonalMatrix:
    """Three-term recurrence with full reorthogonalization (classical Gram-Schmidt,
    applied twice). Breakdown truncates the bands; that is a valid result."""
    apply_h = _as_apply(h)
    v0 = np.asarray(v0, dtype=complex)
    dim = v0.size
    n_steps = min(n_steps, dim)
    basis = np.zeros((dim, n_steps), dtype=complex)
    alphas, betas = [], []
    q = v0 / np.linalg.norm(v0)
    basis[:, 0] = q
    for k in range(n_steps):
        u = apply_h(basis[:, k])
        alpha = np.real(np.vdot(basis[:, k], u))
        alphas.append(alpha)
        if k == n_steps - 1:
            break
        r = u
        for _ in range(2):  # full reorthogonalization, twice
            r = r - basis[:, : k + 1] @ (basis[:, : k + 1].conj().T @ r)
        beta = np.linalg.norm(r)
        if beta < BREAKDOWN_TOL:
            break
        betas.append(float(beta))
        basis[:, k + 1] = r / beta
    m = len(alphas)
    return TridiagonalMatrix(
        alpha=np.array(alphas), beta=np.array(betas), basis=basis[:, :m]
    )


def householder_tridiag(h_dense, v0, n_steps=None) -> TridiagonalMatrix:
    """Similarity-reflection tridiagonalization with the first basis vector fixed to v0."""
    A = np.asarray(h_dense)
    if np.iscomplexobj(A):
        if np.max(np.abs(A.imag)) > 1e-12:
            raise ValueError("householder_tridiag expects a real symmetric matrix")
        A = A.real.copy()
    else:
        A = A.copy()
    v0 = np.asarray(v0)
    if np.iscomplexobj(v0):
        v0 = v0.real
    dim = A.shape[0]
    if n_steps is None:
        n_steps = dim
    n_steps = min(n_steps, dim)

    Q = np.eye(dim)
    # First reflection maps e0 onto v0.
    w = v0 / np.linalg.norm(v0) - Q[:, 0]
    if np.linalg.norm(w) > 1e-14:
        w = w / np.linalg.norm(w)
        R0 = np.eye(dim) - 2.0 * np.outer(w, w)
        A = R0 @ A @ R0
        Q = R0.copy()

    for k in range(dim - 2):
        x = A[k + 1 :, k].copy()
        norm_x = np.linalg.norm(x)
        if norm_x < BREAKDOWN_TOL:
            continue
        e = np.zeros_like(x)
        e[0] = np.copysign(norm_x, x[0])
        w = x + e
        wn = np.linalg.norm(w)
        if wn < 1e-14:
            continue
        w = w / wn
        H = np.eye(dim)
        H[k + 1 :, k + 1 :] -= 2.0 * np.outer(w, w)
        A = H @ A @ H
        Q = Q @ H

    alpha = np.diag(A).copy()
    beta = np.diag(A, 1).copy()
    # Normalize the band signs: flip basis columns so every beta is positive.
    sign = 1.0
    for k in range(dim - 1):
        if beta[k] * sign < 0:
            sign = -sign
        if sign < 0:
            Q[:, k + 1] = -Q[:, k + 1]
            beta[k] = abs(beta[k])
    # Truncate at breakdown like Lanczos does.
    m = dim
    for k in range(dim - 1):
        if abs(beta[k]) < BREAKDOWN_TOL:
            m = k + 1
            break
    m = min(m, n_steps)
    return TridiagonalMatrix(alpha=alpha[:m], beta=np.abs(beta[: m - 1]), basis=Q[:, :m])


def exact_interaction_optimum(h, psi_prev, forbidden=()):
    """Closed-form global optimum of the interaction cost over unit trial vectors
    orthogonal to psi_prev and the forbidden set.

    Returns (vector, c_min) with c_min = -||projection of H psi_prev||.
    Raises EigenstateReached when the projection vanishes.
    """
    apply_h = _as_apply(h)
    psi = np.asarray(psi_prev, dtype=complex)
    w = apply_h(psi)
    w = w - psi * np.vdot(psi, w)
    for f in forbidden:
        w = w - np.asarray(f) * np.vdot(f, w)
    # Second projection pass for numerical orthogonality.
    w = w - psi * np.vdot(psi, w)
    for f in forbidden:
        w = w - np.asarray(f) * np.vdot(f, w)
    norm = np.linalg.norm(w)
    if norm < BREAKDOWN_TOL:
        raise EigenstateReached("reference vector is an eigenstate of H")
    return w / norm, -float(norm)


@dataclass
class ReflectionConfig:
    max_iters: int = 2000
    grad_tol: float = 1e-11
    step0: float = 1.0
    min_step: float = 1e-14
    check_gradient: bool = True


@dataclass
class ReflectionResult:
    vector: np.ndarray
    cost: float
    converged: bool
    n_iters: int
    warning: str = ""


def _complement_basis(dim, psi, forbidden):
    """Orthonormal basis of the complement of span({psi} U forbidden)."""
    P = np.eye(dim)
    for v in [psi, *forbidden]:
        v = np.asarray(v).reshape(-1)
        P -= np.outer(v, v.conj()).real
    u, s, _ = np.linalg.svd(P)
    return u[:, s > 0.5]


def minimize_reflection(cost, h_dense, psi_prev, forbidden=(), cfg=None,
                        subspace=None) -> ReflectionResult:
    """Minimize the gain or interaction cost over unit trial vectors orthogonal
    to psi_prev (and the forbidden set) by projected gradient descent on the
    sphere, with backtracking line search and retraction by normalization.

    cost: "gain" or "interaction".
    subspace: optional index array restricting the search (components outside a
    symmetry sector contribute nothing to either cost, so restricting is exact).
    """
    if cfg is None:
        cfg = ReflectionConfig()
    A = np.asarray(h_dense)
    if np.iscomplexobj(A):
        A = A.real
    psi_full = np.asarray(psi_prev)
    if np.iscomplexobj(psi_full):
        psi_full = psi_full.real
    dim_full = A.shape[0]

    if subspace is None:
        subspace = np.arange(dim_full)
    A_s = A[np.ix_(subspace, subspace)]
    psi = psi_full[subspace]
    psi = psi / np.linalg.norm(psi)
    forb = []
    for f in forbidden:
        fv = np.asarray(f)
        if np.iscomplexobj(fv):
            fv = fv.real
        forb.append(fv[subspace])

    Q = _complement_basis(len(subspace), psi, forb)
    w = Q.T @ (A_s @ psi)
    M = Q.T @ A_s @ Q
    h00 = float(psi @ A_s @ psi)

    def evaluate(u):
        h01 = float(w @ u)
        if cost == "interaction":
            return interaction_energy(TwoLevelBlock(h00=h00, h11=0.0, h01=h01))
        h11 = float(u @ M @ u)
        try:
            return gain_energy(TwoLevelBlock(h00=h00, h11=h11, h01=h01))
        except DegenerateGapError:
            return np.inf

    def gradient(u):
        h01 = float(w @ u)
        if cost == "interaction":
            return -np.sign(h01) * w if h01 != 0 else -w
        Mu = M @ u
        h11 = float(u @ Mu)
        delta = h11 - h00
        root = np.sqrt(delta**2 + 4.0 * h01**2)
        dE_ddelta = 0.5 - delta / (2.0 * root)
        dE_da = -1.0 / root  # a = h01^2
        return dE_ddelta * 2.0 * Mu + dE_da * 2.0 * h01 * w

    wn = np.linalg.norm(w)
    if wn < BREAKDOWN_TOL:
        raise EigenstateReached("reference vector is an eigenstate of H")
    u = w / wn

    if cfg.check_gradient:
        _verify_gradient(evaluate, gradient, u)

    f_curr = evaluate(u)
    step = cfg.step0
    n_iters = 0
    converged = False
    for n_iters in range(1, cfg.max_iters + 1):
        g = gradient(u)
        g_tan = g - (g @ u) * u
        gnorm = np.linalg.norm(g_tan)
        if gnorm < cfg.grad_tol:
            converged = True
            break
        # Backtracking line search with normalization retraction.
        step = min(step * 2.0, cfg.step0)
        improved = False
        while step > cfg.min_step:
            cand = u - step * g_tan
            cand = cand / np.linalg.norm(cand)
            f_cand = evaluate(cand)
            if f_cand < f_curr - 1e-4 * step * gnorm**2:
                u, f_curr = cand, f_cand
                improved = True
                break
            step *= 0.5
        if not improved:
            converged = True  # step collapse: boundary or stationary point
            break

    warning = "" if converged else "max_iters reached; returning best-so-far"
    full = np.zeros(dim_full)
    full[subspace] = Q @ u
    return ReflectionResult(
        vector=full, cost=float(f_curr), converged=converged,
        n_iters=n_iters, warning=warning,
    )


def _verify_gradient(evaluate, gradient, u, eps=1e-6, rtol=1e-5):
    g = gradient(u)
    g_tan = g - (g @ u) * u
    if np.linalg.norm(g_tan) < 1e-12:
        return
    d = g_tan / np.linalg.norm(g_tan)
    up = (u + eps * d) / np.linalg.norm(u + eps * d)
    um = (u - eps * d) / np.linalg.norm(u - eps * d)
    fd = (evaluate(up) - evaluate(um)) / (2.0 * eps)
    analytic = g_tan @ d
    if abs(fd - analytic) > rtol * max(1.0, abs(analytic)):
        raise AssertionError(
            f"analytic gradient {analytic:.3e} disagrees with finite difference {fd:.3e}"
        )


def power_ratio_curve(spectrum: SpectrumSlice, n_max):
    """The sequence (e1/e0)^n for n = 1..n_max; requires e0 < 0."""
    if spectrum.e0 >= 0:
        raise ValueError(f"power_ratio_curve requires e0 < 0, got {spectrum.e0}")
    ratio = spectrum.e1 / spectrum.e0
    return [ratio**n for n in range(1, n_max + 1)]
