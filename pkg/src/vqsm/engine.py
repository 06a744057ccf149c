"""Iterative eigensolver engines.

Two algorithms over a growing orthonormal trial basis:

* IVQE: each iteration optimizes one trial state against a two-level cost and
  folds it into the running ground-state estimate (kept as coefficients over
  the basis, never as an explicitly re-prepared state).
* VQSM: same trial optimization, but the projected Hamiltonian over all trial
  states is rediagonalized after every expansion.
"""

import dataclasses
import json
from dataclasses import dataclass, field

import numpy as np

from vqsm.circuit import HeaCircuit, run_hea
from vqsm.costs import TwoLevelBlock, gain_energy, interaction_energy, two_level_ground
from vqsm.errors import EigenstateReached, LinearDependenceError
from vqsm.jw import Determinant, determinant_state, number_operator, sector_indices, sz_operator
from vqsm.optim import OptimizerConfig, minimize, multi_start
from vqsm.oracles import exact_interaction_optimum, minimize_reflection
from vqsm.pauli import QubitHamiltonian

LINEAR_DEPENDENCE_TOL = 1e-8


@dataclass
class Problem:
    """A qubit Hamiltonian plus the guess determinant (and optional FCI reference)."""

    hamiltonian: QubitHamiltonian
    guess: Determinant
    fci_energy: float = None
    fci_vector: np.ndarray = None

    @property
    def sector(self):
        return (self.guess.n_elec, self.guess.sz2)


@dataclass
class RunConfig:
    algorithm: str = "vqsm"  # or "ivqe"
    cost: str = "interaction"  # "gain", "interaction", "tridiag"
    trial_source: str = "hea"  # or "exact"
    n_layers: int = 1
    entangler: str = "linear"
    eps_w: float = 1e-6
    eps_e: float = 1e-6
    max_iterations: int = 15
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    warm_start: bool = False

    def __post_init__(self):
        if self.algorithm not in ("ivqe", "vqsm"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.cost not in ("gain", "interaction", "tridiag"):
            raise ValueError(f"unknown cost {self.cost!r}")
        if self.trial_source not in ("hea", "exact"):
            raise ValueError(f"unknown trial source {self.trial_source!r}")
        if self.cost == "tridiag" and self.algorithm != "vqsm":
            raise ValueError("the tridiag cost is only defined for VQSM")
        if self.eps_w <= 0 or self.eps_e <= 0:
            raise ValueError("convergence tolerances must be positive")


class SubspaceState:
    """Growing orthonormal basis with its projected Hamiltonian and ground state."""

    def __init__(self, hamiltonian: QubitHamiltonian, phi0: np.ndarray):
        self.hamiltonian = hamiltonian
        phi0 = np.asarray(phi0, dtype=complex)
        phi0 = phi0 / np.linalg.norm(phi0)
        self.basis = phi0.reshape(-1, 1)
        e_hf = np.real(np.vdot(phi0, hamiltonian.apply(phi0)))
        self.h_mat = np.array([[e_hf]])
        self.ground_coeffs = np.array([1.0])
        self.e0 = float(e_hf)
        self.omega = 1.0

    @property
    def n_vectors(self):
        return self.basis.shape[1]

    def ground_vector(self):
        return self.basis @ self.ground_coeffs

    def orthogonalize(self, v):
        """Gram-Schmidt against the basis, applied twice; unit-norm result.

        Raises LinearDependenceError when the residual is numerically inside
        the current span.
        """
        v = np.asarray(v, dtype=complex).copy()
        for _ in range(2):
            v -= self.basis @ (self.basis.conj().T @ v)
        norm = np.linalg.norm(v)
        if norm < LINEAR_DEPENDENCE_TOL:
            raise LinearDependenceError(
                f"trial residual norm {norm:.2e} below {LINEAR_DEPENDENCE_TOL}"
            )
        return v / norm

    def block_for(self, trial):
        """Two-level block and bookkeeping column for an orthonormalized trial."""
        ht = self.hamiltonian.apply(trial)
        column = self.basis.conj().T @ ht
        h11 = float(np.real(np.vdot(trial, ht)))
        h01 = complex(np.vdot(self.ground_vector(), ht))
        return TwoLevelBlock(h00=self.e0, h11=h11, h01=h01), column

    def evaluate_cost(self, trial_raw, cost):
        """Cost of a raw (normalized, not yet orthogonal) trial vector.

        Linear dependence maps to cost 0: a rejected, symmetry-null point.
        """
        try:
            trial = self.orthogonalize(trial_raw)
        except LinearDependenceError:
            return 0.0
        block, column = self.block_for(trial)
        if cost == "gain":
            return gain_energy(block)
        if cost == "interaction":
            return interaction_energy(block)
        return -abs(column[-1])  # tridiag: coupling to the newest basis vector

    def append(self, trial):
        """Grow the basis by one orthonormal vector; extend the projected Hamiltonian."""
        block, column = self.block_for(trial)
        n = self.n_vectors
        h_new = np.zeros((n + 1, n + 1))
        h_new[:n, :n] = self.h_mat
        h_new[:n, n] = np.real(column)
        h_new[n, :n] = np.real(column)
        h_new[n, n] = block.h11
        self.basis = np.hstack([self.basis, trial.reshape(-1, 1)])
        self.h_mat = h_new
        # Pad so the ground estimate stays well-defined until the next update.
        self.ground_coeffs = np.append(self.ground_coeffs, 0.0)
        return block


@dataclass
class IterationRecord:
    n: int
    e0: float
    cost: float
    omega: float
    fidelity: float = None
    error: float = None
    evals: int = 0
    n_particles: float = None
    sz: float = None


@dataclass
class ConvergenceReport:
    records: list = field(default_factory=list)
    status: str = "running"
    rate: float = None

    def errors(self):
        return [r.error for r in self.records if r.error is not None]

    def to_json(self):
        payload = {
            "status": self.status,
            "rate": self.rate,
            "iterations": [dataclasses.asdict(r) for r in self.records],
        }
        return json.dumps(payload, indent=2)

    def to_csv(self):
        lines = ["n,E0,cost,omega,fidelity,evals"]
        for r in self.records:
            fid = "" if r.fidelity is None else f"{r.fidelity:.12g}"
            lines.append(
                f"{r.n},{r.e0:.12g},{r.cost:.12g},{r.omega:.12g},{fid},{r.evals}"
            )
        return "\n".join(lines) + "\n"


def fit_rate(errors, floor=1e-10):
    """Geometric convergence rate from a log-linear fit of error vs iteration.

    Only the window before the errors drop below the numerical floor is used.
    """
    errors = np.asarray([float(e) for e in errors])
    usable = []
    for e in errors:
        if e < floor:
            break
        usable.append(e)
    if len(usable) < 3:
        raise ValueError(f"need at least 3 usable error values, got {len(usable)}")
    n = np.arange(len(usable))
    slope = np.polyfit(n, np.log(usable), 1)[0]
    return float(np.exp(slope))


class _TrialOptimizer:
    """Produces the next (raw trial vector, cost, evals) for a subspace state."""

    def __init__(self, problem: Problem, cfg: RunConfig):
        self.problem = problem
        self.cfg = cfg
        self.n_qubits = problem.hamiltonian.n_qubits
        if cfg.trial_source == "hea":
            self.circuit = HeaCircuit(self.n_qubits, cfg.n_layers, cfg.entangler)
        self._dense = None
        self._sector_idx = None
        self._prev_theta = None

    def dense(self):
        if self._dense is None:
            self._dense = self.problem.hamiltonian.dense_matrix().real
        return self._dense

    def sector_idx(self):
        if self._sector_idx is None:
            self._sector_idx = sector_indices(self.n_qubits, *self.problem.sector)
        return self._sector_idx

    def propose(self, sub: SubspaceState, iteration: int):
        if self.cfg.trial_source == "exact":
            return self._propose_exact(sub)
        return self._propose_hea(sub, iteration)

    def _propose_exact(self, sub):
        forbidden = [sub.basis[:, k] for k in range(sub.n_vectors)]
        if self.cfg.cost == "tridiag":
            reference = sub.basis[:, -1]
        else:
            reference = sub.ground_vector()
        if self.cfg.cost == "gain":
            result = minimize_reflection(
                "gain", self.dense(), np.real(reference),
                forbidden=[np.real(f) for f in forbidden],
                subspace=self.sector_idx(),
            )
            vec = result.vector.astype(complex)
            cost = result.cost
        else:
            # Interaction and tridiag share the closed-form Krylov optimum.
            vec, cost = exact_interaction_optimum(
                self.problem.hamiltonian, reference, forbidden=forbidden
            )
        return vec, cost, 0

    def _propose_hea(self, sub, iteration):
        cfg = self.cfg

        def objective(theta):
            state = run_hea(self.circuit, theta)
            return sub.evaluate_cost(state, cfg.cost)

        opt_cfg = dataclasses.replace(
            cfg.optimizer, seed=cfg.optimizer.seed + 1009 * iteration
        )
        best, study = multi_start(objective, self.circuit.n_params, opt_cfg)
        evals = study.total_evals
        if cfg.warm_start and self._prev_theta is not None:
            warm = minimize(objective, self._prev_theta, opt_cfg)
            evals += warm.evals
            if warm.fun < best.fun:
                best = warm
        self._prev_theta = best.x
        state = run_hea(self.circuit, best.x)
        # Both costs see only the component inside the guess symmetry sector,
        # so projecting the accepted trial onto it is exact and removes the
        # residual leakage the finite optimization leaves behind. Without this
        # a small out-of-sector amplitude can pull the subspace energy below
        # the sector ground state (for example toward a different electron
        # count on ionized problems).
        projected = np.zeros_like(state)
        idx = self.sector_idx()
        projected[idx] = state[idx]
        norm = np.linalg.norm(projected)
        if norm < 1e-12:
            return state, 0.0, evals
        projected /= norm
        return projected, sub.evaluate_cost(projected, cfg.cost), evals


def _step(sub: SubspaceState, trial_raw, cost_value, cfg: RunConfig):
    """Fold an optimized raw trial into the subspace; returns (e0, omega)."""
    trial = sub.orthogonalize(trial_raw)
    if cfg.algorithm == "ivqe":
        block = sub.append(trial)
        # Two-level update: the block couples the running ground state to the trial.
        ground = two_level_ground(block)
        new_coeffs = ground.omega * sub.ground_coeffs
        new_coeffs[-1] = ground.nu * np.sqrt(max(0.0, 1.0 - ground.omega**2))
        sub.ground_coeffs = new_coeffs
        sub.e0 = float(ground.energy)
        sub.omega = float(ground.omega)
    else:
        sub.append(trial)
        vals, vecs = np.linalg.eigh(sub.h_mat)
        new_coeffs = vecs[:, 0]
        fidelity_prev = abs(np.dot(sub.ground_coeffs, new_coeffs))
        sub.ground_coeffs = new_coeffs
        sub.e0 = float(vals[0])
        sub.omega = float(fidelity_prev)
    return sub.e0, sub.omega


def run(problem: Problem, cfg: RunConfig) -> tuple:
    """Iterate until the overlap or cost convergence criterion triggers.

    Returns (SubspaceState, ConvergenceReport).
    """
    phi0 = determinant_state(problem.guess)
    sub = SubspaceState(problem.hamiltonian, phi0)
    report = ConvergenceReport()
    optimizer = _TrialOptimizer(problem, cfg)
    n_op = number_operator(problem.hamiltonian.n_qubits)
    sz_op = sz_operator(problem.hamiltonian.n_qubits)

    for n in range(1, cfg.max_iterations + 1):
        try:
            trial_raw, cost_value, evals = optimizer.propose(sub, n)
        except EigenstateReached:
            report.status = "converged:eigenstate"
            break
        if cost_value >= 0.0 and cfg.trial_source == "hea":
            report.status = "stalled:symmetry-null"
            break
        try:
            e0, omega = _step(sub, trial_raw, cost_value, cfg)
        except LinearDependenceError:
            report.status = "converged:linear-dependence"
            break
        psi = sub.ground_vector()
        fidelity = None
        error = None
        if problem.fci_vector is not None:
            fidelity = float(abs(np.vdot(problem.fci_vector, psi)) ** 2)
        if problem.fci_energy is not None:
            error = float(e0 - problem.fci_energy)
        record = IterationRecord(
            n=n, e0=e0, cost=float(cost_value), omega=omega,
            fidelity=fidelity, error=error, evals=evals,
            n_particles=float(np.real(np.vdot(psi, n_op.apply(psi)))),
            sz=float(np.real(np.vdot(psi, sz_op.apply(psi)))),
        )
        report.records.append(record)
        if omega**2 > 1.0 - cfg.eps_w or cost_value > -cfg.eps_e:
            report.status = "converged"
            break
    else:
        report.status = "max-iterations"

    if problem.fci_energy is not None:
        errors = [max(r.error, 0.0) for r in report.records]
        try:
            report.rate = fit_rate(errors)
        except ValueError:
            report.rate = None
    return sub, report
