"""Batch experiment drivers: dissociation scans, layer scans, iteration scans,
stochastic landscape studies, charge and singlet-triplet gaps, resource grids.

Every driver returns its rows as a list of dicts; ``write_outputs`` serializes
them to CSV with a sidecar JSON (full spec + seed) and, when a plotting hook is
registered for the experiment kind, a rendered figure next to the CSV.
"""

import csv
import dataclasses
import io
import json
from dataclasses import dataclass, field

import numpy as np

from vqsm.chem import Geometry, chain_geometry, mo_integrals_for, ring_geometry
from vqsm.circuit import estimate_resources
from vqsm.engine import Problem, RunConfig, run
from vqsm.errors import EigenstateReached
from vqsm.jw import Determinant, jordan_wigner, determinant_state
from vqsm.optim import OptimizerConfig
from vqsm.oracles import (
    exact_interaction_optimum,
    fci_solve,
    lanczos,
    minimize_reflection,
)
from vqsm.pauli import QubitHamiltonian


@dataclass
class ExperimentSpec:
    kind: str
    geometry: str = "chain"  # or "ring"
    n_atoms: int = 4
    d_min: float = 0.5
    d_max: float = 3.0
    d_step: float = 0.25
    net_charge: int = 0
    algorithm: str = "vqsm"
    cost: str = "interaction"
    trial_source: str = "hea"
    n_layers: int = 1
    layer_list: tuple = (1, 2, 3, 4, 5)
    iterations: int = 10
    report_iterations: tuple = (1, 2, 3, 5, 10)
    restarts: int = 10
    max_evals: int = 6000
    seed: int = 0
    out: str = "experiment"

    def __post_init__(self):
        if self.d_step <= 0 or self.d_min <= 0:
            raise ValueError("distance range must be positive")

    def distances(self):
        n = int(round((self.d_max - self.d_min) / self.d_step)) + 1
        return [round(self.d_min + k * self.d_step, 10) for k in range(n)]

    def geometry_at(self, d, net_charge=None, n_alpha=None, n_beta=None):
        charge = self.net_charge if net_charge is None else net_charge
        builder = chain_geometry if self.geometry == "chain" else ring_geometry
        return builder(self.n_atoms, d, charge, n_alpha, n_beta)

    def run_config(self, seed_offset=0, max_iterations=None, cost=None):
        return RunConfig(
            algorithm=self.algorithm,
            cost=self.cost if cost is None else cost,
            trial_source=self.trial_source,
            n_layers=self.n_layers,
            max_iterations=self.iterations if max_iterations is None else max_iterations,
            optimizer=OptimizerConfig(
                max_evals=self.max_evals,
                restarts=self.restarts,
                seed=self.seed + seed_offset,
            ),
        )


@dataclass
class ProblemBundle:
    """Everything derived from one geometry: Hamiltonian, guess, references."""

    geometry: Geometry
    hamiltonian: QubitHamiltonian
    problem: Problem
    e_scf: float
    e_guess: float  # <guess determinant|H|guess determinant>
    fci: object


def build_problem(geom: Geometry, with_fci=True) -> ProblemBundle:
    mo, scf = mo_integrals_for(geom)
    ham = jordan_wigner(mo)
    guess = Determinant.from_occupations(mo.n_orb, geom.n_alpha, geom.n_beta)
    phi0 = determinant_state(guess)
    e_guess = float(np.real(np.vdot(phi0, ham.apply(phi0))))
    fci = fci_solve(ham, sector=(geom.n_elec, geom.sz2)) if with_fci else None
    problem = Problem(
        hamiltonian=ham,
        guess=guess,
        fci_energy=fci.e0 if fci else None,
        fci_vector=fci.ground_vector if fci else None,
    )
    return ProblemBundle(
        geometry=geom, hamiltonian=ham, problem=problem,
        e_scf=scf.energy, e_guess=e_guess, fci=fci,
    )


def geometry_from_json(text) -> Geometry:
    data = json.loads(text)
    return Geometry(
        atoms=tuple(tuple(a) for a in data["atoms"]),
        net_charge=data.get("charge", 0),
        n_alpha=data.get("n_alpha"),
        n_beta=data.get("n_beta"),
    )


def run_dissociation(spec: ExperimentSpec):
    """Per-distance energies: guess (HF), FCI, and E0 at the report iterations."""
    rows = []
    iters = sorted(set(spec.report_iterations))
    for i, d in enumerate(spec.distances()):
        bundle = build_problem(spec.geometry_at(d))
        cfg = spec.run_config(seed_offset=17 * i, max_iterations=max(iters))
        _, report = run(bundle.problem, cfg)
        row = {
            "d": d,
            "E_HF": bundle.e_guess,
            "E_FCI": bundle.fci.e0,
            "E0_n0": bundle.e_guess,
        }
        for n in iters:
            row[f"E0_n{n}"] = _energy_at(report, n, bundle.e_guess)
        row["fidelity"] = report.records[-1].fidelity if report.records else 1.0
        rows.append(row)
    return rows


def _energy_at(report, n, fallback):
    """E0 after n iterations; runs that converged early keep their final value."""
    value = fallback
    for rec in report.records:
        if rec.n <= n:
            value = rec.e0
    return value


def run_layer_scan(spec: ExperimentSpec, distances=None):
    """First-iteration error and reference weight per layer count and distance."""
    rows = []
    dists = distances if distances is not None else spec.distances()
    for i, d in enumerate(dists):
        bundle = build_problem(spec.geometry_at(d))
        for layers in spec.layer_list:
            local = dataclasses.replace(spec, n_layers=layers)
            cfg = local.run_config(seed_offset=17 * i + layers, max_iterations=1)
            _, report = run(bundle.problem, cfg)
            if report.records:
                rec = report.records[0]
                rows.append({
                    "d": d, "n_layers": layers,
                    "dE": rec.e0 - bundle.fci.e0,
                    "omega2": rec.omega**2,
                    "cost": rec.cost,
                    "evals": rec.evals,
                })
    return rows


def classical_reference_curves(bundle: ProblemBundle, n_iterations):
    """Per-iteration ground-energy errors for Lanczos and the two exact-reflection
    cost minimizations (the classical comparison curves)."""
    dense = bundle.hamiltonian.dense_matrix().real
    phi0 = determinant_state(bundle.problem.guess).real
    e_fci = bundle.fci.e0

    tri = lanczos(dense, phi0, n_iterations + 1)
    lanczos_err = []
    for n in range(1, n_iterations + 1):
        m = min(n + 1, tri.n_steps)
        e = np.linalg.eigvalsh(tri.as_matrix()[:m, :m])[0]
        lanczos_err.append(e - e_fci)

    errs = {}
    for cost in ("interaction", "tridiag"):
        cfg = RunConfig(
            algorithm="vqsm", cost=cost, trial_source="exact",
            max_iterations=n_iterations, eps_w=1e-14, eps_e=1e-14,
        )
        _, report = run(bundle.problem, cfg)
        series = [r.error for r in report.records]
        while len(series) < n_iterations:  # converged early: error stays final
            series.append(series[-1] if series else 0.0)
        errs[cost] = series
    return {
        "lanczos": lanczos_err,
        "exact_interaction": errs["interaction"],
        "exact_tridiag": errs["tridiag"],
    }


def run_iteration_scan(spec: ExperimentSpec, distances=None):
    """Error and fidelity per iteration, with the classical comparison columns."""
    rows = []
    dists = distances if distances is not None else spec.distances()
    for i, d in enumerate(dists):
        bundle = build_problem(spec.geometry_at(d))
        cfg = spec.run_config(seed_offset=17 * i)
        _, report = run(bundle.problem, cfg)
        reference = classical_reference_curves(bundle, spec.iterations)
        first_error = report.records[0].error if report.records else np.nan
        for rec in report.records:
            k = rec.n - 1
            rows.append({
                "d": d, "n": rec.n,
                "dE": rec.error,
                "dE_renormalized": rec.error / first_error if first_error else np.nan,
                "fidelity": rec.fidelity,
                "rate": report.rate,
                "dE_lanczos": reference["lanczos"][k] if k < len(reference["lanczos"]) else "",
                "dE_exact_EI": reference["exact_interaction"][k]
                if k < len(reference["exact_interaction"]) else "",
                "dE_exact_EIprime": reference["exact_tridiag"][k]
                if k < len(reference["exact_tridiag"]) else "",
            })
    return rows


def optimal_first_cost(bundle: ProblemBundle, cost):
    """C^min of the first iteration, from the closed form (interaction) or the
    sector-restricted reflection minimizer (gain)."""
    phi0 = determinant_state(bundle.problem.guess)
    if cost == "interaction":
        try:
            _, c_min = exact_interaction_optimum(bundle.hamiltonian, phi0)
        except EigenstateReached:
            c_min = 0.0
        return c_min
    from vqsm.jw import sector_indices

    idx = sector_indices(bundle.hamiltonian.n_qubits, *bundle.problem.sector)
    result = minimize_reflection(
        "gain", bundle.hamiltonian.dense_matrix().real, phi0.real, subspace=idx
    )
    return result.cost


def run_stochastic(spec: ExperimentSpec, d=None):
    """Quantiles of C(theta*) - C^min over restarts, per layer count."""
    from vqsm.circuit import HeaCircuit, run_hea
    from vqsm.engine import SubspaceState
    from vqsm.optim import multi_start

    d = spec.d_min if d is None else d
    bundle = build_problem(spec.geometry_at(d))
    c_min = optimal_first_cost(bundle, spec.cost)
    phi0 = determinant_state(bundle.problem.guess)
    rows = []
    for layers in spec.layer_list:
        sub = SubspaceState(bundle.hamiltonian, phi0)
        circ = HeaCircuit(bundle.hamiltonian.n_qubits, layers)

        def objective(theta):
            return sub.evaluate_cost(run_hea(circ, theta), spec.cost)

        opt_cfg = OptimizerConfig(
            max_evals=spec.max_evals, restarts=spec.restarts,
            seed=spec.seed + layers,
        )
        best, study = multi_start(objective, circ.n_params, opt_cfg)
        gaps = [s - c_min for s in study.samples]
        rows.append({
            "d": d, "n_layers": layers, "c_min": c_min, "best": best.fun,
            "best_gap": best.fun - c_min,
            "q10": float(np.quantile(gaps, 0.10)),
            "q25": float(np.quantile(gaps, 0.25)),
            "q50": float(np.quantile(gaps, 0.50)),
            "q75": float(np.quantile(gaps, 0.75)),
        })
    return rows


def _sector_run(spec, d, net_charge, n_alpha, n_beta, seed_offset):
    geom = spec.geometry_at(d, net_charge=net_charge, n_alpha=n_alpha, n_beta=n_beta)
    bundle = build_problem(geom)
    cfg = spec.run_config(seed_offset=seed_offset)
    _, report = run(bundle.problem, cfg)
    return bundle, report


def run_charge_gap(spec: ExperimentSpec):
    """E(cation) + E(anion) - 2 E(neutral) per iteration and distance.

    Both ions are taken as doublets (sz2 = +1)."""
    rows = []
    iters = sorted(set(spec.report_iterations))
    n = spec.n_atoms
    for i, d in enumerate(spec.distances()):
        neutral, rep0 = _sector_run(spec, d, 0, n // 2, n // 2, 17 * i)
        cation, rep_p = _sector_run(spec, d, +1, n // 2, n // 2 - 1, 17 * i + 5)
        anion, rep_m = _sector_run(spec, d, -1, n // 2 + 1, n // 2, 17 * i + 11)
        row = {
            "d": d,
            "gap_HF": cation.e_guess + anion.e_guess - 2.0 * neutral.e_guess,
            "gap_FCI": cation.fci.e0 + anion.fci.e0 - 2.0 * neutral.fci.e0,
        }
        for it in iters:
            gap = (
                _energy_at(rep_p, it, cation.e_guess)
                + _energy_at(rep_m, it, anion.e_guess)
                - 2.0 * _energy_at(rep0, it, neutral.e_guess)
            )
            row[f"gap_n{it}"] = gap
        rows.append(row)
    return rows


def lowest_singlet_energy(singlet_slice, triplet_slice, tol=1e-9):
    """Lowest Sz=0 eigenvalue absent from the Sz=1 sector spectrum.

    Higher-spin levels appear in both sectors with identical energies, so the
    first unmatched Sz=0 level is the lowest true singlet. The distinction
    matters when the triplet is the sector ground state (compressed rings):
    a singlet-referenced run converges to the singlet, not the sector minimum.
    """
    for e in singlet_slice.eigenvalues:
        if np.min(np.abs(triplet_slice.eigenvalues - e)) > tol:
            return float(e)
    return float(singlet_slice.e0)


def run_st_gap(spec: ExperimentSpec):
    """Singlet-triplet gap E_T - E_S per iteration and distance."""
    rows = []
    iters = sorted(set(spec.report_iterations))
    n = spec.n_atoms
    for i, d in enumerate(spec.distances()):
        singlet, rep_s = _sector_run(spec, d, 0, n // 2, n // 2, 17 * i)
        triplet, rep_t = _sector_run(spec, d, 0, n // 2 + 1, n // 2 - 1, 17 * i + 7)
        row = {
            "d": d,
            "gap_HF": triplet.e_guess - singlet.e_guess,
            "gap_FCI": triplet.fci.e0 - lowest_singlet_energy(singlet.fci, triplet.fci),
        }
        for it in iters:
            row[f"gap_n{it}"] = (
                _energy_at(rep_t, it, triplet.e_guess)
                - _energy_at(rep_s, it, singlet.e_guess)
            )
        rows.append(row)
    return rows


def run_resources(n_qubits_list, layers_list, entangler="linear"):
    out = []
    for nq in n_qubits_list:
        for nl in layers_list:
            est = estimate_resources(nq, nl, entangler)
            out.append({
                "n_qubits": nq, "n_layers": nl, "entangler": entangler,
                "params": est.params, "cnot_native": est.cnot_native,
                "cnot_hadamard_test": est.cnot_hadamard_test,
                "assumptions": est.assumptions,
            })
    return out


def rows_to_csv(rows) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def write_outputs(rows, spec: ExperimentSpec, render=None):
    """Write <out>.csv, the sidecar <out>.spec.json, and optionally a figure."""
    csv_path = f"{spec.out}.csv"
    with open(csv_path, "w") as fh:
        fh.write(rows_to_csv(rows))
    sidecar = dataclasses.asdict(spec)
    sidecar["seed"] = spec.seed
    with open(f"{spec.out}.spec.json", "w") as fh:
        json.dump(sidecar, fh, indent=2, default=list)
        fh.write("\n")
    written = [csv_path, f"{spec.out}.spec.json"]
    if render is not None and rows:
        fig_path = f"{spec.out}.png"
        render(rows, spec, fig_path)
        written.append(fig_path)
    return written
