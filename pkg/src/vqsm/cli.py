"""Command-line entry point.

Verbs: dissociation, layer-scan, iteration-scan, stochastic, charge-gap,
st-gap, resources, fcidump-import, fcidump-export. Each scan writes a CSV, a
sidecar JSON with the full experiment spec and seed, and a rendered figure.

Exit codes: 0 success, 2 spec error, 3 numerical failure.
"""

import argparse
import json
import sys

from vqsm import errors
from vqsm.experiments import (
    ExperimentSpec,
    build_problem,
    geometry_from_json,
    rows_to_csv,
    run_charge_gap,
    run_dissociation,
    run_iteration_scan,
    run_layer_scan,
    run_resources,
    run_st_gap,
    run_stochastic,
    write_outputs,
)
from vqsm.plots import RENDERERS

EXIT_SPEC_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3


def _add_common(parser):
    parser.add_argument("--geometry", choices=["chain", "ring"], default="chain")
    parser.add_argument("--atoms", type=int, default=4, help="number of H atoms")
    parser.add_argument("--d-min", type=float, default=0.5)
    parser.add_argument("--d-max", type=float, default=3.0)
    parser.add_argument("--d-step", type=float, default=0.25)
    parser.add_argument("--algorithm", choices=["ivqe", "vqsm"], default="vqsm")
    parser.add_argument("--cost", choices=["gain", "interaction", "tridiag"],
                        default="interaction")
    parser.add_argument("--trial", default="hea:1",
                        help="'hea:N' for an N-layer ansatz or 'exact'")
    parser.add_argument("--layers", type=str, default="1,2,3,4,5",
                        help="layer list for layer-scan/stochastic")
    parser.add_argument("--iterations", type=int, default=10)
    parser.add_argument("--report-iterations", type=str, default="1,2,3,5,10")
    parser.add_argument("--restarts", type=int, default=10)
    parser.add_argument("--max-evals", type=int, default=6000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", type=str, default="experiment")


def _spec_from_args(kind, args) -> ExperimentSpec:
    trial = args.trial
    if trial == "exact":
        trial_source, n_layers = "exact", 1
    elif trial.startswith("hea:"):
        trial_source, n_layers = "hea", int(trial.split(":", 1)[1])
    elif trial == "hea":
        trial_source, n_layers = "hea", 1
    else:
        raise ValueError(f"unknown trial source {trial!r}")
    return ExperimentSpec(
        kind=kind,
        geometry=args.geometry,
        n_atoms=args.atoms,
        d_min=args.d_min,
        d_max=args.d_max,
        d_step=args.d_step,
        algorithm=args.algorithm,
        cost=args.cost,
        trial_source=trial_source,
        n_layers=n_layers,
        layer_list=tuple(int(x) for x in args.layers.split(",")),
        iterations=args.iterations,
        report_iterations=tuple(int(x) for x in args.report_iterations.split(",")),
        restarts=args.restarts,
        max_evals=args.max_evals,
        seed=args.seed,
        out=args.out,
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="vqsm", description="Iterative symmetry-preserving eigensolver experiments"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in ("dissociation", "layer-scan", "iteration-scan", "stochastic",
                 "charge-gap", "st-gap"):
        p = sub.add_parser(kind)
        _add_common(p)

    p = sub.add_parser("resources")
    p.add_argument("--qubits", type=str, default="8,12")
    p.add_argument("--layers", type=str, default="1,2")
    p.add_argument("--entangler", choices=["linear", "all_to_all"], default="linear")
    p.add_argument("--out", type=str, default="resources")

    p = sub.add_parser("fcidump-export")
    p.add_argument("--geometry-json", type=str, required=True,
                   help="path to a geometry JSON file")
    p.add_argument("--out", type=str, required=True, help="FCIDUMP output path")

    p = sub.add_parser("fcidump-import")
    p.add_argument("--in", dest="infile", type=str, required=True)
    p.add_argument("--out", type=str, required=True,
                   help="Pauli-list text output path")
    p.add_argument("--sector", type=str, default=None,
                   help="'n_elec,sz2' to also report the sector FCI energy")
    return parser


_DRIVERS = {
    "dissociation": run_dissociation,
    "layer-scan": run_layer_scan,
    "iteration-scan": run_iteration_scan,
    "stochastic": run_stochastic,
    "charge-gap": run_charge_gap,
    "st-gap": run_st_gap,
}


def _cmd_resources(args):
    rows = run_resources(
        [int(x) for x in args.qubits.split(",")],
        [int(x) for x in args.layers.split(",")],
        args.entangler,
    )
    path = f"{args.out}.json"
    with open(path, "w") as fh:
        json.dump(rows, fh, indent=2)
        fh.write("\n")
    print(path)


def _cmd_fcidump_export(args):
    from vqsm.chem import mo_integrals_for
    from vqsm.fcidump import write_fcidump

    with open(args.geometry_json) as fh:
        geom = geometry_from_json(fh.read())
    mo, _ = mo_integrals_for(geom)
    with open(args.out, "w") as fh:
        fh.write(write_fcidump(mo, ms2=geom.sz2))
    print(args.out)


def _cmd_fcidump_import(args):
    from vqsm.fcidump import parse_fcidump
    from vqsm.jw import jordan_wigner
    from vqsm.oracles import fci_solve

    with open(args.infile) as fh:
        mo = parse_fcidump(fh.read())
    ham = jordan_wigner(mo)
    with open(args.out, "w") as fh:
        fh.write(ham.to_text())
    print(args.out)
    if args.sector:
        n_elec, sz2 = (int(x) for x in args.sector.split(","))
        spectrum = fci_solve(ham, sector=(n_elec, sz2))
        print(f"FCI e0 = {spectrum.e0:.10f}  e1 = {spectrum.e1:.10f}")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "resources":
            _cmd_resources(args)
        elif args.command == "fcidump-export":
            _cmd_fcidump_export(args)
        elif args.command == "fcidump-import":
            _cmd_fcidump_import(args)
        else:
            spec = _spec_from_args(args.command, args)
            rows = _DRIVERS[args.command](spec)
            written = write_outputs(rows, spec, render=RENDERERS.get(args.command))
            for path in written:
                print(path)
    except (ValueError, errors.GeometryError, errors.FcidumpParseError,
            FileNotFoundError) as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC_ERROR
    except (ArithmeticError, errors.ScfError, errors.CapacityError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_FAILURE
    return 0


if __name__ == "__main__":
    sys.exit(main())
