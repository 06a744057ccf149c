"""Iterative symmetry-preserving variational eigensolvers on simulated qubit registers.

The package bundles:

* a minimal STO-3G restricted Hartree-Fock front end for hydrogen geometries
  (``vqsm.chem``) plus FCIDUMP import/export (``vqsm.fcidump``),
* Jordan-Wigner mapping and Pauli-string algebra (``vqsm.pauli``, ``vqsm.jw``),
* an exact statevector simulator for Ry/CNOT hardware-efficient circuits
  (``vqsm.circuit``),
* the two-level cost functions and their algebra (``vqsm.costs``),
* classical references: sector FCI, Lanczos/Householder tridiagonalization and
  brute-force reflection minimizers (``vqsm.oracles``),
* the IVQE and VQSM iterative engines (``vqsm.engine``),
* derivative-free optimization with multi-start support (``vqsm.optim``),
* batch experiment drivers and a CLI (``vqsm.experiments``, ``vqsm.cli``).
"""

from vqsm.errors import (
    CapacityError,
    DegenerateGapError,
    EigenstateReached,
    FcidumpParseError,
    GeometryError,
    LinearDependenceError,
    ScfError,
)

__all__ = [
    "CapacityError",
    "DegenerateGapError",
    "EigenstateReached",
    "FcidumpParseError",
    "GeometryError",
    "LinearDependenceError",
    "ScfError",
]

__version__ = "0.1.0"
