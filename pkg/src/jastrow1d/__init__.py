"""Pair-correlated trial wavefunctions for few particles in a 1D harmonic trap.

Builds the two-body-derived Jastrow-type ansatz, evaluates its variational
energy by tensor quadrature, and benchmarks it against exact diagonalization
in a truncated oscillator Fock space.
"""
from .ansatz import (EnergyEstimate, JastrowAnsatz, ScanResult, alpha_lower_bound,
                     energy_expectation, local_energy, log_psi, pair_log_factor, scan_alpha)
from .ci import CISpectrum, FockBasis, build_fock_basis, build_hamiltonian, ci_ground_state, solve_spectrum, two_body_tensor
from .errors import NumericsError
from .grids import active_backend
from .interaction import Interaction, potential_matrix, potential_value
from .oscillator import QuadratureRule, gauss_hermite_rule, ho_derivatives, ho_eigenfunction
from .twobody import TwoBodySolution, eval_phi, relative_hamiltonian, solve_relative

__version__ = "0.1.0"

__all__ = [
    "CISpectrum", "EnergyEstimate", "FockBasis", "Interaction", "JastrowAnsatz",
    "NumericsError", "QuadratureRule", "ScanResult", "TwoBodySolution",
    "active_backend", "alpha_lower_bound", "build_fock_basis", "build_hamiltonian",
    "ci_ground_state", "energy_expectation", "eval_phi", "gauss_hermite_rule",
    "ho_derivatives", "ho_eigenfunction", "local_energy", "log_psi",
    "pair_log_factor", "potential_matrix", "potential_value", "relative_hamiltonian",
    "scan_alpha", "solve_relative", "solve_spectrum", "two_body_tensor",
    "__version__",
]
