"""Relative-coordinate solution of the two-particle problem.

With x = (x1 - x2)/sqrt(2) the pair Hamiltonian separates, leaving

    (-1/2 d^2/dx^2 + x^2/2 + V(sqrt(2) x)) phi = E phi

which is diagonalized in a parity-restricted oscillator basis.  The even
solution feeds bosonic ansaetze, the odd one fermionic ansaetze.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericsError
from .interaction import DEFAULT_MATRIX_ORDER, Interaction, potential_matrix
from .oscillator import QuadratureRule, gauss_hermite_rule, hermite_function_table

PARITIES = ("even", "odd")
SCALE = np.sqrt(2.0)


@dataclass(frozen=True)
class TwoBodySolution:
    """Ground state of one parity sector: phi = sum_n coeffs[n] chi_n."""

    coeffs: np.ndarray
    energy: float
    parity: str
    interaction: Interaction
    basis_size: int


def relative_hamiltonian(inter: Interaction, m: int, rule: QuadratureRule | None = None) -> np.ndarray:
    """(n + 1/2) on the diagonal plus <m|V(sqrt(2) x)|n>."""
    if not 2 <= m <= 64:
        raise ValueError(f"basis size must be in [2, 64], got {m}")
    if rule is None:
        rule = gauss_hermite_rule(max(DEFAULT_MATRIX_ORDER, 2 * m + 20))
    return np.diag(np.arange(m) + 0.5) + potential_matrix(inter, m, rule, SCALE)


def solve_relative(inter: Interaction, m: int, parity: str,
                   rule: QuadratureRule | None = None) -> TwoBodySolution:
    """Lowest eigenpair of the chosen parity sector.

    The Hamiltonian is restricted to the parity-matching sub-basis before
    diagonalizing, so the odd solution is a true ground state of its symmetry
    sector even though even states lie below it.  Sign convention: the even
    solution is positive at x=0.1, the odd one has a positive chi_1
    coefficient.
    """
    if parity not in PARITIES:
        raise ValueError(f"parity must be one of {PARITIES}, got {parity!r}")
    h = relative_hamiltonian(inter, m, rule)
    sub = np.arange(0 if parity == "even" else 1, m, 2)
    if len(sub) == 0:
        raise ValueError(f"no {parity}-parity orbitals in a basis of size {m}")
    try:
        energies, vectors = np.linalg.eigh(h[np.ix_(sub, sub)])
    except np.linalg.LinAlgError as exc:
        raise NumericsError(f"relative eigensolve failed: {exc}") from exc
    coeffs = np.zeros(m)
    coeffs[sub] = vectors[:, 0]
    coeffs /= np.sqrt(np.sum(coeffs**2))
    if parity == "even":
        probe = float(hermite_function_table(m, np.array([0.1]))[:, 0] @ coeffs)
        if probe < 0.0:
            coeffs = -coeffs
    elif coeffs[1] < 0.0:
        coeffs = -coeffs
    return TwoBodySolution(coeffs, float(energies[0]), parity, inter, m)


def eval_phi(sol: TwoBodySolution, x) -> tuple:
    """(phi, phi', phi'') at x, vectorized over array input."""
    scalar = np.isscalar(x)
    xa = np.asarray(x, dtype=float)
    m = sol.basis_size
    table = hermite_function_table(m + 1, xa)
    c = sol.coeffs
    phi = np.tensordot(c, table[:m], axes=(0, 0))
    dphi = np.zeros_like(phi)
    for n in range(m):
        if c[n] == 0.0:
            continue
        lower = np.sqrt(n / 2.0) * table[n - 1] if n > 0 else 0.0
        dphi += c[n] * (lower - np.sqrt((n + 1) / 2.0) * table[n + 1])
    d2phi = np.tensordot(c * (-2.0 * np.arange(m) - 1.0), table[:m], axes=(0, 0)) + xa * xa * phi
    if scalar:
        return float(phi), float(dphi), float(d2phi)
    return phi, dphi, d2phi
