"""Configuration-interaction reference in a truncated oscillator Fock space.

The two-body tensor <ab|V|cd> is assembled through the exact 45-degree
(center-of-mass / relative) rotation of oscillator product states,

    chi_a(x1) chi_b(x2) = sum_{K+n=a+b} B[a,b;K,n] chi_K(X) chi_n(u),

whose coefficients have a closed binomial form, combined with the 1D
relative-coordinate matrix <n|V(sqrt(2) u)|n'> from `interaction`.  This is
both far more accurate than a 2D quadrature for the sharp kinds and makes
the N=2 separability against the `twobody` module exact by construction on
shell-truncated spaces.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from math import comb, lgamma, sqrt

import numpy as np

from .errors import NumericsError
from .interaction import DEFAULT_MATRIX_ORDER, Interaction, potential_matrix
from .oscillator import QuadratureRule, gauss_hermite_rule

TRUNCATIONS = ("orbital", "shell")


@dataclass(frozen=True)
class FockBasis:
    """Occupation configurations of N particles over M orbitals.

    States are orbital-index tuples, sorted ascending within a state
    (multisets for bosons, strict for fermions) and listed lexicographically.
    ``truncation`` "orbital" keeps every configuration over orbitals
    0..M-1; "shell" additionally caps the total quanta at M-1, which makes
    the center-of-mass/relative separation exact for N=2.
    """

    n: int
    m: int
    statistics: str
    states: tuple
    truncation: str = "orbital"

    @property
    def dimension(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class CISpectrum:
    energies: tuple
    gap: float
    basis: FockBasis
    interaction: Interaction


def build_fock_basis(n: int, m: int, statistics: str, truncation: str = "orbital") -> FockBasis:
    """Enumerate the Fock configurations in deterministic (lexicographic) order."""
    if not 1 <= n <= 4:
        raise ValueError(f"particle count must be in [1, 4], got {n}")
    if not 1 <= m <= 20:
        raise ValueError(f"orbital count must be in [1, 20], got {m}")
    if truncation not in TRUNCATIONS:
        raise ValueError(f"truncation must be one of {TRUNCATIONS}, got {truncation!r}")
    if statistics == "fermions":
        if m < n:
            raise ValueError(f"fermions need at least N={n} orbitals, got M={m}")
        states = combinations(range(m), n)
    elif statistics == "bosons":
        states = combinations_with_replacement(range(m), n)
    else:
        raise ValueError(f"statistics must be 'bosons' or 'fermions', got {statistics!r}")
    states = tuple(s for s in states if truncation == "orbital" or sum(s) <= m - 1)
    return FockBasis(n, m, statistics, states, truncation)


@lru_cache(maxsize=8)
def moshinsky_brackets(m: int) -> np.ndarray:
    """B[a, b, K] with n = a + b - K implied: the 1D oscillator rotation.

    Obtained by expanding (a1+, a2+) -> ((A+ +- a+)/sqrt(2)) binomially:
    B = 2^(-(a+b)/2) sqrt(K! n! / (a! b!)) sum_p C(a,p) C(b,K-p) (-1)^(b-K+p).
    """
    out = np.zeros((m, m, 2 * m - 1))
    for a in range(m):
        for b in range(m):
            for kk in range(a + b + 1):
                n = a + b - kk
                acc = 0
                for p in range(max(0, kk - b), min(a, kk) + 1):
                    acc += comb(a, p) * comb(b, kk - p) * (-1) ** (b - kk + p)
                if acc:
                    norm = 0.5 * (lgamma(kk + 1) + lgamma(n + 1) - lgamma(a + 1) - lgamma(b + 1))
                    out[a, b, kk] = acc * np.exp(norm - 0.5 * (a + b) * np.log(2.0))
    return out


def two_body_tensor(inter: Interaction, m: int, rule: QuadratureRule | None = None) -> np.ndarray:
    """V[a,b,c,d] = <ab|V|cd> for orbitals below m.

    Contracted from the relative-coordinate matrix over 2m-1 orbitals through
    the Moshinsky brackets; conserves total quanta blockwise and inherits the
    kink-aware accuracy of `potential_matrix`.
    """
    if rule is None:
        rule = gauss_hermite_rule(max(DEFAULT_MATRIX_ORDER, 2 * (2 * m - 1) + 20))
    if inter.kind == "none":
        return np.zeros((m, m, m, m))
    vrel = potential_matrix(inter, 2 * m - 1, rule, sqrt(2.0))
    bk = moshinsky_brackets(m)
    tensor = np.zeros((m, m, m, m))
    for a in range(m):
        for b in range(m):
            sab = a + b
            for c in range(m):
                for d in range(m):
                    scd = c + d
                    acc = 0.0
                    for kk in range(min(sab, scd) + 1):
                        acc += bk[a, b, kk] * vrel[sab - kk, scd - kk] * bk[c, d, kk]
                    tensor[a, b, c, d] = acc
    return tensor


def _occupations(state: tuple, m: int) -> list:
    occ = [0] * m
    for o in state:
        occ[o] += 1
    return occ


def build_hamiltonian(basis: FockBasis, tensor: np.ndarray) -> np.ndarray:
    """Second-quantized H = sum_n (n+1/2) a+_n a_n + (1/2) sum V_abcd a+_a a+_b a_d a_c.

    Bosonic amplitudes carry sqrt(occupation) factors; fermionic ones the
    sign of the number of occupied orbitals below the acted index.  The
    upper triangle is computed and mirrored, so the result is exactly
    symmetric.
    """
    m = basis.m
    if tensor.shape != (m, m, m, m):
        raise ValueError(f"tensor shape {tensor.shape} does not match M={m}")
    index = {s: i for i, s in enumerate(basis.states)}
    dim = basis.dimension
    fermi = basis.statistics == "fermions"
    h = np.zeros((dim, dim))

    for col, ket in enumerate(basis.states):
        h[col, col] += sum(o + 0.5 for o in ket)
        occ = _occupations(ket, m)
        # annihilate c then d, create b then a (operator a+_a a+_b a_d a_c)
        for c in range(m):
            if occ[c] == 0:
                continue
            n1 = occ.copy()
            amp1 = sqrt(n1[c]) if not fermi else (-1.0) ** sum(n1[:c])
            n1[c] -= 1
            for d in range(m):
                if n1[d] == 0:
                    continue
                n2 = n1.copy()
                amp2 = amp1 * (sqrt(n2[d]) if not fermi else (-1.0) ** sum(n2[:d]))
                n2[d] -= 1
                for b in range(m):
                    if fermi and n2[b]:
                        continue
                    n3 = n2.copy()
                    amp3 = amp2 * (sqrt(n3[b] + 1.0) if not fermi else (-1.0) ** sum(n3[:b]))
                    n3[b] += 1
                    for a in range(m):
                        if (a + b + c + d) % 2:  # tensor vanishes by parity
                            continue
                        if fermi and n3[a]:
                            continue
                        amp4 = amp3 * (sqrt(n3[a] + 1.0) if not fermi else (-1.0) ** sum(n3[:a]))
                        n3[a] += 1
                        bra = tuple(o for o in range(m) for _ in range(n3[o]))
                        n3[a] -= 1
                        row = index.get(bra)
                        if row is not None and row <= col:
                            h[row, col] += 0.5 * tensor[a, b, c, d] * amp4
    return np.triu(h) + np.triu(h, 1).T


def solve_spectrum(matrix: np.ndarray, k: int, basis: FockBasis, inter: Interaction) -> CISpectrum:
    """k lowest eigenvalues of the CI Hamiltonian, ascending, plus the gap."""
    if k > matrix.shape[0]:
        raise ValueError(f"requested {k} eigenvalues from a dimension-{matrix.shape[0]} space")
    try:
        energies = np.linalg.eigvalsh(matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericsError(f"CI eigensolve failed: {exc}") from exc
    lowest = tuple(float(e) for e in energies[:k])
    gap = float(energies[1] - energies[0]) if matrix.shape[0] > 1 else 0.0
    return CISpectrum(lowest, gap, basis, inter)


def ci_ground_state(inter: Interaction, n: int, m: int, statistics: str,
                    k: int = 4, truncation: str = "orbital") -> CISpectrum:
    """Convenience pipeline: basis -> tensor -> Hamiltonian -> spectrum."""
    basis = build_fock_basis(n, m, statistics, truncation)
    tensor = two_body_tensor(inter, m)
    h = build_hamiltonian(basis, tensor)
    return solve_spectrum(h, min(k, basis.dimension), basis, inter)
