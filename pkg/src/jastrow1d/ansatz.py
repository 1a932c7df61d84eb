"""Pair-correlated trial wavefunction and its variational energy.

The trial state for N trapped particles is

    psi(x_1..x_N) ~ prod_k exp(-x_k^2/2) * prod_{i<j} f((x_i-x_j)/sqrt(2))
    f(u) = exp(+u^2/2) phi(alpha u)

with phi the two-body relative ground state of matching parity (even for
bosons, odd for spin-polarized fermions) and alpha a single scale parameter.
The energy functional is the psi^2-weighted average of the analytic local
energy on a tensor Gauss-Hermite grid, entirely in the log domain.

The interaction expectation is NOT taken pointwise on that grid: the sharp
kinds (b ~ 0.1) are under-resolved by Gauss-Hermite spacing, and the contact
kind has no pointwise value at all.  Instead every pair-potential term is
reduced to the pair-separation density rho(u) = <delta((x_1-x_2)/sqrt2 - u)>,
which is integrated against V on kink-graded panels (or read at u=0 for the
contact delta).  For N=2 this reproduces 0.5 + E_rel to machine precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import grids
from .errors import NumericsError
from .interaction import potential_value
from .oscillator import gauss_hermite_rule, graded_panel_rule, hermite_function_table
from .twobody import TwoBodySolution, eval_phi

STATISTICS = ("bosons", "fermions")
_SQRT2 = math.sqrt(2.0)
ALPHA_MARGIN_SQ = 1e-6
WEIGHT_FLOOR = 1e-280
_LOG_FLOOR = math.log(WEIGHT_FLOOR)
CONVERGENCE_TOL = 1e-6
_PAIR_CHANNEL_CUTOFF = 14.0
GOLDEN_TOL = 1e-4


def alpha_lower_bound(n: int) -> float:
    """Normalizability edge: psi^2 is integrable iff alpha^2 > 1 - 2/N."""
    return math.sqrt(max(0.0, 1.0 - 2.0 / n))


@dataclass(frozen=True)
class JastrowAnsatz:
    """Immutable trial-state definition; safe to share across threads."""

    n: int
    statistics: str
    alpha: float
    pair_solution: TwoBodySolution

    def __post_init__(self):
        if not 2 <= self.n <= 4:
            raise ValueError(f"particle count must be in [2, 4], got {self.n}")
        if self.statistics not in STATISTICS:
            raise ValueError(f"statistics must be one of {STATISTICS}, got {self.statistics!r}")
        wanted = "even" if self.statistics == "bosons" else "odd"
        if self.pair_solution.parity != wanted:
            raise ValueError(
                f"{self.statistics} require a {wanted}-parity pair solution, "
                f"got {self.pair_solution.parity}")
        if not self.alpha > 0.0 or self.alpha**2 <= 1.0 - 2.0 / self.n + ALPHA_MARGIN_SQ:
            raise ValueError(
                f"alpha={self.alpha} is at or below the normalizability bound "
                f"sqrt(1 - 2/N) = {alpha_lower_bound(self.n):.6f} for N={self.n}")


@dataclass(frozen=True)
class EnergyEstimate:
    """Quadrature energy with its self-convergence diagnostic."""

    energy: float
    log_norm: float
    quad_order: int
    convergence_delta: float
    converged: bool


@dataclass(frozen=True)
class ScanResult:
    points: tuple
    alpha_star: float
    energy_star: float
    boundary_minimum: bool
    warnings: tuple


def _phi_values(sol: TwoBodySolution, z: np.ndarray) -> np.ndarray:
    table = hermite_function_table(sol.basis_size, z)
    return np.tensordot(sol.coeffs, table, axes=(0, 0))


def pair_log_factor(ansatz: JastrowAnsatz, u: float) -> tuple:
    """(log|f|, sign, f'/f, f''/f) at scaled pair coordinate u.

    An exact node of phi(alpha u) is signalled by sign 0 (with log|f| = -inf
    and zeroed ratios); callers treat such points as zero weight.
    """
    a = ansatz.alpha
    phi, dphi, d2phi = eval_phi(ansatz.pair_solution, a * u)
    if phi == 0.0:
        return -math.inf, 0, 0.0, 0.0
    log_abs = 0.5 * u * u + math.log(abs(phi))
    ratio1 = u + a * dphi / phi
    ratio2 = 1.0 + u * u + 2.0 * a * u * dphi / phi + a * a * d2phi / phi
    return log_abs, int(math.copysign(1.0, phi)), ratio1, ratio2


def log_psi(ansatz: JastrowAnsatz, config) -> tuple:
    """(log|psi|, sign) at a configuration; sign 0 flags an exact node."""
    x = np.asarray(config, dtype=float)
    if x.shape != (ansatz.n,):
        raise ValueError(f"expected {ansatz.n} coordinates, got shape {x.shape}")
    total = -0.5 * float(np.sum(x * x))
    sign = 1
    for i in range(ansatz.n):
        for j in range(i + 1, ansatz.n):
            u = (x[i] - x[j]) / _SQRT2
            log_f, s, _, _ = pair_log_factor(ansatz, u)
            if s == 0:
                return -math.inf, 0
            total += log_f
            sign *= s
    return total, sign


def local_energy(ansatz: JastrowAnsatz, config) -> float:
    """E_L = (H psi)/psi with the analytic pair-factor derivatives.

    The interaction enters pointwise, so the contact kind is rejected (its
    delta term only exists under an integral; energy_expectation handles it).
    """
    x = np.asarray(config, dtype=float)
    if x.shape != (ansatz.n,):
        raise ValueError(f"expected {ansatz.n} coordinates, got shape {x.shape}")
    inter = ansatz.pair_solution.interaction
    energy = 0.5 * float(np.sum(x * x))
    ratios = {}
    for i in range(ansatz.n):
        for j in range(i + 1, ansatz.n):
            u = (x[i] - x[j]) / _SQRT2
            _, s, r1, r2 = pair_log_factor(ansatz, u)
            if s == 0:
                raise NumericsError(f"configuration lies on a node of psi (pair {i},{j})")
            ratios[i, j] = (r1, r2)
            if inter.kind != "none":
                energy += potential_value(inter, x[i] - x[j])
    for k in range(ansatz.n):
        gsum = -x[k]
        lsum = -1.0
        for j in range(ansatz.n):
            if j == k:
                continue
            r1, r2 = ratios[min(k, j), max(k, j)]
            if j < k:  # r is odd in u, s is even
                r1 = -r1
            gsum += r1 / _SQRT2
            lsum += 0.5 * (r2 - r1 * r1)
        energy += -0.5 * (lsum + gsum * gsum)
    return energy


def _pair_tables(ansatz: JastrowAnsatz, x_nodes: np.ndarray):
    """(logf2, r, s, nodemask) tables over pair separations of grid nodes."""
    a = ansatz.alpha
    u = (x_nodes[:, None] - x_nodes[None, :]) / _SQRT2
    phi, dphi, d2phi = eval_phi(ansatz.pair_solution, a * u)
    node = phi == 0.0
    safe = np.where(node, 1.0, phi)
    with np.errstate(divide="ignore"):
        logf2 = u * u + 2.0 * np.log(np.abs(safe))
    logf2[node] = -np.inf
    r = u + a * dphi / safe
    s = 1.0 + u * u + 2.0 * a * u * dphi / safe + a * a * d2phi / safe
    r[node] = 0.0
    s[node] = 0.0
    return logf2, r, s, node.astype(np.uint8)


def _logf2_at(ansatz: JastrowAnsatz, u: np.ndarray) -> np.ndarray:
    """2 log|f(u)| with -inf at nodes, for arbitrary separation arrays."""
    phi = _phi_values(ansatz.pair_solution, ansatz.alpha * u)
    node = phi == 0.0
    with np.errstate(divide="ignore"):
        out = u * u + 2.0 * np.log(np.abs(np.where(node, 1.0, phi)))
    return np.where(node, -np.inf, out)


def _pair_channel_offsets(ansatz: JastrowAnsatz, u0: np.ndarray, x_nodes: np.ndarray, logf2_main):
    """Tables for the pair-density reduction at separations u0."""
    phi0 = _phi_values(ansatz.pair_solution, ansatz.alpha * u0)
    with np.errstate(divide="ignore"):
        offset = np.where(phi0 == 0.0, -np.inf, 2.0 * np.log(np.abs(np.where(phi0 == 0.0, 1.0, phi0))))
    if ansatz.n == 2:
        return offset, None, None, None
    s_grid = x_nodes[None, :, None]
    u_col = u0[:, None, None]
    xj = x_nodes[None, None, :]
    pair_a = _logf2_at(ansatz, ((s_grid + u_col) / _SQRT2 - xj) / _SQRT2)
    pair_b = _logf2_at(ansatz, ((s_grid - u_col) / _SQRT2 - xj) / _SQRT2)
    return offset, pair_a, pair_b, logf2_main


def _interaction_numerator(ansatz, rule, logf2_main, den, den_shift):
    """<sum_{i<j} V(x_i - x_j)> relative to the main-grid normalization."""
    inter = ansatz.pair_solution.interaction
    npairs = ansatz.n * (ansatz.n - 1) // 2
    if inter.kind == "contact":
        u0 = np.array([0.0])
        offset, pa, pb, pr = _pair_channel_offsets(ansatz, u0, rule.nodes, logf2_main)
        rho, shv = grids.pair_density(rule.log_weights, offset, pa, pb, pr, ansatz.n)
        if not np.isfinite(shv):
            return 0.0  # fermions: density vanishes at contact
        return inter.g * npairs * float(rho[0]) / _SQRT2 * math.exp(shv - den_shift) / den
    panel = graded_panel_rule(inter.b / _SQRT2, _PAIR_CHANNEL_CUTOFF)
    offset, pa, pb, pr = _pair_channel_offsets(ansatz, panel.nodes, rule.nodes, logf2_main)
    rho, shv = grids.pair_density(rule.log_weights, offset, pa, pb, pr, ansatz.n)
    if not np.isfinite(shv):
        raise NumericsError("pair-separation density underflowed to zero")
    v = potential_value(inter, _SQRT2 * panel.nodes)
    integral = 2.0 * float(np.sum(panel.weights * v * rho))  # V and rho are even in u0
    return npairs * integral * math.exp(shv - den_shift) / den


def _energy_single(ansatz: JastrowAnsatz, quad_order: int) -> tuple:
    """(energy, log_norm) at one quadrature order."""
    rule = gauss_hermite_rule(quad_order)
    logf2, rtab, stab, nodemask = _pair_tables(ansatz, rule.nodes)
    num, den, shift, _ = grids.grid_sums(
        rule.log_weights, rule.nodes, logf2, rtab, stab, nodemask, ansatz.n, _LOG_FLOOR)
    if den <= 0.0 or not np.isfinite(shift):
        raise NumericsError("psi^2 normalization underflowed to zero on the grid")
    energy = num / den
    if ansatz.pair_solution.interaction.kind != "none":
        energy += _interaction_numerator(ansatz, rule, logf2, den, shift)
    return energy, shift + math.log(den)


def energy_expectation(ansatz: JastrowAnsatz, quad_order: int = 64) -> EnergyEstimate:
    """Variational energy on a tensor grid of the given order.

    The estimate is re-evaluated at floor(order/2) to produce the
    self-convergence delta; estimates with delta > 1e-6 are flagged.
    """
    if quad_order < 20:
        raise ValueError(f"quad_order must be >= 20, got {quad_order}")
    energy, log_norm = _energy_single(ansatz, quad_order)
    coarse, _ = _energy_single(ansatz, quad_order // 2)
    delta = abs(energy - coarse)
    return EnergyEstimate(energy, log_norm, quad_order, delta, delta <= CONVERGENCE_TOL)


def local_energy_moments(ansatz: JastrowAnsatz, quad_order: int) -> tuple:
    """(mean, variance) of the full local energy under psi^2 on the grid.

    Diagnostic used by the eigenstate tests (variance vanishes for exact
    eigenstates).  Pointwise V is required, so contact is rejected.
    """
    inter = ansatz.pair_solution.interaction
    rule = gauss_hermite_rule(quad_order)
    logf2, rtab, stab, nodemask = _pair_tables(ansatz, rule.nodes)
    num, den, shift, _ = grids.grid_sums(
        rule.log_weights, rule.nodes, logf2, rtab, stab, nodemask, ansatz.n, _LOG_FLOOR)
    vtab = None
    if inter.kind != "none":
        d = rule.nodes[:, None] - rule.nodes[None, :]
        vtab = potential_value(inter, d)
    mean = _moment_pass(ansatz, rule, logf2, rtab, stab, nodemask, vtab, shift, den, None)
    var = _moment_pass(ansatz, rule, logf2, rtab, stab, nodemask, vtab, shift, den, mean)
    return mean, var


def _moment_pass(ansatz, rule, logf2, rtab, stab, nodemask, vtab, shift, den, center):
    from .grid_numpy import _index_grids, _slab_logweight  # reference backend

    n = ansatz.n
    q = rule.order
    ix = _index_grids(q, n - 1)
    acc = 0.0
    for a0 in range(q):
        lw, valid = _slab_logweight(a0, ix, rule.log_weights, logf2, nodemask, n)
        lw = np.where(valid, lw - shift, -np.inf)
        keep = lw >= _LOG_FLOOR
        if not np.any(keep):
            continue
        w = np.where(keep, np.exp(np.maximum(lw, -745.0)), 0.0)
        el = np.zeros(np.broadcast_shapes(*(g.shape for g in ix)))
        for k in range(n):
            tk = a0 if k == 0 else ix[k - 1]
            xk = rule.nodes[tk]
            gsum = -xk + np.zeros_like(el)
            lsum = np.full_like(el, -1.0)
            for j in range(n):
                if j == k:
                    continue
                tj = a0 if j == 0 else ix[j - 1]
                r = rtab[tk, tj]
                gsum = gsum + r / _SQRT2
                lsum = lsum + 0.5 * (stab[tk, tj] - r * r)
            el = el + 0.5 * xk * xk - 0.5 * (lsum + gsum * gsum)
        if vtab is not None:
            for i, j in ((i, j) for i in range(n) for j in range(i + 1, n)):
                ti = a0 if i == 0 else ix[i - 1]
                el = el + vtab[ti, ix[j - 1]]
        stat = el if center is None else (el - center) ** 2
        acc += float(np.sum(w * np.where(keep, stat, 0.0)))
    return acc / den


def _golden_section(f, lo: float, hi: float, tol: float) -> tuple:
    """Deterministic golden-section minimizer; returns (best_x, best_f)."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    best = (c, fc) if fc <= fd else (d, fd)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
            if fc < best[1]:
                best = (c, fc)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
            if fd < best[1]:
                best = (d, fd)
    return best


def scan_alpha(n: int, statistics: str, pair_solution: TwoBodySolution,
               alpha_min: float, alpha_max: float, steps: int,
               quad_order: int = 64) -> ScanResult:
    """Energy curve over a uniform alpha grid plus golden-section refinement.

    The refinement runs on the interval bracketing the grid minimizer and
    stops at |delta alpha| < 1e-4; a minimum on the scan boundary is flagged
    and returned unrefined.
    """
    if steps < 3:
        raise ValueError(f"steps must be >= 3, got {steps}")
    bound = alpha_lower_bound(n)
    if not alpha_min > bound + 1e-3:
        raise ValueError(
            f"alpha_min={alpha_min} must exceed the normalizability bound "
            f"{bound:.6f} for N={n} by at least 1e-3")
    if not alpha_max > alpha_min:
        raise ValueError("alpha_max must exceed alpha_min")

    alphas = np.linspace(alpha_min, alpha_max, steps)
    points = []
    for a in alphas:
        ans = JastrowAnsatz(n, statistics, float(a), pair_solution)
        points.append((float(a), energy_expectation(ans, quad_order)))
    energies = [p[1].energy for p in points]
    imin = int(np.argmin(energies))
    warnings = []
    if not all(p[1].converged for p in points):
        warnings.append("unconverged-quadrature")

    if imin in (0, steps - 1):
        warnings.append("boundary-minimum")
        return ScanResult(tuple(points), float(alphas[imin]), energies[imin], True, tuple(warnings))

    def probe(a: float) -> float:
        return _energy_single(JastrowAnsatz(n, statistics, a, pair_solution), quad_order)[0]

    best_a, best_e = _golden_section(probe, float(alphas[imin - 1]), float(alphas[imin + 1]), GOLDEN_TOL)
    if energies[imin] < best_e:
        best_a, best_e = float(alphas[imin]), energies[imin]
    return ScanResult(tuple(points), best_a, best_e, False, tuple(warnings))
