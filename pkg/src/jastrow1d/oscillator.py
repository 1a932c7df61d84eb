"""Harmonic-oscillator eigenfunctions and quadrature rules.

Everything downstream (two-body solve, trial-energy integrals, CI tensors)
is built on the orthonormal oscillator functions

    chi_n(x) = (2^n n! sqrt(pi))^(-1/2) H_n(x) exp(-x^2/2)

evaluated through the normalized three-term recurrence, and on Gauss-Hermite
rules with weight exp(-x^2).  High orders are supported by keeping the
recurrence in function form (the Gaussian factor rides along, so nothing
overflows) and by exposing log-weights: the raw weights underflow in double
precision above order ~370 even though the de-weighted products w*exp(x^2)
remain perfectly representable.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import roots_legendre

from .errors import NumericsError

MAX_ORBITAL = 512
_NEWTON_MAX_ITER = 64


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for integration against a fixed weight function.

    Gauss-Hermite rules store the weight-function form: sum(w_i f(x_i))
    approximates the integral of f(x) exp(-x^2).  Callers integrating
    functions that already contain Gaussians de-weight explicitly with
    exp(+x^2) factors; ``log_weights`` keeps that product overflow-safe.
    """

    order: int
    nodes: np.ndarray
    weights: np.ndarray
    log_weights: np.ndarray = field(repr=False)

    def deweighted_log(self) -> np.ndarray:
        """log(w_i * exp(x_i^2)), finite at every order."""
        return self.log_weights + self.nodes**2


def _hermite_function_pair(n: int, x: float) -> tuple[float, float]:
    """(chi_{n-1}(x), chi_n(x)) by upward recurrence on the Hermite functions."""
    hm, h = 0.0, np.pi**-0.25 * np.exp(-0.5 * x * x)
    for k in range(n):
        hm, h = h, x * np.sqrt(2.0 / (k + 1)) * h - np.sqrt(k / (k + 1.0)) * hm
    return hm, h


@lru_cache(maxsize=64)
def gauss_hermite_rule(order: int) -> QuadratureRule:
    """Gauss-Hermite rule of the given order (weight function exp(-x^2)).

    Nodes are the roots of H_order: seeded by the eigenvalues of the
    symmetric tridiagonal companion matrix (Golub-Welsch), then polished by
    Newton iteration on the normalized Hermite functions until the residual
    |chi_order(x_i)| < 1e-13.  Weights come out of the Christoffel identity
    w_i = exp(-x_i^2) / sum_{k<order} chi_k(x_i)^2, evaluated in log form so
    the rule stays usable at orders where raw weights underflow.
    """
    if not 1 <= order <= MAX_ORBITAL:
        raise ValueError(f"quadrature order must be in [1, {MAX_ORBITAL}], got {order}")
    if order == 1:
        w = np.array([np.sqrt(np.pi)])
        return QuadratureRule(1, np.array([0.0]), w, np.log(w))

    n = order
    seeds = eigh_tridiagonal(np.zeros(n), np.sqrt(np.arange(1, n) / 2.0), eigvals_only=True)
    pos = []
    for z in seeds[seeds > 1e-9]:
        for _ in range(_NEWTON_MAX_ITER):
            hm, h = _hermite_function_pair(n, z)
            step = h / (np.sqrt(2.0 * n) * hm)
            z -= step
            if abs(step) < 1e-15 * max(1.0, abs(z)):
                break
        hm, h = _hermite_function_pair(n, z)
        if abs(h) > 1e-13:
            raise NumericsError(f"Hermite node failed to converge at order {n}: residual {abs(h):.2e}")
        pos.append(z)

    pos = np.array(pos)
    if n % 2:
        nodes = np.concatenate([-pos[::-1], [0.0], pos])
    else:
        nodes = np.concatenate([-pos[::-1], pos])

    chi = hermite_function_table(n, nodes)
    log_w = -(nodes**2) - np.log(np.sum(chi * chi, axis=0))
    with np.errstate(under="ignore"):
        weights = np.exp(log_w)
    return QuadratureRule(order, nodes, weights, log_w)


def hermite_function_table(n_max: int, x: np.ndarray) -> np.ndarray:
    """chi_n(x) for n = 0..n_max-1, shape (n_max,) + x.shape."""
    x = np.asarray(x, dtype=float)
    table = np.empty((n_max,) + x.shape)
    with np.errstate(under="ignore"):
        table[0] = np.pi**-0.25 * np.exp(-0.5 * x * x)
    if n_max > 1:
        table[1] = np.sqrt(2.0) * x * table[0]
    for k in range(1, n_max - 1):
        table[k + 1] = x * np.sqrt(2.0 / (k + 1)) * table[k] - np.sqrt(k / (k + 1.0)) * table[k - 1]
    return table


def ho_eigenfunction(n: int, x) -> float | np.ndarray:
    """Oscillator eigenfunction chi_n(x)."""
    if not 0 <= n < MAX_ORBITAL:
        raise ValueError(f"orbital index must be in [0, {MAX_ORBITAL}), got {n}")
    scalar = np.isscalar(x)
    val = hermite_function_table(n + 1, np.asarray(x, dtype=float))[n]
    return float(val) if scalar else val


def ho_derivatives(n: int, x) -> tuple:
    """(chi_n, chi_n', chi_n'') at x.

    First derivative from the ladder identity
    chi_n' = sqrt(n/2) chi_{n-1} - sqrt((n+1)/2) chi_{n+1};
    second derivative from the oscillator equation chi_n'' = (x^2-2n-1) chi_n.
    """
    if not 0 <= n < MAX_ORBITAL:
        raise ValueError(f"orbital index must be in [0, {MAX_ORBITAL}), got {n}")
    scalar = np.isscalar(x)
    xa = np.asarray(x, dtype=float)
    table = hermite_function_table(n + 2, xa)
    lower = np.sqrt(n / 2.0) * table[n - 1] if n > 0 else np.zeros_like(xa)
    d1 = lower - np.sqrt((n + 1) / 2.0) * table[n + 1]
    d2 = (xa * xa - 2.0 * n - 1.0) * table[n]
    if scalar:
        return float(table[n]), float(d1), float(d2)
    return table[n], d1, d2


def composite_legendre_rule(edges: np.ndarray, points_per_panel: int = 48) -> QuadratureRule:
    """Composite Gauss-Legendre rule over consecutive panels [e_i, e_{i+1}]."""
    xg, wg = roots_legendre(points_per_panel)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (hi - lo) * xg + 0.5 * (hi + lo))
        weights.append(np.full_like(xg, 0.5 * (hi - lo)) * wg)
    nodes = np.concatenate(nodes)
    weights = np.concatenate(weights)
    return QuadratureRule(len(nodes), nodes, weights, np.log(weights))


def graded_panel_rule(inner_scale: float, x_hi: float, points_per_panel: int = 48) -> QuadratureRule:
    """Positive-axis rule graded toward a feature of width ``inner_scale`` at 0.

    Plain Gauss-Hermite converges only algebraically for integrands with a
    kink or sub-node-spacing structure at the origin (the regularized Coulomb
    potentials at b ~ 0.1); panels refined at the feature scale restore
    machine-precision convergence.  Integrands must supply their own decay.
    """
    s = min(max(inner_scale, 1e-3), 1.0)
    edges = [0.0]
    for e in (0.25 * s, s, 4.0 * s):
        if e < 1.0:
            edges.append(e)
    e = 1.0
    while e < x_hi:
        edges.append(e)
        e *= 2.2
    edges.append(x_hi)
    return composite_legendre_rule(np.array(sorted(set(edges))), points_per_panel)
