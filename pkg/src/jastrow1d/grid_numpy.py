"""Numpy implementation of the tensor-grid reductions.

This is the fallback backend; `jastrow1d._gridcore` implements the same two
functions in Cython.  Both walk the N-dimensional grid in slabs along the
first axis and accumulate slab partials in index order, so each backend is
run-to-run deterministic; cross-backend agreement is at rounding level
(~1e-12 relative), not bitwise.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

_SQRT2 = np.sqrt(2.0)
_EXP_FLOOR = -745.0  # exp() underflows to 0 a little below this


def _index_grids(q: int, ndim: int):
    return [np.arange(q).reshape(tuple(q if t == k else 1 for t in range(ndim))) for k in range(ndim)]


def _slab_logweight(a0, ix, log_axis_w, logf2, nodemask, n):
    """(lw, valid) on the slab with the first particle's index fixed at a0."""
    lw = log_axis_w[a0] + sum(log_axis_w[ix[k - 1]] for k in range(1, n))
    valid = True
    for i, j in combinations(range(n), 2):
        ti = a0 if i == 0 else ix[i - 1]
        tj = ix[j - 1]
        lw = lw + logf2[ti, tj]
        valid = valid & (nodemask[ti, tj] == 0)
    return lw, valid


def grid_sums(log_axis_w, x_nodes, logf2, rtab, stab, nodemask, n_particles, log_floor):
    """Weighted sums of the kinetic-plus-trap local energy on the tensor grid.

    Returns (num, den, shift, used): num = sum w * E_L and den = sum w with
    w = exp(lw - shift), where lw collects the Gauss-Hermite log-weights and
    the squared pair factors.  Points on a pair node or below the relative
    weight floor contribute nothing and their local energy is never used.
    """
    n = int(n_particles)
    q = len(x_nodes)
    ix = _index_grids(q, n - 1)

    shift = -np.inf
    for a0 in range(q):
        lw, valid = _slab_logweight(a0, ix, log_axis_w, logf2, nodemask, n)
        m = float(np.max(np.where(valid, lw, -np.inf)))
        if m > shift:
            shift = m
    if not np.isfinite(shift):
        return 0.0, 0.0, shift, 0

    num = 0.0
    den = 0.0
    used = 0
    inv_sqrt2 = 1.0 / _SQRT2
    slab_shape = np.broadcast_shapes(*(g.shape for g in ix))
    for a0 in range(q):
        lw, valid = _slab_logweight(a0, ix, log_axis_w, logf2, nodemask, n)
        lw = np.where(valid, lw - shift, -np.inf)
        keep = lw >= log_floor
        if not np.any(keep):
            continue
        w = np.where(keep, np.exp(np.maximum(lw, _EXP_FLOOR)), 0.0)

        el = np.zeros(slab_shape)
        for k in range(n):
            tk = a0 if k == 0 else ix[k - 1]
            xk = x_nodes[tk]
            gsum = -xk + np.zeros(slab_shape)
            lsum = np.full(slab_shape, -1.0)
            for j in range(n):
                if j == k:
                    continue
                tj = a0 if j == 0 else ix[j - 1]
                r = rtab[tk, tj]
                gsum = gsum + inv_sqrt2 * r
                lsum = lsum + 0.5 * (stab[tk, tj] - r * r)
            el = el + 0.5 * xk * xk - 0.5 * (lsum + gsum * gsum)

        num += float(np.sum(w * np.where(keep, el, 0.0)))
        den += float(np.sum(w))
        used += int(np.count_nonzero(keep))
    return num, den, shift, used


def pair_density(log_axis_w, offset_u, pair_a, pair_b, pair_rest, n_particles, block=8):
    """Reduce the pair-separation density tables to rho(u0) (times exp(-shift)).

    The log-weight at (iu, s, x_3, .., x_N) is assembled from precomputed
    tables: plain Gauss-Hermite axis log-weights (the axis Gaussians cancel
    against the de-weighting exactly, leaving a -u0^2 absorbed into the
    offset), a per-u0 offset carrying the held pair's factor, pair_a[iu, s, j]
    and pair_b[iu, s, j] for pairs of the held particles with spectator j,
    and pair_rest[j, k] for spectator pairs.  A single shift is shared across
    all u0 so the result has a common scale.
    """
    n = int(n_particles)
    q = len(log_axis_w)
    nu = len(offset_u)
    rest = n - 2

    def block_logweight(lo, hi):
        nb = hi - lo
        lw = offset_u[lo:hi].reshape((nb,) + (1,) * (1 + rest)) + \
            log_axis_w.reshape((1, q) + (1,) * rest)
        if rest == 0:
            return lw
        if rest == 1:
            lw = lw + log_axis_w.reshape((1, 1, q))
            lw = lw + pair_a[lo:hi] + pair_b[lo:hi]
            return lw
        # rest == 2
        lw = lw + log_axis_w.reshape((1, 1, q, 1)) + log_axis_w.reshape((1, 1, 1, q))
        lw = lw + pair_a[lo:hi, :, :, None] + pair_b[lo:hi, :, :, None]
        lw = lw + pair_a[lo:hi, :, None, :] + pair_b[lo:hi, :, None, :]
        lw = lw + pair_rest[None, None, :, :]
        return lw

    shift = -np.inf
    for lo in range(0, nu, block):
        m = float(np.max(block_logweight(lo, min(lo + block, nu))))
        if m > shift:
            shift = m
    rho = np.zeros(nu)
    if not np.isfinite(shift):
        return rho, shift
    for lo in range(0, nu, block):
        lw = block_logweight(lo, min(lo + block, nu)) - shift
        w = np.exp(np.maximum(lw, _EXP_FLOOR))
        w[lw == -np.inf] = 0.0
        rho[lo:lo + w.shape[0]] = w.reshape(w.shape[0], -1).sum(axis=1)
    return rho, shift
