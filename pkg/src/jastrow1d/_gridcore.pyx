# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Cython implementation of the tensor-grid reductions.

Streaming twin of `jastrow1d.grid_numpy`: identical contracts, O(1) memory in
the grid size, point order fixed so repeated runs are bitwise reproducible.
"""
from libc.math cimport exp, INFINITY, isfinite, sqrt

import numpy as np


def grid_sums(double[::1] log_axis_w, double[::1] x_nodes,
              double[:, ::1] logf2, double[:, ::1] rtab, double[:, ::1] stab,
              unsigned char[:, ::1] nodemask, int n_particles, double log_floor):
    """See grid_numpy.grid_sums: returns (num, den, shift, used)."""
    cdef int n = n_particles
    cdef int q = x_nodes.shape[0]
    cdef double inv_sqrt2 = 1.0 / sqrt(2.0)
    cdef long total = 1
    cdef int k, j, p
    for k in range(n):
        total *= q

    cdef long[4] idx
    cdef long point
    cdef double lw, shift = -INFINITY
    cdef bint valid
    cdef int passno
    cdef double num = 0.0, den = 0.0, w, el, xk, gsum, lsum, r
    cdef long used = 0

    for passno in range(2):
        for k in range(n):
            idx[k] = 0
        for point in range(total):
            # log-weight and node check
            lw = 0.0
            valid = 1
            for k in range(n):
                lw += log_axis_w[idx[k]]
            for k in range(n - 1):
                for j in range(k + 1, n):
                    if nodemask[idx[k], idx[j]]:
                        valid = 0
                    lw += logf2[idx[k], idx[j]]
            if valid:
                if passno == 0:
                    if lw > shift:
                        shift = lw
                else:
                    lw -= shift
                    if lw >= log_floor:
                        w = exp(lw)
                        el = 0.0
                        for k in range(n):
                            xk = x_nodes[idx[k]]
                            gsum = -xk
                            lsum = -1.0
                            for j in range(n):
                                if j != k:
                                    r = rtab[idx[k], idx[j]]
                                    gsum += inv_sqrt2 * r
                                    lsum += 0.5 * (stab[idx[k], idx[j]] - r * r)
                            el += 0.5 * xk * xk - 0.5 * (lsum + gsum * gsum)
                        num += w * el
                        den += w
                        used += 1
            # odometer
            for k in range(n - 1, -1, -1):
                idx[k] += 1
                if idx[k] < q:
                    break
                idx[k] = 0
        if passno == 0 and not isfinite(shift):
            return 0.0, 0.0, shift, 0
    return num, den, shift, used


def pair_density(double[::1] log_axis_w, double[::1] offset_u,
                 pair_a, pair_b, pair_rest, int n_particles):
    """See grid_numpy.pair_density: returns (rho array, shift)."""
    cdef int n = n_particles
    cdef int rest = n - 2
    cdef int q = log_axis_w.shape[0]
    cdef int nu = offset_u.shape[0]
    cdef double[:, :, ::1] a_tab = None
    cdef double[:, :, ::1] b_tab = None
    cdef double[:, ::1] c_tab = None
    if rest > 0:
        a_tab = np.ascontiguousarray(pair_a)
        b_tab = np.ascontiguousarray(pair_b)
    if rest > 1:
        c_tab = np.ascontiguousarray(pair_rest)

    rho_arr = np.zeros(nu)
    cdef double[::1] rho = rho_arr
    cdef double shift = -INFINITY
    cdef double lw, base, acc
    cdef int iu, s, i3, i4, passno

    for passno in range(2):
        for iu in range(nu):
            acc = 0.0
            for s in range(q):
                base = offset_u[iu] + log_axis_w[s]
                if rest == 0:
                    lw = base
                    if passno == 0:
                        if lw > shift:
                            shift = lw
                    elif lw - shift > -745.0:
                        acc += exp(lw - shift)
                elif rest == 1:
                    for i3 in range(q):
                        lw = base + log_axis_w[i3] + a_tab[iu, s, i3] + b_tab[iu, s, i3]
                        if passno == 0:
                            if lw > shift:
                                shift = lw
                        elif lw - shift > -745.0:
                            acc += exp(lw - shift)
                else:
                    for i3 in range(q):
                        for i4 in range(q):
                            lw = (base + log_axis_w[i3] + log_axis_w[i4]
                                  + a_tab[iu, s, i3] + b_tab[iu, s, i3]
                                  + a_tab[iu, s, i4] + b_tab[iu, s, i4]
                                  + c_tab[i3, i4])
                            if passno == 0:
                                if lw > shift:
                                    shift = lw
                            elif lw - shift > -745.0:
                                acc += exp(lw - shift)
            if passno == 1:
                rho[iu] = acc
        if passno == 0 and not isfinite(shift):
            return rho_arr, shift
    return rho_arr, shift
