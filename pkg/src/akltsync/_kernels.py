"""Numba kernels for the Lindblad engine.

All heavy operations are CSR-times-dense products on complex matrices plus
fused Runge-Kutta stage combinations. Row-parallel loops write disjoint
output rows, so the kernels are deterministic for any thread count. Kernels
are compiled separately for float64 and complex128 operator data; real
operator data (the common case for this model family) halves the flops.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

_OPTS = dict(parallel=True, fastmath=True, cache=True, nogil=True)


@njit(**_OPTS)
def csr_mm_set(data, indices, indptr, x, alpha, out):
    """out = alpha * (A @ x) for CSR A; rows without entries are zeroed."""
    n = out.shape[0]
    m = x.shape[1]
    for i in prange(n):
        acc = np.zeros(m, dtype=np.complex128)
        for p in range(indptr[i], indptr[i + 1]):
            a = data[p]
            xr = x[indices[p]]
            for k in range(m):
                acc[k] += a * xr[k]
        o = out[i]
        for k in range(m):
            o[k] = alpha * acc[k]


@njit(**_OPTS)
def csr2_mm_set(data_a, indices_a, indptr_a, alpha_a,
                data_b, indices_b, indptr_b, alpha_b, x, out):
    """out = alpha_a * (A @ x) + alpha_b * (B @ x) in a single output pass."""
    n = out.shape[0]
    m = x.shape[1]
    for i in prange(n):
        acc_a = np.zeros(m, dtype=np.complex128)
        for p in range(indptr_a[i], indptr_a[i + 1]):
            a = data_a[p]
            xr = x[indices_a[p]]
            for k in range(m):
                acc_a[k] += a * xr[k]
        acc_b = np.zeros(m, dtype=np.complex128)
        for p in range(indptr_b[i], indptr_b[i + 1]):
            b = data_b[p]
            xr = x[indices_b[p]]
            for k in range(m):
                acc_b[k] += b * xr[k]
        o = out[i]
        for k in range(m):
            o[k] = alpha_a * acc_a[k] + alpha_b * acc_b[k]


@njit(**_OPTS)
def csr_mm_acc(data, indices, indptr, x, alpha, out):
    """out += alpha * (A @ x) for CSR A."""
    n = out.shape[0]
    m = x.shape[1]
    for i in prange(n):
        if indptr[i] == indptr[i + 1]:
            continue
        acc = np.zeros(m, dtype=np.complex128)
        for p in range(indptr[i], indptr[i + 1]):
            a = data[p]
            xr = x[indices[p]]
            for k in range(m):
                acc[k] += a * xr[k]
        o = out[i]
        for k in range(m):
            o[k] += alpha * acc[k]


@njit(**_OPTS)
def conj_transpose(x, out):
    """out = x^dagger (blocked to keep both matrices cache-resident)."""
    n = x.shape[0]
    bs = 64
    nb = (n + bs - 1) // bs
    for bi in prange(nb):
        i0 = bi * bs
        i1 = min(i0 + bs, n)
        for j0 in range(0, n, bs):
            j1 = min(j0 + bs, n)
            for i in range(i0, i1):
                for j in range(j0, j1):
                    out[i, j] = np.conj(x[j, i])


@njit(**_OPTS)
def stage_from_half(rho, t, c, out):
    """out = rho + c * (t + t^dagger); exactly Hermitian for Hermitian rho."""
    n = rho.shape[0]
    for i in prange(n):
        for j in range(n):
            out[i, j] = rho[i, j] + c * (t[i, j] + np.conj(t[j, i]))


@njit(**_OPTS)
def rk4_combine(rho, t1, t2, t3, t4, h, out):
    """RK4 update from the four half-sided stage derivatives, re-Hermitized.

    out = (u + u^dagger)/2 with u = rho + h/6 (k1 + 2 k2 + 2 k3 + k4) and
    k = t + t^dagger. Each (i, j)/(j, i) pair is computed once and written
    to both positions, so the result is Hermitian to the last bit. Rows of
    the triangle are walked interleaved front/back so the per-thread work
    stays balanced.
    """
    n = rho.shape[0]
    c = h / 6.0
    for idx in prange(n):
        half = idx >> 1
        i = half + (idx & 1) * (n - 1 - 2 * half)
        for j in range(i, n):
            s_ij = (t1[i, j] + np.conj(t1[j, i])) \
                + 2.0 * (t2[i, j] + np.conj(t2[j, i])) \
                + 2.0 * (t3[i, j] + np.conj(t3[j, i])) \
                + (t4[i, j] + np.conj(t4[j, i]))
            s_ji = (t1[j, i] + np.conj(t1[i, j])) \
                + 2.0 * (t2[j, i] + np.conj(t2[i, j])) \
                + 2.0 * (t3[j, i] + np.conj(t3[i, j])) \
                + (t4[j, i] + np.conj(t4[i, j]))
            u_ij = rho[i, j] + c * s_ij
            u_ji = rho[j, i] + c * s_ji
            m = 0.5 * (u_ij + np.conj(u_ji))
            if i == j:
                out[i, i] = complex(m.real, 0.0)
            else:
                out[i, j] = m
                out[j, i] = np.conj(m)


@njit(**_OPTS)
def axpy(x, y, c, out):
    """out = x + c * y."""
    n = x.shape[0]
    for i in prange(n):
        for j in range(x.shape[1]):
            out[i, j] = x[i, j] + c * y[i, j]


@njit(**_OPTS)
def rk4_combine_general(rho, k1, k2, k3, k4, h, out):
    """Plain RK4 update from four full derivatives (no symmetrization)."""
    n = rho.shape[0]
    c = h / 6.0
    for i in prange(n):
        for j in range(rho.shape[1]):
            out[i, j] = rho[i, j] + c * (k1[i, j] + 2.0 * k2[i, j]
                                         + 2.0 * k3[i, j] + k4[i, j])
