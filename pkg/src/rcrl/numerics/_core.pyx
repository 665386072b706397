# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel backend: BLAS-backed MLP forward/backward and fused
elementwise Adam/Polyak loops. Semantics match kernels_py exactly; only
call overhead and elementwise fusion differ."""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt
from scipy.linalg.cython_blas cimport dgemm

cnp.import_array()


cdef void _mm_nn(double[:, ::1] a, double[:, ::1] b, double[:, ::1] out) noexcept nogil:
    # out(m,n) = a(m,k) @ b(k,n); C-order arrays fed to Fortran dgemm as
    # their transposes: out^T = b^T @ a^T.
    cdef int m = a.shape[0], k = a.shape[1], n = b.shape[1]
    cdef double one = 1.0, zero = 0.0
    dgemm("N", "N", &n, &m, &k, &one, &b[0, 0], &n, &a[0, 0], &k, &zero, &out[0, 0], &n)


cdef void _mm_tn(double[:, ::1] a, double[:, ::1] b, double[:, ::1] out) noexcept nogil:
    # out(p,n) = a(m,p).T @ b(m,n)
    cdef int m = a.shape[0], p = a.shape[1], n = b.shape[1]
    cdef double one = 1.0, zero = 0.0
    dgemm("N", "T", &n, &p, &m, &one, &b[0, 0], &n, &a[0, 0], &p, &zero, &out[0, 0], &n)


cdef void _mm_nt(double[:, ::1] a, double[:, ::1] b, double[:, ::1] out) noexcept nogil:
    # out(m,n) = a(m,p) @ b(n,p).T
    cdef int m = a.shape[0], p = a.shape[1], n = b.shape[0]
    cdef double one = 1.0, zero = 0.0
    dgemm("T", "N", &n, &m, &p, &one, &b[0, 0], &p, &a[0, 0], &p, &zero, &out[0, 0], &n)


cdef void _bias_relu(double[:, ::1] z, double[::1] b) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double v
    for i in range(z.shape[0]):
        for j in range(z.shape[1]):
            v = z[i, j] + b[j]
            z[i, j] = v if v > 0.0 else 0.0


cdef void _bias_add(double[:, ::1] z, double[::1] b) noexcept nogil:
    cdef Py_ssize_t i, j
    for i in range(z.shape[0]):
        for j in range(z.shape[1]):
            z[i, j] += b[j]


cdef void _colsum(double[:, ::1] g, double[::1] out) noexcept nogil:
    cdef Py_ssize_t i, j
    for j in range(g.shape[1]):
        out[j] = 0.0
    for i in range(g.shape[0]):
        for j in range(g.shape[1]):
            out[j] += g[i, j]


cdef void _relu_mask(double[:, ::1] g, double[:, ::1] act) noexcept nogil:
    cdef Py_ssize_t i, j
    for i in range(g.shape[0]):
        for j in range(g.shape[1]):
            if act[i, j] <= 0.0:
                g[i, j] = 0.0


def forward(weights, biases, x):
    """ReLU MLP forward; returns (acts, z) like kernels_py.forward."""
    cdef Py_ssize_t n_layers = len(weights)
    cdef Py_ssize_t i
    acts = [x]
    h = x
    cdef cnp.ndarray z
    for i in range(n_layers - 1):
        z = np.empty((h.shape[0], weights[i].shape[1]))
        _mm_nn(h, weights[i], z)
        _bias_relu(z, biases[i])
        acts.append(z)
        h = z
    z = np.empty((h.shape[0], weights[n_layers - 1].shape[1]))
    _mm_nn(h, weights[n_layers - 1], z)
    _bias_add(z, biases[n_layers - 1])
    return acts, z


def backward(weights, acts, g_z):
    """Backprop from pre-head gradient; returns (gw, gb, grad_input)."""
    cdef Py_ssize_t n_layers = len(weights)
    cdef Py_ssize_t i
    gw = [None] * n_layers
    gb = [None] * n_layers
    g = g_z
    cdef cnp.ndarray gwi, gbi, gprev
    for i in range(n_layers - 1, -1, -1):
        gwi = np.empty_like(weights[i])
        _mm_tn(acts[i], g, gwi)
        gbi = np.empty(g.shape[1])
        _colsum(g, gbi)
        gw[i] = gwi
        gb[i] = gbi
        gprev = np.empty((g.shape[0], weights[i].shape[0]))
        _mm_nt(g, weights[i], gprev)
        if i > 0:
            _relu_mask(gprev, acts[i])
        g = gprev
    return gw, gb, g


cdef void _adam1d(double[::1] p, double[::1] g, double[::1] m, double[::1] v,
                  double lr, double b1, double b2, double eps,
                  double c1, double c2) noexcept nogil:
    cdef Py_ssize_t i
    cdef double mi, vi
    for i in range(p.shape[0]):
        mi = b1 * m[i] + (1.0 - b1) * g[i]
        vi = b2 * v[i] + (1.0 - b2) * g[i] * g[i]
        m[i] = mi
        v[i] = vi
        p[i] -= lr * (mi / c1) / (sqrt(vi / c2) + eps)


def adam(arrays, grads, first, second, step_count, lr, beta1, beta2, eps):
    cdef double c1 = 1.0 - beta1 ** step_count
    cdef double c2 = 1.0 - beta2 ** step_count
    for p, g, m, v in zip(arrays, grads, first, second):
        _adam1d(p.ravel(), np.ascontiguousarray(g).ravel(), m.ravel(), v.ravel(),
                lr, beta1, beta2, eps, c1, c2)


cdef void _polyak1d(double[::1] t, double[::1] o, double tau) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(t.shape[0]):
        t[i] = tau * t[i] + (1.0 - tau) * o[i]


def polyak(targets, onlines, tau):
    cdef double ctau = tau
    for t, o in zip(targets, onlines):
        _polyak1d(t.ravel(), o.ravel(), ctau)
