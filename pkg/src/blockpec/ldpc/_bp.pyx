# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled sum-product (tanh rule) syndrome decoder."""
import numpy as np
from libc.math cimport exp, log

cdef double CLIP = 1.0 - 1e-12


def bp_decode(const int[::1] check_ptr, const int[::1] edge_var,
              const int[::1] var_ptr, const int[::1] var_edges,
              const unsigned char[::1] syndrome, const double[::1] llr,
              int max_iter):
    """Return ``(bits, success, iterations)``; see blockpec.ldpc.bp for the contract."""
    cdef Py_ssize_t n_checks = check_ptr.shape[0] - 1
    cdef Py_ssize_t n_vars = var_ptr.shape[0] - 1
    cdef Py_ssize_t n_edges = edge_var.shape[0]
    bits_arr = np.empty(n_vars, dtype=np.uint8)
    v2c_arr = np.empty(n_edges, dtype=np.float64)
    c2v_arr = np.zeros(n_edges, dtype=np.float64)
    t_arr = np.empty(n_edges, dtype=np.float64)
    cdef unsigned char[::1] bits = bits_arr
    cdef double[::1] v2c = v2c_arr
    cdef double[::1] c2v = c2v_arr
    cdef double[::1] t = t_arr
    cdef Py_ssize_t c, v, e, k
    cdef int it, par
    cdef double prod, val, tot

    for v in range(n_vars):
        bits[v] = llr[v] < 0
    if _satisfied(check_ptr, edge_var, syndrome, bits):
        return bits_arr, True, 0
    for e in range(n_edges):
        v2c[e] = llr[edge_var[e]]

    for it in range(1, max_iter + 1):
        for c in range(n_checks):
            prod = -1.0 if syndrome[c] else 1.0
            for e in range(check_ptr[c], check_ptr[c + 1]):
                # tanh(x/2) = (e^x - 1) / (e^x + 1), clamped to keep exp finite
                val = v2c[e]
                if val > 60.0:
                    val = 60.0
                elif val < -60.0:
                    val = -60.0
                val = exp(val)
                t[e] = (val - 1.0) / (val + 1.0)
                c2v[e] = prod
                prod *= t[e]
            prod = 1.0
            for e in range(check_ptr[c + 1] - 1, check_ptr[c] - 1, -1):
                val = c2v[e] * prod
                if val > CLIP:
                    val = CLIP
                elif val < -CLIP:
                    val = -CLIP
                c2v[e] = log((1.0 + val) / (1.0 - val))
                prod *= t[e]
        for v in range(n_vars):
            tot = llr[v]
            for k in range(var_ptr[v], var_ptr[v + 1]):
                tot += c2v[var_edges[k]]
            bits[v] = tot < 0
            for k in range(var_ptr[v], var_ptr[v + 1]):
                e = var_edges[k]
                v2c[e] = tot - c2v[e]
        if _satisfied(check_ptr, edge_var, syndrome, bits):
            return bits_arr, True, it
    return bits_arr, False, max_iter


cdef bint _satisfied(const int[::1] check_ptr, const int[::1] edge_var,
                     const unsigned char[::1] syndrome, unsigned char[::1] bits):
    cdef Py_ssize_t c, e
    cdef int par
    for c in range(check_ptr.shape[0] - 1):
        par = syndrome[c]
        for e in range(check_ptr[c], check_ptr[c + 1]):
            par ^= bits[edge_var[e]]
        if par:
            return False
    return True
