# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: segmentation scatter + DP, knapsack table.

Mirrors _pykernels.py operation for operation; keep the arithmetic and
tie-breaking in the two files in lockstep.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


def kts_scatter(gram):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] k = np.ascontiguousarray(gram, dtype=np.float64)
    cdef Py_ssize_t t = k.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] diag_csum = np.zeros(t + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] block = np.zeros((t + 1, t + 1))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] s = np.zeros((t + 1, t + 1))
    cdef Py_ssize_t i, j, a, b
    for i in range(t):
        diag_csum[i + 1] = diag_csum[i] + k[i, i]
    for i in range(t):
        for j in range(t):
            block[i + 1, j + 1] = k[i, j] + block[i, j + 1] + block[i + 1, j] - block[i, j]
    cdef double mean_term
    for a in range(t + 1):
        for b in range(a + 1, t + 1):
            mean_term = (block[b, b] - block[a, b] - block[b, a] + block[a, a]) / (b - a)
            s[a, b] = (diag_csum[b] - diag_csum[a]) - mean_term
    return s


def kts_dp(scatter, m_max, band):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] sc = np.ascontiguousarray(scatter, dtype=np.float64)
    cdef Py_ssize_t t_total = sc.shape[0] - 1
    cdef Py_ssize_t mm = m_max
    cdef Py_ssize_t bd = band
    cdef cnp.ndarray[cnp.float64_t, ndim=2] cost = np.full((mm + 1, t_total + 1), np.inf)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] prev = np.zeros((mm + 1, t_total + 1), dtype=np.int64)
    cdef Py_ssize_t m, t, tp, lo, best_idx
    cdef double best, c
    cost[0, 0] = 0.0
    for m in range(1, mm + 1):
        for t in range(m, t_total + 1):
            lo = m - 1
            if bd > 0 and t - bd > lo:
                lo = t - bd
            if lo > t - 1:
                continue
            best = cost[m - 1, lo] + sc[lo, t]
            best_idx = lo
            for tp in range(lo + 1, t):
                c = cost[m - 1, tp] + sc[tp, t]
                if c < best:
                    best = c
                    best_idx = tp
            cost[m, t] = best
            prev[m, t] = best_idx
    return cost, prev


def knapsack_table(values, weights, capacity):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] w = np.ascontiguousarray(weights, dtype=np.int64)
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t cap = capacity
    cdef cnp.ndarray[cnp.float64_t, ndim=2] dp = np.zeros((n + 1, cap + 1))
    cdef Py_ssize_t i, c
    cdef Py_ssize_t wi
    cdef double vi, cand
    for i in range(n):
        wi = w[i]
        vi = v[i]
        for c in range(cap + 1):
            dp[i + 1, c] = dp[i, c]
        if wi <= cap:
            for c in range(wi, cap + 1):
                cand = dp[i, c - wi] + vi
                if cand > dp[i + 1, c]:
                    dp[i + 1, c] = cand
    return dp
