# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel implementations. Mirrors ``pure.py`` operation-for-operation."""

from libc.math cimport exp, log

import numpy as np


cdef unsigned long long FNV_OFFSET = 0xCBF29CE484222325
cdef unsigned long long FNV_PRIME = 0x100000001B3


def ac_scan(int[::1] trans_start, int[::1] trans_sym, int[::1] trans_next,
            int[::1] fail, int[::1] out_start, int[::1] out_pat,
            int[::1] ascii_map, dict ext_map, str text):
    """Aho-Corasick scan over ``text``; returns (ends, pattern_ids) int32 arrays."""
    cdef Py_ssize_t n = len(text)
    cdef Py_ssize_t cap = 64
    cdef Py_ssize_t m = 0
    ends_arr = np.empty(cap, dtype=np.int32)
    pids_arr = np.empty(cap, dtype=np.int32)
    cdef int[::1] ends = ends_arr
    cdef int[::1] pids = pids_arr
    cdef int state = 0
    cdef int sym, lo, hi, mid, s, nxt, k
    cdef Py_ssize_t i
    cdef Py_UCS4 ch
    cdef long o
    for i in range(n):
        ch = text[i]
        o = <long>ch
        if o < 128:
            sym = ascii_map[o]
        else:
            sym = ext_map.get(text[i], 0)
        if sym == 0:
            state = 0
            continue
        while True:
            lo = trans_start[state]
            hi = trans_start[state + 1]
            nxt = -1
            while lo < hi:
                mid = (lo + hi) // 2
                s = trans_sym[mid]
                if s == sym:
                    nxt = trans_next[mid]
                    break
                if s < sym:
                    lo = mid + 1
                else:
                    hi = mid
            if nxt >= 0:
                state = nxt
                break
            if state == 0:
                break
            state = fail[state]
        lo = out_start[state]
        hi = out_start[state + 1]
        if lo != hi:
            for k in range(lo, hi):
                if m == cap:
                    cap *= 2
                    new_ends = np.empty(cap, dtype=np.int32)
                    new_pids = np.empty(cap, dtype=np.int32)
                    new_ends[:m] = ends_arr[:m]
                    new_pids[:m] = pids_arr[:m]
                    ends_arr = new_ends
                    pids_arr = new_pids
                    ends = ends_arr
                    pids = pids_arr
                ends[m] = <int>(i + 1)
                pids[m] = out_pat[k]
                m += 1
    return ends_arr[:m].copy(), pids_arr[:m].copy()


cdef unsigned long long _fnv_feed(unsigned long long h, const unsigned char[::1] data) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(data.shape[0]):
        h = (h ^ data[i]) * FNV_PRIME
    return h


def fnv1a_indices(list tokens, unsigned long long seed, long long n_buckets):
    """Hash unigrams then bigrams of byte tokens into bucket ids (int64)."""
    cdef Py_ssize_t n = len(tokens)
    if n == 0:
        return np.empty(0, dtype=np.int64)
    out_arr = np.empty(2 * n - 1, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef unsigned long long base = FNV_OFFSET ^ seed
    cdef unsigned long long h
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = <long long>(_fnv_feed(base, tokens[i]) % <unsigned long long>n_buckets)
    for i in range(n - 1):
        h = _fnv_feed(base, tokens[i])
        h = (h ^ <unsigned long long>0x1F) * FNV_PRIME
        h = _fnv_feed(h, tokens[i + 1])
        out[n + i] = <long long>(h % <unsigned long long>n_buckets)
    return out_arr


cdef inline double _sigmoid(double z) noexcept nogil:
    cdef double e
    if z >= 0.0:
        return 1.0 / (1.0 + exp(-z))
    e = exp(z)
    return e / (1.0 + e)


def sgd_epoch(long long[::1] indptr, int[::1] indices, double[::1] values,
              double[::1] labels, long long[::1] order,
              double[::1] w, double[::1] bias, double lr):
    """One logistic-loss SGD pass over rows in ``order``; mutates w and bias."""
    cdef double total = 0.0
    cdef double z, p, y, pc, g
    cdef long long r, lo, hi, k
    cdef Py_ssize_t t
    for t in range(order.shape[0]):
        r = order[t]
        lo = indptr[r]
        hi = indptr[r + 1]
        z = bias[0]
        for k in range(lo, hi):
            z += values[k] * w[indices[k]]
        p = _sigmoid(z)
        y = labels[r]
        pc = p
        if pc < 1e-12:
            pc = 1e-12
        elif pc > 1.0 - 1e-12:
            pc = 1.0 - 1e-12
        if y == 1.0:
            total += -log(pc)
        else:
            total += -log(1.0 - pc)
        g = lr * (p - y)
        bias[0] -= g
        for k in range(lo, hi):
            w[indices[k]] -= g * values[k]
    if order.shape[0] == 0:
        return 0.0
    return total / order.shape[0]


def predict_proba(long long[::1] indptr, int[::1] indices, double[::1] values,
                  double[::1] w, double[::1] bias):
    """Sigmoid scores for every CSR row."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double z
    cdef long long k
    cdef Py_ssize_t r
    for r in range(n):
        z = bias[0]
        for k in range(indptr[r], indptr[r + 1]):
            z += values[k] * w[indices[k]]
        out[r] = _sigmoid(z)
    return out_arr
