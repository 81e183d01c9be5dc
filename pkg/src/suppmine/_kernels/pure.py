"""Pure-Python kernel implementations.

Must stay arithmetic-identical to ``_native.pyx``: same operation order, same
64-bit wraparound, same sigmoid formulation. Any change here needs the mirror
change there.
"""

import math

import numpy as np

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def ac_scan(trans_start, trans_sym, trans_next, fail, out_start, out_pat,
            ascii_map, ext_map, text):
    """Aho-Corasick scan over ``text``.

    Transitions are per-state sorted (symbol, next-state) runs addressed by
    ``trans_start``; symbol 0 marks characters outside the pattern alphabet.
    Returns two int32 arrays (ends, pattern_ids), one entry per raw hit with
    ``ends[i]`` the exclusive end offset.
    """
    ends = []
    pids = []
    state = 0
    for i, ch in enumerate(text):
        o = ord(ch)
        if o < 128:
            sym = ascii_map[o]
        else:
            sym = ext_map.get(ch, 0)
        if sym == 0:
            # No pattern contains this character; the fail chain would bottom
            # out at the root anyway.
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
            end = i + 1
            for k in range(lo, hi):
                ends.append(end)
                pids.append(out_pat[k])
    return (
        np.asarray(ends, dtype=np.int32),
        np.asarray(pids, dtype=np.int32),
    )


def _fnv_feed(h, data):
    for b in data:
        h = ((h ^ b) * FNV_PRIME) & _MASK64
    return h


def fnv1a_indices(tokens, seed, n_buckets):
    """Hash unigrams then bigrams of byte tokens into bucket ids (int64)."""
    n = len(tokens)
    if n == 0:
        return np.empty(0, dtype=np.int64)
    out = np.empty(2 * n - 1, dtype=np.int64)
    base = (FNV_OFFSET ^ seed) & _MASK64
    for i in range(n):
        out[i] = _fnv_feed(base, tokens[i]) % n_buckets
    for i in range(n - 1):
        h = _fnv_feed(base, tokens[i])
        h = ((h ^ 0x1F) * FNV_PRIME) & _MASK64
        h = _fnv_feed(h, tokens[i + 1])
        out[n + i] = h % n_buckets
    return out


def _sigmoid(z):
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def sgd_epoch(indptr, indices, values, labels, order, w, bias, lr):
    """One logistic-loss SGD pass over rows in ``order``; mutates w and bias.

    Returns the mean log-loss observed during the pass (pre-update scores).
    """
    total = 0.0
    for r in order:
        lo = indptr[r]
        hi = indptr[r + 1]
        z = bias[0]
        for k in range(lo, hi):
            z += values[k] * w[indices[k]]
        p = _sigmoid(z)
        y = labels[r]
        pc = min(max(p, 1e-12), 1.0 - 1e-12)
        if y == 1.0:
            total += -math.log(pc)
        else:
            total += -math.log(1.0 - pc)
        g = lr * (p - y)
        bias[0] -= g
        for k in range(lo, hi):
            w[indices[k]] -= g * values[k]
    return total / len(order) if len(order) else 0.0


def predict_proba(indptr, indices, values, w, bias):
    """Sigmoid scores for every CSR row."""
    n = len(indptr) - 1
    out = np.empty(n, dtype=np.float64)
    for r in range(n):
        z = bias[0]
        for k in range(indptr[r], indptr[r + 1]):
            z += values[k] * w[indices[k]]
        out[r] = _sigmoid(z)
    return out
