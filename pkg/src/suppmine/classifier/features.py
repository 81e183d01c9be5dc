"""Hashed n-gram features for the baseline scorer.

Token unigrams and bigrams of the masked text are hashed into 2^20 buckets
with a fixed seed (collisions accepted, reproducible). Three explicit
positional features follow the hashed block: token distance between [Arg1]
and [Arg2], token count strictly between them, and sentence token count.
"""

from __future__ import annotations

import numpy as np

from .. import _kernels
from ..pipeline import ARG1, ARG2

N_BUCKETS = 1 << 20
HASH_SEED = 0x9E3779B1
N_FEATURES = N_BUCKETS + 3

_ARG1_LOWER = ARG1.lower()
_ARG2_LOWER = ARG2.lower()
_POS_SCALE = 10.0


def tokenize(masked_text: str) -> list[str]:
    return masked_text.lower().split()


def _arg_positions(tokens) -> tuple[int, int]:
    i1 = i2 = -1
    for i, tok in enumerate(tokens):
        if i1 < 0 and _ARG1_LOWER in tok:
            i1 = i
        if _ARG2_LOWER in tok:
            i2 = i
    if i1 < 0 or i2 < 0:
        return 0, 0
    return i1, i2


def featurize(masked_text: str) -> tuple[np.ndarray, np.ndarray]:
    """Sparse feature vector as (sorted unique indices, values)."""
    tokens = tokenize(masked_text)
    raw = _kernels.fnv1a_indices(
        [t.encode("utf-8") for t in tokens], HASH_SEED, N_BUCKETS
    )
    indices, counts = np.unique(raw, return_counts=True)
    i1, i2 = _arg_positions(tokens)
    distance = abs(i2 - i1)
    between = max(distance - 1, 0)
    pos_idx = np.array([N_BUCKETS, N_BUCKETS + 1, N_BUCKETS + 2], dtype=np.int64)
    pos_val = np.array(
        [distance / _POS_SCALE, between / _POS_SCALE, len(tokens) / _POS_SCALE],
        dtype=np.float64,
    )
    return (
        np.concatenate([indices, pos_idx]).astype(np.int32),
        np.concatenate([counts.astype(np.float64), pos_val]),
    )


def build_csr(masked_texts) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Featurize a batch into CSR arrays (indptr, indices, values)."""
    indptr = [0]
    index_chunks = []
    value_chunks = []
    for text in masked_texts:
        idx, val = featurize(text)
        index_chunks.append(idx)
        value_chunks.append(val)
        indptr.append(indptr[-1] + len(idx))
    if index_chunks:
        indices = np.concatenate(index_chunks)
        values = np.concatenate(value_chunks)
    else:
        indices = np.empty(0, dtype=np.int32)
        values = np.empty(0, dtype=np.float64)
    return np.asarray(indptr, dtype=np.int64), indices, values
