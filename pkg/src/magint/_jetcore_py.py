"""Pure-numpy fallback for the compiled jet kernels (same signatures)."""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def _product_matrix(n):
    # S[o, i*m + j] = 1 when monomial_i * monomial_j lands on monomial_o
    mons = [(d - b, b) for d in range(n + 1) for b in range(d + 1)]
    m = len(mons)
    index = {mon: k for k, mon in enumerate(mons)}
    S = np.zeros((m, m * m))
    for i, (a1, b1) in enumerate(mons):
        for j, (a2, b2) in enumerate(mons):
            if a1 + a2 + b1 + b2 <= n:
                S[index[(a1 + a2, b1 + b2)], i * m + j] = 1.0
    return S


def mul2(p, q, n):
    return _product_matrix(n) @ np.outer(p, q).ravel()


def mul1(p, q, n):
    return np.convolve(p, q)[: n + 1]


def horner2(g, d, n):
    K = min(len(g) - 1, n)
    acc = np.zeros(len(d), dtype=np.result_type(g, d))
    acc[0] = g[K]
    for k in range(K - 1, -1, -1):
        acc = mul2(acc, d, n)
        acc[0] += g[k]
    return acc


def horner1(g, d, n):
    K = min(len(g) - 1, n)
    acc = np.zeros(n + 1, dtype=np.result_type(g, d))
    acc[0] = g[K]
    for k in range(K - 1, -1, -1):
        acc = mul1(acc, d, n)
        acc[0] += g[k]
    return acc
