"""
@file: algebra/combinatorics.py
@description: Точные биномиальные коэффициенты и лексикографическая нумерация подмножеств
@dependencies: numpy
@created: 2025-01-21
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations

import numpy as np


def binom(n: int, k: int) -> int:
    """C(n, k) в целых числах произвольной точности; 0 вне треугольника Паскаля"""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def log2_int(value: int) -> float:
    """log2 большого целого без потери точности на переполнении float"""
    if value <= 0:
        raise ValueError(f"log2 of non-positive value {value}")
    shift = max(value.bit_length() - 64, 0)
    return math.log2(value >> shift) + shift


@lru_cache(maxsize=64)
def _subsets_cached(N: int, r: int) -> np.ndarray:
    if r == 0:
        return np.zeros((1, 0), dtype=np.int64)
    arr = np.fromiter(
        (x for c in combinations(range(N), r) for x in c), dtype=np.int64, count=binom(N, r) * r
    )
    arr = arr.reshape(-1, r)
    arr.setflags(write=False)
    return arr


def subsets(N: int, r: int) -> np.ndarray:
    """Все r-подмножества {0..N-1} в лексикографическом порядке; массив (C(N, r), r)"""
    return _subsets_cached(int(N), int(r))


@lru_cache(maxsize=64)
def _binom_table(N: int, r: int) -> np.ndarray:
    table = np.zeros((N + 1, r + 1), dtype=np.int64)
    for n in range(N + 1):
        for k in range(min(n, r) + 1):
            table[n, k] = math.comb(n, k)
    return table


def lex_rank(subs, N: int) -> np.ndarray:
    """
    Номера отсортированных r-подмножеств {0..N-1} в лексикографическом порядке.

    Номер = C(N, r) - 1 - Σ_i C(b_i, i), где b = N-1-a упорядочено по возрастанию.
    """
    subs = np.asarray(subs, dtype=np.int64)
    if subs.ndim == 1:
        subs = subs[None, :]
    r = subs.shape[1]
    table = _binom_table(int(N), int(r))
    if r == 0:
        return np.zeros(subs.shape[0], dtype=np.int64)
    mirrored = (N - 1 - subs)[:, ::-1]
    colex = np.zeros(subs.shape[0], dtype=np.int64)
    for i in range(r):
        colex += table[mirrored[:, i], i + 1]
    return table[N, r] - 1 - colex


def subset_sign(positions) -> int:
    """(-1)^{Σ позиций} для позиций, нумеруемых с единицы"""
    return -1 if sum(int(p) for p in positions) % 2 else 1
