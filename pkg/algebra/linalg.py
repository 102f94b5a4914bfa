"""
@file: algebra/linalg.py
@description: Точная линейная алгебра над F_q и F_{q^m} поверх galois: ступенчатый вид, ранг, ядро,
              решение систем, разреженные матрицы и поиск элемента ядра алгоритмом Видемана;
              над GF(2) исключение идет на упакованных по 64 бита строках
@dependencies: numpy, galois, config.py, algebra/ffield.py, utils/error_handler.py
@created: 2025-01-21
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple, Union

import galois
import numpy as np

from config import WIEDEMANN_RETRIES
from algebra.ffield import ExtField, PrimeField
from utils.error_handler import PreconditionError, WiedemannRetryExhausted

logger = logging.getLogger(__name__)

_ONE = np.uint64(1)


@lru_cache(maxsize=None)
def _gf(q: int) -> type:
    return PrimeField(q).gf


# ---------------------------------------------------------------------------
# Типы матриц
# ---------------------------------------------------------------------------

@dataclass
class DenseMatrix:
    """Плотная матрица над F_q (значения 0..q-1, построчно)"""
    entries: np.ndarray
    field: PrimeField

    def __post_init__(self):
        self.entries = np.atleast_2d(np.asarray(self.entries, dtype=np.int64)) % self.field.q

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def q(self) -> int:
        return self.field.q

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], q: int) -> "DenseMatrix":
        return cls(np.asarray(rows, dtype=np.int64), PrimeField(q))

    @classmethod
    def identity(cls, n: int, q: int) -> "DenseMatrix":
        return cls(np.eye(n, dtype=np.int64), PrimeField(q))

    @classmethod
    def zeros(cls, rows: int, cols: int, q: int) -> "DenseMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), PrimeField(q))

    @classmethod
    def random(cls, rows: int, cols: int, q: int, rng: np.random.Generator) -> "DenseMatrix":
        return cls(rng.integers(0, q, size=(rows, cols), dtype=np.int64), PrimeField(q))

    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        return DenseMatrix(matmul_mod(self.entries, other.entries, self.q), self.field)

    def __eq__(self, other) -> bool:
        return (isinstance(other, DenseMatrix) and self.q == other.q
                and self.entries.shape == other.entries.shape
                and bool(np.array_equal(self.entries, other.entries)))

    def apply(self, v) -> np.ndarray:
        return matmul_mod(self.entries, np.asarray(v, dtype=np.int64), self.q)


@dataclass
class SparseMatrix:
    """
    Разреженная матрица над F_q в формате CSR: в каждой строке индексы столбцов
    строго возрастают, явных нулей нет.
    """
    shape: Tuple[int, int]
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    q: int

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    @property
    def nnz(self) -> int:
        return int(self.data.size)

    @classmethod
    def from_triplets(cls, rows, cols, values, shape: Tuple[int, int], q: int) -> "SparseMatrix":
        """Сборка из троек (строка, столбец, значение); повторы суммируются, нули удаляются"""
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        values = np.asarray(values, dtype=np.int64).ravel() % q
        n_rows, n_cols = int(shape[0]), int(shape[1])
        if rows.size:
            if rows.min() < 0 or rows.max() >= n_rows or cols.min() < 0 or cols.max() >= n_cols:
                raise PreconditionError("triplet index out of range")
            keys = rows * n_cols + cols
            order = np.argsort(keys, kind="stable")
            keys = keys[order]
            values = values[order]
            unique_keys, starts = np.unique(keys, return_index=True)
            sums = np.add.reduceat(values, starts) % q
            keep = sums != 0
            unique_keys = unique_keys[keep]
            sums = sums[keep]
            rows = unique_keys // n_cols
            cols = unique_keys % n_cols
            values = sums
        counts = np.bincount(rows, minlength=n_rows) if rows.size else np.zeros(n_rows, dtype=np.int64)
        indptr = np.zeros(n_rows + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return cls((n_rows, n_cols), indptr, cols.astype(np.int64), values.astype(np.int64), q)

    @classmethod
    def from_dense(cls, arr, q: int) -> "SparseMatrix":
        arr = np.atleast_2d(np.asarray(arr, dtype=np.int64)) % q
        r, c = np.nonzero(arr)
        return cls.from_triplets(r, c, arr[r, c], arr.shape, q)

    def row_indices(self) -> np.ndarray:
        return np.repeat(np.arange(self.rows, dtype=np.int64), np.diff(self.indptr))

    def row_nnz(self) -> np.ndarray:
        return np.diff(self.indptr)

    def row(self, i: int) -> List[Tuple[int, int]]:
        start, end = self.indptr[i], self.indptr[i + 1]
        return list(zip(self.indices[start:end].tolist(), self.data[start:end].tolist()))

    def matvec(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        out = np.zeros(self.rows, dtype=np.int64)
        if self.nnz == 0:
            return out
        prod = (self.data * v[self.indices]) % self.q
        nonempty = np.flatnonzero(np.diff(self.indptr))
        out[nonempty] = np.add.reduceat(prod, self.indptr[nonempty]) % self.q
        return out

    def rmatvec(self, v) -> np.ndarray:
        """Произведение v^T M"""
        v = np.asarray(v, dtype=np.int64)
        prod = (self.data * v[self.row_indices()]) % self.q
        out = np.zeros(self.cols, dtype=np.int64)
        np.add.at(out, self.indices, prod)
        return out % self.q

    def dense_block(self, start: int, stop: int) -> np.ndarray:
        """Плотный массив строк start..stop-1"""
        lo, hi = self.indptr[start], self.indptr[stop]
        block = np.zeros((stop - start, self.cols), dtype=np.int64)
        local_rows = np.repeat(np.arange(stop - start), np.diff(self.indptr[start:stop + 1]))
        block[local_rows, self.indices[lo:hi]] = self.data[lo:hi]
        return block

    def to_dense(self) -> DenseMatrix:
        arr = np.zeros(self.shape, dtype=np.int64)
        arr[self.row_indices(), self.indices] = self.data
        return DenseMatrix(arr, PrimeField(self.q))


MatrixLike = Union[DenseMatrix, np.ndarray]


def _unpack(M: MatrixLike, q: Optional[int]) -> Tuple[np.ndarray, int]:
    if isinstance(M, DenseMatrix):
        return M.entries, M.q
    if isinstance(M, SparseMatrix):
        return M.to_dense().entries, M.q
    if q is None:
        raise PreconditionError("modulus q is required for raw arrays")
    return np.atleast_2d(np.asarray(M, dtype=np.int64)) % q, int(q)


def matmul_mod(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """Произведение по модулю q; q^2 * внутренняя размерность должно помещаться в int64"""
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % q


# ---------------------------------------------------------------------------
# Ступенчатый вид
# ---------------------------------------------------------------------------

def _pack_gf2(arr: np.ndarray) -> np.ndarray:
    rows, cols = arr.shape
    words = max(1, (cols + 63) // 64)
    padded = np.zeros((rows, words * 64), dtype=np.uint8)
    padded[:, :cols] = arr & 1
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8")


def _unpack_gf2(words: np.ndarray, cols: int) -> np.ndarray:
    bits = np.unpackbits(np.ascontiguousarray(words).view(np.uint8), axis=1, bitorder="little")
    return bits[:, :cols].astype(np.int64)


def _rref_gf2(arr: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Гаусс-Жордан над GF(2) на упакованных по 64 бита строках (XOR слов)"""
    cols = arr.shape[1]
    W, pivots = _rref_packed(_pack_gf2(arr), cols)
    return _unpack_gf2(W, cols), pivots


def _packed_column(W: np.ndarray, col: int) -> np.ndarray:
    w, b = divmod(col, 64)
    return ((W[:, w] >> np.uint64(b)) & _ONE).astype(np.int64)


def _rref_packed(W: np.ndarray, cols: int) -> Tuple[np.ndarray, List[int]]:
    rows = W.shape[0]
    pivots: List[int] = []
    r = 0
    for col in range(cols):
        if r == rows:
            break
        w, b = divmod(col, 64)
        shift = np.uint64(b)
        below = np.flatnonzero((W[r:, w] >> shift) & _ONE)
        if below.size == 0:
            continue
        p = r + int(below[0])
        if p != r:
            W[[r, p]] = W[[p, r]]
        mask = ((W[:, w] >> shift) & _ONE).astype(bool)
        mask[r] = False
        if mask.any():
            W[mask, w:] ^= W[r, w:]
        pivots.append(col)
        r += 1
    return W, pivots


def _pivot_columns(R: np.ndarray, limit: Optional[int] = None) -> List[int]:
    """Столбцы ведущих элементов приведенного ступенчатого вида"""
    limit = R.shape[1] if limit is None else limit
    pivots: List[int] = []
    for row in R:
        nonzero = np.flatnonzero(row[:limit])
        if nonzero.size == 0:
            break
        pivots.append(int(nonzero[0]))
    return pivots


def _rref_modq(arr: np.ndarray, q: int) -> Tuple[np.ndarray, List[int]]:
    R = np.asarray(_gf(q)(np.asarray(arr, dtype=np.int64) % q).row_reduce(), dtype=np.int64)
    return R, _pivot_columns(R)


class EchelonAccumulator:
    """
    Приведенный ступенчатый базис пространства строк, пополняемый блоками строк.
    Над GF(2) базис хранится упакованным, поэтому в памяти не бывает больше
    rank + block строк.
    """

    def __init__(self, cols: int, q: int):
        self.cols = int(cols)
        self.q = int(q)
        self.pivots: List[int] = []
        if self.q == 2:
            self._basis = np.zeros((0, max(1, (self.cols + 63) // 64)), dtype="<u8")
        else:
            self._basis = np.zeros((0, self.cols), dtype=np.int64)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def full(self) -> bool:
        return self.rank == self.cols

    def add_rows(self, block) -> int:
        block = np.atleast_2d(np.asarray(block, dtype=np.int64))
        if block.shape[0] == 0:
            return self.rank
        if block.shape[1] != self.cols:
            raise PreconditionError(f"block has {block.shape[1]} columns, expected {self.cols}")
        if self.q == 2:
            stacked = np.vstack([self._basis, _pack_gf2(block % 2)])
            reduced, pivots = _rref_packed(stacked, self.cols)
        else:
            reduced, pivots = _rref_modq(np.vstack([self._basis, block % self.q]), self.q)
        self._basis = reduced[: len(pivots)].copy()
        self.pivots = pivots
        return self.rank

    def right_kernel(self) -> np.ndarray:
        pivot_set = set(self.pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        basis = np.zeros((len(free), self.cols), dtype=np.int64)
        if not free:
            return basis
        basis[np.arange(len(free)), free] = 1
        if self.pivots:
            if self.q == 2:
                columns = np.stack([_packed_column(self._basis, f) for f in free], axis=1)
            else:
                columns = self._basis[:, free]
            basis[:, self.pivots] = (-columns.T) % self.q
        return basis


def rref_array(arr: np.ndarray, q: int) -> Tuple[np.ndarray, List[int]]:
    arr = np.atleast_2d(np.asarray(arr, dtype=np.int64))
    if arr.size == 0:
        return arr.copy(), []
    if q == 2:
        return _rref_gf2(arr % 2)
    return _rref_modq(arr, q)


def rref(M: MatrixLike, q: Optional[int] = None) -> Tuple[DenseMatrix, int, List[int]]:
    """
    Приведенный ступенчатый вид. Опорный элемент - первый ненулевой в порядке
    столбцов; результат детерминирован.

    Returns:
        (R, rank, pivot_columns)
    """
    arr, q = _unpack(M, q)
    R, pivots = rref_array(arr, q)
    logger.debug(f"rref {arr.shape} над F_{q}: ранг {len(pivots)}")
    return DenseMatrix(R, PrimeField(q)), len(pivots), pivots


def matrix_rank(M: MatrixLike, q: Optional[int] = None) -> int:
    arr, q = _unpack(M, q)
    return len(rref_array(arr, q)[1])


def right_kernel(M: MatrixLike, q: Optional[int] = None) -> np.ndarray:
    """
    Базис правого ядра {v : M v = 0}; возвращает массив (dim, cols), строки - векторы базиса
    """
    arr, q = _unpack(M, q)
    if q != 2:
        return np.asarray(_gf(q)(arr).null_space(), dtype=np.int64).reshape(-1, arr.shape[1])
    cols = arr.shape[1]
    R, pivots = rref_array(arr, q)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    if free:
        basis[np.arange(len(free)), free] = 1
        if pivots:
            basis[:, pivots] = (-R[: len(pivots)][:, free].T) % q
    return basis


def solve(M: MatrixLike, b, q: Optional[int] = None) -> Optional[np.ndarray]:
    """Частное решение M x = b или None, если система несовместна"""
    arr, q = _unpack(M, q)
    b = np.asarray(b, dtype=np.int64).reshape(-1) % q
    rows, cols = arr.shape
    if b.size != rows:
        raise PreconditionError(f"right-hand side has {b.size} entries, matrix has {rows} rows")
    R, pivots = rref_array(np.hstack([arr, b[:, None]]), q)
    if pivots and pivots[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    if pivots:
        x[pivots] = R[: len(pivots), cols]
    return x


def determinant(M: MatrixLike, q: Optional[int] = None) -> int:
    arr, q = _unpack(M, q)
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise PreconditionError("determinant of a non-square matrix")
    return int(np.linalg.det(_gf(q)(arr)))


def inverse(M: MatrixLike, q: Optional[int] = None) -> Optional[np.ndarray]:
    arr, q = _unpack(M, q)
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise PreconditionError("inverse of a non-square matrix")
    try:
        return np.asarray(np.linalg.inv(_gf(q)(arr)), dtype=np.int64)
    except np.linalg.LinAlgError:
        return None


# ---------------------------------------------------------------------------
# Линейная алгебра над расширением F_{q^m} (массивы (rows, cols, m))
# ---------------------------------------------------------------------------

def ext_rref(field: ExtField, A: np.ndarray, pivot_limit: Optional[int] = None) -> Tuple[np.ndarray, List[int]]:
    """Приведенный ступенчатый вид над F_{q^m}; опорные столбцы ищутся среди первых pivot_limit"""
    X = field.to_gf(A)
    if X.shape[0] == 0 or X.shape[1] == 0:
        return field.from_gf(X), []
    R = X.row_reduce(ncols=pivot_limit) if pivot_limit is not None else X.row_reduce()
    return field.from_gf(R), _pivot_columns(np.asarray(R), pivot_limit)


def ext_right_kernel(field: ExtField, A: np.ndarray) -> np.ndarray:
    """Базис правого ядра над F_{q^m}; массив (dim, cols, m)"""
    cols = A.shape[1]
    R, pivots = ext_rref(field, A)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols, field.m), dtype=np.int64)
    for j, f in enumerate(free):
        basis[j, f] = field.one()
        if pivots:
            basis[j, pivots] = field.neg(R[: len(pivots), f])
    return basis


def ext_solve(field: ExtField, A: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    rows, cols = A.shape[0], A.shape[1]
    aug = np.concatenate([np.asarray(A, dtype=np.int64), np.asarray(b, dtype=np.int64).reshape(rows, 1, field.m)], axis=1)
    R, pivots = ext_rref(field, aug)
    if pivots and pivots[-1] == cols:
        return None
    x = np.zeros((cols, field.m), dtype=np.int64)
    if pivots:
        x[pivots] = R[: len(pivots), cols]
    return x


def ext_inverse(field: ExtField, A: np.ndarray) -> Optional[np.ndarray]:
    try:
        return field.from_gf(np.linalg.inv(field.to_gf(A)))
    except np.linalg.LinAlgError:
        return None


def ext_matmul(field: ExtField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Произведение матриц над F_{q^m}: (a, b, m) x (b, c, m)"""
    return field.from_gf(field.to_gf(A) @ field.to_gf(B))


# ---------------------------------------------------------------------------
# Видеман / Берлекэмп-Мэсси
# ---------------------------------------------------------------------------

def berlekamp_massey(sequence, q: int) -> Tuple[np.ndarray, int]:
    """
    Кратчайший линейный рекуррент последовательности над F_q.

    Returns:
        (C, L): многочлен связи C = 1 + c_1 x + ... + c_L x^L и его длина L
    """
    s = np.asarray(sequence, dtype=np.int64) % q
    if not s.any():
        return np.ones(1, dtype=np.int64), 0
    # galois возвращает характеристический многочлен x^L + ... ; его коэффициенты
    # по убыванию степени и есть коэффициенты многочлена связи по возрастанию
    minimal = galois.berlekamp_massey(_gf(q)(s))
    C = np.asarray(minimal.coeffs, dtype=np.int64)
    return C, int(minimal.degree)


class _Outcome:
    KERNEL = "kernel"
    INVERTIBLE = "invertible"
    PROVED_INVERTIBLE = "proved_invertible"
    UNINFORMATIVE = "uninformative"
    FAILED = "failed"


def _wiedemann_attempt(apply: Callable[[np.ndarray], np.ndarray], n: int, q: int,
                       rng: np.random.Generator) -> Tuple[str, Optional[np.ndarray]]:
    z = rng.integers(0, q, size=n, dtype=np.int64)
    if not z.any():
        z[rng.integers(0, n)] = 1
    if not apply(z).any():
        return _Outcome.KERNEL, z
    u = rng.integers(0, q, size=n, dtype=np.int64)
    sequence = np.zeros(2 * n, dtype=np.int64)
    x = z
    for i in range(2 * n):
        sequence[i] = int(np.dot(u, x) % q)
        x = apply(x)
    C, L = berlekamp_massey(sequence, q)
    if L == 0:
        return _Outcome.UNINFORMATIVE, None
    # минимальный многочлен P(λ) = λ^L C(1/λ), коэффициенты по возрастанию
    P = C[::-1]
    t = int(np.argmax(P != 0))
    if t == 0:
        return (_Outcome.PROVED_INVERTIBLE if L == n else _Outcome.INVERTIBLE), None
    g = P[t:]
    w = (int(g[-1]) * z) % q
    for coef in g[-2::-1]:
        w = (apply(w) + int(coef) * z) % q
    if not w.any():
        return _Outcome.FAILED, None
    for _ in range(t + 1):
        image = apply(w)
        if not image.any():
            return _Outcome.KERNEL, w
        w = image
    return _Outcome.FAILED, None


def _random_projector(out_rows: int, in_rows: int, q: int, rng: np.random.Generator,
                      weight: int = 16) -> SparseMatrix:
    weight = min(weight, in_rows)
    rows = np.repeat(np.arange(out_rows, dtype=np.int64), weight)
    cols = np.concatenate([rng.choice(in_rows, size=weight, replace=False) for _ in range(out_rows)])
    vals = rng.integers(1, q, size=rows.size, dtype=np.int64)
    return SparseMatrix.from_triplets(rows, cols, vals, (out_rows, in_rows), q)


def wiedemann_kernel_element(
    M: SparseMatrix,
    seed=None,
    retries: Optional[int] = None,
) -> Optional[np.ndarray]:
    """
    Ненулевой вектор ядра разреженной матрицы методом Видемана.

    Прямоугольная матрица R×C при R > C сжимается случайным разреженным проектором
    C×R в квадратный черный ящик. Сжатие может добавить векторы ядра; кандидат
    принимается только при M v = 0, иначе попытка повторяется с новым проектором.
    При R < C строки дополняются нулями.

    Returns:
        v с M v = 0, либо None, если ни одна попытка не наблюдала вырожденности.

    Raises:
        WiedemannRetryExhausted: вырожденность наблюдалась, но вектор ядра не получен.
    """
    retries = WIEDEMANN_RETRIES if retries is None else retries
    rng = np.random.default_rng(seed)
    q = M.q
    n_rows, n_cols = M.shape
    if n_cols == 0:
        return None
    saw_singular = False

    for attempt in range(retries):
        if n_rows > n_cols:
            projector = _random_projector(n_cols, n_rows, q, rng)

            def apply(v, projector=projector):
                return projector.matvec(M.matvec(v))
        elif n_rows < n_cols:
            def apply(v):
                out = np.zeros(n_cols, dtype=np.int64)
                out[:n_rows] = M.matvec(v)
                return out
        else:
            apply = M.matvec

        outcome, v = _wiedemann_attempt(apply, n_cols, q, rng)
        logger.debug(f"Видеман, попытка {attempt + 1}/{retries}: {outcome}")
        if outcome == _Outcome.KERNEL:
            saw_singular = True
            if not M.matvec(v).any():
                return v
            logger.debug("Вектор ядра проекции не лежит в ядре исходной матрицы")
        elif outcome == _Outcome.PROVED_INVERTIBLE:
            logger.info("Видеман: минимальный многочлен полной степени, ядро тривиально")
            return None
        elif outcome == _Outcome.FAILED:
            saw_singular = True

    if saw_singular:
        raise WiedemannRetryExhausted(
            f"no kernel vector after {retries} attempts on a {n_rows}x{n_cols} matrix"
        )
    logger.info("Видеман: вырожденность не наблюдалась, ядро считается тривиальным")
    return None


def batch_rank(stack, q: int) -> np.ndarray:
    """Ранги стопки матриц (B, rows, cols) над F_q; исключение идет одновременно по всей стопке"""
    A = np.array(stack, dtype=np.int64) % q
    if A.ndim != 3:
        raise PreconditionError(f"expected a stack of matrices, got shape {A.shape}")
    count, rows, cols = A.shape
    rank = np.zeros(count, dtype=np.int64)
    positions = np.arange(rows)
    inverses = PrimeField(q).inverse_table
    for col in range(cols):
        candidates = (A[:, :, col] != 0) & (positions[None, :] >= rank[:, None])
        has_pivot = candidates.any(axis=1)
        if not has_pivot.any():
            continue
        b = np.flatnonzero(has_pivot)
        source = np.argmax(candidates[b], axis=1)
        target = rank[b]
        moved = A[b, source].copy()
        A[b, source] = A[b, target]
        A[b, target] = moved
        scale = inverses[A[b, target, col]]
        A[b, target] = (A[b, target] * scale[:, None]) % q
        factors = A[b, :, col].copy()
        factors[np.arange(b.size), target] = 0
        A[b] = (A[b] - factors[:, :, None] * A[b, target][:, None, :]) % q
        rank[b] += 1
    return rank
