"""
@file: services/maxminors.py
@description: Атака MaxMinors на RD в переопределенном случае: построение развернутой
              линейной системы по максимальным минорам, восстановление C, S и e,
              варианты с укорочением (p) и гибридной специализацией (a)
@dependencies: numpy, algebra/, services/instances.py, config.py, utils/error_handler.py
@created: 2025-01-21
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import numpy as np

from config import HYBRID_MAX_GUESSES, THREADS
from algebra.combinatorics import binom, lex_rank, subsets
from algebra.ffield import ExtField, PrimeField, base_matmul_ext, ext_matvec_base
from algebra.linalg import (
    DenseMatrix,
    EchelonAccumulator,
    SparseMatrix,
    ext_inverse,
    ext_matmul,
    ext_rref,
    ext_solve,
    matmul_mod,
)
from services.instances import RdInstance, gen_rd
from utils.error_handler import (
    FeasibilityError,
    NoPivotError,
    NotFoundError,
    PreconditionError,
    RankDeficientError,
    SingularBlockError,
    VerificationFailedError,
    with_retries,
)

logger = logging.getLogger(__name__)

# Ошибки, после которых имеет смысл повторить попытку со случайной перестановкой координат
RETRYABLE = (RankDeficientError, VerificationFailedError, NoPivotError, SingularBlockError)


# ---------------------------------------------------------------------------
# Миноры
# ---------------------------------------------------------------------------

def all_minors(field: ExtField, A: np.ndarray, max_size: int) -> List[np.ndarray]:
    """
    Все миноры матрицы A (rows, cols, m) размеров 0..max_size.

    minors[s][ρ, γ] - минор на s-подмножествах строк ρ и столбцов γ (лексикографические
    номера). Считается разложением Лапласа по первой строке, пакетно по всем подмножествам.
    """
    A = np.asarray(A, dtype=np.int64)
    rows, cols = A.shape[0], A.shape[1]
    top = min(max_size, rows, cols)
    minors = [np.broadcast_to(field.one(), (1, 1, field.m)).copy()]
    for s in range(1, top + 1):
        row_sets = subsets(rows, s)
        col_sets = subsets(cols, s)
        first = row_sets[:, 0]
        rest = lex_rank(row_sets[:, 1:], rows)
        previous = minors[s - 1][rest]
        total = field.zeros((row_sets.shape[0], col_sets.shape[0]))
        for j in range(s):
            dropped = lex_rank(np.delete(col_sets, j, axis=1), cols)
            term = field.mul(A[first][:, col_sets[:, j]], previous[:, dropped])
            total = field.add(total, term) if j % 2 == 0 else field.sub(total, term)
        minors.append(total)
    return minors


def maximal_minors(C: np.ndarray, q: int) -> np.ndarray:
    """Вектор всех r×r миноров матрицы C (r×n над F_q) в лексикографическом порядке столбцов"""
    C = np.asarray(C, dtype=np.int64) % q
    r = C.shape[0]
    prime = ExtField(PrimeField(q), 1)
    return all_minors(prime, C[:, :, None], r)[r][0, :, 0].copy()


def read_off_coefficients(values: np.ndarray, n_prime: int, r: int, q: int) -> np.ndarray:
    """
    Восстановление C* = [I_r C'] по минорам, нормированным c_{0..r-1} = 1:
    C_{i,j} = (-1)^{r+i} c_{{1..r}∖{i}∪{j}} (i нумеруется с единицы).
    """
    C = np.zeros((r, n_prime), dtype=np.int64)
    C[:, :r] = np.eye(r, dtype=np.int64)
    if n_prime == r:
        return C
    base = np.arange(r)
    for i in range(r):
        kept = np.delete(base, i)
        columns = np.arange(r, n_prime)
        T = np.hstack([np.broadcast_to(kept, (columns.size, r - 1)), columns[:, None]])
        sign = -1 if (r + i + 1) % 2 else 1
        C[i, r:] = (sign * values[lex_rank(T, n_prime)]) % q
    return C


# ---------------------------------------------------------------------------
# Система MaxMin
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class MaxMinSystem:
    """
    Развернутая система максимальных миноров. Строка (J, c) - c-я координата
    минора по столбцам J матрицы C·H̃^T; столбцы - неизвестные c_T, T ⊂ {0..n'-1}
    в лексикографическом порядке, столбец 0 - специализированный c_{0..r-1} = 1.
    """
    field: ExtField
    n_prime: int
    k: int
    r: int
    p: int
    columns: np.ndarray      # (nT, r)
    row_sets: np.ndarray     # (nJ, r)
    col_index: np.ndarray    # (nJ, L)
    coeffs: np.ndarray       # (nJ, L, m)
    a: int = 0
    guess: Optional[np.ndarray] = dc_field(default=None)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def rows(self) -> int:
        return self.row_sets.shape[0] * self.field.m

    @property
    def cols(self) -> int:
        return self.columns.shape[0]

    def dense_rows(self, start: int, stop: int) -> np.ndarray:
        """Плотный блок строк для подмножеств J с номерами start..stop-1"""
        count = stop - start
        block = np.zeros((count, self.cols, self.field.m), dtype=np.int64)
        block[np.arange(count)[:, None], self.col_index[start:stop]] = self.coeffs[start:stop]
        return block.transpose(0, 2, 1).reshape(count * self.field.m, self.cols)

    def to_dense(self) -> DenseMatrix:
        return DenseMatrix(self.dense_rows(0, self.row_sets.shape[0]), self.field.base)

    def to_sparse(self) -> SparseMatrix:
        nJ, L, m = self.coeffs.shape
        rows = (np.arange(nJ)[:, None, None] * m + np.arange(m)[None, None, :])
        rows = np.broadcast_to(rows, (nJ, L, m))
        cols = np.broadcast_to(self.col_index[:, :, None], (nJ, L, m))
        return SparseMatrix.from_triplets(rows, cols, self.coeffs, (self.rows, self.cols), self.q)

    def evaluate(self, values) -> np.ndarray:
        """Значения миноров над F_{q^m} при подстановке c_T = values; (nJ, m)"""
        values = np.asarray(values, dtype=np.int64) % self.q
        return (self.coeffs * values[self.col_index][:, :, None]).sum(axis=1) % self.q

    def _blocks(self):
        step = max(1, self.cols // self.field.m)
        for start in range(0, self.row_sets.shape[0], step):
            yield self.dense_rows(start, min(start + step, self.row_sets.shape[0]))

    def echelon(self, transform: Optional[np.ndarray] = None) -> EchelonAccumulator:
        """Ступенчатый базис строк (при transform - строк M·Φ)"""
        width = self.cols if transform is None else transform.shape[1]
        acc = EchelonAccumulator(width, self.q)
        for block in self._blocks():
            if transform is not None:
                block = matmul_mod(block, transform, self.q)
            acc.add_rows(block)
            if acc.full:
                break
        return acc


def maxmin_shape(m: int, n: int, k: int, r: int, p: int = 0, a: int = 0) -> Tuple[int, int]:
    """(число строк, число столбцов) системы MaxMin"""
    return m * binom(n - p - k - 1, r), binom(n - p - a, r)


def is_overdetermined(m: int, n: int, k: int, r: int, p: int = 0, a: int = 0) -> bool:
    rows, cols = maxmin_shape(m, n, k, r, p, a)
    return n - p - k - 1 >= r and rows >= cols - 1


def build_maxmin(inst: RdInstance, p: int = 0) -> MaxMinSystem:
    """
    Символьное разложение Коши-Бине максимальных миноров ([I_r C']·H̃^T)_{·,J}
    для J ⊂ {0..n-k-2-p}; коэффициент при c_T равен det(H̃^T_{T,J}).
    """
    field, k, r = inst.field, inst.k, inst.r
    n_prime = inst.n - p
    width = n_prime - k - 1
    if p < 0 or width < r:
        raise PreconditionError(f"need p >= 0 and n - p - k - 1 >= r, got p={p}")
    _, R = inst.systematic
    neg_R = field.neg(R[:, :width])
    minors = all_minors(field, neg_R, r)

    columns = subsets(n_prime, r)
    row_sets = subsets(width, r)
    nJ = row_sets.shape[0]
    L = binom(k + r + 1, r)
    col_index = np.zeros((nJ, L), dtype=np.int64)
    coeffs = np.zeros((nJ, L, field.m), dtype=np.int64)

    offset = 0
    total_positions = r * (r + 1) // 2
    for s2 in range(r + 1):
        s1 = r - s2
        if s1 > k + 1:
            continue
        T1 = subsets(k + 1, s1)
        n1 = T1.shape[0]
        for P in combinations(range(r), s2):
            P = list(P)
            chosen = row_sets[:, P]                               # T2' ⊂ J
            rest = lex_rank(np.delete(row_sets, P, axis=1), width)
            exponent = total_positions - s1 * (s1 + 1) // 2 + sum(P) + s2
            values = minors[s1][:, rest].transpose(1, 0, 2)       # (nJ, n1, m)
            if exponent % 2:
                values = field.neg(values)
            T = np.concatenate([
                np.broadcast_to(T1[None], (nJ, n1, s1)),
                np.broadcast_to((k + 1 + chosen)[:, None, :], (nJ, n1, s2)),
            ], axis=2)
            col_index[:, offset:offset + n1] = lex_rank(T.reshape(-1, r), n_prime).reshape(nJ, n1)
            coeffs[:, offset:offset + n1] = values
            offset += n1

    logger.info(f"MaxMin: {nJ * field.m} строк, {columns.shape[0]} столбцов (p={p})")
    return MaxMinSystem(field, n_prime, k, r, p, columns, row_sets, col_index, coeffs)


# ---------------------------------------------------------------------------
# Восстановление ошибки
# ---------------------------------------------------------------------------

def recover_error(inst: RdInstance, C_star: np.ndarray) -> np.ndarray:
    """
    По C* (r×n' над F_q, n' ≤ n) находит S: (1, s_2..s_r)·C*·H̃^T = 0, собирает
    ê = s·C*, продолжает его до длины n через G̃ и нормирует так, чтобы
    коэффициент при y был равен 1.
    """
    field, k, r = inst.field, inst.k, inst.r
    n_prime = C_star.shape[1]
    width = n_prime - k - 1
    HT = inst.parity_transpose[:n_prime, :width]
    A = base_matmul_ext(field, C_star, HT)                     # (r, width, m)

    if r == 1:
        if A.any():
            raise VerificationFailedError("C*·H̃^T has no left kernel")
        s = field.one()[None]
    else:
        tail = ext_solve(field, A[1:].transpose(1, 0, 2), field.neg(A[0]))
        if tail is None:
            raise VerificationFailedError("no support vector with s_1 = 1")
        s = np.concatenate([field.one()[None], tail], axis=0)

    e_hat = ext_matvec_base(field, s, C_star)
    if n_prime < inst.n:
        G_tilde, _ = inst.systematic
        e_hat = ext_matmul(field, e_hat[None, : inst.k + 1], G_tilde)[0]
    return normalize_to_coset(inst, e_hat)


def normalize_to_coset(inst: RdInstance, word: np.ndarray) -> np.ndarray:
    """
    Слово расширенного кода μ·e делится на μ - коэффициент при y в базисе (c_1..c_k, y),
    после чего проверяется y - e ∈ C и |e| = r.
    """
    field, k = inst.field, inst.k
    left_inverse = ext_inverse(field, inst.extended_generator[:, : k + 1])
    if left_inverse is None:
        raise SingularBlockError("leading block of the extended generator is singular")
    coords = ext_matmul(field, np.asarray(word)[None, : k + 1], left_inverse)[0]
    mu = coords[k]
    if not mu.any():
        raise VerificationFailedError("recovered word has no y-component")
    e = field.mul(word, field.inv(mu)[None])
    if not inst.is_solution(e, exact=True):
        raise VerificationFailedError("recovered error fails y - e ∈ C or |e| = r")
    return e


def information_set_order(inst: RdInstance, front=()) -> np.ndarray:
    """
    Перестановка координат, после которой первые k+1 позиций образуют информационное
    множество расширенного кода и начинаются с координат front (в том же порядке).

    Raises:
        SingularBlockError: столбцы front зависимы или ранг расширенного кода меньше k+1
    """
    front = [int(j) for j in front]
    taken = set(front)
    order = front + [j for j in range(inst.n) if j not in taken]
    _, pivots = ext_rref(inst.field, inst.extended_generator[:, order])
    if len(pivots) < inst.k + 1 or pivots[: len(front)] != list(range(len(front))):
        raise SingularBlockError(f"no information set of the extended code starts with {front}")
    chosen = set(pivots)
    return np.asarray([order[j] for j in pivots] + [order[j] for j in range(inst.n) if j not in chosen],
                      dtype=np.int64)


def _reordered(inst: RdInstance, order: np.ndarray, solver) -> np.ndarray:
    """Решение на экземпляре с координатами в порядке order, ошибка возвращается в исходном порядке"""
    e_perm = solver(inst.permuted(order))
    e = np.empty_like(e_perm)
    e[order] = e_perm
    return e


def _solve_once(inst: RdInstance, p: int, reorder: bool = True) -> np.ndarray:
    again = lambda work: _solve_once(work, p, reorder=False)
    try:
        system = build_maxmin(inst, p)
    except SingularBlockError:
        if not reorder:
            raise
        logger.debug("MaxMin: левый блок вырожден, переходим к информационному множеству")
        return _reordered(inst, information_set_order(inst), again)
    acc = system.echelon()
    kernel = acc.right_kernel()
    if kernel.shape[0] != 1:
        raise RankDeficientError(
            f"MaxMin kernel has dimension {kernel.shape[0]}",
            kernel_dim=int(kernel.shape[0]), rank=acc.rank, expected=system.cols - 1,
        )
    v = kernel[0]
    if v[0] == 0:
        if not reorder:
            raise SingularBlockError("first r columns of C are singular")
        # опорный минор: первое T с c_T != 0 ставится на первые r позиций
        T = system.columns[int(np.flatnonzero(v)[0])]
        logger.debug(f"MaxMin: c_T = 0 для первых r столбцов, опорные столбцы {T.tolist()}")
        return _reordered(inst, information_set_order(inst, T), again)
    v = (v * system.field.base.inv(v[0])) % system.q
    C_star = read_off_coefficients(v, system.n_prime, system.r, system.q)
    return recover_error(inst, C_star)


def _with_permutations(inst: RdInstance, solver, attempts: int, seed, context: str,
                       retry_on=RETRYABLE) -> np.ndarray:
    """Попытка на исходном порядке координат, затем на случайных перестановках"""
    rng = np.random.default_rng(seed)

    def attempt(number: int) -> np.ndarray:
        if number == 0:
            return solver(inst)
        return _reordered(inst, rng.permutation(inst.n), solver)

    return with_retries(attempt, attempts, context, retry_on=retry_on)


def solve_overdetermined(inst: RdInstance, p: int = 0, seed=None, attempts: Optional[int] = None) -> np.ndarray:
    """
    Решение RD линеаризацией MaxMinors (переопределенный случай, возможно с укорочением).

    Raises:
        PreconditionError: система не переопределена
        RankDeficientError: размерность ядра не равна 1 во всех попытках
        VerificationFailedError: восстановленная ошибка не прошла проверку
    """
    if not is_overdetermined(inst.m, inst.n, inst.k, inst.r, p):
        rows, cols = maxmin_shape(inst.m, inst.n, inst.k, inst.r, p)
        raise PreconditionError(f"not overdetermined: {rows} rows < {cols} - 1 unknowns (p={p})")
    started = time.perf_counter()
    e = _with_permutations(inst, lambda work: _solve_once(work, p), attempts or inst.n, seed,
                           f"MaxMinors p={p}")
    logger.info(f"MaxMinors: ошибка найдена за {time.perf_counter() - started:.2f} с")
    return e


# ---------------------------------------------------------------------------
# Гибридная специализация
# ---------------------------------------------------------------------------

@dataclass
class _Substitution:
    """Разложение полного c_T по угаданным столбцам: вклад sign·det(G_{I,T_g}) в c_{T_f ∪ I}"""
    full: np.ndarray
    reduced: np.ndarray
    sign: np.ndarray
    size: np.ndarray
    row_set: np.ndarray
    guessed_set: np.ndarray


def _substitution(n: int, r: int, a: int) -> _Substitution:
    n_red = n - a
    full, reduced, signs, sizes, row_ids, guess_ids = [], [], [], [], [], []
    for t_idx, T in enumerate(subsets(n, r)):
        T_f = [t for t in T if t < n_red]
        T_g = [t - n_red for t in T if t >= n_red]
        g = len(T_g)
        # позиции T_g в T - последние g
        exp_P = sum(range(r - g + 1, r + 1))
        guessed_id = int(lex_rank(np.asarray(T_g, dtype=np.int64), a)[0]) if g else 0
        for i_id, I in enumerate(combinations(range(r), g)):
            if set(I) & set(T_f):
                continue
            union = sorted(T_f + list(I))
            exp_P_prime = sum(union.index(i) + 1 for i in I)
            full.append(t_idx)
            reduced.append(int(lex_rank(np.asarray(union, dtype=np.int64), n_red)[0]))
            signs.append(-1 if (exp_P + exp_P_prime) % 2 else 1)
            sizes.append(g)
            row_ids.append(i_id)
            guess_ids.append(guessed_id)
    as_array = lambda values: np.asarray(values, dtype=np.int64)
    return _Substitution(as_array(full), as_array(reduced), as_array(signs), as_array(sizes),
                         as_array(row_ids), as_array(guess_ids))


def _guess_matrix(index: int, r: int, a: int, q: int) -> np.ndarray:
    digits = np.zeros(r * a, dtype=np.int64)
    for i in range(r * a):
        index, digits[i] = divmod(index, q)
    return digits.reshape(r, a)


def _try_guess(system: MaxMinSystem, dense: np.ndarray, sub: _Substitution, inst: RdInstance,
               a: int, index: int) -> Optional[np.ndarray]:
    q, r, n = system.q, system.r, inst.n
    n_red = n - a
    G = _guess_matrix(index, r, a, q)
    prime = ExtField(PrimeField(q), 1)
    minors = all_minors(prime, G[:, :, None], r)
    values = np.zeros(sub.full.size, dtype=np.int64)
    for g in np.unique(sub.size):
        mask = sub.size == g
        if g >= len(minors):
            continue
        values[mask] = minors[g][sub.row_set[mask], sub.guessed_set[mask], 0]
    values = (values * sub.sign) % q
    phi = np.zeros((system.cols, binom(n_red, r)), dtype=np.int64)
    phi[sub.full, sub.reduced] = values

    reduced = matmul_mod(dense, phi, q)
    acc = EchelonAccumulator(phi.shape[1], q)
    acc.add_rows(reduced)
    kernel = acc.right_kernel()
    if kernel.shape[0] != 1 or kernel[0, 0] == 0:
        return None
    v = (kernel[0] * system.field.base.inv(kernel[0, 0])) % q
    C_star = np.hstack([read_off_coefficients(v, n_red, r, q), G])
    try:
        return recover_error(inst, C_star)
    except VerificationFailedError:
        return None


def _hybrid_once(inst: RdInstance, a: int, threads: int) -> np.ndarray:
    try:
        system = build_maxmin(inst, 0)
    except SingularBlockError:
        logger.debug("Гибрид: левый блок вырожден, переходим к информационному множеству")
        return _reordered(inst, information_set_order(inst),
                          lambda work: _hybrid_search(work, build_maxmin(work, 0), a, threads))
    return _hybrid_search(inst, system, a, threads)


def _hybrid_search(inst: RdInstance, system: MaxMinSystem, a: int, threads: int) -> np.ndarray:
    dense = system.to_dense().entries
    sub = _substitution(inst.n, inst.r, a)
    total = inst.q ** (a * inst.r)
    chunk = max(1, threads) * 4
    logger.info(f"Гибрид a={a}: {total} вариантов, {binom(inst.n - a, inst.r)} неизвестных")

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        for start in range(0, total, chunk):
            indices = range(start, min(start + chunk, total))
            results = list(pool.map(lambda i: _try_guess(system, dense, sub, inst, a, i), indices))
            for index, result in zip(indices, results):
                if result is not None:
                    logger.info(f"Гибрид a={a}: верный вариант {index}")
                    return result
    raise NotFoundError(f"no verified guess among {total} specializations (a={a})")


def solve_hybrid(inst: RdInstance, a: int, seed=None, attempts: int = 1,
                 threads: Optional[int] = None, max_guesses: Optional[int] = None) -> np.ndarray:
    """
    Гибридный вариант: перебор q^{ar} значений последних a столбцов C и решение
    уменьшенной системы над C(n-a, r) неизвестными для каждого варианта.

    Raises:
        NotFoundError: ни один вариант не дал проверенной ошибки
        FeasibilityError: q^{ar} превышает лимит перебора
    """
    if a == 0:
        return solve_overdetermined(inst, 0, seed=seed)
    if a < 0 or inst.n - a < inst.r:
        raise PreconditionError(f"invalid specialization a={a}")
    if not is_overdetermined(inst.m, inst.n, inst.k, inst.r, 0, a):
        rows, cols = maxmin_shape(inst.m, inst.n, inst.k, inst.r, 0, a)
        raise PreconditionError(f"hybrid a={a} not overdetermined: {rows} rows < {cols} - 1")
    limit = HYBRID_MAX_GUESSES if max_guesses is None else max_guesses
    if inst.q ** (a * inst.r) > limit:
        raise FeasibilityError(f"q^(ar) = {inst.q ** (a * inst.r)} exceeds guess limit {limit}")
    threads = THREADS if threads is None else threads
    return _with_permutations(inst, lambda work: _hybrid_once(work, a, threads), attempts, seed,
                              f"Hybrid a={a}", retry_on=RETRYABLE + (NotFoundError,))


def minimal_hybrid_a(m: int, n: int, k: int, r: int) -> Optional[int]:
    """Наименьшее a, при котором гибридная система переопределена"""
    for a in range(0, n - r + 1):
        if is_overdetermined(m, n, k, r, 0, a):
            return a
    return None


def maximal_puncturing(m: int, n: int, k: int, r: int) -> int:
    """Наибольшее p, при котором укороченная система переопределена (0, если только p=0)"""
    best = 0
    for p in range(0, n - k - r):
        if is_overdetermined(m, n, k, r, p):
            best = p
    return best


# ---------------------------------------------------------------------------
# Эвристика ранга
# ---------------------------------------------------------------------------

@dataclass
class RankHeuristicResult:
    params: Dict[str, int]
    trials: int
    hits: int
    expected_rank: int
    ranks: List[int]

    @property
    def frequency(self) -> float:
        return self.hits / self.trials if self.trials else 0.0


def verify_rank_heuristic(q: int, m: int, n: int, k: int, r: int, trials: int, seed=None,
                          p: int = 0) -> RankHeuristicResult:
    """Доля случайных экземпляров, у которых ранг MaxMin равен C(n', r) - 1"""
    if trials <= 0:
        raise PreconditionError("trials must be positive")
    if not is_overdetermined(m, n, k, r, p):
        raise PreconditionError("rank heuristic needs overdetermined parameters")
    rng = np.random.default_rng(seed)
    expected = binom(n - p, r) - 1
    ranks: List[int] = []
    for trial in range(trials):
        inst = gen_rd(q, m, n, k, r, seed=int(rng.integers(0, 2 ** 31)))
        ranks.append(build_maxmin(inst, p).echelon().rank)
        logger.debug(f"Эвристика ранга, испытание {trial + 1}: ранг {ranks[-1]}, ожидается {expected}")
    hits = sum(1 for value in ranks if value == expected)
    logger.info(f"Эвристика ранга ({q},{m},{n},{k},{r}) p={p}: {hits}/{trials}")
    return RankHeuristicResult({"q": q, "m": m, "n": n, "k": k, "r": r, "p": p}, trials, hits, expected, ranks)
