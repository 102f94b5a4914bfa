"""
@file: services/supportminors.py
@description: Атака Support Minors: билинейная система максимальных миноров (r_j; C),
              линеаризация степени b (режимы q > b и q = 2), совмещение с MaxMinors для RD,
              решение разреженной системы и извлечение значений переменных
@dependencies: numpy, algebra/, services/instances.py, services/maxminors.py, config.py,
               utils/error_handler.py
@created: 2025-01-21
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field as dc_field
from itertools import combinations, combinations_with_replacement
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from config import DENSE_THRESHOLD, WIEDEMANN_CHECK_BITS
from algebra.combinatorics import binom, lex_rank, subsets
from algebra.ffield import PrimeField
from algebra.linalg import (
    EchelonAccumulator,
    SparseMatrix,
    matrix_rank,
    rref_array,
    wiedemann_kernel_element,
)
from services.instances import MinRankInstance, RdInstance, gen_minrank
from services.maxminors import (
    RETRYABLE,
    _with_permutations,
    build_maxmin,
    maximal_minors,
    normalize_to_coset,
)
from utils.error_handler import (
    NoPivotError,
    NotFoundError,
    PreconditionError,
    RankDeficientError,
    SingularBlockError,
    VerificationFailedError,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Базовые билинейные уравнения
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class SmBase:
    """
    Уравнения det((r_j; C)_{·,J}) = Σ_{t∈J} ± (r_j)_t c_{J∖t}, (r_j)_t = Σ_i x_i (M_i)_{j,t}.
    Уравнение e = (j, J) хранится как r+1 пар (c_T, коэффициенты при x_1..x_K).
    """
    q: int
    m: int
    n_prime: int
    r: int
    K: int
    T_sets: np.ndarray      # (nT, r)
    J_sets: np.ndarray      # (nJ, r+1)
    eq_T: np.ndarray        # (E, r+1)
    eq_coef: np.ndarray     # (E, r+1, K)

    @property
    def count(self) -> int:
        return self.eq_T.shape[0]

    def evaluate(self, x, minors) -> np.ndarray:
        """Значения всех уравнений при заданных x и c_T"""
        x = np.asarray(x, dtype=np.int64) % self.q
        minors = np.asarray(minors, dtype=np.int64) % self.q
        linear = (self.eq_coef * x[None, None, :]).sum(axis=2) % self.q
        return (linear * minors[self.eq_T]).sum(axis=1) % self.q


def build_sm_base(inst: MinRankInstance, n_prime: Optional[int] = None) -> SmBase:
    """m·C(n', r+1) билинейных уравнений по первым n' столбцам; порядок строк (j, J)"""
    n_prime = inst.n if n_prime is None else n_prime
    r, q = inst.r, inst.q
    if r + 1 > n_prime or n_prime > inst.n:
        raise PreconditionError(f"need r + 1 <= n' <= n, got r={r}, n'={n_prime}, n={inst.n}")
    J_sets = subsets(n_prime, r + 1)
    nJ = J_sets.shape[0]
    eq_T_J = np.stack([lex_rank(np.delete(J_sets, s, axis=1), n_prime) for s in range(r + 1)], axis=1)
    signs = np.where(np.arange(r + 1) % 2 == 0, 1, -1)

    # (K, m, nJ, r+1) -> (m, nJ, r+1, K)
    entries = inst.matrices[:, :, :n_prime][:, :, J_sets]
    coef = np.transpose(entries, (1, 2, 3, 0)) * signs[None, None, :, None]
    eq_coef = (coef % q).reshape(inst.m * nJ, r + 1, inst.K)
    eq_T = np.tile(eq_T_J, (inst.m, 1))
    logger.debug(f"Support Minors: {eq_T.shape[0]} базовых уравнений, K={inst.K}, n'={n_prime}")
    return SmBase(q, inst.m, n_prime, r, inst.K, subsets(n_prime, r), J_sets, eq_T, eq_coef)


# ---------------------------------------------------------------------------
# Мономы
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class MonomialIndex:
    """
    x-части столбцов и множители степени b-1 (или 0..b-1 при q = 2). Мономы - отсортированные
    кортежи индексов, порядок - по степени, затем лексикографически.
    """
    K: int
    b: int
    q: int
    columns: List[Tuple[int, ...]]
    multipliers: List[Tuple[int, ...]]
    index: Dict[Tuple[int, ...], int]
    mult_table: np.ndarray      # (U, K): номер столбцового монома u·x_i

    def product(self, u: Tuple[int, ...], i: int) -> Tuple[int, ...]:
        if self.q == 2:
            return tuple(sorted(set(u) | {i}))
        return tuple(sorted(u + (i,)))


def monomial_index(K: int, b: int, q: int) -> MonomialIndex:
    if b < 1:
        raise PreconditionError(f"degree b={b} must be positive")
    if q == 2:
        columns = [mon for d in range(1, b + 1) for mon in combinations(range(K), d)]
        multipliers = [mon for d in range(b) for mon in combinations(range(K), d)]
    elif q > b:
        columns = list(combinations_with_replacement(range(K), b))
        multipliers = list(combinations_with_replacement(range(K), b - 1))
    else:
        raise PreconditionError(f"field equations x^{q} = x are not modeled for q={q} <= b={b}")
    index = {mon: i for i, mon in enumerate(columns)}
    mons = MonomialIndex(K, b, q, columns, multipliers, index, np.zeros((len(multipliers), K), dtype=np.int64))
    for u_idx, u in enumerate(multipliers):
        for i in range(K):
            mons.mult_table[u_idx, i] = index[mons.product(u, i)]
    return mons


def _monomial_values(monomials: Iterable[Tuple[int, ...]], x: np.ndarray, q: int) -> np.ndarray:
    return np.asarray([int(np.prod([int(x[i]) for i in mon]) % q) if mon else 1 for mon in monomials],
                      dtype=np.int64)


# ---------------------------------------------------------------------------
# Линеаризованная система
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class SmSystem:
    matrix: SparseMatrix
    monomials: MonomialIndex
    base: SmBase
    matrices: np.ndarray            # (K_eff, m, n): исходные M_i для проверки ранга
    b: int
    sm_rows: int
    maxmin_rows: int = 0
    vectors: Optional[np.ndarray] = dc_field(default=None)   # (K_eff, n, m) для RD

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def r(self) -> int:
        return self.base.r

    @property
    def K(self) -> int:
        return self.base.K

    @property
    def nT(self) -> int:
        return self.base.T_sets.shape[0]

    def column(self, xmon: Tuple[int, ...], T_idx: int) -> int:
        return self.monomials.index[tuple(sorted(xmon))] * self.nT + T_idx

    def row_origin(self, row: int) -> Dict[str, object]:
        """Происхождение строки: (j, J, множитель) или MaxMinors"""
        if row < self.sm_rows:
            u, e = divmod(row, self.base.count)
            j, J_idx = divmod(e, self.base.J_sets.shape[0])
            return {"origin": "support-minors", "j": j, "J": self.base.J_sets[J_idx].tolist(),
                    "multiplier": list(self.monomials.multipliers[u])}
        return {"origin": "maxminors", "index": row - self.sm_rows}

    def monomial_vector(self, x, minors) -> np.ndarray:
        """Вектор значений x^α c_T в порядке столбцов"""
        xvals = _monomial_values(self.monomials.columns, np.asarray(x) % self.q, self.q)
        return np.outer(xvals, np.asarray(minors, dtype=np.int64) % self.q).reshape(-1) % self.q


def _check_degree(r: int, b: int) -> None:
    if not 1 <= b < r + 2:
        raise PreconditionError(f"degree b={b} outside 1 <= b < r + 2 = {r + 2}")


def _linearized_triplets(base: SmBase, mons: MonomialIndex) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    U, E, nT = len(mons.multipliers), base.count, base.T_sets.shape[0]
    shape = (U, E, base.r + 1, base.K)
    cols = mons.mult_table[:, None, None, :] * nT + base.eq_T[None, :, :, None]
    rows = np.arange(U)[:, None, None, None] * E + np.arange(E)[None, :, None, None]
    vals = base.eq_coef[None]
    return (np.broadcast_to(rows, shape).ravel(), np.broadcast_to(cols, shape).ravel(),
            np.broadcast_to(vals, shape).ravel())


def linearize(base: SmBase, b: int, matrices: Optional[np.ndarray] = None) -> SmSystem:
    """
    Умножение базовых уравнений на мономы степени b-1 (q > b) или на мультилинейные
    мономы степеней 0..b-1 с редукцией x_i^2 = x_i (q = 2).
    """
    _check_degree(base.r, b)
    mons = monomial_index(base.K, b, base.q)
    rows, cols, vals = _linearized_triplets(base, mons)
    n_rows = len(mons.multipliers) * base.count
    n_cols = len(mons.columns) * base.T_sets.shape[0]
    matrix = SparseMatrix.from_triplets(rows, cols, vals, (n_rows, n_cols), base.q)
    logger.info(f"Линеаризация b={b}: {n_rows} строк, {n_cols} мономов, {matrix.nnz} ненулевых")
    if matrices is None:
        matrices = np.zeros((base.K, base.m, base.n_prime), dtype=np.int64)
    return SmSystem(matrix, mons, base, matrices, b, n_rows)


def linearize_minrank(inst: MinRankInstance, b: int, n_prime: Optional[int] = None) -> SmSystem:
    return linearize(build_sm_base(inst, n_prime), b, inst.matrices)


# ---------------------------------------------------------------------------
# Подсчеты
# ---------------------------------------------------------------------------

def _binary(q: int, binary: Optional[bool]) -> bool:
    return q == 2 if binary is None else binary


def dexp(q: int, m: int, n: int, K: int, r: int, b: int, binary: Optional[bool] = None) -> int:
    """
    Ожидаемое число линейно независимых уравнений линеаризации степени b.
    binary=None выбирает формулы q = 2 только при q = 2; True/False задают режим явно.
    """
    _check_degree(r, b)
    if _binary(q, binary):
        return sum(
            (-1) ** (i + 1) * binom(n, r + i) * binom(m + i - 1, i) * binom(K, d - i)
            for d in range(1, b + 1)
            for i in range(1, d + 1)
        )
    return sum(
        (-1) ** (i + 1) * binom(n, r + i) * binom(m + i - 1, i) * binom(K + b - i - 1, b - i)
        for i in range(1, b + 1)
    )


def sm_counts(q: int, m: int, n: int, K: int, r: int, b: int,
              binary: Optional[bool] = None) -> Tuple[int, int]:
    """(число строк, число мономов) линеаризованной системы на n столбцах"""
    _check_degree(r, b)
    if _binary(q, binary):
        multipliers = sum(binom(K, d) for d in range(b))
        monomials = sum(binom(n, r) * binom(K, d) for d in range(1, b + 1))
    else:
        multipliers = binom(K + b - 2, b - 1)
        monomials = binom(n, r) * binom(K + b - 1, b)
    return m * binom(n, r + 1) * multipliers, monomials


def linearization_holds(q: int, m: int, n: int, K: int, r: int, b: int,
                        binary: Optional[bool] = None) -> bool:
    _, monomials = sm_counts(q, m, n, K, r, b, binary)
    return monomials - 1 <= dexp(q, m, n, K, r, b, binary)


def minimal_degree(q: int, m: int, n: int, K: int, r: int) -> Optional[int]:
    for b in range(1, r + 2):
        if q != 2 and q <= b:
            break
        if linearization_holds(q, m, n, K, r, b):
            return b
    return None


# ---------------------------------------------------------------------------
# Решение и извлечение
# ---------------------------------------------------------------------------

def dense_kernel(matrix: SparseMatrix) -> Tuple[np.ndarray, int]:
    """Базис ядра разреженной матрицы плотным исключением по блокам строк"""
    acc = EchelonAccumulator(matrix.cols, matrix.q)
    step = max(64, matrix.cols)
    for start in range(0, matrix.rows, step):
        acc.add_rows(matrix.dense_block(start, min(start + step, matrix.rows)))
        if acc.full:
            break
    return acc.right_kernel(), acc.rank


def system_dexp(system: SmSystem) -> int:
    """D_exp для параметров системы (без строк MaxMinors)"""
    base = system.base
    return dexp(base.q, base.m, base.n_prime, base.K, base.r, system.b)


def _wiedemann_unique(matrix: SparseMatrix, system: SmSystem, seed) -> np.ndarray:
    """
    Вектор ядра Видемана и проверка dim ker = 1: каждый повторный прогон с независимым
    seed должен дать пропорциональный вектор.
    """
    q = matrix.q
    checks = max(1, math.ceil(WIEDEMANN_CHECK_BITS / math.log2(q)))
    seeds = np.random.SeedSequence(seed).spawn(checks + 1)
    v = wiedemann_kernel_element(matrix, seed=seeds[0])
    if v is None:
        raise NotFoundError("Wiedemann found no kernel vector")
    for child in seeds[1:]:
        other = wiedemann_kernel_element(matrix, seed=child)
        if other is not None and matrix_rank(np.vstack([v, other]), q) > 1:
            expected = system_dexp(system)
            raise RankDeficientError(
                f"kernel dimension > 1: independent Wiedemann vectors differ (D_exp = {expected})",
                kernel_dim=2, expected=matrix.cols - 1, dexp=expected,
            )
    logger.debug(f"Видеман: {checks} повторных прогонов подтвердили dim ker = 1")
    return v


def solve_sm(system: SmSystem, seed=None, threshold: Optional[int] = None,
             solver: str = "auto") -> np.ndarray:
    """
    Ненулевой вектор ядра линеаризованной системы. Плотное исключение ниже порога
    по числу столбцов, Видеман выше (solver = dense | wiedemann принудительно).

    Raises:
        NotFoundError: ядро тривиально
        RankDeficientError: ядро размерности больше 1 (на пути Видемана - по повторным прогонам)
    """
    threshold = DENSE_THRESHOLD if threshold is None else threshold
    matrix = system.matrix
    use_dense = solver == "dense" or (solver == "auto" and matrix.cols < threshold)
    if use_dense:
        kernel, rank = dense_kernel(matrix)
        logger.info(f"Support Minors: ранг {rank} при {matrix.cols} мономах")
        if kernel.shape[0] == 0:
            raise NotFoundError("linearized system has a trivial kernel")
        if kernel.shape[0] > 1:
            raise RankDeficientError(
                f"kernel dimension {kernel.shape[0]} > 1",
                kernel_dim=int(kernel.shape[0]), rank=rank, expected=matrix.cols - 1,
                dexp=system_dexp(system),
            )
        return kernel[0]
    return _wiedemann_unique(matrix, system, seed)


@dataclass
class SmSolution:
    x: np.ndarray
    minors: np.ndarray
    pivot: Tuple[int, int]


def extract_solution(v: np.ndarray, system: SmSystem, verify: bool = True) -> SmSolution:
    """
    Значения x как отношения координат вектора ядра: x_i = v[x_i x_{i0}^{d-1} c_T0] / v[x_{i0}^d c_T0],
    d = b при q > b и d = 1 при q = 2.

    Raises:
        NoPivotError: все опорные мономы нулевые
        VerificationFailedError: rank(Σ x_i M_i) > r
    """
    q, K, nT = system.q, system.K, system.nT
    v = np.asarray(v, dtype=np.int64) % q
    d = 1 if q == 2 else system.b
    inverses = PrimeField(q).inverse_table
    for T0 in range(nT):
        for i0 in range(K):
            pivot = int(v[system.column((i0,) * d, T0)])
            if pivot == 0:
                continue
            scale = int(inverses[pivot])
            x = np.asarray([v[system.column((i,) + (i0,) * (d - 1), T0)] for i in range(K)], dtype=np.int64)
            x = (x * scale) % q
            minors = (v[system.column((i0,) * d, T0) - T0 + np.arange(nT)] * scale) % q
            if verify:
                combination = np.tensordot(x, system.matrices, axes=(0, 0)) % q
                if not x.any() or matrix_rank(combination, q) > system.r:
                    raise VerificationFailedError("extracted x does not reach rank <= r")
            logger.debug(f"Извлечение: опорный моном x_{i0}^{d} c_T[{T0}]")
            return SmSolution(x, minors, (T0, i0))
    raise NoPivotError("every candidate pivot monomial vanishes")


def solve_minrank(inst: MinRankInstance, b: int, n_prime: Optional[int] = None, seed=None,
                  solver: str = "auto") -> SmSolution:
    system = linearize_minrank(inst, b, n_prime)
    return extract_solution(solve_sm(system, seed=seed, solver=solver), system)


# ---------------------------------------------------------------------------
# RD: Support Minors + MaxMinors
# ---------------------------------------------------------------------------

def rd_linear_vectors(inst: RdInstance) -> np.ndarray:
    """
    Векторы g̃_1 и α^{i-1} g̃_j (j ≥ 2) над строками систематического G̃: первая координата
    ошибки специализирована в F_q, так что K_eff = mk + 1.
    """
    field = inst.field
    G_tilde, _ = inst.systematic
    powers = np.stack([field.alpha_power(i) for i in range(field.m)])
    rest = field.mul(G_tilde[1:, None, :, :], powers[None, :, None, :]).reshape(-1, inst.n, field.m)
    return np.concatenate([G_tilde[:1], rest], axis=0)


def build_rd_sm(inst: RdInstance, b: int, n_prime: Optional[int] = None) -> SmSystem:
    """
    Support Minors по K_eff = mk+1 матрицам Mat(·) на первых n' столбцах, дополненные строками
    MaxMin укороченного кода, умноженными на x-мономы столбцов (степени b или 1..b при q = 2).
    """
    n_prime = inst.n if n_prime is None else n_prime
    field, q = inst.field, inst.q
    vectors = rd_linear_vectors(inst)
    matrices = np.swapaxes(vectors, 1, 2) % q
    minrank = MinRankInstance(field.base, field.m, inst.n, vectors.shape[0], inst.r, matrices)
    base = build_sm_base(minrank, n_prime)
    _check_degree(inst.r, b)
    mons = monomial_index(base.K, b, q)
    rows, cols, vals = _linearized_triplets(base, mons)
    sm_rows = len(mons.multipliers) * base.count
    nT = base.T_sets.shape[0]
    n_cols = len(mons.columns) * nT

    mm_rows = 0
    if n_prime - inst.k - 1 >= inst.r:
        maxmin = build_maxmin(inst, inst.n - n_prime).to_sparse()
        mm_row_ids = maxmin.row_indices()
        alphas = np.arange(len(mons.columns))
        rows = np.concatenate([rows, (sm_rows + alphas[:, None] * maxmin.rows + mm_row_ids[None, :]).ravel()])
        cols = np.concatenate([cols, (alphas[:, None] * nT + maxmin.indices[None, :]).ravel()])
        vals = np.concatenate([vals, np.broadcast_to(maxmin.data, (alphas.size, maxmin.nnz)).ravel()])
        mm_rows = alphas.size * maxmin.rows

    matrix = SparseMatrix.from_triplets(rows, cols, vals, (sm_rows + mm_rows, n_cols), q)
    logger.info(
        f"RD Support Minors + MaxMinors b={b}, n'={n_prime}: {sm_rows} + {mm_rows} строк, {n_cols} мономов"
    )
    return SmSystem(matrix, mons, base, matrices, b, sm_rows, mm_rows, vectors)


def rd_plant_vector(inst: RdInstance, system: SmSystem) -> Optional[np.ndarray]:
    """Вектор мономов заложенного решения (ошибка, нормированная e_1 = 1)"""
    if inst.plant is None:
        return None
    field = inst.field
    e = inst.plant.e
    if not e[0].any():
        return None
    scaled = field.mul(e, field.inv(e[0])[None])
    x = np.concatenate([[1], scaled[1: inst.k + 1].reshape(-1)]).astype(np.int64)
    basis = rref_array(scaled.T, inst.q)[0][: inst.r]
    minors = maximal_minors(basis[:, : system.base.n_prime], inst.q)
    return system.monomial_vector(x, minors)


def minrank_plant_vector(inst: MinRankInstance, system: SmSystem) -> Optional[np.ndarray]:
    if inst.x is None:
        return None
    combination = inst.combination(inst.x)[:, : system.base.n_prime]
    R, pivots = rref_array(combination, inst.q)
    basis = R[: inst.r]
    if len(pivots) < inst.r:
        return system.monomial_vector(inst.x, np.zeros(system.nT, dtype=np.int64))
    return system.monomial_vector(inst.x, maximal_minors(basis, inst.q))


def _solve_rd_sm_once(inst: RdInstance, b: int, n_prime: Optional[int], seed, solver: str) -> np.ndarray:
    if not inst.y.any() and not inst.basis.any():
        raise PreconditionError("empty instance")
    system = build_rd_sm(inst, b, n_prime)
    v = solve_sm(system, seed=seed, solver=solver)
    solution = extract_solution(v, system)
    x = solution.x
    if x[0] == 0:
        raise SingularBlockError("first coordinate of the error vanishes")
    x = (x * PrimeField(inst.q).inv(x[0])) % inst.q
    word = (system.vectors * x[:, None, None]).sum(axis=0) % inst.q
    return normalize_to_coset(inst, word)


def solve_rd_sm(inst: RdInstance, b: int, n_prime: Optional[int] = None, seed=None,
                attempts: Optional[int] = None, solver: str = "auto") -> np.ndarray:
    """RD в недоопределенном случае: Support Minors с K = mk+1 и строками MaxMinors"""
    return _with_permutations(
        inst, lambda work: _solve_rd_sm_once(work, b, n_prime, seed, solver),
        attempts or inst.n, seed, f"RD Support Minors b={b}",
        retry_on=RETRYABLE + (NotFoundError,),
    )


def rd_combined_counts(q: int, m: int, n: int, k: int, r: int, b: int, n_prime: Optional[int] = None) -> Dict[str, int]:
    """Число SM-строк (с учетом D_exp), MaxMin-строк и мономов системы build_rd_sm"""
    n_prime = n if n_prime is None else n_prime
    K = m * k + 1
    _, monomials = sm_counts(q, m, n_prime, K, r, b)
    x_monomials = monomials // binom(n_prime, r)
    maxmin_rows = m * binom(n_prime - k - 1, r) * x_monomials if n_prime - k - 1 >= r else 0
    return {"K": K, "monomials": monomials, "sm_rows": dexp(q, m, n_prime, K, r, b), "maxmin_rows": maxmin_rows}


# ---------------------------------------------------------------------------
# Эксперимент D_exp
# ---------------------------------------------------------------------------

@dataclass
class DexpCell:
    params: Dict[str, int]
    predicted: int
    monomials: int
    expected: int
    measured: List[int]
    skipped: bool = False

    @property
    def matches(self) -> int:
        return sum(1 for value in self.measured if value == self.expected)

    @property
    def match(self) -> bool:
        return not self.skipped and bool(self.measured) and self.matches == len(self.measured)


def default_grid(q: int = 13) -> List[Dict[str, int]]:
    """m ∈ {7, 8}, r ∈ {2, 3}, n ∈ {r+3..r+5}, K ∈ {3..20}, b ∈ {1, 2, 3}, b < r + 2"""
    cells = []
    for m in (7, 8):
        for r in (2, 3):
            for n in range(r + 3, r + 6):
                for K in range(3, 21):
                    for b in (1, 2, 3):
                        if b < r + 2 and (q == 2 or q > b):
                            cells.append({"q": q, "m": m, "n": n, "K": K, "r": r, "b": b})
    return cells


def verify_dexp(grid: Iterable[Dict[str, int]], trials: int, seed=None, planted: bool = True,
                max_columns: int = 1500) -> List[DexpCell]:
    """
    Измеренный ранг линеаризованной системы против min(D_exp, мономы - 1) (с решением)
    или min(D_exp, мономы) (без решения). Ячейки с числом мономов выше max_columns пропускаются.
    """
    if trials <= 0:
        raise PreconditionError("trials must be positive")
    rng = np.random.default_rng(seed)
    results: List[DexpCell] = []
    for cell in grid:
        q, m, n, K, r, b = (cell[key] for key in ("q", "m", "n", "K", "r", "b"))
        predicted = dexp(q, m, n, K, r, b)
        _, monomials = sm_counts(q, m, n, K, r, b)
        expected = min(predicted, monomials - 1 if planted else monomials)
        cell_seed = int(rng.integers(0, 2 ** 31))
        if monomials > max_columns:
            results.append(DexpCell(dict(cell), predicted, monomials, expected, [], skipped=True))
            continue
        cell_rng = np.random.default_rng(cell_seed)
        measured = []
        for _ in range(trials):
            inst = gen_minrank(q, m, n, K, r, planted=planted, seed=int(cell_rng.integers(0, 2 ** 31)))
            _, rank = dense_kernel(linearize_minrank(inst, b).matrix)
            measured.append(rank)
        results.append(DexpCell(dict(cell), predicted, monomials, expected, measured))
        logger.debug(f"D_exp {cell}: ожидалось {expected}, измерено {measured}")
    done = [c for c in results if not c.skipped]
    logger.info(f"D_exp: {sum(c.match for c in done)}/{len(done)} совпадений, пропущено {len(results) - len(done)}")
    return results
