"""
@file: services/instances.py
@description: Генерация, сериализация и переборное решение экземпляров RD и MinRank,
              вложение RD -> MinRank
@dependencies: numpy, aiofiles, algebra/, config.py, utils/error_handler.py
@created: 2025-01-21
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import combinations, product
from typing import Any, Dict, Iterator, Optional, Tuple, Union

import aiofiles
import numpy as np

from config import BRUTE_FORCE_LIMIT, REPORT_FORMAT_VERSION
from algebra.ffield import ExtField, PrimeField, embed, rank_weight
from algebra.linalg import (
    batch_rank,
    ext_inverse,
    ext_matmul,
    ext_right_kernel,
    matrix_rank,
    solve,
)
from utils.error_handler import (
    FeasibilityError,
    InstanceFormatError,
    PreconditionError,
    SingularBlockError,
)

logger = logging.getLogger(__name__)

FORMAT_NAME = "rankforge-instance"


@dataclass(eq=False)
class RdPlant:
    """Заложенное решение: e = (1, α, ..., α^{m-1}) S C, y = Σ λ_j c_j + e"""
    e: np.ndarray        # (n, m)
    S: np.ndarray        # (m, r) над F_q
    C: np.ndarray        # (r, n) над F_q
    coeffs: np.ndarray   # (k, m): λ_j для кодового слова


@dataclass(eq=False)
class RdInstance:
    """Экземпляр задачи (m, n, k, r)-декодирования в ранговой метрике"""
    field: ExtField
    n: int
    k: int
    r: int
    basis: np.ndarray    # (k, n, m)
    y: np.ndarray        # (n, m)
    seed: Optional[int] = None
    plant: Optional[RdPlant] = None

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def m(self) -> int:
        return self.field.m

    @property
    def params(self) -> Dict[str, int]:
        return {"q": self.q, "m": self.m, "n": self.n, "k": self.k, "r": self.r}

    @cached_property
    def extended_generator(self) -> np.ndarray:
        """Базис расширенного кода C + <y>: строки c_1..c_k, y"""
        return np.concatenate([self.basis, self.y[None]], axis=0) % self.q

    @cached_property
    def systematic(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Систематическая форма расширенного кода.

        Returns:
            (G̃, R): G̃ = (I_{k+1} R), R размера (k+1)×(n-k-1)

        Raises:
            SingularBlockError: левый (k+1)×(k+1) блок вырожден
        """
        k1 = self.k + 1
        G = self.extended_generator
        left_inverse = ext_inverse(self.field, G[:, :k1])
        if left_inverse is None:
            raise SingularBlockError("leading block of the extended generator is singular")
        G_tilde = ext_matmul(self.field, left_inverse, G)
        return G_tilde, G_tilde[:, k1:].copy()

    @property
    def parity_transpose(self) -> np.ndarray:
        """H̃^T = [-R; I_{n-k-1}] размера n×(n-k-1)"""
        _, R = self.systematic
        width = self.n - self.k - 1
        identity = self.field.from_base(np.eye(width, dtype=np.int64))
        return np.concatenate([self.field.neg(R), identity], axis=0)

    @cached_property
    def code_parity(self) -> np.ndarray:
        """Векторы h с c·h = 0 для всех c из C (без y); массив (n-k, n, m)"""
        return ext_right_kernel(self.field, self.basis)

    def in_code(self, v: np.ndarray) -> bool:
        """Проверка v ∈ C"""
        v = np.asarray(v, dtype=np.int64) % self.q
        checks = self.field.mul(v[None, :, :], self.code_parity).sum(axis=1) % self.q
        return not checks.any()

    def is_solution(self, e: np.ndarray, exact: bool = False) -> bool:
        """y - e ∈ C и |e| ≤ r (или = r при exact)"""
        e = np.asarray(e, dtype=np.int64) % self.q
        if e.shape != (self.n, self.m):
            return False
        weight = rank_weight(e, self.field)
        if weight > self.r or (exact and weight != self.r):
            return False
        return self.in_code(self.field.sub(self.y, e))

    def permuted(self, perm) -> "RdInstance":
        """Экземпляр с переставленными координатами (столбцами кода и y)"""
        perm = np.asarray(perm, dtype=np.int64)
        plant = None
        if self.plant is not None:
            plant = RdPlant(self.plant.e[perm], self.plant.S, self.plant.C[:, perm], self.plant.coeffs)
        return RdInstance(self.field, self.n, self.k, self.r, self.basis[:, perm], self.y[perm], self.seed, plant)

    def punctured(self, p: int) -> "RdInstance":
        """Укорочение: отбрасываются последние p координат"""
        keep = self.n - p
        plant = None
        if self.plant is not None:
            plant = RdPlant(self.plant.e[:keep], self.plant.S, self.plant.C[:, :keep], self.plant.coeffs)
        return RdInstance(self.field, keep, self.k, self.r, self.basis[:, :keep], self.y[:keep], self.seed, plant)


@dataclass(eq=False)
class MinRankInstance:
    """Экземпляр MinRank: найти x ≠ 0 с rank(Σ x_i M_i) ≤ r"""
    base: PrimeField
    m: int
    n: int
    K: int
    r: int
    matrices: np.ndarray     # (K, m, n)
    seed: Optional[int] = None
    x: Optional[np.ndarray] = None
    extension: Optional[ExtField] = dc_field(default=None)

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def params(self) -> Dict[str, int]:
        return {"q": self.q, "m": self.m, "n": self.n, "K": self.K, "r": self.r}

    def combination(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64) % self.q
        return np.tensordot(x, self.matrices, axes=(0, 0)) % self.q

    def is_solution(self, x) -> bool:
        x = np.asarray(x, dtype=np.int64) % self.q
        if x.shape != (self.K,) or not x.any():
            return False
        return matrix_rank(self.combination(x), self.q) <= self.r


Instance = Union[RdInstance, MinRankInstance]


# ---------------------------------------------------------------------------
# Генерация
# ---------------------------------------------------------------------------

def _full_rank_matrix(rows: int, cols: int, q: int, rng: np.random.Generator) -> np.ndarray:
    target = min(rows, cols)
    while True:
        candidate = rng.integers(0, q, size=(rows, cols), dtype=np.int64)
        if matrix_rank(candidate, q) == target:
            return candidate


def gen_rd(q: int, m: int, n: int, k: int, r: int, seed: Optional[int] = None,
           modulus=None) -> RdInstance:
    """
    Случайный экземпляр RD с заложенной ошибкой ранга ровно r.

    Код пересэмплируется, пока левый (k+1)×(k+1) блок расширенного генератора
    не станет обратимым.
    """
    if r <= 0:
        raise PreconditionError(f"r={r} must be positive")
    if k < 0 or k + 1 >= n:
        raise PreconditionError(f"need 0 <= k and k + 1 < n, got n={n}, k={k}")
    if r > min(m, n):
        raise PreconditionError(f"r={r} exceeds min(m, n)={min(m, n)}")

    field = ExtField(PrimeField(q), m, modulus)
    rng = np.random.default_rng(seed)
    attempts = 0
    while True:
        attempts += 1
        basis = field.random(rng, (k, n))
        S = _full_rank_matrix(m, r, q, rng)
        C = _full_rank_matrix(r, n, q, rng)
        e = embed(S @ C % q)
        coeffs = field.random(rng, k)
        codeword = field.mul(coeffs[:, None, :], basis).sum(axis=0) % q if k else field.zeros(n)
        y = field.add(codeword, e)
        inst = RdInstance(field, n, k, r, basis, y, seed, RdPlant(e, S, C, coeffs))
        try:
            inst.systematic
        except SingularBlockError:
            logger.debug(f"gen_rd: вырожденный систематический блок, попытка {attempts}")
            continue
        logger.info(f"Сгенерирован экземпляр RD (q={q}, m={m}, n={n}, k={k}, r={r}), попыток: {attempts}")
        return inst


def gen_minrank(q: int, m: int, n: int, K: int, r: int, planted: bool = True,
                seed: Optional[int] = None) -> MinRankInstance:
    """Случайный экземпляр MinRank; при planted подгоняется M_K так, что Σ x_i M_i = L, rank L ≤ r"""
    if K < 1 or m < 1 or n < 1 or r < 0:
        raise PreconditionError(f"invalid MinRank dimensions m={m}, n={n}, K={K}, r={r}")
    base = PrimeField(q)
    rng = np.random.default_rng(seed)
    matrices = rng.integers(0, q, size=(K, m, n), dtype=np.int64)
    if not planted:
        return MinRankInstance(base, m, n, K, r, matrices, seed)

    if K > (m - r) * (n - r):
        logger.warning(f"K={K} > (m-r)(n-r)={(m - r) * (n - r)}: решение, вероятно, не единственно")
    while True:
        x = rng.integers(0, q, size=K, dtype=np.int64)
        if x[-1] != 0:
            break
    low_rank = (rng.integers(0, q, size=(m, r), dtype=np.int64)
                @ rng.integers(0, q, size=(r, n), dtype=np.int64)) % q
    partial = np.tensordot(x[:-1], matrices[:-1], axes=(0, 0)) % q
    matrices[-1] = (base.inv(x[-1]) * (low_rank - partial)) % q
    return MinRankInstance(base, m, n, K, r, matrices, seed, x)


def rd_to_minrank(inst: RdInstance) -> MinRankInstance:
    """
    Вложение RD -> MinRank: K = m(k+1) матриц Mat(α^{i-1} c_j) по базису расширенного кода
    (c_1..c_k, y). Индекс матрицы: j·m + (i-1).
    """
    field = inst.field
    generator = inst.extended_generator
    powers = np.stack([field.alpha_power(i) for i in range(field.m)])      # (m, m)
    products = field.mul(generator[:, None, :, :], powers[None, :, None, :])  # (k+1, m, n, m)
    # Mat(v) = v^T: (m координат) × n
    matrices = np.swapaxes(products, -1, -2).reshape(-1, field.m, inst.n) % field.q
    x = None
    if inst.plant is not None:
        x = np.zeros((inst.k + 1, field.m), dtype=np.int64)
        x[: inst.k] = field.neg(inst.plant.coeffs)
        x[inst.k, 0] = 1
        x = x.reshape(-1)
    return MinRankInstance(field.base, field.m, inst.n, matrices.shape[0], inst.r, matrices,
                           inst.seed, x, extension=field)


# ---------------------------------------------------------------------------
# Переборные оракулы
# ---------------------------------------------------------------------------

def gaussian_binomial(m: int, r: int, q: int) -> int:
    """Число r-мерных подпространств F_q^m"""
    if r < 0 or r > m:
        return 0
    num, den = 1, 1
    for i in range(r):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def iter_subspaces(m: int, r: int, q: int) -> Iterator[np.ndarray]:
    """Все r-мерные подпространства F_q^m в виде базисов r×m в приведенной ступенчатой форме"""
    for pivots in combinations(range(m), r):
        free = [(i, c) for i, pivot in enumerate(pivots) for c in range(pivot + 1, m) if c not in pivots]
        for values in product(range(q), repeat=len(free)):
            B = np.zeros((r, m), dtype=np.int64)
            B[np.arange(r), list(pivots)] = 1
            for (i, c), value in zip(free, values):
                B[i, c] = value
            yield B


def brute_force_rd(inst: RdInstance, limit: Optional[int] = None) -> Optional[np.ndarray]:
    """
    Перебор носителей: для каждого r-мерного подпространства E ⊂ F_q^m решается линейная
    система над F_q на e с носителем в E и y - e ∈ C.

    Raises:
        FeasibilityError: число подпространств превышает лимит
    """
    limit = BRUTE_FORCE_LIMIT if limit is None else limit
    field, q, m, n, r = inst.field, inst.q, inst.m, inst.n, inst.r
    count = gaussian_binomial(m, r, q)
    if count > limit:
        raise FeasibilityError(f"{count} supports exceed brute-force limit {limit}")

    H = inst.code_parity                                              # (l, n, m)
    mult = np.stack([[field.mult_matrix(h) for h in row] for row in H]) if H.size else np.zeros((0, n, m, m), dtype=np.int64)
    rhs = (field.mul(inst.y[None], H).sum(axis=1) % q).reshape(-1)    # (l·m,)
    checks = H.shape[0]
    logger.info(f"Перебор RD: {count} носителей, {checks * m} уравнений на {r * n} неизвестных")

    for B in iter_subspaces(m, r, q):
        # коэффициент при X_{s,j}: b_s · h_{l,j}, развернутый по координатам
        coef = np.einsum("ljcd,sd->lcsj", mult, B) % q
        X = solve(coef.reshape(checks * m, r * n), rhs, q)
        if X is None:
            continue
        e = np.einsum("sj,sd->jd", X.reshape(r, n), B) % q
        logger.debug(f"Перебор RD: найдено решение веса {rank_weight(e, field)}")
        return e
    return None


def brute_force_minrank(inst: MinRankInstance, limit: Optional[int] = None) -> Optional[np.ndarray]:
    """
    Перебор проективных представителей x (первая ненулевая координата равна 1)
    в каноническом порядке; возвращается первый x с rank(Σ x_i M_i) ≤ r.
    """
    limit = BRUTE_FORCE_LIMIT if limit is None else limit
    q, K = inst.q, inst.K
    count = (q ** K - 1) // (q - 1)
    if count > limit:
        raise FeasibilityError(f"{count} projective points exceed brute-force limit {limit}")
    logger.info(f"Перебор MinRank: {count} проективных точек")

    for lead in range(K):
        tail_len = K - lead - 1
        tails = np.array(list(product(range(q), repeat=tail_len)), dtype=np.int64).reshape(-1, tail_len)
        stack = inst.matrices[lead][None] + np.tensordot(tails, inst.matrices[lead + 1:], axes=(1, 0))
        ranks = batch_rank(stack % q, q)
        hits = np.flatnonzero(ranks <= inst.r)
        if hits.size:
            x = np.zeros(K, dtype=np.int64)
            x[lead] = 1
            x[lead + 1:] = tails[hits[0]]
            return x
    return None


# ---------------------------------------------------------------------------
# Сериализация
# ---------------------------------------------------------------------------

def _lists(arr) -> Any:
    return np.asarray(arr, dtype=np.int64).tolist()


def instance_to_dict(inst: Instance, include_plant: bool = True) -> Dict[str, Any]:
    if isinstance(inst, RdInstance):
        data: Dict[str, Any] = {
            "format": FORMAT_NAME,
            "version": REPORT_FORMAT_VERSION,
            "type": "rd",
            **inst.field.to_dict(),
            "n": inst.n,
            "k": inst.k,
            "r": inst.r,
            "seed": inst.seed,
            "basis": _lists(inst.basis),
            "y": _lists(inst.y),
        }
        if include_plant and inst.plant is not None:
            data["plant"] = {
                "e": _lists(inst.plant.e),
                "S": _lists(inst.plant.S),
                "C": _lists(inst.plant.C),
                "coeffs": _lists(inst.plant.coeffs),
            }
        return data

    data = {
        "format": FORMAT_NAME,
        "version": REPORT_FORMAT_VERSION,
        "type": "minrank",
        "q": inst.q,
        "m": inst.m,
        "n": inst.n,
        "K": inst.K,
        "r": inst.r,
        "seed": inst.seed,
        "matrices": _lists(inst.matrices),
    }
    if inst.extension is not None:
        data["modulus"] = list(inst.extension.modulus)
    if include_plant and inst.x is not None:
        data["plant"] = {"x": _lists(inst.x)}
    return data


def _array(data: Dict[str, Any], key: str, shape: Tuple[int, ...]) -> np.ndarray:
    try:
        arr = np.asarray(data[key], dtype=np.int64)
    except KeyError:
        raise InstanceFormatError(f"missing key '{key}'")
    except (TypeError, ValueError) as e:
        raise InstanceFormatError(f"'{key}' is not an integer array: {e}")
    if arr.size == 0 and 0 in shape:
        return arr.reshape(shape)
    if arr.shape != shape:
        raise InstanceFormatError(f"'{key}' has shape {arr.shape}, expected {shape}")
    return arr


def instance_from_dict(data: Dict[str, Any]) -> Instance:
    if not isinstance(data, dict) or data.get("format") != FORMAT_NAME:
        raise InstanceFormatError("not a rankforge instance file")
    kind = data.get("type")
    try:
        q, m, n, r = int(data["q"]), int(data["m"]), int(data["n"]), int(data["r"])
    except (KeyError, TypeError, ValueError) as e:
        raise InstanceFormatError(f"bad header: {e}")
    seed = data.get("seed")

    if kind == "rd":
        k = int(data.get("k", -1))
        field = ExtField(PrimeField(q), m, data.get("modulus"))
        basis = _array(data, "basis", (k, n, m)) % q
        y = _array(data, "y", (n, m)) % q
        plant = None
        if "plant" in data:
            p = data["plant"]
            plant = RdPlant(
                _array(p, "e", (n, m)),
                _array(p, "S", (m, r)),
                _array(p, "C", (r, n)),
                _array(p, "coeffs", (k, m)),
            )
        return RdInstance(field, n, k, r, basis, y, seed, plant)

    if kind == "minrank":
        K = int(data.get("K", 0))
        matrices = _array(data, "matrices", (K, m, n)) % q
        x = _array(data["plant"], "x", (K,)) if "plant" in data else None
        extension = ExtField(PrimeField(q), m, data["modulus"]) if data.get("modulus") else None
        return MinRankInstance(PrimeField(q), m, n, K, r, matrices, seed, x, extension)

    raise InstanceFormatError(f"unknown instance type '{kind}'")


def dumps_instance(inst: Instance, include_plant: bool = True) -> str:
    return json.dumps(instance_to_dict(inst, include_plant), separators=(",", ":")) + "\n"


def loads_instance(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"invalid JSON: {e}")
    return instance_from_dict(data)


async def save_instance(path: str, inst: Instance, include_plant: bool = True) -> None:
    async with aiofiles.open(path, "w", encoding="utf-8") as f:
        await f.write(dumps_instance(inst, include_plant))
    logger.info(f"Экземпляр сохранен: {path}")


async def load_instance(path: str) -> Instance:
    try:
        async with aiofiles.open(path, "r", encoding="utf-8") as f:
            text = await f.read()
    except FileNotFoundError:
        raise InstanceFormatError(f"instance file not found: {path}")
    return loads_instance(text)


def fingerprint(inst: Instance) -> str:
    """SHA-256 канонической сериализации заложенного решения (или всего экземпляра без него)"""
    data = instance_to_dict(inst)
    payload = data.get("plant", data)
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
