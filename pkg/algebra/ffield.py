"""
@file: algebra/ffield.py
@description: Арифметика в простом поле F_q и в расширении F_{q^m} поверх galois, развертка над F_q
@dependencies: numpy, galois, config.py, utils/error_handler.py
@created: 2025-01-21
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import galois
import numpy as np

from config import MAX_PRIME
from utils.error_handler import FieldMismatchError, PreconditionError

logger = logging.getLogger(__name__)


def is_prime(q: int) -> bool:
    return q >= 2 and bool(galois.is_prime(int(q)))


def largest_prime_below(x: float) -> int:
    """Наибольшее простое число, строго меньшее x"""
    candidate = int(np.ceil(x)) - 1
    if candidate < 2:
        raise PreconditionError(f"no prime below {x}")
    return int(galois.prev_prime(candidate))


@dataclass(frozen=True)
class PrimeField:
    """Простое поле F_q; элементы - канонические представители 0..q-1"""
    q: int

    def __post_init__(self):
        if not isinstance(self.q, (int, np.integer)) or not is_prime(int(self.q)):
            raise PreconditionError(f"q={self.q} is not prime")
        if self.q > MAX_PRIME:
            raise PreconditionError(f"q={self.q} exceeds supported bound {MAX_PRIME}")

    @cached_property
    def gf(self) -> type:
        """Класс массивов galois над F_q"""
        return galois.GF(int(self.q))

    @cached_property
    def inverse_table(self) -> np.ndarray:
        # 0 отображается в 0; вызывающий код обязан проверять делитель
        table = np.zeros(self.q, dtype=np.int64)
        table[1:] = np.asarray(np.reciprocal(self.gf(np.arange(1, self.q))), dtype=np.int64)
        return table

    def add(self, a, b):
        return (np.asarray(a, dtype=np.int64) + b) % self.q

    def sub(self, a, b):
        return (np.asarray(a, dtype=np.int64) - b) % self.q

    def neg(self, a):
        return (-np.asarray(a, dtype=np.int64)) % self.q

    def mul(self, a, b):
        return (np.asarray(a, dtype=np.int64) * b) % self.q

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64) % self.q
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in F_q")
        return self.inverse_table[a]

    def random(self, rng: np.random.Generator, shape=()) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    def random_nonzero(self, rng: np.random.Generator, shape=()) -> np.ndarray:
        return rng.integers(1, self.q, size=shape, dtype=np.int64)

    def to_dict(self) -> dict:
        return {"q": int(self.q)}


# ---------------------------------------------------------------------------
# Многочлены над F_q (в rankforge коэффициенты по возрастанию степени, в galois - по убыванию)
# ---------------------------------------------------------------------------

def _poly(modulus: Sequence[int], q: int) -> galois.Poly:
    return galois.Poly([int(c) % q for c in modulus][::-1], field=galois.GF(q))


def is_irreducible(modulus: Sequence[int], q: int) -> bool:
    poly = _poly(modulus, q)
    return poly.degree >= 1 and bool(poly.is_irreducible())


def find_irreducible(q: int, m: int) -> Tuple[int, ...]:
    """
    Первый неприводимый унитарный многочлен степени m в порядке возрастания
    кода sum c_i q^i (старший коэффициент c_{m-1} наиболее значим)
    """
    if m < 1:
        raise PreconditionError(f"no irreducible polynomial of degree {m} over F_{q}")
    poly = galois.irreducible_poly(q, m, method="min")
    candidate = tuple(int(c) for c in poly.coeffs[::-1])
    logger.debug(f"Модуль для F_{{{q}^{m}}}: {candidate}")
    return candidate


# ---------------------------------------------------------------------------
# Расширение F_{q^m}
# ---------------------------------------------------------------------------

def _shape_tuple(shape) -> Tuple[int, ...]:
    if isinstance(shape, (int, np.integer)):
        return (int(shape),)
    return tuple(int(s) for s in shape)


class ExtField:
    """
    Поле F_{q^m} = F_q[x]/(f). Элемент - вектор длины m в базисе (1, α, ..., α^{m-1}),
    α - класс вычетов x. Умножение, степени и обратные считает galois.GF(q^m) с тем же
    модулем; массивы (..., m) переводятся в его элементы и обратно через to_gf/from_gf.
    """

    def __init__(self, base: Union[PrimeField, int], m: int, modulus: Optional[Sequence[int]] = None):
        if not isinstance(base, PrimeField):
            base = PrimeField(int(base))
        if m < 1:
            raise PreconditionError(f"extension degree m={m} must be positive")
        self.base = base
        self.q = base.q
        self.m = int(m)
        if modulus is None:
            modulus = find_irreducible(self.q, self.m)
        modulus = tuple(int(c) % self.q for c in modulus)
        if len(modulus) != self.m + 1 or modulus[-1] != 1:
            raise PreconditionError(f"modulus {modulus} is not monic of degree {m}")
        if not is_irreducible(modulus, self.q):
            raise PreconditionError(f"modulus {modulus} is reducible over F_{self.q}")
        self.modulus = modulus
        if self.m == 1:
            # F_q[x]/(x + c) совпадает с F_q
            self.gf = base.gf
        else:
            self.gf = galois.GF(self.q ** self.m, irreducible_poly=_poly(modulus, self.q), verify=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtField) and (self.q, self.m, self.modulus) == (other.q, other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.q, self.m, self.modulus))

    def __repr__(self) -> str:
        return f"ExtField(q={self.q}, m={self.m}, modulus={self.modulus})"

    # --- перевод в galois ---

    def to_gf(self, a) -> galois.FieldArray:
        """Массив координат (..., m) -> элементы galois.GF(q^m) формы (...)"""
        a = np.asarray(a, dtype=np.int64) % self.q
        if a.shape[-1:] != (self.m,):
            raise FieldMismatchError(f"expected trailing axis {self.m}, got {a.shape}")
        if self.m == 1:
            return self.gf(a[..., 0])
        if a.size == 0:
            return self.gf.Zeros(a.shape[:-1])
        return self.gf.Vector(np.ascontiguousarray(a[..., ::-1]))

    def from_gf(self, x) -> np.ndarray:
        """Элементы galois.GF(q^m) -> массив координат (..., m) по возрастанию степени α"""
        x = self.gf(x)
        if self.m == 1:
            return np.asarray(x, dtype=np.int64)[..., None]
        if x.size == 0:
            return np.zeros(x.shape + (self.m,), dtype=np.int64)
        return np.ascontiguousarray(np.asarray(x.vector(), dtype=np.int64)[..., ::-1])

    # --- конструкторы элементов ---

    def zeros(self, shape=()) -> np.ndarray:
        return np.zeros(_shape_tuple(shape) + (self.m,), dtype=np.int64)

    def one(self) -> np.ndarray:
        e = np.zeros(self.m, dtype=np.int64)
        e[0] = 1
        return e

    def alpha_power(self, i: int) -> np.ndarray:
        """Координаты α^i"""
        alpha = np.zeros(self.m, dtype=np.int64)
        if self.m > 1:
            alpha[1] = 1
        else:
            alpha[0] = (-self.modulus[0]) % self.q
        return self.pow(alpha, i) if i else self.one()

    def from_base(self, values) -> np.ndarray:
        """Вложение F_q -> F_{q^m}"""
        values = np.asarray(values, dtype=np.int64) % self.q
        out = np.zeros(values.shape + (self.m,), dtype=np.int64)
        out[..., 0] = values
        return out

    def random(self, rng: np.random.Generator, shape=()) -> np.ndarray:
        return rng.integers(0, self.q, size=_shape_tuple(shape) + (self.m,), dtype=np.int64)

    def element(self, coords: Iterable[int]) -> "ExtElement":
        return ExtElement(self, tuple(int(c) % self.q for c in coords))

    # --- арифметика ---

    def add(self, a, b) -> np.ndarray:
        return (np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)) % self.q

    def sub(self, a, b) -> np.ndarray:
        return (np.asarray(a, dtype=np.int64) - np.asarray(b, dtype=np.int64)) % self.q

    def neg(self, a) -> np.ndarray:
        return (-np.asarray(a, dtype=np.int64)) % self.q

    def scale(self, a, s) -> np.ndarray:
        """Умножение элементов a на скаляры s из F_q (s транслируется по ведущим осям)"""
        s = np.asarray(s, dtype=np.int64)
        return (np.asarray(a, dtype=np.int64) * s[..., None]) % self.q

    def mul(self, a, b) -> np.ndarray:
        return self.from_gf(self.to_gf(a) * self.to_gf(b))

    def pow(self, a, exponent: int) -> np.ndarray:
        return self.from_gf(self.to_gf(a) ** int(exponent))

    def inv(self, a) -> np.ndarray:
        x = self.to_gf(a)
        if np.any(x == 0):
            raise ZeroDivisionError("inverse of zero in F_{q^m}")
        return self.from_gf(np.reciprocal(x))

    def is_zero(self, a) -> np.ndarray:
        return ~np.asarray(a).any(axis=-1)

    def mult_matrix(self, a) -> np.ndarray:
        """Матрица m×m над F_q оператора x -> a·x в базисе (1, α, ...)"""
        basis = np.eye(self.m, dtype=np.int64)
        return self.mul(np.asarray(a, dtype=np.int64)[None, :], basis).T

    # --- сериализация ---

    def to_dict(self) -> dict:
        return {"q": int(self.q), "m": int(self.m), "modulus": [int(c) for c in self.modulus]}

    @classmethod
    def from_dict(cls, data: dict) -> "ExtField":
        return cls(PrimeField(int(data["q"])), int(data["m"]), data.get("modulus"))


@dataclass(frozen=True)
class ExtElement:
    """Скалярный элемент F_{q^m} для поэлементного API"""
    field: ExtField
    coords: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.field.m:
            raise PreconditionError(f"element has {len(self.coords)} coordinates, field degree is {self.field.m}")

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=np.int64)

    def _check(self, other: "ExtElement") -> None:
        if not isinstance(other, ExtElement) or other.field != self.field:
            raise FieldMismatchError("elements belong to different fields")

    def __add__(self, other: "ExtElement") -> "ExtElement":
        self._check(other)
        return self.field.element(self.field.add(self.array, other.array))

    def __sub__(self, other: "ExtElement") -> "ExtElement":
        self._check(other)
        return self.field.element(self.field.sub(self.array, other.array))

    def __mul__(self, other: "ExtElement") -> "ExtElement":
        return ext_mul(self, other)

    def is_zero(self) -> bool:
        return not any(self.coords)


def ext_mul(a: ExtElement, b: ExtElement) -> ExtElement:
    """Произведение в F_{q^m}; элементы должны принадлежать одному полю"""
    a._check(b)
    return a.field.element(a.field.mul(a.array, b.array))


def _as_array(coeffs: Union[Sequence[ExtElement], np.ndarray], field: Optional[ExtField]) -> Tuple[np.ndarray, Optional[ExtField]]:
    if isinstance(coeffs, np.ndarray):
        return coeffs.astype(np.int64, copy=False), field
    items = list(coeffs)
    if items and isinstance(items[0], ExtElement):
        first = items[0].field
        for item in items:
            if item.field != first:
                raise FieldMismatchError("elements belong to different fields")
        return np.asarray([item.coords for item in items], dtype=np.int64).reshape(len(items), first.m), first
    return np.asarray(items, dtype=np.int64), field


def unfold(coeffs: Union[Sequence[ExtElement], np.ndarray], field: Optional[ExtField] = None) -> np.ndarray:
    """
    Развертка: уравнение sum a_j m_j = 0 над F_{q^m} с неизвестными из F_q
    эквивалентно m уравнениям над F_q. Возвращает массив (m, ...) где строка k -
    k-е координаты коэффициентов.
    """
    arr, field = _as_array(coeffs, field)
    if field is not None and arr.shape[-1] != field.m:
        raise FieldMismatchError(f"coefficients have {arr.shape[-1]} coordinates, field degree is {field.m}")
    return np.moveaxis(arr, -1, 0).copy()


def coordinate_matrix(v: Union[Sequence[ExtElement], np.ndarray], field: Optional[ExtField] = None) -> np.ndarray:
    """Mat(v): матрица m×n координат вектора v из F_{q^m}^n"""
    arr, _ = _as_array(v, field)
    return arr.T.copy()


def rank_weight(v: Union[Sequence[ExtElement], np.ndarray], field: Optional[ExtField] = None) -> int:
    """Ранговый вес: ранг над F_q матрицы Mat(v)"""
    from algebra.linalg import matrix_rank

    arr, field = _as_array(v, field)
    if arr.size == 0:
        return 0
    q = field.q if field is not None else None
    if q is None:
        raise PreconditionError("rank_weight needs the field for raw arrays")
    return matrix_rank(coordinate_matrix(arr), q)


def embed(coord_matrix: np.ndarray) -> np.ndarray:
    """Обратно к Mat: из матрицы m×n над F_q - вектор (n, m) элементов F_{q^m}"""
    return np.asarray(coord_matrix, dtype=np.int64).T.copy()


def ext_matvec_base(field: ExtField, vec: np.ndarray, mat: np.ndarray) -> np.ndarray:
    """Произведение строки (r,) над F_{q^m} на матрицу r×n над F_q"""
    return np.einsum("im,ij->jm", np.asarray(vec, dtype=np.int64), np.asarray(mat, dtype=np.int64) % field.q) % field.q


def base_matmul_ext(field: ExtField, mat: np.ndarray, ext: np.ndarray) -> np.ndarray:
    """Произведение матрицы a×b над F_q на матрицу b×c над F_{q^m}"""
    return np.einsum("ab,bcm->acm", np.asarray(mat, dtype=np.int64) % field.q, np.asarray(ext, dtype=np.int64)) % field.q


def elements_to_lists(arr: np.ndarray) -> List:
    return np.asarray(arr, dtype=np.int64).tolist()
