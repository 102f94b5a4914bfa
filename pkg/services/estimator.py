"""
@file: services/estimator.py
@description: Оценка битовой сложности атак MaxMinors, Support Minors и комбинаторной атаки,
              перебор параметров (a, p, b, n') и пресеты параметров ROLLO, RQC, Loidreau,
              GeMSS, Rainbow
@dependencies: algebra/combinatorics.py, services/maxminors.py, services/supportminors.py, config.py
@created: 2025-01-21
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from config import DEFAULT_OMEGA
from algebra.combinatorics import binom, log2_int
from algebra.ffield import largest_prime_below
from services.maxminors import is_overdetermined, maxmin_shape, minimal_hybrid_a
from services.supportminors import dexp, sm_counts
from utils.error_handler import PreconditionError, UsageError

logger = logging.getLogger(__name__)

# Порядок вариантов для детерминированного выбора минимума
VARIANTS = (
    "overdetermined",
    "punctured",
    "hybrid",
    "sm-minrank",
    "sm-rd-combined",
    "combinatorial",
)
SOLVERS = ("strassen", "wiedemann")
SOLVER_POLICIES = ("best", "strassen", "wiedemann", "degree")
REGIMES = ("auto", "generic", "binary")

# Верхняя граница степени b при переборе
DEFAULT_MAX_DEGREE = 10


@dataclass(frozen=True)
class AttackPlan:
    """Вариант атаки с параметрами и log2 стоимости"""
    variant: str
    log2_cost: float
    a: int = 0
    p: int = 0
    b: int = 0
    n_prime: int = 0
    omega: float = DEFAULT_OMEGA
    solver: Optional[str] = None
    formula: str = ""
    note: str = ""

    @property
    def sort_key(self) -> Tuple:
        return (self.log2_cost, VARIANTS.index(self.variant), self.a, self.p, self.b, self.n_prime)

    @property
    def rounded(self) -> int:
        return int(math.floor(self.log2_cost + 0.5))

    @property
    def starred(self) -> bool:
        return self.solver == "wiedemann"

    def to_dict(self) -> Dict:
        data = asdict(self)
        data["log2_cost"] = round(self.log2_cost, 4)
        return data


@dataclass
class ComplexityReport:
    """Все найденные планы для одной задачи и минимальный из них"""
    scheme: str
    params: Dict[str, int]
    plans: List[AttackPlan] = field(default_factory=list)
    ratio: Optional[float] = None

    @property
    def minimum(self) -> Optional[AttackPlan]:
        modeled = [plan for plan in self.plans if not math.isnan(plan.log2_cost)]
        if not modeled:
            return None
        return min(modeled, key=lambda plan: plan.sort_key)

    def best(self, variant: str) -> Optional[AttackPlan]:
        candidates = [plan for plan in self.plans if plan.variant == variant]
        return min(candidates, key=lambda plan: plan.sort_key) if candidates else None

    def to_dict(self) -> Dict:
        minimum = self.minimum
        return {
            "scheme": self.scheme,
            "params": dict(self.params),
            "ratio": None if self.ratio is None else round(self.ratio, 4),
            "plans": [plan.to_dict() for plan in self.plans],
            "minimum": minimum.to_dict() if minimum else None,
        }


@dataclass(frozen=True)
class RdProblem:
    m: int
    n: int
    k: int
    r: int
    q: int = 2
    scheme: str = ""

    @property
    def params(self) -> Dict[str, int]:
        return {"q": self.q, "m": self.m, "n": self.n, "k": self.k, "r": self.r}


@dataclass(frozen=True)
class MinRankProblem:
    q: int
    m: int
    n: int
    K: int
    r: int
    scheme: str = ""
    regime: str = "auto"

    @property
    def params(self) -> Dict[str, int]:
        return {"q": self.q, "m": self.m, "n": self.n, "K": self.K, "r": self.r}


Problem = Union[RdProblem, MinRankProblem]


def _omega(omega: Optional[float]) -> float:
    return DEFAULT_OMEGA if omega is None else omega


def _log2_q(q: int) -> float:
    return math.log2(q)


# ---------------------------------------------------------------------------
# MaxMinors: переопределенный случай, укорачивание, гибрид
# ---------------------------------------------------------------------------

def overdetermination_ratio(m: int, n: int, k: int, r: int) -> float:
    """m·C(n-k-1, r) / (C(n, r) - 1)"""
    rows, cols = maxmin_shape(m, n, k, r)
    if cols <= 1:
        raise PreconditionError("C(n, r) - 1 must be positive")
    return float(Fraction(rows, cols - 1))


def cost_overdetermined(m: int, n: int, k: int, r: int, p: int = 0, omega: Optional[float] = None) -> float:
    """log2(m·C(n-p-k-1, r)·C(n-p, r)^(ω-1))"""
    if p < 0 or not is_overdetermined(m, n, k, r, p):
        raise PreconditionError(f"(m={m}, n={n}, k={k}, r={r}) with p={p} is not overdetermined")
    rows, cols = maxmin_shape(m, n, k, r, p)
    return log2_int(rows) + (_omega(omega) - 1) * log2_int(cols)


def cost_hybrid(m: int, n: int, k: int, r: int, a: Optional[int] = None, q: int = 2,
                omega: Optional[float] = None) -> float:
    """log2(q^(ar)·m·C(n-k-1, r)·C(n-a, r)^(ω-1)); a по умолчанию минимальное"""
    if a is None:
        a = minimal_hybrid_a(m, n, k, r)
        if a is None:
            raise PreconditionError("no specialization makes the system overdetermined")
    if a < 0 or not is_overdetermined(m, n, k, r, 0, a):
        raise PreconditionError(f"a={a} does not make the system overdetermined")
    rows, cols = maxmin_shape(m, n, k, r, 0, a)
    return a * r * _log2_q(q) + log2_int(rows) + (_omega(omega) - 1) * log2_int(cols)


def valid_puncturings(m: int, n: int, k: int, r: int) -> List[int]:
    return [p for p in range(0, max(n - k - r, 0)) if is_overdetermined(m, n, k, r, p)]


def best_puncturing(m: int, n: int, k: int, r: int, omega: Optional[float] = None) -> Optional[Tuple[int, float]]:
    """Наилучшее p (с учетом p = 0) и его стоимость"""
    best = None
    for p in valid_puncturings(m, n, k, r):
        cost = cost_overdetermined(m, n, k, r, p, omega)
        if best is None or cost < best[1]:
            best = (p, cost)
    return best


# ---------------------------------------------------------------------------
# Support Minors
# ---------------------------------------------------------------------------

def _is_binary(q: int, regime: str) -> bool:
    if regime not in REGIMES:
        raise UsageError(f"unknown regime {regime!r}, expected one of {REGIMES}")
    if regime == "auto":
        return q == 2
    return regime == "binary"


def _degree_allowed(q: int, b: int, binary: bool) -> bool:
    return binary or q > b


def sm_condition(q: int, m: int, n: int, K: int, r: int, b: int, regime: str = "auto") -> bool:
    binary = _is_binary(q, regime)
    _, monomials = sm_counts(q, m, n, K, r, b, binary)
    return monomials - 1 <= dexp(q, m, n, K, r, b, binary)


def minimal_sm_degree(q: int, m: int, n: int, K: int, r: int, regime: str = "auto",
                      max_degree: int = DEFAULT_MAX_DEGREE) -> Optional[int]:
    binary = _is_binary(q, regime)
    for b in range(1, min(r + 1, max_degree) + 1):
        if regime == "auto" and not _degree_allowed(q, b, binary):
            return None
        if sm_condition(q, m, n, K, r, b, regime):
            return b
    return None


def cost_sm(q: int, m: int, n: int, K: int, r: int, b: Optional[int] = None,
            n_prime: Optional[int] = None, solver: str = "wiedemann", regime: str = "auto",
            omega: Optional[float] = None) -> float:
    """
    Wiedemann: log2(K(r+1)·M²), M - число мономов на n' столбцах;
    strassen: log2(M^ω). b по умолчанию минимальное, удовлетворяющее условию.
    """
    n_prime = n if n_prime is None else n_prime
    if not r + 1 <= n_prime <= n:
        raise PreconditionError(f"n'={n_prime} outside [r + 1, n]")
    if b is None:
        b = minimal_sm_degree(q, m, n_prime, K, r, regime)
        if b is None:
            raise PreconditionError(f"no degree b < r + 2 linearizes at n'={n_prime}")
    if not sm_condition(q, m, n_prime, K, r, b, regime):
        raise PreconditionError(f"b={b} does not satisfy the linearization condition at n'={n_prime}")
    _, monomials = sm_counts(q, m, n_prime, K, r, b, _is_binary(q, regime))
    if solver == "wiedemann":
        return log2_int(K * (r + 1)) + 2 * log2_int(monomials)
    if solver == "strassen":
        return _omega(omega) * log2_int(monomials)
    raise UsageError(f"unknown solver {solver!r}")


def optimize_sm(q: int, m: int, n: int, K: int, r: int, regime: str = "auto",
                max_degree: int = DEFAULT_MAX_DEGREE) -> Optional[AttackPlan]:
    """Перебор n' с минимальной степенью b для каждого; выигрывает меньшая стоимость, затем (b, n')"""
    best: Optional[AttackPlan] = None
    for n_prime in range(r + 1, n + 1):
        b = minimal_sm_degree(q, m, n_prime, K, r, regime, max_degree)
        if b is None:
            continue
        cost = cost_sm(q, m, n, K, r, b, n_prime, regime=regime)
        plan = AttackPlan("sm-minrank", cost, b=b, n_prime=n_prime, solver="wiedemann",
                          formula="K(r+1)(C(n',r)·X_b)^2")
        if best is None or plan.sort_key < best.sort_key:
            best = plan
    return best


# ---------------------------------------------------------------------------
# RD: Support Minors + MaxMinors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CombinedTerms:
    A: int      # мономы
    B: int      # строки MaxMin
    C: int      # независимые строки Support Minors
    density_num: int
    density_den: int

    @property
    def holds(self) -> bool:
        return self.A - 1 <= self.B + self.C


def rd_combined_terms(q: int, m: int, n: int, k: int, r: int, b: int, a: int = 0, p: int = 0,
                      regime: str = "auto") -> CombinedTerms:
    """A_b, B_b, C_b и плотность D_b при K = mk+1, укорачивании p и специализации a столбцов"""
    binary = _is_binary(q, regime)
    K = m * k + 1
    n_punct = n - p
    n_cols = n_punct - a
    if n_cols < r + 1:
        raise PreconditionError(f"n - p - a = {n_cols} < r + 1")
    _, A = sm_counts(q, m, n_cols, K, r, b, binary)
    x_monomials = A // binom(n_cols, r)
    B = m * binom(n_punct - k - 1, r) * x_monomials
    C = dexp(q, m, n_cols, K, r, b, binary)
    num = B * binom(k + r + 1, r) + C * K * (r + 1)
    return CombinedTerms(A, B, C, num, B + C)


def _combined_costs(terms: CombinedTerms, a: int, r: int, q: int, omega: float) -> Dict[str, float]:
    guess = a * r * _log2_q(q)
    return {
        "wiedemann": guess + log2_int(terms.density_num) - log2_int(terms.density_den) + 2 * log2_int(terms.A),
        "strassen": guess + log2_int(terms.B + terms.C) + (omega - 1) * log2_int(terms.A),
    }


def _pick_solver(costs: Dict[str, float], policy: str, b: int) -> str:
    if policy == "best":
        return min(SOLVERS, key=lambda name: (costs[name], name))
    if policy == "degree":
        return "strassen" if b == 1 else "wiedemann"
    if policy in SOLVERS:
        return policy
    raise UsageError(f"unknown solver policy {policy!r}, expected one of {SOLVER_POLICIES}")


def minimal_combined_degree(q: int, m: int, n: int, k: int, r: int, a: int = 0, p: int = 0,
                            regime: str = "auto", max_degree: int = DEFAULT_MAX_DEGREE) -> Optional[int]:
    binary = _is_binary(q, regime)
    for b in range(1, min(r + 1, max_degree) + 1):
        if not _degree_allowed(q, b, binary):
            return None
        if rd_combined_terms(q, m, n, k, r, b, a, p, regime).holds:
            return b
    return None


def cost_rd_combined(q: int, m: int, n: int, k: int, r: int, b: Optional[int] = None, a: int = 0,
                     solver: str = "wiedemann", p: int = 0, omega: Optional[float] = None,
                     regime: str = "auto") -> float:
    """
    wiedemann: log2(q^(ar)·D_b·A_b²); strassen: log2(q^(ar)·(B_b+C_b)·A_b^(ω-1)).
    b по умолчанию минимальное с A_b - 1 <= B_b + C_b.
    """
    if b is None:
        b = minimal_combined_degree(q, m, n, k, r, a, p, regime)
        if b is None:
            raise PreconditionError("no degree b < r + 2 satisfies the combined condition")
    terms = rd_combined_terms(q, m, n, k, r, b, a, p, regime)
    if not terms.holds:
        raise PreconditionError(f"combined condition fails at b={b}, a={a}, p={p}")
    costs = _combined_costs(terms, a, r, q, _omega(omega))
    return costs[_pick_solver(costs, solver, b)]


def plan_rd_combined(q: int, m: int, n: int, k: int, r: int, a: int = 0, p: int = 0,
                     solver: str = "best", omega: Optional[float] = None,
                     max_degree: int = DEFAULT_MAX_DEGREE) -> Optional[AttackPlan]:
    b = minimal_combined_degree(q, m, n, k, r, a, p, max_degree=max_degree)
    if b is None:
        return None
    omega = _omega(omega)
    costs = _combined_costs(rd_combined_terms(q, m, n, k, r, b, a, p), a, r, q, omega)
    chosen = _pick_solver(costs, solver, b)
    formula = "q^(ar)·D_b·A_b^2" if chosen == "wiedemann" else "q^(ar)·(B_b+C_b)·A_b^(ω-1)"
    return AttackPlan("sm-rd-combined", costs[chosen], a=a, p=p, b=b, n_prime=n - p - a,
                      omega=omega, solver=chosen, formula=formula)


# ---------------------------------------------------------------------------
# Комбинаторная атака
# ---------------------------------------------------------------------------

def cost_combinatorial(m: int, n: int, k: int, r: int, q: int = 2) -> float:
    """log2((nm)²·q^(r·⌈m(k+1)/n⌉ - m))"""
    exponent = r * (-(-m * (k + 1) // n)) - m
    return 2 * log2_int(n * m) + exponent * _log2_q(q)


# ---------------------------------------------------------------------------
# Оптимизация
# ---------------------------------------------------------------------------

def _optimize_rd(problem: RdProblem, omega: float, solver: str, max_degree: int,
                 include_combined: bool) -> ComplexityReport:
    m, n, k, r, q = problem.m, problem.n, problem.k, problem.r, problem.q
    report = ComplexityReport(problem.scheme, problem.params)
    try:
        report.ratio = overdetermination_ratio(m, n, k, r)
    except PreconditionError:
        report.ratio = None

    if is_overdetermined(m, n, k, r):
        report.plans.append(AttackPlan("overdetermined", cost_overdetermined(m, n, k, r, 0, omega),
                                       omega=omega, solver="strassen",
                                       formula="m·C(n-k-1,r)·C(n,r)^(ω-1)"))
    punctured = [(p, cost_overdetermined(m, n, k, r, p, omega)) for p in valid_puncturings(m, n, k, r) if p > 0]
    if punctured:
        p, cost = min(punctured, key=lambda item: (item[1], item[0]))
        report.plans.append(AttackPlan("punctured", cost, p=p, omega=omega, solver="strassen",
                                       formula="m·C(n-p-k-1,r)·C(n-p,r)^(ω-1)"))

    a_min = minimal_hybrid_a(m, n, k, r)
    if a_min:
        report.plans.append(AttackPlan("hybrid", cost_hybrid(m, n, k, r, a_min, q, omega), a=a_min,
                                       omega=omega, solver="strassen",
                                       formula="q^(ar)·m·C(n-k-1,r)·C(n-a,r)^(ω-1)"))

    if include_combined:
        a_limit = a_min if a_min is not None else 0
        best: Optional[AttackPlan] = None
        for a in range(0, a_limit + 1):
            for p in range(0, max(n - k - r, 1)):
                if n - p - a < r + 1:
                    break
                plan = plan_rd_combined(q, m, n, k, r, a, p, solver, omega, max_degree)
                if plan is None:
                    break
                if best is None or plan.sort_key < best.sort_key:
                    best = plan
        if best is not None:
            report.plans.append(best)

    report.plans.append(AttackPlan("combinatorial", cost_combinatorial(m, n, k, r, q),
                                   formula="(nm)^2·q^(r·ceil(m(k+1)/n)-m)"))
    return report


def optimize(problem: Problem, omega: Optional[float] = None, solver: str = "best",
             max_degree: int = DEFAULT_MAX_DEGREE, include_combined: bool = True) -> ComplexityReport:
    """
    Полный перебор допустимых (p), (a), (b, n') и (a, p, b) для задачи; в отчете лучший план
    каждого варианта и общий минимум.
    """
    omega = _omega(omega)
    if isinstance(problem, RdProblem):
        report = _optimize_rd(problem, omega, solver, max_degree, include_combined)
    elif isinstance(problem, MinRankProblem):
        report = ComplexityReport(problem.scheme, problem.params)
        plan = optimize_sm(problem.q, problem.m, problem.n, problem.K, problem.r, problem.regime, max_degree)
        if plan is not None:
            report.plans.append(plan)
    else:
        raise UsageError(f"unsupported problem descriptor {type(problem).__name__}")
    minimum = report.minimum
    logger.info(
        f"Оценка {problem.scheme or problem.params}: "
        f"{'нет применимых планов' if minimum is None else f'{minimum.variant} {minimum.log2_cost:.2f}'}"
    )
    return report


# ---------------------------------------------------------------------------
# Кривые
# ---------------------------------------------------------------------------

def sweep(r: int, ratio: float = 1.18, mode: str = "n2k", n_min: int = 20, n_max: int = 250,
          omega: Optional[float] = None) -> List[Tuple[int, float]]:
    """
    Точки (n, log2 стоимости) при m - наибольшем простом меньше n/ratio и k = n/2.
    n2k: лучшее из укорачивания и гибрида; kn: базовая атака только в переопределенном случае.
    """
    if mode not in ("n2k", "kn"):
        raise UsageError(f"unknown sweep mode {mode!r}")
    points: List[Tuple[int, float]] = []
    for n in range(max(n_min, 2), n_max + 1, 1):
        if n % 2:
            continue
        k = n // 2
        m = largest_prime_below(n / ratio)
        if n - k - 1 < r:
            continue
        if mode == "kn":
            if is_overdetermined(m, n, k, r):
                points.append((n, cost_overdetermined(m, n, k, r, 0, omega)))
            continue
        candidates = []
        punct = best_puncturing(m, n, k, r, omega)
        if punct is not None:
            candidates.append(punct[1])
        a = minimal_hybrid_a(m, n, k, r)
        if a is not None:
            candidates.append(cost_hybrid(m, n, k, r, a, 2, omega))
        if candidates:
            points.append((n, min(candidates)))
    return points


def theoretical_maxmin_curve(r: int, ratio: float = 1.18, n_min: int = 10, n_max: int = 100,
                             omega: Optional[float] = None) -> List[Tuple[int, int, int, float]]:
    """(n, m, k, log2 стоимости): k = min(n/2, наибольшее k в переопределенном случае)"""
    points = []
    for n in range(n_min, n_max + 1):
        m = largest_prime_below(n / ratio)
        k = next((k for k in range(n // 2, 0, -1) if is_overdetermined(m, n, k, r)), None)
        if k is None:
            continue
        points.append((n, m, k, cost_overdetermined(m, n, k, r, 0, omega)))
    return points


# ---------------------------------------------------------------------------
# Пресеты
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PresetRow:
    scheme: str
    problem: Problem
    published: Dict[str, object]


# (схема, m, n, k, r, опубликованные a, p, b, стоимость)
ROLLO_RQC: Sequence[Tuple[str, int, int, int, int, int, int, int, int]] = (
    ("Loidreau", 128, 120, 80, 4, 0, 43, 0, 65),
    ("ROLLO-I-128", 79, 94, 47, 5, 0, 9, 0, 71),
    ("ROLLO-I-192", 89, 106, 53, 6, 0, 0, 0, 87),
    ("ROLLO-I-256", 113, 134, 67, 7, 3, 0, 1, 151),
    ("ROLLO-II-128", 83, 298, 149, 5, 0, 40, 0, 93),
    ("ROLLO-II-192", 107, 302, 151, 6, 0, 18, 0, 111),
    ("ROLLO-II-256", 127, 314, 157, 7, 0, 6, 1, 159),
    ("ROLLO-III-128", 101, 94, 47, 5, 0, 12, 0, 70),
    ("ROLLO-III-192", 107, 118, 59, 6, 0, 4, 0, 88),
    ("ROLLO-III-256", 131, 134, 67, 7, 0, 0, 1, 131),
    ("RQC-I", 97, 134, 67, 5, 0, 18, 0, 77),
    ("RQC-II", 107, 202, 101, 6, 0, 10, 0, 101),
    ("RQC-III", 137, 262, 131, 7, 3, 0, 0, 144),
)

# (схема, q, n (= m), K, r, опубликованные n', b, стоимость)
GEMSS_RAINBOW: Sequence[Tuple[str, int, int, int, int, int, int, int]] = (
    ("GeMSS128", 2, 174, 162, 34, 61, 2, 154),
    ("GeMSS192", 2, 265, 243, 52, 94, 2, 223),
    ("GeMSS256", 2, 354, 324, 73, 126, 3, 299),
    ("RedGeMSS128", 2, 177, 162, 35, 62, 2, 156),
    ("RedGeMSS192", 2, 266, 243, 53, 95, 2, 224),
    ("RedGeMSS256", 2, 358, 324, 74, 127, 3, 301),
    ("BlueGeMSS128", 2, 175, 162, 35, 63, 2, 158),
    ("BlueGeMSS192", 2, 265, 243, 53, 95, 2, 224),
    ("BlueGeMSS256", 2, 358, 324, 74, 127, 3, 301),
    ("Rainbow-Ia", 16, 96, 33, 64, 82, 3, 155),
    ("Rainbow-IIIc", 256, 140, 37, 104, 125, 5, 208),
    ("Rainbow-Vc", 256, 188, 49, 140, 169, 5, 272),
)

# (схема, блочная длина n, m, r, длина кода, размерность, опубликованные over/hybrid, a, under, b, comb).
# Строки 192 и 256 опубликованы для кода длины 2n - 10 и размерности n - 11: при буквальных
# 2n и n все три столбца выходят заметно выше (см. literal в строке пресета).
NEW_ROLLO: Sequence[Tuple[str, int, int, int, int, int, int, int, int, int, int]] = (
    ("new2ROLLO-I-128", 83, 73, 7, 166, 83, 233, 18, 180, 3, 213),
    ("new2ROLLO-I-192", 97, 89, 8, 184, 86, 258, 17, 197, 3, 283),
    ("new2ROLLO-I-256", 113, 103, 9, 216, 102, 408, 30, 283, 6, 376),
)

# (схема, блочная длина n, m, w, опубликованные hyb2n, a, hyb3n, und2n, b, comb3n)
NEW_RQC: Sequence[Tuple[str, int, int, int, int, int, int, int, int, int]] = (
    ("newRQC-I", 113, 127, 7, 160, 6, 211, 158, 1, 205),
    ("newRQC-II", 149, 151, 8, 331, 24, 262, 224, 3, 289),
    ("newRQC-III", 179, 181, 9, 553, 44, 321, 324, 6, 401),
)

PRESETS = ("rollo-rqc", "gemss-rainbow", "new-params")


def rollo_rqc_rows() -> List[PresetRow]:
    return [
        PresetRow(name, RdProblem(m, n, k, r, 2, name), {"a": a, "p": p, "b": b, "log2_cost": cost})
        for name, m, n, k, r, a, p, b, cost in ROLLO_RQC
    ]


def gemss_rainbow_rows() -> List[PresetRow]:
    # GeMSS: формулы общего случая (q > b) при q = 2, иначе опубликованные значения не воспроизводятся
    rows = []
    for name, q, n, K, r, n_prime, b, cost in GEMSS_RAINBOW:
        regime = "generic" if "GeMSS" in name else "auto"
        rows.append(PresetRow(name, MinRankProblem(q, n, n, K, r, name, regime),
                              {"n_prime": n_prime, "b": b, "log2_cost": cost}))
    return rows


def hyb3n_stub(scheme: str) -> AttackPlan:
    """Неоднородный гибрид для кода длины 3n не моделируется"""
    return AttackPlan("hybrid", float("nan"), formula="hyb3n", note="not modeled")


def estimate_preset(name: str, omega: Optional[float] = None) -> List[Dict[str, object]]:
    """Строки таблицы пресета: опубликованные значения рядом с вычисленными"""
    if name == "rollo-rqc":
        rows = []
        for row in rollo_rqc_rows():
            report = optimize(row.problem, omega)
            rows.append({"scheme": row.scheme, "report": report, "published": row.published})
        return rows
    if name == "gemss-rainbow":
        return [
            {"scheme": row.scheme, "report": optimize(row.problem, omega), "published": row.published}
            for row in gemss_rainbow_rows()
        ]
    if name == "new-params":
        return new_params_rows(omega)
    raise UsageError(f"unknown preset {name!r}, expected one of {PRESETS}")


def _rollo_report(name: str, m: int, length: int, k: int, r: int, omega: float) -> ComplexityReport:
    """Гибрид (over), совмещенная система (under) и комбинаторная атака для кода [length, k]"""
    report = ComplexityReport(name, {"q": 2, "m": m, "n": length, "k": k, "r": r})
    a = minimal_hybrid_a(m, length, k, r)
    if a is not None:
        report.plans.append(AttackPlan("hybrid", cost_hybrid(m, length, k, r, a, 2, omega), a=a,
                                       omega=omega, solver="strassen", formula="over/hybrid"))
    plan = plan_rd_combined(2, m, length, k, r, 0, 0, "degree", omega)
    if plan is not None:
        report.plans.append(plan)
    report.plans.append(AttackPlan("combinatorial", cost_combinatorial(m, length, k, r), formula="comb"))
    return report


def new_params_rows(omega: Optional[float] = None) -> List[Dict[str, object]]:
    """
    Новые параметры: код длины 2n (или 3n) и размерности n, кроме отмеченных строк ROLLO
    (для них рядом лежит отчет literal по буквальным 2n и n). Столбец under считается
    Штрассеном при b = 1 и Видеманом при b >= 2.
    """
    omega = _omega(omega)
    rows: List[Dict[str, object]] = []
    for name, n, m, r, length, k, over, a_pub, under, b_pub, comb in NEW_ROLLO:
        report = _rollo_report(name, m, length, k, r, omega)
        entry = {"scheme": name, "report": report,
                 "published": {"over": over, "a": a_pub, "under": under, "b": b_pub, "comb": comb}}
        if (length, k) != (2 * n, n):
            entry["literal"] = _rollo_report(name, m, 2 * n, n, r, omega)
            entry["published"]["code"] = f"[{length}, {k}]"
        rows.append(entry)
    for name, n, m, w, hyb2n, a_pub, hyb3n, und2n, b_pub, comb3n in NEW_RQC:
        length = 2 * n
        report = ComplexityReport(name, {"q": 2, "m": m, "n": length, "k": n, "r": w})
        a = minimal_hybrid_a(m, length, n, w)
        if a is not None:
            report.plans.append(AttackPlan("hybrid", cost_hybrid(m, length, n, w, a, 2, omega), a=a,
                                           omega=omega, solver="strassen", formula="hyb2n"))
        report.plans.append(hyb3n_stub(name))
        plan = plan_rd_combined(2, m, length, n, w, 0, 0, "degree", omega)
        if plan is not None:
            report.plans.append(plan)
        report.plans.append(AttackPlan("combinatorial", cost_combinatorial(m, 3 * n, n, w), formula="comb3n"))
        rows.append({"scheme": name, "report": report,
                     "published": {"hyb2n": hyb2n, "a": a_pub, "hyb3n": hyb3n, "und2n": und2n,
                                   "b": b_pub, "comb3n": comb3n}})
    return rows
