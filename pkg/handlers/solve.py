"""
@file: handlers/solve.py
@description: Подкоманда solve - решение экземпляра из файла выбранным вариантом атаки
              или планом оценщика (--auto), с проверкой и ограничением "настольного" масштаба
@dependencies: services/, database/runs_db.py, config.py
@created: 2025-01-21
"""

import asyncio
import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from config import HYBRID_MAX_GUESSES, MEMORY_BUDGET
from database.runs_db import save_solve_run
from handlers.common import add_output_options, emit, persist_enabled
from services.estimator import AttackPlan, RdProblem, optimize
from services.instances import MinRankInstance, RdInstance, fingerprint, load_instance
from services.maxminors import maxmin_shape, solve_hybrid, solve_overdetermined
from services.supportminors import (
    minimal_degree,
    rd_combined_counts,
    sm_counts,
    solve_minrank,
    solve_rd_sm,
)
from utils.error_handler import (
    FeasibilityError,
    PreconditionError,
    UsageError,
    VerificationFailedError,
    exit_code_for,
    handle_errors,
)
from utils.report_utils import ReportUtils

logger = logging.getLogger(__name__)

KNOBS = ("a", "p", "b", "n_prime")


def register(subparsers) -> None:
    parser = subparsers.add_parser("solve", help="решить экземпляр из файла")
    parser.add_argument("path")
    parser.add_argument("--auto", action="store_true", help="выбрать самый дешевый применимый план")
    parser.add_argument("--a", type=int, default=None, help="число специализированных столбцов (гибрид)")
    parser.add_argument("--p", type=int, default=None, help="число отброшенных координат")
    parser.add_argument("--b", type=int, default=None, help="степень линеаризации Support Minors")
    parser.add_argument("--n-prime", dest="n_prime", type=int, default=None, help="число используемых столбцов")
    parser.add_argument("--solver", choices=["auto", "dense", "wiedemann"], default="auto")
    parser.add_argument("--attempts", type=int, default=None, help="число перестановок при повторах")
    add_output_options(parser)
    parser.set_defaults(handler=handle)


@dataclass
class SolvePlan:
    variant: str
    knobs: Dict[str, int] = field(default_factory=dict)
    monomials: int = 0
    estimate: Optional[AttackPlan] = None


@dataclass
class SolveOutcome:
    plan: SolvePlan
    solution: Any
    verified: bool
    wall_time: float


def check_knobs(args) -> None:
    explicit = [name for name in KNOBS if getattr(args, name, None) is not None]
    if args.auto and explicit:
        raise UsageError(f"--auto cannot be combined with explicit knobs: {', '.join('--' + k for k in explicit)}")


# ---------------------------------------------------------------------------
# Выбор плана
# ---------------------------------------------------------------------------

def rd_plan_size(inst: RdInstance, plan: SolvePlan) -> int:
    """Число мономов (столбцов) системы плана"""
    knobs = plan.knobs
    if plan.variant == "sm-rd-combined":
        n_prime = knobs.get("n_prime") or inst.n
        return rd_combined_counts(inst.q, inst.m, inst.n, inst.k, inst.r, knobs["b"], n_prime)["monomials"]
    _, cols = maxmin_shape(inst.m, inst.n, inst.k, inst.r, knobs.get("p", 0), knobs.get("a", 0))
    return cols


def guard(plan: SolvePlan, budget: int = MEMORY_BUDGET, estimate: Optional[AttackPlan] = None) -> None:
    if plan.monomials > budget:
        cost = f"; estimated log2 cost {estimate.log2_cost:.2f}" if estimate else ""
        raise FeasibilityError(
            f"{plan.variant} needs {plan.monomials} monomials, above the desk-scale budget {budget}{cost}",
            monomials=plan.monomials, budget=budget,
        )


def _estimate_to_plan(inst: RdInstance, estimate: AttackPlan) -> SolvePlan:
    if estimate.variant == "sm-rd-combined":
        knobs = {"b": estimate.b, "n_prime": inst.n - estimate.p}
        if estimate.a:
            raise PreconditionError("combined plans with specialized columns are estimator-only")
    elif estimate.variant == "hybrid":
        knobs = {"a": estimate.a}
    else:
        knobs = {"p": estimate.p}
    plan = SolvePlan(estimate.variant, knobs, estimate=estimate)
    plan.monomials = rd_plan_size(inst, plan)
    return plan


def auto_rd_plans(inst: RdInstance) -> List[SolvePlan]:
    """Планы оценщика по возрастанию стоимости, применимые к решателю"""
    report = optimize(RdProblem(inst.m, inst.n, inst.k, inst.r, inst.q), max_degree=3)
    plans = []
    for estimate in sorted(report.plans, key=lambda plan: plan.sort_key):
        if estimate.variant == "combinatorial":
            continue
        if estimate.variant == "hybrid" and inst.q ** (estimate.a * inst.r) > HYBRID_MAX_GUESSES:
            continue
        try:
            plans.append(_estimate_to_plan(inst, estimate))
        except PreconditionError:
            continue
    if not any(plan.variant == "sm-rd-combined" for plan in plans):
        # запасной вариант без специализации, если оценщик предпочел a > 0
        for b in range(1, min(inst.r + 1, 3) + 1):
            if inst.n - inst.k - 1 < inst.r:
                break
            counts = rd_combined_counts(inst.q, inst.m, inst.n, inst.k, inst.r, b)
            if counts["monomials"] - 1 <= counts["sm_rows"] + counts["maxmin_rows"]:
                plan = SolvePlan("sm-rd-combined", {"b": b, "n_prime": inst.n})
                plan.monomials = counts["monomials"]
                plans.append(plan)
                break
    return plans


def explicit_rd_plan(inst: RdInstance, args) -> SolvePlan:
    if args.b is not None:
        plan = SolvePlan("sm-rd-combined", {"b": args.b, "n_prime": args.n_prime or inst.n})
    elif args.a:
        plan = SolvePlan("hybrid", {"a": args.a})
    else:
        plan = SolvePlan("overdetermined" if not args.p else "punctured", {"p": args.p or 0})
    plan.monomials = rd_plan_size(inst, plan)
    return plan


def minrank_plan(inst: MinRankInstance, args) -> SolvePlan:
    n_prime = args.n_prime or inst.n
    b = args.b
    if args.auto or b is None:
        b = minimal_degree(inst.q, inst.m, n_prime, inst.K, inst.r)
        if b is None:
            raise PreconditionError("no degree b < r + 2 linearizes this MinRank instance")
    _, monomials = sm_counts(inst.q, inst.m, n_prime, inst.K, inst.r, b)
    return SolvePlan("sm-minrank", {"b": b, "n_prime": n_prime}, monomials)


# ---------------------------------------------------------------------------
# Решение
# ---------------------------------------------------------------------------

def _rd_runner(inst: RdInstance, plan: SolvePlan, args) -> Callable[[], Any]:
    knobs = plan.knobs
    if plan.variant == "sm-rd-combined":
        return lambda: solve_rd_sm(inst, knobs["b"], knobs.get("n_prime"), seed=args.seed,
                                   attempts=args.attempts, solver=args.solver)
    if plan.variant == "hybrid":
        return lambda: solve_hybrid(inst, knobs["a"], seed=args.seed, attempts=args.attempts or 1,
                                    threads=args.threads)
    return lambda: solve_overdetermined(inst, knobs.get("p", 0), seed=args.seed, attempts=args.attempts)


def run_plan(inst, plan: SolvePlan, args) -> SolveOutcome:
    guard(plan, estimate=plan.estimate)
    started = time.perf_counter()
    if isinstance(inst, RdInstance):
        solution = _rd_runner(inst, plan, args)()
    else:
        knobs = plan.knobs
        solution = solve_minrank(inst, knobs["b"], knobs["n_prime"], seed=args.seed, solver=args.solver).x
    wall = time.perf_counter() - started
    verified = bool(inst.is_solution(solution))
    logger.info(f"solve {plan.variant} {plan.knobs}: verified={verified}, {wall:.3f} с")
    return SolveOutcome(plan, solution, verified, wall)


def solve_instance(inst, args) -> SolveOutcome:
    """Выбор плана и запуск; при --auto перебираются планы, проходящие ограничение масштаба"""
    check_knobs(args)
    if isinstance(inst, MinRankInstance):
        return run_plan(inst, minrank_plan(inst, args), args)
    if not args.auto:
        return run_plan(inst, explicit_rd_plan(inst, args), args)

    plans = auto_rd_plans(inst)
    feasible = [plan for plan in plans if plan.monomials <= MEMORY_BUDGET]
    if not feasible:
        cheapest = plans[0] if plans else None
        if cheapest is not None:
            guard(cheapest, estimate=cheapest.estimate)
        raise PreconditionError("no applicable plan for this instance")
    logger.info(f"--auto: выбран план {feasible[0].variant} {feasible[0].knobs}")
    return run_plan(inst, feasible[0], args)


def _report(inst, outcome: SolveOutcome, args) -> str:
    row = {
        "kind": "rd" if isinstance(inst, RdInstance) else "minrank",
        "variant": outcome.plan.variant,
        "knobs": outcome.plan.knobs,
        "verified": outcome.verified,
        "wall_time": round(outcome.wall_time, 4),
        "solution": ReportUtils.vector_to_text(outcome.solution),
    }
    if args.format == "json":
        payload = dict(row, params=inst.params,
                       plan=outcome.plan.estimate.to_dict() if outcome.plan.estimate else None)
        return ReportUtils.to_json(payload)
    return ReportUtils.render(list(row.keys()), [row], args.format)


@handle_errors("solve", reraise=True)
async def handle(args) -> int:
    check_knobs(args)
    inst = await load_instance(args.path)
    loop = asyncio.get_event_loop()
    exit_code = 0
    outcome: Optional[SolveOutcome] = None
    started = time.perf_counter()
    try:
        outcome = await loop.run_in_executor(None, lambda: solve_instance(inst, args))
        if not outcome.verified:
            raise VerificationFailedError("recovered solution does not verify against the instance")
    except Exception as e:
        exit_code = exit_code_for(e)
        raise
    finally:
        if persist_enabled(args):
            plan = outcome.plan if outcome else None
            await save_solve_run(
                kind="rd" if isinstance(inst, RdInstance) else "minrank",
                variant=plan.variant if plan else "unknown",
                params=inst.params,
                knobs=plan.knobs if plan else {},
                verified=bool(outcome and outcome.verified),
                exit_code=exit_code,
                wall_time=outcome.wall_time if outcome else time.perf_counter() - started,
                seed=args.seed,
                fingerprint=fingerprint(inst),
                plan=plan.estimate.to_dict() if plan and plan.estimate else None,
            )
    await emit(_report(inst, outcome, args), args.out)
    return 0
