"""managers/experiment_manager.py
=================================================
Эксперименты: эвристика ранга MaxMin и проверка D_exp
-----------------------------------------------------

• `ExperimentManager.run()` прогоняет сетку ячеек в пуле потоков и возвращает
  строки CSV (одна строка на ячейку) и долю совпадений.
• Ячейки сохраняются в таблицу `ExperimentCell`, `stored()` читает их обратно.
• Зерно каждой ячейки выводится из общего seed, поэтому результат не зависит
  от числа потоков.
"""
from __future__ import annotations

import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config import THREADS
from database.runs_db import list_experiment_cells, save_experiment_cells
from services.maxminors import verify_rank_heuristic
from services.supportminors import default_grid, verify_dexp
from utils.error_handler import UsageError

logger = logging.getLogger(__name__)

EXPERIMENTS = ("rank-heuristic", "dexp")

RANK_HEURISTIC_COLUMNS = ["q", "m", "n", "k", "r", "p", "trials", "expected_rank", "hits", "frequency"]
DEXP_COLUMNS = ["q", "m", "n", "K", "r", "b", "trials", "dexp", "monomials", "expected", "measured", "match", "skipped"]

# Сетка по умолчанию для эвристики ранга: малые переопределенные параметры
RANK_HEURISTIC_GRID = (
    {"q": 2, "m": 7, "n": 8, "k": 3, "r": 2},
    {"q": 2, "m": 23, "n": 30, "k": 15, "r": 3},
)


@dataclass
class ExperimentResult:
    name: str
    columns: List[str]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    cells: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def match_fraction(self) -> float:
        done = [cell for cell in self.cells if not cell.get("skipped")]
        if not done:
            return 0.0
        return sum(1 for cell in done if cell["match"]) / len(done)


def resolve_grid(name: str, grid: Any, q: int = 13) -> List[Dict[str, int]]:
    """Сетка по имени ("default") или явный список ячеек"""
    if name not in EXPERIMENTS:
        raise UsageError(f"unknown experiment {name!r}, expected one of {EXPERIMENTS}")
    if grid == "default" or grid is None:
        return default_grid(q) if name == "dexp" else [dict(cell) for cell in RANK_HEURISTIC_GRID]
    return [dict(cell) for cell in grid]


def _rank_heuristic_cell(cell: Dict[str, int], trials: int, seed: int) -> Dict[str, Any]:
    result = verify_rank_heuristic(cell["q"], cell["m"], cell["n"], cell["k"], cell["r"], trials,
                                   seed=seed, p=cell.get("p", 0))
    row = {**result.params, "trials": trials, "expected_rank": result.expected_rank,
           "hits": result.hits, "frequency": result.frequency}
    return {
        "row": row,
        "cell": {"params": result.params, "trials": trials, "predicted": result.expected_rank,
                 "measured": result.ranks, "match": result.frequency >= 0.99, "skipped": False},
    }


def _dexp_cell(cell: Dict[str, int], trials: int, seed: int, planted: bool, max_columns: int) -> Dict[str, Any]:
    outcome = verify_dexp([cell], trials, seed=seed, planted=planted, max_columns=max_columns)[0]
    row = {**outcome.params, "trials": trials, "dexp": outcome.predicted, "monomials": outcome.monomials,
           "expected": outcome.expected, "measured": outcome.measured, "match": outcome.match,
           "skipped": outcome.skipped}
    return {
        "row": row,
        "cell": {"params": outcome.params, "trials": trials, "predicted": outcome.predicted,
                 "measured": outcome.measured, "match": outcome.match, "skipped": outcome.skipped},
    }


class ExperimentManager:
    """Запуск экспериментов и их сохранение"""

    def __init__(self, session_maker=None, persist: bool = True, threads: Optional[int] = None):
        self.session_maker = session_maker
        self.persist = persist
        self.threads = max(1, threads or THREADS)

    def run_sync(self, name: str, grid: Sequence[Dict[str, int]], trials: int, seed: int = 0,
                 planted: bool = True, max_columns: int = 1500) -> ExperimentResult:
        if trials <= 0:
            raise UsageError("trials must be positive")
        cells = list(grid)
        seeds = np.random.default_rng(seed).integers(0, 2 ** 31, size=len(cells))
        if name == "rank-heuristic":
            jobs = [lambda c=c, s=int(s): _rank_heuristic_cell(c, trials, s) for c, s in zip(cells, seeds)]
            columns = RANK_HEURISTIC_COLUMNS
        elif name == "dexp":
            jobs = [lambda c=c, s=int(s): _dexp_cell(c, trials, s, planted, max_columns) for c, s in zip(cells, seeds)]
            columns = DEXP_COLUMNS
        else:
            raise UsageError(f"unknown experiment {name!r}, expected one of {EXPERIMENTS}")

        logger.info(f"Эксперимент {name}: {len(cells)} ячеек по {trials} испытаний, потоков {self.threads}")
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            outcomes = list(pool.map(lambda job: job(), jobs))
        result = ExperimentResult(name, list(columns))
        for outcome in outcomes:
            result.rows.append(outcome["row"])
            result.cells.append(outcome["cell"])
        logger.info(f"Эксперимент {name}: доля совпадений {result.match_fraction:.3f}")
        return result

    async def run(self, name: str, grid: Any, trials: int, seed: int = 0, planted: bool = True,
                  max_columns: int = 1500, q: int = 13) -> ExperimentResult:
        cells = resolve_grid(name, grid, q)
        loop = asyncio.get_event_loop()
        result = await loop.run_in_executor(
            None, lambda: self.run_sync(name, cells, trials, seed, planted, max_columns)
        )
        if self.persist:
            await save_experiment_cells(name, result.cells, seed=seed, session_maker=self.session_maker)
        return result

    async def stored(self, name: Optional[str] = None) -> List[Dict[str, Any]]:
        return await list_experiment_cells(name, session_maker=self.session_maker)
