# database/runs_db.py - Функции для работы с прогонами решателя и ячейками экспериментов

import json
import logging
from typing import Any, Dict, Iterable, List, Optional

from sqlalchemy import select

from . import database
from .models import ExperimentCell, SolveRun

logger = logging.getLogger(__name__)


async def save_solve_run(
    kind: str,
    variant: str,
    params: Dict[str, Any],
    knobs: Dict[str, Any],
    verified: bool,
    exit_code: int,
    wall_time: float,
    seed: Optional[int] = None,
    fingerprint: Optional[str] = None,
    plan: Optional[Dict[str, Any]] = None,
    session_maker=None,
) -> int:
    """
    Сохраняет результат одного запуска solve.
    Возвращает id записи.
    """
    session_maker = session_maker or database.get_session_maker()
    async with session_maker() as session:
        run = SolveRun(
            fingerprint=fingerprint,
            kind=kind,
            variant=variant,
            params=json.dumps(params, sort_keys=True),
            knobs=json.dumps(knobs, sort_keys=True),
            verified=verified,
            exit_code=exit_code,
            wall_time=wall_time,
            seed=seed,
            plan=json.dumps(plan, sort_keys=True) if plan is not None else None,
        )
        session.add(run)
        await session.commit()
        logger.info(f"Прогон {variant} сохранен (id={run.id}, verified={verified})")
        return run.id


async def list_solve_runs(limit: int = 20, session_maker=None) -> List[SolveRun]:
    session_maker = session_maker or database.get_session_maker()
    async with session_maker() as session:
        query = select(SolveRun).order_by(SolveRun.id.desc()).limit(limit)
        result = await session.execute(query)
        return list(result.scalars().all())


async def save_experiment_cells(experiment: str, cells: Iterable[Dict[str, Any]], seed: Optional[int] = None,
                                session_maker=None) -> int:
    """
    Сохраняет ячейки эксперимента (словари с params, trials, predicted, measured, match, skipped).
    Возвращает количество сохраненных ячеек.
    """
    session_maker = session_maker or database.get_session_maker()
    count = 0
    async with session_maker() as session:
        for cell in cells:
            session.add(ExperimentCell(
                experiment=experiment,
                params=json.dumps(cell["params"], sort_keys=True),
                trials=cell.get("trials", 0),
                predicted=json.dumps(cell.get("predicted")),
                measured=json.dumps(cell.get("measured", [])),
                match=bool(cell.get("match", False)),
                skipped=bool(cell.get("skipped", False)),
                seed=seed,
            ))
            count += 1
        await session.commit()
    logger.info(f"Эксперимент {experiment}: сохранено {count} ячеек")
    return count


async def list_experiment_cells(experiment: Optional[str] = None, session_maker=None) -> List[Dict[str, Any]]:
    """Сохраненные ячейки (все или одного эксперимента) в порядке добавления"""
    session_maker = session_maker or database.get_session_maker()
    async with session_maker() as session:
        query = select(ExperimentCell).order_by(ExperimentCell.id)
        if experiment:
            query = query.where(ExperimentCell.experiment == experiment)
        result = await session.execute(query)
        return [
            {
                "id": cell.id,
                "experiment": cell.experiment,
                "params": json.loads(cell.params),
                "trials": cell.trials,
                "predicted": json.loads(cell.predicted) if cell.predicted else None,
                "measured": json.loads(cell.measured) if cell.measured else [],
                "match": cell.match,
                "skipped": cell.skipped,
                "seed": cell.seed,
            }
            for cell in result.scalars().all()
        ]
