"""
@file: handlers/experiment.py
@description: Подкоманда experiment - эвристика ранга MaxMin и проверка D_exp по сетке параметров
@dependencies: managers/experiment_manager.py, database/
@created: 2025-01-21
"""

import logging
from typing import Dict, List, Optional

from database import get_session_maker
from handlers.common import add_output_options, emit, persist_enabled
from managers.experiment_manager import EXPERIMENTS, ExperimentManager
from utils.error_handler import UsageError, handle_errors
from utils.report_utils import ReportUtils

logger = logging.getLogger(__name__)

CELL_KEYS = {
    "rank-heuristic": ("q", "m", "n", "k", "r"),
    "dexp": ("q", "m", "n", "K", "r", "b"),
}


def register(subparsers) -> None:
    parser = subparsers.add_parser("experiment", help="экспериментальная проверка оценок")
    parser.add_argument("name", choices=list(EXPERIMENTS))
    parser.add_argument("--grid", default="default", help='"default" или одна ячейка из --m/--n/...')
    parser.add_argument("--trials", type=int, default=10)
    parser.add_argument("--q", type=int, default=None, help="порядок поля (dexp: 13, rank-heuristic: 2)")
    parser.add_argument("--m", type=int, default=None)
    parser.add_argument("--n", type=int, default=None)
    parser.add_argument("--k", type=int, default=None)
    parser.add_argument("--K", type=int, default=None)
    parser.add_argument("--r", type=int, default=None)
    parser.add_argument("--b", type=int, default=None)
    parser.add_argument("--p", type=int, default=0, help="отброшенные координаты (rank-heuristic)")
    parser.add_argument("--unplanted", action="store_true", help="dexp: системы без решения")
    parser.add_argument("--max-columns", dest="max_columns", type=int, default=1500)
    parser.add_argument("--list", dest="list_stored", action="store_true", help="показать сохраненные ячейки")
    add_output_options(parser)
    parser.set_defaults(handler=handle)


def single_cell(args) -> Optional[List[Dict[str, int]]]:
    """Одна ячейка из явных параметров или None, если ни один не задан"""
    keys = CELL_KEYS[args.name]
    given = {key: getattr(args, key) for key in keys if key != "q" and getattr(args, key) is not None}
    if not given:
        return None
    missing = [f"--{key}" for key in keys if key != "q" and key not in given]
    if missing:
        raise UsageError(f"single-cell {args.name} needs {', '.join(missing)}")
    q = args.q if args.q is not None else (13 if args.name == "dexp" else 2)
    cell = {"q": q, **given}
    if args.name == "rank-heuristic":
        cell["p"] = args.p
    return [cell]


def _stored_output(cells, args) -> str:
    columns = ["experiment", "params", "trials", "predicted", "measured", "match", "skipped", "seed"]
    return ReportUtils.render(columns, cells, args.format, {"cells": cells})


@handle_errors("experiment", reraise=True)
async def handle(args) -> int:
    persist = persist_enabled(args)
    manager = ExperimentManager(get_session_maker() if persist else None, persist=persist, threads=args.threads)
    if args.list_stored:
        if not persist:
            raise UsageError("--list needs the database, drop --no-db")
        await emit(_stored_output(await manager.stored(args.name), args), args.out)
        return 0
    if args.trials <= 0:
        raise UsageError("--trials must be positive")

    grid = single_cell(args) or args.grid
    if isinstance(grid, str) and grid != "default":
        raise UsageError(f"unknown grid {grid!r}; use \"default\" or explicit cell parameters")
    result = await manager.run(
        args.name, grid, args.trials, seed=args.seed, planted=not args.unplanted,
        max_columns=args.max_columns, q=args.q if args.q is not None else 13,
    )
    fmt = "csv" if args.format == "text" else args.format
    payload = {"experiment": result.name, "rows": result.rows, "match_fraction": result.match_fraction}
    text = ReportUtils.render(result.columns, result.rows, fmt, payload)
    if fmt == "csv":
        text = f"{text.rstrip()}\n# match_fraction={result.match_fraction:.4f}"
    await emit(text, args.out)
    return 0
