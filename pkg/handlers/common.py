"""
@file: handlers/common.py
@description: Общие помощники обработчиков подкоманд: вывод отчета, сохранение в БД
@dependencies: utils/report_utils.py, database/
@created: 2025-01-21
"""

import logging
from typing import Optional

from utils.report_utils import write_report

logger = logging.getLogger(__name__)


def persist_enabled(args) -> bool:
    return not getattr(args, "no_db", False)


async def emit(text: str, out: Optional[str] = None) -> None:
    """Печать отчета в stdout или запись в файл"""
    if out:
        await write_report(out, text)
    else:
        print(text)


def add_output_options(parser, with_out: bool = True) -> None:
    parser.add_argument("--format", choices=["text", "csv", "json"], default="text", help="формат отчета")
    if with_out:
        parser.add_argument("--out", default=None, help="файл для отчета (по умолчанию stdout)")
