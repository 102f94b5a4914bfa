"""
@file: utils/report_utils.py
@description: Форматирование отчетов: выровненные текстовые таблицы, CSV и JSON с версией формата
@dependencies: aiofiles, config.py
@created: 2025-01-21
"""

import csv
import io
import json
import logging
import math
from typing import Any, Dict, Iterable, List, Optional, Sequence

import aiofiles

from config import REPORT_FORMAT_VERSION

logger = logging.getLogger(__name__)

ESTIMATE_COLUMNS = ["scheme", "params", "ratio", "a", "p", "b", "n_prime", "log2_cost", "formula"]
OUTPUT_FORMATS = ("text", "csv", "json")


class ReportUtils:
    """Утилиты форматирования результатов"""

    @staticmethod
    def format_value(value: Any) -> str:
        if value is None:
            return "-"
        if isinstance(value, float):
            if math.isnan(value):
                return "n/a"
            return f"{value:.2f}"
        if isinstance(value, dict):
            return ",".join(f"{key}={val}" for key, val in value.items())
        if isinstance(value, (list, tuple)):
            return " ".join(str(item) for item in value)
        return str(value)

    @staticmethod
    def format_table(columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> str:
        """Выровненная текстовая таблица"""
        cells = [[ReportUtils.format_value(row.get(col)) for col in columns] for row in rows]
        widths = [len(col) for col in columns]
        for line in cells:
            widths = [max(width, len(cell)) for width, cell in zip(widths, line)]
        header = "  ".join(col.ljust(width) for col, width in zip(columns, widths))
        rule = "  ".join("-" * width for width in widths)
        body = ["  ".join(cell.ljust(width) for cell, width in zip(line, widths)) for line in cells]
        return "\n".join([header, rule, *body])

    @staticmethod
    def to_csv(columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({col: ReportUtils.format_value(row.get(col)) for col in columns})
        return buffer.getvalue()

    @staticmethod
    def to_json(payload: Dict[str, Any]) -> str:
        """JSON-отчет с полем "format" """
        return json.dumps({"format": REPORT_FORMAT_VERSION, **payload}, indent=2, sort_keys=True, default=str)

    @staticmethod
    def render(columns: Sequence[str], rows: List[Dict[str, Any]], fmt: str = "text",
               payload: Optional[Dict[str, Any]] = None) -> str:
        if fmt == "text":
            return ReportUtils.format_table(columns, rows)
        if fmt == "csv":
            return ReportUtils.to_csv(columns, rows)
        if fmt == "json":
            return ReportUtils.to_json(payload if payload is not None else {"rows": rows})
        raise ValueError(f"unknown output format {fmt!r}")

    @staticmethod
    def plan_row(scheme: str, params: Dict[str, int], ratio: Optional[float], plan) -> Dict[str, Any]:
        """Строка отчета оценщика для одного плана"""
        cost = plan.log2_cost
        if not math.isnan(cost) and plan.starred:
            cost_text = f"{cost:.2f}*"
        else:
            cost_text = ReportUtils.format_value(cost) if not plan.note else plan.note
        return {
            "scheme": scheme,
            "params": params,
            "ratio": ratio,
            "a": plan.a,
            "p": plan.p,
            "b": plan.b,
            "n_prime": plan.n_prime,
            "log2_cost": cost_text,
            "formula": plan.formula or plan.variant,
        }

    @staticmethod
    def vector_to_text(vector) -> str:
        """Вектор над F_q или F_{q^m} одной строкой: координаты через ';', элементы через ','"""
        rows = []
        for entry in vector:
            if hasattr(entry, "__len__"):
                rows.append(",".join(str(int(v)) for v in entry))
            else:
                rows.append(str(int(entry)))
        return ";".join(rows)

    @staticmethod
    def text_to_vector(text: str) -> List:
        parts = [part for part in text.strip().split(";") if part]
        if any("," in part for part in parts):
            return [[int(v) for v in part.split(",")] for part in parts]
        return [int(part) for part in parts]


async def write_report(path: str, text: str) -> None:
    """Асинхронная запись отчета в файл"""
    async with aiofiles.open(path, "w", encoding="utf-8") as f:
        await f.write(text if text.endswith("\n") else text + "\n")
    logger.info(f"Отчет записан: {path}")
