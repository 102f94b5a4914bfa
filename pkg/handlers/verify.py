"""
@file: handlers/verify.py
@description: Подкоманда verify - независимая проверка решения из отчета solve
@dependencies: services/instances.py, utils/report_utils.py
@created: 2025-01-21
"""

import logging

import aiofiles
import numpy as np

from handlers.common import add_output_options, emit
from services.instances import RdInstance, fingerprint, load_instance
from utils.error_handler import InstanceFormatError, UsageError, VerificationFailedError, handle_errors
from utils.report_utils import ReportUtils

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="проверить решение для экземпляра")
    parser.add_argument("path")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--solution", default=None, help="решение в формате отчета solve")
    source.add_argument("--solution-file", dest="solution_file", default=None)
    add_output_options(parser)
    parser.set_defaults(handler=handle)


def parse_solution(inst, text: str) -> np.ndarray:
    """Текст решения -> массив формы (n, m) для RD или (K,) для MinRank"""
    try:
        values = np.asarray(ReportUtils.text_to_vector(text), dtype=np.int64)
    except ValueError as e:
        raise InstanceFormatError(f"cannot parse solution: {e}") from e
    if isinstance(inst, RdInstance):
        shape = (inst.n, inst.m)
    else:
        shape = (inst.K,)
    if values.size != int(np.prod(shape)):
        raise InstanceFormatError(f"solution has {values.size} entries, expected shape {shape}")
    return values.reshape(shape)


async def _read_solution(args) -> str:
    if args.solution is not None:
        return args.solution
    async with aiofiles.open(args.solution_file, "r", encoding="utf-8") as f:
        text = (await f.read()).strip()
    if not text:
        raise UsageError(f"solution file {args.solution_file} is empty")
    return text


@handle_errors("verify", reraise=True)
async def handle(args) -> int:
    inst = await load_instance(args.path)
    solution = parse_solution(inst, await _read_solution(args))
    valid = bool(inst.is_solution(solution))
    row = {
        "kind": "rd" if isinstance(inst, RdInstance) else "minrank",
        "fingerprint": fingerprint(inst),
        "valid": valid,
    }
    logger.info(f"verify {args.path}: valid={valid}")
    await emit(ReportUtils.render(list(row), [row], args.format, dict(row, params=inst.params)), args.out)
    if not valid:
        raise VerificationFailedError("solution does not satisfy the instance")
    return 0
