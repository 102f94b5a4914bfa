"""
@file: handlers/gen.py
@description: Подкоманда gen - генерация экземпляров RD и MinRank в файл
@dependencies: services/instances.py, database/settings_db.py
@created: 2025-01-21
"""

import json
import logging
from typing import List, Optional

from database.settings_db import get_setting, modulus_key, update_setting
from handlers.common import add_output_options, emit, persist_enabled
from services.instances import fingerprint, gen_minrank, gen_rd, save_instance, dumps_instance
from utils.error_handler import UsageError, handle_errors
from utils.report_utils import ReportUtils

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("gen", help="сгенерировать экземпляр")
    parser.add_argument("kind", choices=["rd", "minrank"])
    parser.add_argument("--q", type=int, required=True)
    parser.add_argument("--m", type=int, required=True)
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--k", type=int, default=None, help="размерность кода (rd)")
    parser.add_argument("--K", type=int, default=None, help="число матриц (minrank)")
    parser.add_argument("--r", type=int, required=True)
    parser.add_argument("--unplanted", action="store_true", help="minrank без заложенного решения")
    parser.add_argument("--modulus", default=None, help="коэффициенты неприводимого многочлена через запятую "
                        "или last - модуль последнего gen с теми же q и m")
    parser.add_argument("--with-plant", action="store_true", help="записать заложенное решение в файл")
    parser.add_argument("--out", default=None, help="путь к файлу экземпляра (по умолчанию stdout)")
    add_output_options(parser, with_out=False)
    parser.set_defaults(handler=handle)


def _validate(args) -> None:
    if args.r <= 0:
        raise UsageError(f"--r must be positive, got {args.r}")
    if args.q < 2 or args.m < 1 or args.n < 1:
        raise UsageError("--q, --m and --n must be positive (q >= 2)")
    if args.kind == "rd" and args.k is None:
        raise UsageError("gen rd requires --k")
    if args.kind == "minrank" and args.K is None:
        raise UsageError("gen minrank requires --K")


async def _resolve_modulus(args) -> Optional[List[int]]:
    """Модуль из --modulus: явные коэффициенты или сохраненный в настройках для (q, m)"""
    if not args.modulus:
        return None
    if args.modulus != "last":
        try:
            return [int(c) for c in args.modulus.split(",")]
        except ValueError:
            raise UsageError(f"--modulus expects comma-separated integers or 'last', got {args.modulus!r}")
    if not persist_enabled(args):
        raise UsageError("--modulus last needs the settings database (drop --no-db)")
    stored = await get_setting(modulus_key(args.q, args.m))
    if stored is None:
        raise UsageError(f"no stored modulus for q={args.q}, m={args.m}")
    logger.info(f"gen: модуль F_{{{args.q}^{args.m}}} из настроек: {stored}")
    return json.loads(stored)


@handle_errors("gen", reraise=True)
async def handle(args) -> int:
    _validate(args)
    if args.kind == "rd":
        modulus = await _resolve_modulus(args)
        inst = gen_rd(args.q, args.m, args.n, args.k, args.r, seed=args.seed, modulus=modulus)
        if persist_enabled(args):
            await update_setting(modulus_key(args.q, args.m), json.dumps([int(c) for c in inst.field.modulus]),
                                 "последний модуль F_{q^m}")
    else:
        inst = gen_minrank(args.q, args.m, args.n, args.K, args.r, planted=not args.unplanted, seed=args.seed)

    digest = fingerprint(inst)
    if args.out:
        await save_instance(args.out, inst, include_plant=args.with_plant)
        summary = {"kind": args.kind, "params": inst.params, "seed": args.seed, "fingerprint": digest,
                   "path": args.out}
        if args.format == "json":
            await emit(ReportUtils.to_json(summary))
        else:
            await emit(ReportUtils.format_table(["kind", "params", "seed", "fingerprint", "path"], [summary]))
    else:
        await emit(dumps_instance(inst, include_plant=args.with_plant).rstrip("\n"))
    logger.info(f"gen {args.kind}: отпечаток {digest}")
    return 0
