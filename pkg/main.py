"""main.py - точка входа rankforge
=================================================
Командная строка алгебраического криптоанализа RD и MinRank.

Основное:
* Настраивает логирование: консоль + файлы с ротацией.
* Разбирает подкоманды gen, solve, estimate, experiment, verify.
* Инициализирует базу прогонов (если не задан --no-db).
* Переводит исключения в коды возврата.
"""
from __future__ import annotations

import argparse
import asyncio
import logging
import logging.handlers
import sys
from typing import List, Optional

import database
from config import DB_PATH, ERROR_LOG_FILE, LOG_FILE, LOG_LEVEL, RANKFORGE_SEED, THREADS
from handlers import estimate, experiment, gen, solve, verify
from utils.error_handler import UsageError, exit_code_for

logger = logging.getLogger(__name__)

SUBCOMMANDS = (gen, solve, estimate, experiment, verify)


# ---------------------------------------------------------------------------
# Логирование
# ---------------------------------------------------------------------------

def setup_logging(verbosity: int = 0, log_file: Optional[str] = LOG_FILE,
                  error_log_file: Optional[str] = ERROR_LOG_FILE) -> None:
    """Консоль (stderr) + основной лог + отдельный лог ошибок"""
    if verbosity > 0:
        level = logging.DEBUG
    elif verbosity < 0:
        level = logging.WARNING
    else:
        level = getattr(logging, LOG_LEVEL, logging.INFO)

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # stdout занят отчетами
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=10*1024*1024,  # 10 MB
            backupCount=5,
            encoding='utf-8'
        )
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    if error_log_file:
        errors_handler = logging.handlers.RotatingFileHandler(
            error_log_file,
            maxBytes=5*1024*1024,   # 5 MB
            backupCount=3,
            encoding='utf-8'
        )
        errors_handler.setLevel(logging.ERROR)
        errors_handler.setFormatter(formatter)
        root_logger.addHandler(errors_handler)

    # Уменьшаем шум от SQLAlchemy и aiosqlite
    logging.getLogger('sqlalchemy.engine').setLevel(logging.WARNING)
    logging.getLogger('aiosqlite').setLevel(logging.WARNING)


# ---------------------------------------------------------------------------
# Аргументы
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """Ошибки разбора превращаются в UsageError (код 2) вместо sys.exit"""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rankforge", description="Алгебраические атаки на RD и MinRank")
    parser.add_argument("--seed", type=int, default=None, help="зерно ГПСЧ (по умолчанию RANKFORGE_SEED или 0)")
    parser.add_argument("--threads", type=int, default=THREADS)
    parser.add_argument("--no-db", dest="no_db", action="store_true", help="не сохранять прогоны в базу")
    parser.add_argument("--db-path", dest="db_path", default=DB_PATH)
    parser.add_argument("--log-file", dest="log_file", default=LOG_FILE)
    parser.add_argument("--error-log-file", dest="error_log_file", default=ERROR_LOG_FILE)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", dest="verbosity", action="store_const", const=1, default=0)
    verbosity.add_argument("-q", "--quiet", dest="verbosity", action="store_const", const=-1)

    subparsers = parser.add_subparsers(dest="command", parser_class=_Parser)
    for module in SUBCOMMANDS:
        module.register(subparsers)
    return parser


def resolve_seed(seed: Optional[int]) -> int:
    if seed is not None:
        return seed
    return RANKFORGE_SEED if RANKFORGE_SEED is not None else 0


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    args = build_parser().parse_args(argv)
    if not getattr(args, "handler", None):
        raise UsageError("a subcommand is required: gen, solve, estimate, experiment or verify")
    args.seed = resolve_seed(args.seed)
    if args.threads is None or args.threads < 1:
        raise UsageError("--threads must be positive")
    return args


async def run(args: argparse.Namespace) -> int:
    if args.no_db:
        return await args.handler(args)
    database.configure(args.db_path)
    await database.init_db()
    logger.debug(f"Команда {args.command}, seed={args.seed}, потоков {args.threads}")
    try:
        return await args.handler(args)
    finally:
        await database.dispose_db()


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(e)
    setup_logging(args.verbosity, args.log_file, args.error_log_file)
    try:
        return asyncio.run(run(args)) or 0
    except KeyboardInterrupt:
        logger.info("Прервано пользователем")
        return 130
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
