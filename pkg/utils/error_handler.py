"""
@file: utils/error_handler.py
@description: Централизованная система обработки ошибок и доменные исключения
@dependencies: logging, functools
@created: 2025-01-21
"""

import asyncio
import logging
from functools import wraps
from typing import Any, Callable, Dict, Optional, Tuple, Type

logger = logging.getLogger(__name__)


class ErrorSeverity:
    """Уровни критичности ошибок"""
    LOW = "LOW"
    MEDIUM = "MEDIUM"
    HIGH = "HIGH"
    CRITICAL = "CRITICAL"


class RankforgeError(Exception):
    """Базовое исключение пакета; код выхода используется CLI"""
    exit_code = 1
    severity = ErrorSeverity.HIGH

    def __init__(self, message: str = "", **details: Any):
        super().__init__(message)
        self.details = details


class UsageError(RankforgeError):
    """Неверные аргументы командной строки или конфликт флагов"""
    exit_code = 2
    severity = ErrorSeverity.LOW


class PreconditionError(RankforgeError):
    """Нарушено предусловие операции (размерности, условие переопределенности)"""
    exit_code = 3
    severity = ErrorSeverity.MEDIUM


class SingularBlockError(PreconditionError):
    """Вырожден блок, который должен быть обратим (систематическая форма, первые r столбцов C)"""


class RankDeficientError(RankforgeError):
    """Размерность ядра линеаризованной системы отличается от ожидаемой"""
    exit_code = 4
    severity = ErrorSeverity.MEDIUM

    def __init__(self, message: str = "", kernel_dim: Optional[int] = None,
                 rank: Optional[int] = None, expected: Optional[int] = None, dexp: Optional[int] = None):
        super().__init__(message, kernel_dim=kernel_dim, rank=rank, expected=expected, dexp=dexp)
        self.kernel_dim = kernel_dim
        self.rank = rank
        self.expected = expected
        self.dexp = dexp


class NotFoundError(RankforgeError):
    """Перебор исчерпан, решение не найдено"""
    exit_code = 5
    severity = ErrorSeverity.MEDIUM


class VerificationFailedError(RankforgeError):
    """Восстановленное решение не прошло финальную проверку"""
    exit_code = 6
    severity = ErrorSeverity.HIGH


class NoPivotError(RankforgeError):
    """Ни один опорный моном ядра не отличен от нуля"""
    exit_code = 7
    severity = ErrorSeverity.MEDIUM


class FeasibilityError(RankforgeError):
    """Перебор или система превышают настроенный бюджет"""
    exit_code = 8
    severity = ErrorSeverity.LOW


class WiedemannRetryExhausted(RankforgeError):
    """Алгоритм Видемана исчерпал попытки, хотя ядро наблюдалось"""
    exit_code = 9
    severity = ErrorSeverity.MEDIUM


class FieldMismatchError(RankforgeError):
    """Элементы принадлежат разным полям"""
    exit_code = 10
    severity = ErrorSeverity.HIGH


class InstanceFormatError(RankforgeError):
    """Файл экземпляра поврежден или имеет неизвестный формат"""
    exit_code = 11
    severity = ErrorSeverity.MEDIUM


class ErrorHandler:
    """Централизованный обработчик ошибок"""

    def __init__(self):
        self.error_counts: Dict[str, int] = {}  # Счетчик ошибок по типам

    def handle_error(
        self,
        error: Exception,
        context: str = "Unknown",
        severity: Optional[str] = None,
        additional_info: Optional[Dict] = None
    ) -> None:
        """
        Основной метод обработки ошибок

        Args:
            error: Исключение
            context: Контекст возникновения ошибки
            severity: Уровень критичности (по умолчанию берется из исключения)
            additional_info: Дополнительная информация
        """
        if severity is None:
            severity = getattr(error, "severity", ErrorSeverity.HIGH)

        error_key = f"{type(error).__name__}_{context}"
        self.error_counts[error_key] = self.error_counts.get(error_key, 0) + 1

        error_msg = f"[{severity}] {context}: {error}"
        if additional_info:
            details = ", ".join(f"{key}={value}" for key, value in additional_info.items())
            error_msg += f" ({details})"

        if severity == ErrorSeverity.CRITICAL:
            logger.critical(error_msg, exc_info=True)
        elif severity == ErrorSeverity.HIGH:
            logger.error(error_msg, exc_info=True)
        elif severity == ErrorSeverity.MEDIUM:
            logger.warning(error_msg)
        else:
            logger.info(error_msg)

    def reset(self) -> None:
        self.error_counts.clear()


# Глобальный экземпляр обработчика ошибок
error_handler = ErrorHandler()


def exit_code_for(error: BaseException) -> int:
    """Код выхода процесса для исключения"""
    if isinstance(error, RankforgeError):
        return error.exit_code
    return 1


def handle_errors(
    context: str = "Unknown",
    severity: Optional[str] = None,
    fallback_return: Any = None,
    reraise: bool = False
):
    """
    Декоратор для автоматической обработки ошибок в функциях

    Args:
        context: Контекст выполнения
        severity: Уровень критичности (None - из исключения)
        fallback_return: Значение для возврата при ошибке
        reraise: Пробросить исключение дальше после логирования
    """
    def decorator(func: Callable) -> Callable:
        info = {"function": func.__name__, "module": func.__module__}

        if asyncio.iscoroutinefunction(func):
            @wraps(func)
            async def async_wrapper(*args, **kwargs):
                try:
                    return await func(*args, **kwargs)
                except Exception as e:
                    error_handler.handle_error(e, f"{func.__name__} ({context})", severity, info)
                    if reraise:
                        raise
                    return fallback_return
            return async_wrapper

        @wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except Exception as e:
                error_handler.handle_error(e, f"{func.__name__} ({context})", severity, info)
                if reraise:
                    raise
                return fallback_return
        return wrapper
    return decorator


def with_retries(
    attempt: Callable[[int], Any],
    max_attempts: int,
    context: str,
    retry_on: Tuple[Type[BaseException], ...] = (RankforgeError,),
) -> Any:
    """
    Повторяет попытку с новой случайностью, пока она не завершится успешно

    Args:
        attempt: Функция от номера попытки
        max_attempts: Максимальное количество попыток
        context: Контекст для логирования
        retry_on: Исключения, после которых делается новая попытка

    Raises:
        Последнее исключение, если все попытки неудачны
    """
    last_error: Optional[BaseException] = None
    for number in range(max_attempts):
        try:
            return attempt(number)
        except retry_on as e:
            last_error = e
            error_handler.handle_error(
                e,
                f"{context} (попытка {number + 1}/{max_attempts})",
                ErrorSeverity.LOW,
            )
    logger.error(f"{context}: все {max_attempts} попыток неудачны")
    if last_error is None:
        raise PreconditionError(f"{context}: max_attempts must be positive")
    raise last_error
