"""
@file: tests/unit/test_error_handler.py
@description: Модульные тесты для системы обработки ошибок
@dependencies: pytest
@created: 2025-01-21
"""

import logging

import pytest

from utils.error_handler import (
    ErrorHandler,
    ErrorSeverity,
    FeasibilityError,
    InstanceFormatError,
    NoPivotError,
    NotFoundError,
    PreconditionError,
    RankDeficientError,
    SingularBlockError,
    UsageError,
    VerificationFailedError,
    error_handler,
    exit_code_for,
    handle_errors,
    with_retries,
)


@pytest.fixture(autouse=True)
def clean_counts():
    error_handler.reset()
    yield
    error_handler.reset()


@pytest.mark.unit
class TestErrorHandler:
    """Тестирование системы обработки ошибок"""

    def test_handle_error_counts_by_context(self):
        """Тест подсчета ошибок по типу и контексту"""
        handler = ErrorHandler()
        handler.handle_error(ValueError("bad"), "parse")
        handler.handle_error(ValueError("bad"), "parse")
        handler.handle_error(NotFoundError("none"), "solve")
        assert handler.error_counts == {"ValueError_parse": 2, "NotFoundError_solve": 1}
        handler.reset()
        assert handler.error_counts == {}

    def test_severity_from_exception(self, caplog):
        """Тест: уровень логирования берется из исключения, если не задан явно"""
        handler = ErrorHandler()
        with caplog.at_level(logging.INFO, logger="utils.error_handler"):
            handler.handle_error(UsageError("flag"), "cli")
            handler.handle_error(VerificationFailedError("rank"), "solve", additional_info={"seed": 3})
        levels = [record.levelno for record in caplog.records]
        assert levels == [logging.INFO, logging.ERROR]
        assert "seed=3" in caplog.records[1].getMessage()

    def test_explicit_critical(self, caplog):
        handler = ErrorHandler()
        with caplog.at_level(logging.INFO, logger="utils.error_handler"):
            handler.handle_error(RuntimeError("boom"), "db", ErrorSeverity.CRITICAL)
        assert caplog.records[-1].levelno == logging.CRITICAL


@pytest.mark.unit
class TestExitCodes:
    """Тестирование кодов выхода"""

    @pytest.mark.parametrize("error,code", [
        (UsageError(), 2),
        (PreconditionError(), 3),
        (SingularBlockError(), 3),
        (RankDeficientError(kernel_dim=2, rank=10, expected=11), 4),
        (NotFoundError(), 5),
        (VerificationFailedError(), 6),
        (NoPivotError(), 7),
        (FeasibilityError(), 8),
        (InstanceFormatError(), 11),
        (ValueError(), 1),
    ])
    def test_exit_code_for(self, error, code):
        assert exit_code_for(error) == code

    def test_rank_deficient_details(self):
        error = RankDeficientError("kernel", kernel_dim=2, rank=10, expected=11)
        assert (error.kernel_dim, error.rank, error.expected) == (2, 10, 11)
        assert error.details["kernel_dim"] == 2


@pytest.mark.unit
class TestHandleErrorsDecorator:
    """Тестирование декоратора handle_errors"""

    def test_sync_fallback(self):
        @handle_errors("calc", fallback_return=-1)
        def fail():
            raise PreconditionError("n' too small")

        assert fail() == -1
        assert error_handler.error_counts == {"PreconditionError_fail (calc)": 1}

    def test_sync_success(self):
        @handle_errors("calc")
        def ok(x):
            return x * 2

        assert ok(21) == 42
        assert error_handler.error_counts == {}

    def test_sync_reraise(self):
        @handle_errors("calc", reraise=True)
        def fail():
            raise NoPivotError("zero")

        with pytest.raises(NoPivotError):
            fail()

    async def test_async_fallback(self):
        """Тест декоратора на асинхронной функции"""
        @handle_errors("io", fallback_return="fallback")
        async def fail():
            raise InstanceFormatError("bad file")

        assert await fail() == "fallback"

    async def test_async_reraise(self):
        @handle_errors("io", reraise=True)
        async def fail():
            raise InstanceFormatError("bad file")

        with pytest.raises(InstanceFormatError):
            await fail()


@pytest.mark.unit
class TestRetries:
    """Тестирование повторных попыток"""

    def test_succeeds_after_failures(self):
        calls = []

        def attempt(number):
            calls.append(number)
            if number < 2:
                raise RankDeficientError("kernel too large")
            return "solved"

        assert with_retries(attempt, 5, "solve") == "solved"
        assert calls == [0, 1, 2]

    def test_raises_last_error(self):
        def attempt(number):
            raise NotFoundError(f"attempt {number}")

        with pytest.raises(NotFoundError, match="attempt 2"):
            with_retries(attempt, 3, "solve")

    def test_other_errors_propagate(self):
        """Тест: исключения вне retry_on не перехватываются"""
        def attempt(number):
            raise ValueError("bug")

        with pytest.raises(ValueError):
            with_retries(attempt, 3, "solve", retry_on=(NotFoundError,))

    def test_zero_attempts(self):
        with pytest.raises(PreconditionError):
            with_retries(lambda number: None, 0, "solve")
