"""
@file: tests/conftest.py
@description: Общие фикстуры и конфигурация для тестирования
@dependencies: pytest, pytest-asyncio, numpy, sqlalchemy
@created: 2025-01-21
"""

import os
import sys
import tempfile
from pathlib import Path

import numpy as np
import pytest
from sqlalchemy.ext.asyncio import AsyncSession, async_sessionmaker, create_async_engine

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

# Импорты проекта
from algebra.ffield import ExtField, PrimeField  # noqa: E402
from database.models import Base  # noqa: E402
from services.instances import gen_minrank, gen_rd  # noqa: E402


@pytest.fixture
def rng():
    """Детерминированный генератор случайных чисел"""
    return np.random.default_rng(2024)


@pytest.fixture
def gf2():
    return PrimeField(2)


@pytest.fixture
def gf13():
    return PrimeField(13)


@pytest.fixture
def f8():
    """F_{2^3}"""
    return ExtField(PrimeField(2), 3)


@pytest.fixture
def f13_4():
    """F_{13^4}"""
    return ExtField(PrimeField(13), 4)


@pytest.fixture
def small_rd():
    """Переопределенный экземпляр RD (q=2, m=7, n=8, k=3, r=2) с заложенной ошибкой"""
    return gen_rd(2, 7, 8, 3, 2, seed=11)


@pytest.fixture
def small_minrank():
    """Экземпляр MinRank (q=13, m=n=7, K=5, r=2) с заложенным решением"""
    return gen_minrank(13, 7, 7, 5, 2, planted=True, seed=5)


@pytest.fixture
def temp_db_path():
    """Временная база данных для тестов"""
    with tempfile.NamedTemporaryFile(suffix='.db', delete=False) as f:
        temp_path = f.name
    yield temp_path
    # Cleanup
    if os.path.exists(temp_path):
        os.unlink(temp_path)


@pytest.fixture
async def test_db_engine(temp_db_path):
    """Создание тестового движка базы данных"""
    engine = create_async_engine(f"sqlite+aiosqlite:///{temp_db_path}")

    # Создаем таблицы
    async with engine.begin() as conn:
        await conn.run_sync(Base.metadata.create_all)

    yield engine
    await engine.dispose()


@pytest.fixture
async def async_session_maker_fixture(test_db_engine):
    """Фабрика асинхронных сессий для тестов"""
    return async_sessionmaker(
        test_db_engine,
        class_=AsyncSession,
        expire_on_commit=False
    )


@pytest.fixture
async def test_session(async_session_maker_fixture):
    """Тестовая сессия базы данных"""
    async with async_session_maker_fixture() as session:
        yield session


@pytest.fixture
def cli_paths(tmp_path):
    """Пути к базе и логам для запуска main() в изоляции"""
    return [
        "--db-path", str(tmp_path / "runs.db"),
        "--log-file", str(tmp_path / "rankforge.log"),
        "--error-log-file", str(tmp_path / "rankforge_errors.log"),
    ]
