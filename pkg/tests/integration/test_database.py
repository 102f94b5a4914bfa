"""
@file: tests/integration/test_database.py
@description: Интеграционные тесты для работы с базой данных прогонов и экспериментов
@dependencies: pytest, sqlalchemy
@created: 2025-01-21
"""

import json

import pytest
from sqlalchemy import select, text

from database.models import SolveRun
from database.runs_db import list_experiment_cells, list_solve_runs, save_experiment_cells, save_solve_run
from database.settings_db import get_setting, modulus_key, update_setting


@pytest.mark.integration
@pytest.mark.database
class TestDatabaseOperations:
    """Интеграционные тесты для операций с базой данных"""

    async def test_database_initialization(self, test_db_engine):
        """Тест инициализации базы данных"""
        async with test_db_engine.connect() as conn:
            result = await conn.execute(text("SELECT name FROM sqlite_master WHERE type='table'"))
            tables = [row[0] for row in result.fetchall()]

        assert 'solve_runs' in tables
        assert 'experiment_cells' in tables
        assert 'settings' in tables

    async def test_solve_run_roundtrip(self, async_session_maker_fixture, test_session):
        """Тест сохранения прогона решателя"""
        run_id = await save_solve_run(
            "rd", "overdetermined",
            {"q": 2, "m": 7, "n": 8, "k": 3, "r": 2}, {"p": 0},
            verified=True, exit_code=0, wall_time=0.12, seed=11,
            fingerprint="ab" * 32, session_maker=async_session_maker_fixture,
        )
        result = await test_session.execute(select(SolveRun).where(SolveRun.id == run_id))
        run = result.scalar_one()

        assert run.verified
        assert json.loads(run.params)["m"] == 7
        assert run.plan is None
        assert run.created_at is not None

    async def test_solve_runs_newest_first(self, async_session_maker_fixture):
        for variant in ("overdetermined", "hybrid", "sm-minrank"):
            await save_solve_run("rd", variant, {}, {}, verified=False, exit_code=5, wall_time=1.0,
                                 plan={"variant": variant}, session_maker=async_session_maker_fixture)

        runs = await list_solve_runs(limit=2, session_maker=async_session_maker_fixture)
        assert [run.variant for run in runs] == ["sm-minrank", "hybrid"]
        assert json.loads(runs[0].plan) == {"variant": "sm-minrank"}

    async def test_settings_operations(self, async_session_maker_fixture):
        """Тест операций с настройками"""
        key = modulus_key(2, 7)
        assert key == "modulus:2:7"
        assert await get_setting(key, "none", session_maker=async_session_maker_fixture) == "none"

        await update_setting(key, "1,1,0,0,0,0,0,1", "x^7 + x + 1", session_maker=async_session_maker_fixture)
        await update_setting(key, "1,0,0,1,0,0,0,1", session_maker=async_session_maker_fixture)
        assert await get_setting(key, session_maker=async_session_maker_fixture) == "1,0,0,1,0,0,0,1"

    async def test_experiment_cells(self, async_session_maker_fixture):
        """Тест сохранения и чтения ячеек эксперимента"""
        cells = [
            {"params": {"q": 13, "m": 7, "n": 7, "K": 5, "r": 2, "b": 1}, "trials": 2,
             "predicted": 245, "measured": [104, 104], "match": True, "skipped": False},
            {"params": {"q": 13, "m": 8, "n": 8, "K": 20, "r": 3, "b": 3}, "trials": 2,
             "predicted": 9000, "measured": [], "match": False, "skipped": True},
        ]
        saved = await save_experiment_cells("dexp", cells, seed=0, session_maker=async_session_maker_fixture)
        await save_experiment_cells("rank-heuristic", [{"params": {"q": 2}, "match": True}],
                                    session_maker=async_session_maker_fixture)

        assert saved == 2
        stored = await list_experiment_cells("dexp", session_maker=async_session_maker_fixture)
        assert [cell["measured"] for cell in stored] == [[104, 104], []]
        assert stored[0]["params"]["K"] == 5
        assert stored[1]["skipped"]
        everything = await list_experiment_cells(session_maker=async_session_maker_fixture)
        assert len(everything) == 3
