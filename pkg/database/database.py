# database/database.py - Настройка подключения к БД
import logging

from sqlalchemy.ext.asyncio import async_sessionmaker, create_async_engine

from config import DB_PATH
from .models import Base

logger = logging.getLogger(__name__)


def make_engine(db_path: str = DB_PATH):
    """Асинхронный движок SQLite для заданного файла"""
    return create_async_engine(f'sqlite+aiosqlite:///{db_path}', echo=False)


# Создаем асинхронный "движок" для SQLAlchemy
engine = make_engine()

# Создаем фабрику асинхронных сессий
async_session_maker = async_sessionmaker(engine, expire_on_commit=False)


def configure(db_path: str) -> None:
    """Переключает движок и фабрику сессий на другой файл базы"""
    global engine, async_session_maker
    engine = make_engine(db_path)
    async_session_maker = async_sessionmaker(engine, expire_on_commit=False)
    logger.debug(f"База данных: {db_path}")


def get_session_maker():
    return async_session_maker


async def init_db():
    """
    Инициализирует базу данных: создает все необходимые таблицы.
    """
    async with engine.begin() as conn:
        await conn.run_sync(Base.metadata.create_all)


async def dispose_db():
    """Закрывает соединения текущего движка"""
    await engine.dispose()
