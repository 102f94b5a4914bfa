# database/settings_db.py - Функции для работы с настройками

from typing import Optional

from sqlalchemy import select
from sqlalchemy.exc import NoResultFound

from . import database
from .models import Settings


async def get_setting(key: str, default: Optional[str] = None, session_maker=None) -> Optional[str]:
    """
    Получает значение настройки по ключу.
    Если ключ не найден, возвращает значение по умолчанию.
    """
    session_maker = session_maker or database.get_session_maker()
    async with session_maker() as session:
        try:
            query = select(Settings.value).where(Settings.key == key)
            result = await session.execute(query)
            return result.scalar_one()
        except NoResultFound:
            return default


async def update_setting(key: str, value: str, description: Optional[str] = None, session_maker=None):
    """
    Обновляет или создает настройку.
    """
    session_maker = session_maker or database.get_session_maker()
    async with session_maker() as session:
        query = select(Settings).where(Settings.key == key)
        result = await session.execute(query)
        setting = result.scalar_one_or_none()

        if setting:
            setting.value = value
        else:
            setting = Settings(key=key, value=value, description=description)
            session.add(setting)

        await session.commit()


def modulus_key(q: int, m: int) -> str:
    """Ключ настройки с последним использованным модулем F_{q^m}"""
    return f"modulus:{q}:{m}"
