# config.py - Конфигурация
import os
from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or not value.strip().lstrip("-").isdigit():
        return default
    return int(value)


# Воспроизводимость: seed по умолчанию, если не задан --seed
_seed_str = os.getenv("RANKFORGE_SEED", "")
RANKFORGE_SEED = int(_seed_str) if _seed_str.strip().isdigit() else None

# Параллелизм (флаг --threads имеет приоритет)
THREADS = _int_env("RANKFORGE_THREADS", os.cpu_count() or 1)

# Ограничения "настольного" масштаба
MEMORY_BUDGET = _int_env("RANKFORGE_MEMORY_BUDGET", 2_000_000)  # максимум мономов в решаемой системе
BRUTE_FORCE_LIMIT = _int_env("RANKFORGE_BRUTE_FORCE_LIMIT", 2_000_000)  # максимум перебираемых кандидатов
HYBRID_MAX_GUESSES = _int_env("RANKFORGE_HYBRID_MAX_GUESSES", 1 << 20)

# Линейная алгебра
DENSE_THRESHOLD = _int_env("RANKFORGE_DENSE_THRESHOLD", 20_000)  # ниже - плотное исключение, выше - Видеман
WIEDEMANN_RETRIES = _int_env("RANKFORGE_WIEDEMANN_RETRIES", 8)
WIEDEMANN_CHECK_BITS = _int_env("RANKFORGE_WIEDEMANN_CHECK_BITS", 8)  # повторные прогоны: ложная единичность ядра с вероятностью <= 2^-bits
MAX_PRIME = _int_env("RANKFORGE_MAX_PRIME", 1 << 16)  # q^2 * len должно помещаться в int64

# Оценка сложности
DEFAULT_OMEGA = float(os.getenv("RANKFORGE_OMEGA", "2.81"))

# Логирование
LOG_LEVEL = os.getenv("RANKFORGE_LOG_LEVEL", "INFO").upper()
LOG_FILE = os.getenv("RANKFORGE_LOG_FILE", "rankforge.log")
ERROR_LOG_FILE = os.getenv("RANKFORGE_ERROR_LOG_FILE", "rankforge_errors.log")

# База данных прогонов и экспериментов
DB_PATH = os.getenv(
    "RANKFORGE_DB_PATH",
    os.path.join(os.path.dirname(os.path.abspath(__file__)), "rankforge.db"),
)

# Версия формата JSON-отчетов
REPORT_FORMAT_VERSION = 1
