# database/models.py - Модели базы данных прогонов и экспериментов
from sqlalchemy import Boolean, Column, DateTime, Float, Integer, String, Text
from sqlalchemy.ext.declarative import declarative_base
from sqlalchemy.sql import func

Base = declarative_base()


class SolveRun(Base):
    __tablename__ = 'solve_runs'

    id = Column(Integer, primary_key=True)
    fingerprint = Column(String(64), index=True)   # sha256 заложенного решения или файла
    kind = Column(String(20), nullable=False)      # rd, minrank
    variant = Column(String(50), nullable=False)   # overdetermined, hybrid, sm-minrank, ...
    params = Column(Text)                          # JSON (q, m, n, k/K, r)
    knobs = Column(Text)                           # JSON (a, p, b, n_prime, solver)

    verified = Column(Boolean, default=False, nullable=False)
    exit_code = Column(Integer, default=0)
    wall_time = Column(Float)
    seed = Column(Integer)
    plan = Column(Text)                            # JSON плана оценщика при --auto

    created_at = Column(DateTime, default=func.now())


class ExperimentCell(Base):
    __tablename__ = 'experiment_cells'

    id = Column(Integer, primary_key=True)
    experiment = Column(String(50), nullable=False, index=True)  # rank-heuristic, dexp
    params = Column(Text, nullable=False)   # JSON параметров ячейки
    trials = Column(Integer, default=0)
    predicted = Column(Text)                # ожидаемый ранг / D_exp
    measured = Column(Text)                 # JSON списка измерений
    match = Column(Boolean, default=False)
    skipped = Column(Boolean, default=False)
    seed = Column(Integer)

    created_at = Column(DateTime, default=func.now())


class Settings(Base):
    __tablename__ = 'settings'

    id = Column(Integer, primary_key=True)
    key = Column(String(100), unique=True, nullable=False)
    value = Column(Text)
    description = Column(String(255))

    created_at = Column(DateTime, default=func.now())
    updated_at = Column(DateTime, default=func.now(), onupdate=func.now())
