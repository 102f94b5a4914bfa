"""
Database package initialization
"""

from .database import configure, dispose_db, init_db, get_session_maker
from .models import Base, ExperimentCell, Settings, SolveRun
from .runs_db import list_experiment_cells, list_solve_runs, save_experiment_cells, save_solve_run
from .settings_db import get_setting, update_setting

__all__ = [
    'configure', 'dispose_db', 'init_db', 'get_session_maker', 'Base', 'ExperimentCell', 'Settings', 'SolveRun',
    'save_solve_run', 'list_solve_runs', 'save_experiment_cells', 'list_experiment_cells',
    'get_setting', 'update_setting',
]
