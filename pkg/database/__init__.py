"""
Optional run ledger backed by SQLAlchemy
"""

from .models import Base, ExperimentRun, CheckRecord
from .db_manager import RunLedger

__all__ = ['Base', 'ExperimentRun', 'CheckRecord', 'RunLedger']
