"""
Database models for the run ledger
Stores every CLI run and the checks it evaluated
"""

from sqlalchemy import Column, Integer, String, Float, DateTime, JSON, Boolean, ForeignKey
from sqlalchemy.orm import declarative_base, relationship
from datetime import datetime

Base = declarative_base()


class ExperimentRun(Base):
    """One subcommand invocation"""
    __tablename__ = 'experiment_runs'

    id = Column(Integer, primary_key=True, autoincrement=True)
    timestamp = Column(DateTime, default=datetime.now, index=True)

    subcommand = Column(String(32), index=True)
    seed = Column(String(24))  # 64-bit seeds overflow SQLite integers
    config_hash = Column(String(64), index=True)
    artifact_version = Column(String(16))
    rng_algorithm = Column(String(64))

    steps = Column(Integer)
    wall_clock_seconds = Column(Float)
    exit_code = Column(Integer, index=True)
    all_passed = Column(Boolean)

    output_checksums = Column(JSON)
    status_data = Column(JSON)

    checks = relationship("CheckRecord", back_populates="run", cascade="all, delete-orphan")


class CheckRecord(Base):
    """A named check evaluated during a run"""
    __tablename__ = 'check_records'

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(Integer, ForeignKey('experiment_runs.id'), index=True)
    timestamp = Column(DateTime, default=datetime.now, index=True)

    name = Column(String(64), index=True)
    passed = Column(Boolean)
    value = Column(Float)
    tolerance = Column(Float)
    detail = Column(JSON)

    run = relationship("ExperimentRun", back_populates="checks")
