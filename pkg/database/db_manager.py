"""
Run ledger
Records CLI runs and their checks; failures are logged, never raised into the run
"""

from sqlalchemy import create_engine, desc, func, case
from sqlalchemy.orm import sessionmaker, scoped_session
from datetime import datetime, timedelta
from typing import Dict, Any, List, Optional
import logging
import math

from config.settings import Config
from core.checks import CheckResult
from core.serialize import to_jsonable
from .models import Base, ExperimentRun, CheckRecord

logger = logging.getLogger(__name__)


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


class RunLedger:
    """
    SQLAlchemy-backed store of experiment runs
    """

    def __init__(self, db_url: str = None):
        self.db_url = db_url or f"sqlite:///{Config.RESULTS_DIR / 'ledger.db'}"
        self.engine = None
        self.SessionLocal = None
        self.initialize_database()

    def initialize_database(self):
        """Initialize database connection and create tables"""
        try:
            self.engine = create_engine(
                self.db_url,
                echo=Config.DEBUG_MODE,
                pool_pre_ping=True
            )
            Base.metadata.create_all(self.engine)
            self.SessionLocal = scoped_session(
                sessionmaker(autocommit=False, autoflush=False, bind=self.engine)
            )
            logger.info("✓ Run ledger initialized")
        except Exception as e:
            logger.error(f"Run ledger initialization failed: {e}")
            raise

    def get_session(self):
        return self.SessionLocal()

    def close_session(self, session):
        session.close()

    # ==================== Runs ====================

    def save_run(self, subcommand: str, manifest, checks: List[CheckResult],
                 status: Optional[Dict[str, Any]] = None) -> Optional[int]:
        """Save a run with its checks; returns the run ID or None on failure"""
        session = self.get_session()
        try:
            run = ExperimentRun(
                subcommand=subcommand,
                seed=str(manifest.seed),
                config_hash=manifest.config_hash,
                artifact_version=manifest.artifact_version,
                rng_algorithm=manifest.rng_algorithm,
                steps=manifest.steps,
                wall_clock_seconds=manifest.wall_clock_seconds,
                exit_code=manifest.exit_code,
                all_passed=all(c.passed for c in checks),
                output_checksums=dict(manifest.outputs),
                status_data=to_jsonable(status or {})
            )
            for check in checks:
                run.checks.append(CheckRecord(
                    name=check.name,
                    passed=bool(check.passed),
                    value=_finite_or_none(check.value),
                    tolerance=_finite_or_none(check.tolerance),
                    detail=to_jsonable(check.detail)
                ))

            session.add(run)
            session.commit()

            run_id = run.id
            logger.info(f"Run saved: ID={run_id}")
            return run_id

        except Exception as e:
            session.rollback()
            logger.error(f"Failed to save run: {e}")
            return None
        finally:
            self.close_session(session)

    def get_run_history(self, subcommand: str = None, days: int = 7) -> List[Dict]:
        """Runs newest first, optionally for one subcommand"""
        session = self.get_session()
        try:
            cutoff_date = datetime.now() - timedelta(days=days)
            query = session.query(ExperimentRun).filter(ExperimentRun.timestamp >= cutoff_date)
            if subcommand:
                query = query.filter(ExperimentRun.subcommand == subcommand)
            runs = query.order_by(desc(ExperimentRun.timestamp), desc(ExperimentRun.id)).all()
            return [self._run_to_dict(r) for r in runs]
        finally:
            self.close_session(session)

    def find_reruns(self, config_hash: str) -> List[Dict]:
        """Earlier runs of an identical config, for checksum comparison"""
        session = self.get_session()
        try:
            runs = session.query(ExperimentRun).filter(
                ExperimentRun.config_hash == config_hash
            ).order_by(ExperimentRun.id).all()
            return [self._run_to_dict(r) for r in runs]
        finally:
            self.close_session(session)

    # ==================== Statistics ====================

    def get_check_statistics(self, days: int = 7) -> Dict[str, Any]:
        """Per-check pass rates over recent runs"""
        session = self.get_session()
        try:
            cutoff_date = datetime.now() - timedelta(days=days)
            rows = session.query(
                CheckRecord.name,
                func.count(CheckRecord.id).label('total'),
                func.sum(case((CheckRecord.passed.is_(True), 1), else_=0)).label('passed')
            ).filter(CheckRecord.timestamp >= cutoff_date).group_by(CheckRecord.name).all()

            exit_codes = session.query(
                ExperimentRun.exit_code,
                func.count(ExperimentRun.id).label('count')
            ).filter(ExperimentRun.timestamp >= cutoff_date).group_by(ExperimentRun.exit_code).all()

            return {
                'period_days': days,
                'checks': {
                    r.name: {
                        'total': r.total,
                        'passed': int(r.passed or 0),
                        'pass_rate': round((r.passed or 0) / r.total, 4) if r.total else 0.0
                    } for r in rows
                },
                'exit_codes': {e.exit_code: e.count for e in exit_codes}
            }
        finally:
            self.close_session(session)

    # ==================== Helper Methods ====================

    def _run_to_dict(self, run: ExperimentRun) -> Dict:
        return {
            'id': run.id,
            'timestamp': run.timestamp.isoformat(),
            'subcommand': run.subcommand,
            'seed': int(run.seed),
            'config_hash': run.config_hash,
            'exit_code': run.exit_code,
            'all_passed': run.all_passed,
            'outputs': run.output_checksums,
            'checks': [{'name': c.name, 'passed': c.passed, 'value': c.value} for c in run.checks]
        }

    def cleanup_old_records(self, days: int = 30) -> int:
        """Delete runs older than `days`; returns the number removed"""
        session = self.get_session()
        try:
            cutoff_date = datetime.now() - timedelta(days=days)
            old = session.query(ExperimentRun).filter(ExperimentRun.timestamp < cutoff_date).all()
            for run in old:
                session.delete(run)
            session.commit()
            logger.info(f"Cleaned up {len(old)} runs older than {days} days")
            return len(old)
        except Exception as e:
            session.rollback()
            logger.error(f"Cleanup failed: {e}")
            return 0
        finally:
            self.close_session(session)
