"""
Experiment runners behind the CLI subcommands

Each runner turns a validated ExperimentConfig into a JSON-ready report,
an optional per-step series and a list of named checks.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Type
import logging
import time

import numpy as np
import pandas as pd

from config.settings import Config
from core.checks import CheckResult, summarize_checks
from core.errors import CocycleLabError, PreconditionError
from core.parallel import map_trials
from core.rng import trial_seeds
from driving.samplers import sample
from lyapunov import spectrum, filtration_estimate, stable_subspace, verify_met, Tolerances
from subadditive import (
    LogNormBuilder, build_series, subadditivity_residual, kingman_limit,
    check_invariant, sign_equivalence_trial, atkinson_recurrence
)
from counterexamples import slow_decay_trajectory, slow_decay_word, generation_exponents, closed_form_generation_exponent
from counterexamples import jordan_min_gain
from stability import (
    conditional_stability, equivalence_check, random_diagonal_instances, cost_index, optimal_cost_estimate
)
from .schema import ExperimentConfig

logger = logging.getLogger(__name__)


class ExperimentStatus(Enum):
    INITIALIZED = "initialized"
    RUNNING = "running"
    PASSED = "passed"
    FAILED = "failed"
    ERROR = "error"


@dataclass
class ExperimentResult:
    report: Dict[str, Any]
    checks: List[CheckResult] = field(default_factory=list)
    series: Optional[pd.DataFrame] = None
    steps: int = 0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


class BaseExperiment(ABC):
    """Status tracking, action log and check log shared by every subcommand"""

    name = "experiment"

    def __init__(self, config: ExperimentConfig, base_dir: Optional[Path] = None):
        self.config = config
        self.base_dir = Path(base_dir) if base_dir is not None else Path.cwd()
        self.experiment_id = f"{self.name}-{config.seed}"
        self.status = ExperimentStatus.INITIALIZED
        self.log_messages: List[Dict[str, Any]] = []
        self.check_log: List[CheckResult] = []
        self.created_at = datetime.now()
        self.metrics = {
            'total_runs': 0,
            'checks_passed': 0,
            'checks_failed': 0,
            'average_runtime': 0.0
        }

    def log_action(self, action: str, level: str = "info", metadata: Dict = None) -> None:
        self.log_messages.append({
            'timestamp': datetime.now().isoformat(),
            'experiment_id': self.experiment_id,
            'action': action,
            'level': level,
            'metadata': metadata or {}
        })
        log_method = getattr(logger, level.lower(), logger.info)
        log_method(f"[{self.experiment_id}] {action}")

    def record_check(self, check: CheckResult) -> CheckResult:
        self.check_log.append(check)
        if check.passed:
            self.metrics['checks_passed'] += 1
        else:
            self.metrics['checks_failed'] += 1
        self.log_action(f"Check {check.name}: {'passed' if check.passed else 'FAILED'}",
                        level="info" if check.passed else "warning",
                        metadata={'value': check.value, 'tolerance': check.tolerance})
        return check

    def set_status(self, status: ExperimentStatus) -> None:
        old_status = self.status
        self.status = status
        self.log_action(f"Status changed: {old_status.value} -> {status.value}", level="debug")

    def update_metrics(self, runtime: float) -> None:
        self.metrics['total_runs'] += 1
        total = self.metrics['total_runs']
        current_avg = self.metrics['average_runtime']
        self.metrics['average_runtime'] = (current_avg * (total - 1) + runtime) / total

    @abstractmethod
    def execute(self) -> ExperimentResult:
        ...

    def run(self) -> ExperimentResult:
        self.set_status(ExperimentStatus.RUNNING)
        started = time.perf_counter()
        try:
            result = self.execute()
        except CocycleLabError as e:
            self.set_status(ExperimentStatus.ERROR)
            self.log_action(f"Run failed: {e}", level="error")
            raise
        finally:
            self.update_metrics(time.perf_counter() - started)

        for check in result.checks:
            self.record_check(check)
        self.set_status(ExperimentStatus.PASSED if result.passed else ExperimentStatus.FAILED)
        return result

    def get_status(self) -> Dict[str, Any]:
        return {
            'experiment_id': self.experiment_id,
            'name': self.name,
            'status': self.status.value,
            'created_at': self.created_at.isoformat(),
            'log_count': len(self.log_messages),
            'checks': summarize_checks(self.check_log),
            'metrics': self.metrics
        }

    # ---------- helpers ----------

    def generator(self):
        return self.config.require_generator(self.base_dir)

    def driver(self):
        return self.config.require_driver()

    def path(self, length: Optional[int] = None):
        return sample(self.driver(), length or self.config.horizon, self.config.seed)

    def __repr__(self) -> str:
        return f"<{type(self).__name__}(id={self.experiment_id}, status={self.status.value})>"


def _running_frame(running: Optional[np.ndarray]) -> Optional[pd.DataFrame]:
    if running is None:
        return None
    columns = {'k': running[:, 0].astype(np.int64)}
    for j in range(1, running.shape[1]):
        columns[f'rate_{j}'] = running[:, j]
    return pd.DataFrame(columns)


# ==================== Subcommands ====================

class SpectrumExperiment(BaseExperiment):
    name = "spectrum"

    def execute(self) -> ExperimentResult:
        gen, path = self.generator(), self.path()
        spec = spectrum(gen, path, self.config.horizon, self.config.gap_threshold)
        self.log_action(f"Spectrum {list(spec.exponents)} x {list(spec.multiplicities)}")
        checks = [CheckResult('multiplicities_sum_to_dimension', spec.dimension == gen.dimension,
                              value=spec.dimension)]
        return ExperimentResult(
            report={'spectrum': spec.to_dict(), 'path': path.metadata(), 'generator': gen.to_dict()},
            checks=checks,
            series=_running_frame(spec.diagnostics.get('running')),
            steps=self.config.horizon
        )


class FiltrationExperiment(BaseExperiment):
    name = "filtration"

    def execute(self) -> ExperimentResult:
        gen, path = self.generator(), self.path()
        estimate = filtration_estimate(gen, path, self.config.horizon, self.config.gap_threshold)
        stable = stable_subspace(estimate, margin=self.config.epsilon)
        checks = [
            CheckResult('flag_complete', estimate.flag.is_complete),
            CheckResult('flag_nested', True, value=max(estimate.flag.residuals, default=0.0),
                        tolerance=estimate.flag.tolerance)
        ]
        return ExperimentResult(
            report={'filtration': estimate.to_dict(), 'stable_subspace': stable.to_dict(),
                    'path': path.metadata()},
            checks=checks,
            series=_running_frame(estimate.spectrum.diagnostics.get('running')),
            steps=2 * self.config.horizon
        )


class VerifyMetExperiment(BaseExperiment):
    name = "verify-met"

    def execute(self) -> ExperimentResult:
        cfg = self.config
        gen, driver = self.generator(), self.driver()
        tolerances = Tolerances(epsilon=cfg.epsilon, seed=cfg.seed)

        def run_one(seed: int):
            path = sample(driver, cfg.horizon + 1, seed)
            return seed, verify_met(gen, path, cfg.horizon, cfg.gap_threshold, tolerances)

        outcomes = map_trials(run_one, trial_seeds(cfg.seed, cfg.trials), cfg.workers)
        names = [c.name for c in outcomes[0][1].checks]
        rows = [dict({'seed': s, 'passed': r.passed}, **{c.name: c.passed for c in r.checks}) for s, r in outcomes]
        frame = pd.DataFrame(rows, columns=['seed', 'passed'] + names)

        checks = []
        for name in names:
            rate = float(frame[name].mean())
            checks.append(CheckResult(name, rate >= cfg.pass_rate, value=rate, tolerance=cfg.pass_rate))
        report = {
            'pass_rate': float(frame['passed'].mean()),
            'check_pass_rates': {c.name: c.value for c in checks},
            'trials': cfg.trials,
            'epsilon': cfg.epsilon,
            'first_trial': outcomes[0][1].to_dict()
        }
        return ExperimentResult(report=report, checks=checks, series=frame, steps=4 * cfg.horizon * cfg.trials)


class SubadditiveExperiment(BaseExperiment):
    name = "subadditive"

    def execute(self) -> ExperimentResult:
        cfg = self.config
        gen, driver = self.generator(), self.driver()
        L = cfg.subspace_for(gen.dimension)
        path = sample(driver, cfg.horizon, cfg.seed)
        builder = LogNormBuilder(gen, L)
        series = build_series(builder, path, cfg.horizon)
        residual = subadditivity_residual(builder, path, cfg.horizon, seed=cfg.seed)
        limit = kingman_limit(series, residual.value)
        report = {'builder': series.builder, 'residual': residual.to_dict(), 'kingman': limit.to_dict()}
        checks = []

        try:
            check_invariant(gen, L)
            invariant = True
        except PreconditionError:
            invariant = False
            self.log_action("L is not invariant; sign equivalence skipped", level="warning")
        report['invariant'] = invariant

        if invariant:
            checks.append(CheckResult('subadditivity_residual', residual.value <= Config.RATE_TOLERANCE,
                                      value=residual.value, tolerance=Config.RATE_TOLERANCE))
            if cfg.trials > 1:
                signs = sign_equivalence_trial(gen, driver, L, cfg.horizon, cfg.trials, cfg.seed,
                                               margin=cfg.sign_margin, workers=cfg.workers)
                report['sign_equivalence'] = signs.to_dict()
                checks.append(CheckResult('sign_agreement', signs.agreement >= cfg.pass_rate,
                                          value=signs.agreement, tolerance=cfg.pass_rate))

        if cfg.additive is not None:
            values = cfg.additive_values(driver.alphabet)
            recurrence = atkinson_recurrence(values, driver, cfg.horizon, cfg.trials, seed=cfg.seed,
                                             workers=cfg.workers)
            report['recurrence'] = recurrence.to_dict()

        return ExperimentResult(report=report, checks=checks, series=series.to_frame(),
                                steps=cfg.horizon * (2 + cfg.trials))


class CounterexampleExperiment(BaseExperiment):
    name = "counterexample"

    def execute(self) -> ExperimentResult:
        cfg = self.config
        k = cfg.generation
        vector = cfg.vector_for(2)
        word = slow_decay_word(k)
        trajectory = slow_decay_trajectory(k, vector)
        exponents = generation_exponents(k)
        gains = jordan_min_gain(min(cfg.horizon, 1000))

        checks = []
        if np.array_equal(vector, [1.0, 0.0]):
            expected = 2.0 ** -word.ones
            checks.append(CheckResult('final_norm_exact', float(trajectory.norms[-1]) == expected,
                                      value=float(trajectory.norms[-1]), detail={'expected': expected}))
        if k >= 2:
            increasing = all(b > a for a, b in zip(exponents[1:], exponents[2:]))
            checks.append(CheckResult('generation_exponents_increasing', increasing))
        checks.append(CheckResult('jordan_unimodular', bool(np.max(np.abs(gains.determinant - 1.0)) <= 1e-10),
                                  value=float(np.max(np.abs(gains.determinant - 1.0))), tolerance=1e-10))

        report = {
            'word': {'generation': k, 'length': word.length, 'ones': word.ones},
            'trajectory': trajectory.to_dict(),
            'generation_exponents': exponents,
            'closed_form_exponents': [closed_form_generation_exponent(j) for j in range(1, k + 1)],
            'jordan': gains.to_dict()
        }
        return ExperimentResult(report=report, checks=checks, series=trajectory.to_frame(), steps=word.length)


class StabilityExperiment(BaseExperiment):
    name = "stability"

    def execute(self) -> ExperimentResult:
        cfg = self.config
        if cfg.instances > 0:
            instances = random_diagonal_instances(cfg.instances, seed=cfg.seed)
            result = equivalence_check(instances, cfg.horizon, cfg.trials, cfg.rate_margin, cfg.norm_threshold,
                                       cfg.seed, cfg.confidence, cfg.workers)
            checks = [CheckResult('classifier_agreement', result.agreement >= cfg.pass_rate,
                                  value=result.agreement, tolerance=cfg.pass_rate)]
            rows = [{'index': e['index'], 'true_rate': e['true_rate'], 'agrees': e['agrees']}
                    for e in result.disagreements + result.boundary]
            return ExperimentResult(report={'equivalence': result.to_dict()}, checks=checks,
                                    series=pd.DataFrame(rows, columns=['index', 'true_rate', 'agrees']),
                                    steps=cfg.instances * cfg.trials * cfg.horizon)

        gen, driver = self.generator(), self.driver()
        L = cfg.subspace_for(gen.dimension)
        verdict = conditional_stability(gen, driver, L, cfg.horizon, cfg.trials, cfg.rate_margin,
                                        cfg.norm_threshold, cfg.seed, cfg.confidence, cfg.workers)
        frame = pd.DataFrame([vars(p) for p in verdict.paths])
        return ExperimentResult(report={'verdict': verdict.to_dict(), 'subspace_dim': L.dim},
                                checks=[CheckResult('verdicts_agree', verdict.agrees)],
                                series=frame, steps=cfg.trials * cfg.horizon)


class CostExperiment(BaseExperiment):
    name = "cost"

    def execute(self) -> ExperimentResult:
        cfg = self.config
        gen, driver = self.generator(), self.driver()
        u = cfg.vector_for(gen.dimension)
        V = cfg.cost.build()
        first = cost_index(gen, sample(driver, cfg.horizon, cfg.seed), u, V, cfg.horizon)
        report = {'first_path': first.to_dict()}
        checks = [CheckResult('partial_sums_nondecreasing', bool(np.all(np.diff(first.partial_sums) >= 0)))]
        if cfg.trials > 1:
            optimal = optimal_cost_estimate(gen, driver, u, V, cfg.horizon, cfg.trials, cfg.seed, cfg.workers)
            report['optimal'] = optimal.to_dict()
            checks.append(CheckResult('running_min_nonincreasing', optimal.nonincreasing))
        return ExperimentResult(report=report, checks=checks, series=first.to_frame(),
                                steps=cfg.horizon * max(1, cfg.trials))


EXPERIMENTS: Dict[str, Type[BaseExperiment]] = {
    cls.name: cls for cls in (
        SpectrumExperiment, FiltrationExperiment, VerifyMetExperiment, SubadditiveExperiment,
        CounterexampleExperiment, StabilityExperiment, CostExperiment
    )
}
