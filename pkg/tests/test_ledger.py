"""
Tests for the SQLAlchemy run ledger
"""

import math

import pytest

from core.checks import CheckResult
from cli.manifest import RunManifest
from database import RunLedger


@pytest.fixture
def ledger(tmp_path):
    return RunLedger(f"sqlite:///{tmp_path / 'ledger.db'}")


def make_manifest(seed: int = 42, config_hash: str = "a" * 64, exit_code: int = 0) -> RunManifest:
    manifest = RunManifest(subcommand="spectrum", config_hash=config_hash, seed=seed, steps=1000,
                           wall_clock_seconds=0.25, exit_code=exit_code)
    manifest.add_output("report.json", b"{}\n")
    return manifest


def test_save_and_read_back(ledger):
    checks = [CheckResult("multiplicities_sum_to_dimension", True, value=2.0)]
    run_id = ledger.save_run("spectrum", make_manifest(), checks, {'status': 'passed'})
    assert run_id is not None

    history = ledger.get_run_history()
    assert len(history) == 1
    run = history[0]
    assert run['id'] == run_id
    assert run['subcommand'] == "spectrum"
    assert run['all_passed'] is True
    assert set(run['outputs']) == {"report.json"}
    assert run['checks'] == [{'name': "multiplicities_sum_to_dimension", 'passed': True, 'value': 2.0}]


def test_full_range_seed_survives(ledger):
    seed = 2 ** 64 - 1
    ledger.save_run("spectrum", make_manifest(seed=seed), [])
    assert ledger.get_run_history()[0]['seed'] == seed


def test_non_finite_check_values_stored_as_null(ledger):
    checks = [CheckResult("exponent_negative_on_stable", True, value=-math.inf, tolerance=math.nan)]
    ledger.save_run("verify-met", make_manifest(), checks)
    assert ledger.get_run_history("verify-met")[0]['checks'][0]['value'] is None


def test_history_filters_by_subcommand(ledger):
    ledger.save_run("spectrum", make_manifest(), [])
    ledger.save_run("cost", make_manifest(), [])
    assert [r['subcommand'] for r in ledger.get_run_history("cost")] == ["cost"]
    assert len(ledger.get_run_history()) == 2


def test_find_reruns_by_config_hash(ledger):
    ledger.save_run("spectrum", make_manifest(config_hash="b" * 64), [])
    ledger.save_run("spectrum", make_manifest(config_hash="b" * 64), [])
    ledger.save_run("spectrum", make_manifest(config_hash="c" * 64), [])
    reruns = ledger.find_reruns("b" * 64)
    assert len(reruns) == 2
    assert reruns[0]['outputs'] == reruns[1]['outputs']


def test_check_statistics(ledger):
    ledger.save_run("stability", make_manifest(), [CheckResult("verdicts_agree", True)])
    ledger.save_run("stability", make_manifest(exit_code=2), [CheckResult("verdicts_agree", False)])
    stats = ledger.get_check_statistics()
    assert stats['checks']['verdicts_agree'] == {'total': 2, 'passed': 1, 'pass_rate': 0.5}
    assert stats['exit_codes'] == {0: 1, 2: 1}


def test_cleanup_keeps_recent_runs(ledger):
    ledger.save_run("spectrum", make_manifest(), [])
    assert ledger.cleanup_old_records(days=30) == 0
    assert len(ledger.get_run_history()) == 1
