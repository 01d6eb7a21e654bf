"""
Command-line front end: parse flags, validate the experiment config, run
the subcommand and emit report.json, series.csv and manifest.json.

Exit codes: 0 success, 1 validation error, 2 check failure.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence
import argparse
import json
import logging
import sys
import time

import pydantic

from config.settings import Config
from core.checks import summarize_checks
from core.errors import CocycleLabError
from database.db_manager import RunLedger
from .experiments import EXPERIMENTS, ExperimentResult
from .manifest import RunManifest, config_hash
from .outputs import json_bytes, csv_bytes, write_atomic
from .schema import ExperimentConfig, SUBCOMMANDS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CHECK_FAILED = 2

OVERRIDES = ("seed", "horizon", "trials", "generation", "ledger")


class ConfigError(CocycleLabError):
    """Config document could not be read or validated; message is line-anchored"""


@dataclass
class RunOutcome:
    exit_code: int
    report: Dict[str, Any] = field(default_factory=dict)
    manifest: Optional[RunManifest] = None
    written: List[Path] = field(default_factory=list)
    error: Optional[str] = None


# ==================== Config loading ====================

def _line_of(text: str, loc: Sequence[Any]) -> int:
    """Line of the deepest key in `loc` found in order; 1 when nothing matches"""
    position = 0
    for key in loc:
        if not isinstance(key, str):
            continue
        found = text.find(f'"{key}"', position)
        if found < 0:
            break
        position = found
    return text.count("\n", 0, position) + 1


def parse_config(text: str, source: str = "<config>", overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{source}:{e.lineno}:{e.colno}: {e.msg}") from e
    if not isinstance(document, dict):
        raise ConfigError(f"{source}:1:1: config must be a JSON object")
    document.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return ExperimentConfig.model_validate(document)
    except pydantic.ValidationError as e:
        lines = []
        for err in e.errors():
            where = ".".join(str(p) for p in err['loc']) or "<root>"
            lines.append(f"{source}:{_line_of(text, err['loc'])}: {where}: {err['msg']}")
        raise ConfigError("\n".join(lines)) from e


def load_config(path: Path, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigError(f"{path}: cannot read config ({e.strerror})") from e
    return parse_config(text, str(path), overrides)


# ==================== Run ====================

def run(subcommand: str, config: ExperimentConfig, output_dir: Path, base_dir: Optional[Path] = None,
        ledger_url: Optional[str] = None) -> RunOutcome:
    """Run one subcommand; outputs are written only after the experiment completes"""
    if subcommand not in EXPERIMENTS:
        return RunOutcome(EXIT_INVALID, error=f"unknown subcommand {subcommand!r}; choose from {list(SUBCOMMANDS)}")

    experiment = EXPERIMENTS[subcommand](config, base_dir)
    started = time.perf_counter()
    try:
        result: ExperimentResult = experiment.run()
    except (CocycleLabError, ValueError) as e:
        logger.error(f"{subcommand} rejected: {e}")
        return RunOutcome(EXIT_INVALID, error=str(e))
    elapsed = time.perf_counter() - started

    summary = summarize_checks(result.checks)
    report = {
        'subcommand': subcommand,
        'seed': config.seed,
        'horizon': config.horizon,
        'checks': [c.to_dict() for c in result.checks],
        'summary': summary,
        'result': result.report
    }
    exit_code = EXIT_OK if summary['all_passed'] else EXIT_CHECK_FAILED

    manifest = RunManifest(
        subcommand=subcommand,
        config_hash=config_hash(config.model_dump(mode='json')),
        seed=config.seed,
        steps=result.steps,
        wall_clock_seconds=elapsed,
        exit_code=exit_code
    )

    output_dir = Path(output_dir)
    payloads = {'report.json': json_bytes(report)}
    if config.csv and result.series is not None:
        payloads['series.csv'] = csv_bytes(result.series)

    written = []
    for name, payload in payloads.items():
        manifest.add_output(name, payload)
        written.append(write_atomic(output_dir / name, payload))
    written.append(write_atomic(output_dir / 'manifest.json', json_bytes(manifest.to_dict())))

    url = ledger_url or config.ledger
    if url:
        RunLedger(url).save_run(subcommand, manifest, result.checks, experiment.get_status())

    if exit_code == EXIT_CHECK_FAILED:
        logger.warning(f"{subcommand}: failed checks {summary['failed']}")
    else:
        logger.info(f"{subcommand}: {summary['passed']}/{summary['total']} checks passed")
    return RunOutcome(exit_code, report, manifest, written)


# ==================== Entry point ====================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cocycle-lab", description="Random matrix cocycle experiments")
    parser.add_argument("subcommand", choices=SUBCOMMANDS + ("status",))
    parser.add_argument("--config", type=Path, help="experiment config (JSON)")
    parser.add_argument("--output", type=Path, help="output directory (default: results/<subcommand>)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--horizon", type=int)
    parser.add_argument("--trials", type=int)
    parser.add_argument("--generation", type=int)
    parser.add_argument("--ledger", type=str, help="SQLAlchemy URL of the run ledger")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.subcommand == "status":
        Config.print_status()
        return EXIT_OK if Config.validate_config()['valid'] else EXIT_INVALID

    overrides = {k: getattr(args, k) for k in OVERRIDES}
    try:
        if args.config is not None:
            config = load_config(args.config, overrides)
            base_dir = args.config.resolve().parent
        elif args.subcommand == "counterexample":
            # deterministic construction: the seed only labels the run
            document = json.dumps({'schema_version': Config.SCHEMA_VERSION, 'seed': 0})
            config = parse_config(document, "<defaults>", overrides)
            base_dir = Path.cwd()
        else:
            raise ConfigError(f"{args.subcommand} needs --config")
    except ConfigError as e:
        print(str(e), file=sys.stderr)
        return EXIT_INVALID

    output_dir = args.output or Config.RESULTS_DIR / args.subcommand
    outcome = run(args.subcommand, config, output_dir, base_dir)
    if outcome.error:
        print(outcome.error, file=sys.stderr)
    return outcome.exit_code
