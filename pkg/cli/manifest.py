"""
Run manifests: what ran, with which RNG, and checksums of every output
"""

from dataclasses import dataclass, field
from typing import Any, Dict
import hashlib
import json

from config.settings import Config
from core.rng import RNG_ALGORITHM


def sha256_hex(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def config_hash(document: Dict[str, Any]) -> str:
    canonical = json.dumps(document, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return sha256_hex(canonical.encode('utf-8'))


@dataclass
class RunManifest:
    subcommand: str
    config_hash: str
    seed: int
    steps: int
    wall_clock_seconds: float = 0.0
    artifact_version: str = Config.ARTIFACT_VERSION
    rng_algorithm: str = RNG_ALGORITHM
    outputs: Dict[str, str] = field(default_factory=dict)
    exit_code: int = 0

    def add_output(self, name: str, payload: bytes):
        self.outputs[name] = sha256_hex(payload)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'subcommand': self.subcommand,
            'config_hash': self.config_hash,
            'seed': self.seed,
            'steps': self.steps,
            'wall_clock_seconds': round(self.wall_clock_seconds, 6),
            'artifact_version': self.artifact_version,
            'rng_algorithm': self.rng_algorithm,
            'outputs': dict(sorted(self.outputs.items())),
            'exit_code': self.exit_code
        }
