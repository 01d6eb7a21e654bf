"""
Experiment configuration schema

One JSON document per run. Unknown keys are rejected, the schema version
is pinned and the seed must be given explicitly.
"""

from pathlib import Path
from typing import Annotated, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from config.settings import Config
from core.errors import ValidationError
from cocycle.generator import GeneratorMap, AffineRule, ExponentialRule, generator_from_dict, load_generator
from cocycle.presets import preset
from driving.types import Alphabet, BernoulliSpec, MarkovSpec, GaussianWalkSpec
from driving.samplers import DriverSpec, stationary_distribution
from grassmann.subspace import Subspace
from stability.cost import CostFunction

Symbol = Union[int, str]
SUBCOMMANDS = ("spectrum", "filtration", "verify-met", "subadditive", "counterexample", "stability", "cost")


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


# ==================== Generator ====================

class RuleConfig(StrictModel):
    kind: Literal["affine", "exponential"]
    base: List[List[float]]
    bounds: Tuple[float, float]
    slope: Optional[List[List[float]]] = None
    rate: float = 1.0

    @model_validator(mode="after")
    def _slope_for_affine(self):
        if self.kind == "affine" and self.slope is None:
            raise ValueError("affine rules need a 'slope' matrix")
        return self


class GeneratorConfig(StrictModel):
    """Exactly one of preset, matrices, file or rule"""
    preset: Optional[Literal["halving", "jordan", "rotation", "identity"]] = None
    matrices: Optional[Dict[str, List[List[float]]]] = None
    file: Optional[str] = None
    rule: Optional[RuleConfig] = None
    beta: Optional[float] = None
    norm: Literal["2", "1", "inf"] = Config.DEFAULT_NORM
    name: Optional[str] = None

    @model_validator(mode="after")
    def _one_source(self):
        given = [k for k in ("preset", "matrices", "file", "rule") if getattr(self, k) is not None]
        if len(given) != 1:
            raise ValueError(f"generator needs exactly one of preset, matrices, file or rule (got {given or 'none'})")
        return self

    def build(self, base_dir: Path) -> GeneratorMap:
        if self.preset is not None:
            return preset(self.preset)
        if self.file is not None:
            path = Path(self.file)
            return load_generator(path if path.is_absolute() else base_dir / path)
        if self.matrices is not None:
            data = {'matrices': self.matrices, 'beta': self.beta, 'norm': self.norm}
            if self.name:
                data['name'] = self.name
            return generator_from_dict(data)
        rule = self.rule
        if rule.kind == "affine":
            state_rule = AffineRule(base=np.asarray(rule.base), bounds=rule.bounds, slope=np.asarray(rule.slope))
        else:
            state_rule = ExponentialRule(base=np.asarray(rule.base), bounds=rule.bounds, rate=rule.rate)
        return GeneratorMap.from_rule(state_rule, beta=self.beta, norm=self.norm, name=self.name or "rule")


# ==================== Drivers ====================

class BernoulliConfig(StrictModel):
    kind: Literal["bernoulli"]
    symbols: List[Symbol]
    probs: List[float]

    def build(self) -> DriverSpec:
        return BernoulliSpec(Alphabet(tuple(self.symbols)), tuple(self.probs))


class MarkovConfig(StrictModel):
    """Omitting `initial` starts the chain from its stationary law"""
    kind: Literal["markov"]
    symbols: List[Symbol]
    kernel: List[List[float]]
    initial: Optional[List[float]] = None

    def build(self) -> DriverSpec:
        initial = self.initial
        if initial is None:
            initial = stationary_distribution(np.asarray(self.kernel, dtype=float)).tolist()
        return MarkovSpec(Alphabet(tuple(self.symbols)), tuple(map(tuple, self.kernel)), tuple(initial))


class GaussianWalkConfig(StrictModel):
    kind: Literal["gaussian_walk"]
    mean: float = 0.0
    stddev: float = 0.0
    step_stddev: float = 1.0

    def build(self) -> DriverSpec:
        return GaussianWalkSpec(self.mean, self.stddev, self.step_stddev)


DriverConfig = Annotated[Union[BernoulliConfig, MarkovConfig, GaussianWalkConfig], Field(discriminator="kind")]


# ==================== Experiment ====================

class CostConfig(StrictModel):
    kind: Literal["norm", "weighted_norm", "quadratic"] = "norm"
    weight: float = 1.0

    def build(self) -> CostFunction:
        return CostFunction(self.kind, self.weight)


class ExperimentConfig(StrictModel):
    schema_version: Literal[1]
    seed: int = Field(ge=0, lt=2 ** 64)
    generator: Optional[GeneratorConfig] = None
    driver: Optional[DriverConfig] = None

    horizon: int = Field(default=10_000, ge=1)
    trials: int = Field(default=1, ge=1)
    gap_threshold: float = Field(default=Config.GAP_THRESHOLD, gt=0)
    epsilon: float = Field(default=Config.EPSILON, gt=0, lt=1)
    pass_rate: float = Field(default=Config.PASS_RATE, ge=0, le=1)
    rate_margin: float = Field(default=Config.RATE_MARGIN, gt=0)
    norm_threshold: float = Field(default=Config.NORM_THRESHOLD, gt=0)
    sign_margin: float = Field(default=Config.SIGN_MARGIN, gt=0)
    confidence: float = Field(default=Config.CONFIDENCE_LEVEL, gt=0, lt=1)

    subspace: Optional[List[List[float]]] = None
    vector: Optional[List[float]] = None
    additive: Optional[Dict[str, float]] = None
    cost: CostConfig = CostConfig()
    generation: int = Field(default=4, ge=1)
    instances: int = Field(default=0, ge=0)

    csv: bool = True
    workers: int = Field(default=Config.DEFAULT_WORKERS, ge=1)
    ledger: Optional[str] = None

    # ---------- builders ----------

    def require_generator(self, base_dir: Path) -> GeneratorMap:
        if self.generator is None:
            raise ValidationError("this subcommand needs a 'generator'")
        return self.generator.build(base_dir)

    def require_driver(self) -> DriverSpec:
        if self.driver is None:
            raise ValidationError("this subcommand needs a 'driver'")
        return self.driver.build()

    def subspace_for(self, dimension: int) -> Subspace:
        """Span of the listed vectors; the whole space when none are listed"""
        if self.subspace is None:
            return Subspace.full(dimension)
        return Subspace.span(np.asarray(self.subspace, dtype=float).T, ambient=dimension)

    def vector_for(self, dimension: int) -> np.ndarray:
        if self.vector is None:
            return np.eye(dimension)[:, 0]
        v = np.asarray(self.vector, dtype=float)
        if v.shape != (dimension,):
            raise ValidationError(f"'vector' must have {dimension} entries, got {v.size}")
        return v

    def additive_values(self, alphabet: Alphabet) -> Dict:
        if self.additive is None:
            raise ValidationError("subcommand needs an 'additive' symbol → value table")
        by_text = {str(s): s for s in alphabet.symbols}
        unknown = [k for k in self.additive if k not in by_text]
        if unknown:
            raise ValidationError(f"'additive' names symbols outside the alphabet: {unknown}")
        return {by_text[k]: v for k, v in self.additive.items()}
