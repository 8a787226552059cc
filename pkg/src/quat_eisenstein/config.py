"""Configuration models for commands and verify suites."""

from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Annotated, Literal, Optional

import yaml
from pydantic import AfterValidator, BaseModel, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from sympy import isprime


class OutputFormat(str, Enum):
    """Output formats."""

    JSON = "json"
    CSV = "csv"
    HUMAN = "human"


class SeriesKind(str, Enum):
    """Series that ``expand`` can write."""

    EISENSTEIN = "eisenstein"
    G = "g"
    F = "f"
    GSTAR = "gstar"


class VerifySuite(str, Enum):
    """Verification suites."""

    BERNOULLI = "bernoulli"
    DIVISOR = "divisor"
    KUMMER = "kummer"
    LEMMA2 = "lemma2"
    COSET = "coset"
    GSTAR = "gstar"
    LEOPOLDT = "leopoldt"
    PADIC = "padic"
    LIMIT = "limit"
    TILDE = "tilde"


def _odd_prime(v: int) -> int:
    if v < 3 or not isprime(v):
        raise ValueError(f"p must be an odd prime, got {v}")
    return v


def _even_weight(v: int) -> int:
    if v < 4 or v % 2:
        raise ValueError(f"k must be even and >= 4, got {v}")
    return v


OddPrime = Annotated[int, AfterValidator(_odd_prime)]
EvenWeight = Annotated[int, AfterValidator(_even_weight)]


class CommandConfig(BaseModel):
    """Validated flags of a single CLI invocation."""

    subcommand: str
    p: Optional[int] = Field(default=None, description="Odd prime")
    k: Optional[int] = Field(default=None, description="Even weight >= 4")
    m_max: int = Field(default=4, ge=0, le=12, description="Depth of the weight ladder")
    trace_bound: int = Field(default=1, ge=0, le=64, description="Trace bound of expansions")
    precision: int = Field(default=12, ge=1, le=400, description="p-adic working precision N")
    H: Optional[str] = Field(default=None, description='Form literal "n,m,[c1,c2,c3,c4]"')
    seed: int = Field(default=0, description="Random seed")
    format: OutputFormat = Field(default=OutputFormat.HUMAN, description="Output format")

    @field_validator("p")
    @classmethod
    def p_must_be_odd_prime(cls, v: Optional[int]) -> Optional[int]:
        return None if v is None else _odd_prime(v)

    @field_validator("k")
    @classmethod
    def k_must_be_even_weight(cls, v: Optional[int]) -> Optional[int]:
        return None if v is None else _even_weight(v)


class BernoulliSuiteConfig(BaseModel):
    max_index: int = Field(default=200, ge=2, le=600, description="Largest even index checked")


class DivisorSuiteConfig(BaseModel):
    n_max: int = Field(default=1000, ge=1, description="Largest N")
    m_max: int = Field(default=10, ge=0, description="Largest exponent in the sigma twist")
    f_max_power: int = Field(default=5, ge=0, description="Test functions d -> d^j, j <= this")
    primes: list[OddPrime] = Field(default_factory=lambda: [3, 5, 7])


class KummerSuiteConfig(BaseModel):
    kmax: int = Field(default=200, ge=4, le=600, description="Largest weight compared")
    primes: list[OddPrime] = Field(default_factory=lambda: [3, 5])


class CharacterSumSuiteConfig(BaseModel):
    degree1_primes: list[OddPrime] = Field(default_factory=lambda: [3, 5, 7])
    degree2_primes: list[OddPrime] = Field(default_factory=lambda: [3])
    trace_bound: int = Field(default=4, ge=0, le=8, description="Degree-2 forms H with n + m <= this")


class CosetSuiteConfig(BaseModel):
    degrees: list[Literal[1, 2]] = Field(default_factory=lambda: [1, 2])
    primes: list[OddPrime] = Field(default_factory=lambda: [3, 5])
    samples: int = Field(default=200, ge=1, description="Samples per (degree, prime)")
    word_length: int = Field(default=12, ge=0, le=64)
    seed: int = Field(default=0)


class GStarSuiteConfig(BaseModel):
    weights: list[EvenWeight] = Field(default_factory=lambda: [4, 6, 8])
    primes: list[OddPrime] = Field(default_factory=lambda: [3, 5])
    trace_bound: int = Field(default=1, ge=1, le=4)


class PadicSuiteConfig(BaseModel):
    primes: list[OddPrime] = Field(default_factory=lambda: [3, 5, 7])
    samples: int = Field(default=100, ge=1)
    precision: int = Field(default=12, ge=2, le=200)
    leopoldt_depth: int = Field(default=5, ge=1, le=8)
    seed: int = Field(default=0)


class LimitSuiteConfig(BaseModel):
    k: EvenWeight = Field(default=4)
    p: OddPrime = Field(default=3)
    trace_bound: int = Field(default=2, ge=0, le=4)
    m_max: int = Field(default=4, ge=1, le=6)


class TildeSuiteConfig(BaseModel):
    p: OddPrime = Field(default=3)
    m_max: int = Field(default=5, ge=0, le=6)
    precision: int = Field(default=12, ge=2, le=200)


class ExportConfig(BaseModel):
    """Expansion file export configuration."""

    output_path: Path = Field(default=Path("expansion.jsonl"), description="Output file")
    compress: bool = Field(default=False, description="Gzip compress output")
    write_meta: bool = Field(default=True, description="Write a .meta.json sidecar")


class SuiteConfig(BaseSettings):
    """Top-level verify configuration; env vars use the QEIS_ prefix."""

    model_config = SettingsConfigDict(env_prefix="QEIS_", env_nested_delimiter="__")

    bernoulli: BernoulliSuiteConfig = Field(default_factory=BernoulliSuiteConfig)
    divisor: DivisorSuiteConfig = Field(default_factory=DivisorSuiteConfig)
    kummer: KummerSuiteConfig = Field(default_factory=KummerSuiteConfig)
    lemma2: CharacterSumSuiteConfig = Field(default_factory=CharacterSumSuiteConfig)
    coset: CosetSuiteConfig = Field(default_factory=CosetSuiteConfig)
    gstar: GStarSuiteConfig = Field(default_factory=GStarSuiteConfig)
    padic: PadicSuiteConfig = Field(default_factory=PadicSuiteConfig)
    limit: LimitSuiteConfig = Field(default_factory=LimitSuiteConfig)
    tilde: TildeSuiteConfig = Field(default_factory=TildeSuiteConfig)
    bernoulli_cache_dir: Optional[Path] = Field(default=None, description="Bernoulli table cache")
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(
        default="WARNING", description="Logging level of verify runs without --log-level"
    )

    @classmethod
    def from_yaml(cls, path: str | Path) -> SuiteConfig:
        """Load configuration from a YAML file."""
        with open(path) as f:
            data = yaml.safe_load(f) or {}
        return cls(**data)

    @classmethod
    def from_env_and_file(cls, path: Optional[str | Path] = None) -> SuiteConfig:
        """Load from YAML file (if given), with env-var overrides."""
        if path and Path(path).exists():
            return cls.from_yaml(path)
        return cls()

    def to_yaml(self, path: str | Path) -> None:
        """Persist current config to YAML."""
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            yaml.dump(self.model_dump(mode="json"), f, default_flow_style=False, sort_keys=False)
