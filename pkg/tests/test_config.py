"""Tests for the config module."""

import tempfile
from pathlib import Path

import pytest
from pydantic import ValidationError

from quat_eisenstein.config import (
    CommandConfig,
    CosetSuiteConfig,
    GStarSuiteConfig,
    OutputFormat,
    SuiteConfig,
    VerifySuite,
)

SHIPPED_CONFIG = Path(__file__).parent.parent / "verify_config.yaml"


class TestSuiteConfig:
    def test_default_config(self) -> None:
        config = SuiteConfig()
        assert config.bernoulli.max_index == 200
        assert config.coset.degrees == [1, 2]
        assert config.limit.k == 4
        assert config.tilde.p == 3
        assert config.bernoulli_cache_dir is None
        assert config.log_level == "WARNING"

    def test_log_level_validated(self) -> None:
        assert SuiteConfig(log_level="DEBUG").log_level == "DEBUG"
        with pytest.raises(ValidationError):
            SuiteConfig(log_level="LOUD")

    def test_yaml_roundtrip(self) -> None:
        config = SuiteConfig()
        config.coset.samples = 17
        config.gstar.weights = [4]

        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "verify.yaml"
            config.to_yaml(path)
            loaded = SuiteConfig.from_yaml(path)

        assert loaded.coset.samples == 17
        assert loaded.gstar.weights == [4]
        assert loaded.kummer.primes == [3, 5]

    def test_from_env_and_file_no_file(self) -> None:
        config = SuiteConfig.from_env_and_file(path=None)
        assert config.divisor.n_max == 1000

    def test_missing_file_falls_back_to_defaults(self) -> None:
        config = SuiteConfig.from_env_and_file("does-not-exist.yaml")
        assert config.padic.precision == 12

    def test_env_override(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("QEIS_COSET__SAMPLES", "7")
        config = SuiteConfig()
        assert config.coset.samples == 7
        assert config.coset.primes == [3, 5]

    def test_shipped_config_loads(self) -> None:
        config = SuiteConfig.from_yaml(SHIPPED_CONFIG)
        assert config.model_dump() == SuiteConfig().model_dump()

    def test_suite_primes_validated(self) -> None:
        with pytest.raises(ValueError, match="odd prime"):
            CosetSuiteConfig(primes=[3, 9])
        with pytest.raises(ValueError, match="even"):
            GStarSuiteConfig(weights=[4, 7])

    def test_suite_names(self) -> None:
        assert VerifySuite("lemma2") is VerifySuite.LEMMA2
        assert len(VerifySuite) == 10


class TestCommandConfig:
    def test_valid_config(self) -> None:
        config = CommandConfig(subcommand="coeff", k=8, p=5, H="1,1,[1,1,0,0]")
        assert config.k == 8
        assert config.p == 5
        assert config.format == OutputFormat.HUMAN

    def test_optional_fields(self) -> None:
        config = CommandConfig(subcommand="expand")
        assert config.p is None
        assert config.trace_bound == 1

    def test_prime_validation(self) -> None:
        for p in (2, 9, 1):
            with pytest.raises(ValueError, match="odd prime"):
                CommandConfig(subcommand="limit", p=p)

    def test_weight_validation(self) -> None:
        for k in (2, 5):
            with pytest.raises(ValueError, match="even"):
                CommandConfig(subcommand="coeff", k=k)

    def test_range_limits(self) -> None:
        with pytest.raises(ValueError):
            CommandConfig(subcommand="limit", m_max=13)
        with pytest.raises(ValueError):
            CommandConfig(subcommand="tilde", precision=0)
