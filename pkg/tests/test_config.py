import pytest
import yaml

from corpus_forge.config import RunConfig, apply_overrides, load_config
from corpus_forge.errors import ConfigError


def write_config(tmp_path, payload):
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump(payload), encoding="utf-8")
    return path


class TestLoadConfig:
    def test_defaults(self):
        cfg = load_config()
        assert cfg.backend == "mock"
        assert cfg.plan.n_nouns == 600
        assert cfg.plan.n_verbs == 600
        assert cfg.plan.sentences_per_seed == 100
        assert cfg.split_spec.train_token_threshold == 900_000
        assert cfg.split_spec.valid_token_threshold == 100_000
        assert cfg.bpe_vocab_size == 16_000

    def test_file_values(self, tmp_path):
        path = write_config(
            tmp_path,
            {
                "backend": "mock",
                "mock_seed": 9,
                "rng_seed": 4,
                "plan": {"n_nouns": 5, "n_verbs": 6, "sentences_per_seed": 7},
                "splits": {"train_token_threshold": 50,
                           "valid_token_threshold": 25},
                "em": {"iterations": 3},
            },
        )
        cfg = load_config(path)
        assert cfg.mock_seed == 9
        assert cfg.plan.n_nouns == 5
        assert cfg.split_spec.rng_seed == 4
        assert cfg.em_iterations == 3

    def test_overrides(self, tmp_path):
        path = write_config(tmp_path, {"plan": {"n_nouns": 5}})
        cfg = load_config(path, overrides=["plan.n_nouns=9", "mock_seed=2"])
        assert cfg.plan.n_nouns == 9
        assert cfg.mock_seed == 2

    def test_bad_backend(self, tmp_path):
        path = write_config(tmp_path, {"backend": "telepathy"})
        with pytest.raises(ConfigError):
            load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.yaml")

    def test_bad_override_syntax(self):
        with pytest.raises(ConfigError):
            load_config(overrides=["no-equals-sign"])

    def test_invalid_plan_value(self, tmp_path):
        path = write_config(tmp_path, {"plan": {"n_nouns": 0}})
        with pytest.raises(ConfigError):
            load_config(path)


class TestApplyOverrides:
    def test_nested_creation(self):
        raw = apply_overrides({}, ["a.b.c=1"])
        assert raw == {"a": {"b": {"c": 1}}}

    def test_yaml_typed_values(self):
        raw = apply_overrides({}, ["x=1.5", "y=true", "z=text"])
        assert raw == {"x": 1.5, "y": True, "z": "text"}
