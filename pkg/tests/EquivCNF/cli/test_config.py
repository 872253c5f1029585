import pytest
from pydantic import ValidationError

from equivcnf.algebra.field import FqField
from equivcnf.config import DrinfeldConfig, list_fixtures, load_config, load_fixture, parse_config
from equivcnf.errors import ConfigError


def test_bundled_fixtures_load():
    names = list_fixtures()
    assert {"carlitz-f2", "carlitz-f3", "carlitz-ttorsion-c2-f3", "kummer-c2-f3", "rank2-f2",
            "s3-decomposition", "twist-f2", "wild-c2-f2"} <= set(names)
    for name in names:
        config = load_fixture(name)
        assert config.name == name
        assert config.description


def test_unknown_fixture():
    with pytest.raises(ConfigError, match="Unknown fixture"):
        load_fixture("no-such-fixture")


@pytest.mark.parametrize("raw, path", [
    ({"name": "x"}, "field"),
    ({"field": {"char": 2}, "precision": 0}, "precision"),
    ({"field": {"char": 2}, "drinfeld": {"coefficients": [[1], [0]]}}, "drinfeld.coefficients"),
    ({"field": {"char": 3}, "cover": {"g": [[0, 1], [0], [2]]}}, "cover.g"),
    ({"field": {"char": 2}, "group": {"kind": "cyclic"}}, "group"),
])
def test_invalid_documents_name_the_field(raw, path):
    with pytest.raises(ConfigError) as info:
        parse_config(raw)
    assert path in str(info.value)


def test_non_mapping_document():
    with pytest.raises(ConfigError, match="mapping"):
        parse_config([1, 2])


def test_load_config_reads_yaml(tmp_path):
    path = tmp_path / "session.yaml"
    path.write_text("name: mine\nfield:\n  char: 3\ndrinfeld:\n  coefficients: [[1]]\nprecision: 2\n")
    config = load_config(path)
    assert config.name == "mine"
    assert config.precision == 2
    assert config.require_drinfeld().coefficients == [[1]]
    with pytest.raises(ConfigError):
        config.require_cover()


def test_unreadable_config(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("field: [unclosed\n")
    with pytest.raises(ConfigError):
        load_config(path)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.yaml")


def test_overrides_skip_none():
    config = load_fixture("carlitz-f2")
    updated = config.with_overrides(precision=3, seed=None)
    assert updated.precision == 3
    assert updated.seed == config.seed
    assert config.precision == 6


@pytest.mark.parametrize("overrides", [{"precision": 0}, {"threads": 0}, {"prime_bound_override": -1}])
def test_overrides_are_validated(overrides):
    with pytest.raises(ValidationError):
        load_fixture("carlitz-f2").with_overrides(**overrides)


def test_drinfeld_config_builds_coefficients():
    coefficients = DrinfeldConfig(coefficients=[[1], [0, 1]]).build(FqField(2))
    assert [c.degree for c in coefficients] == [0, 1]
