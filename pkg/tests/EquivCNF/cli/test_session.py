import json

import pytest

from equivcnf import constants
from equivcnf.algebra.field import FqField
from equivcnf.errors import ConfigError
from runners.session import Session, main, parse_module, parse_phi


def run(tmp_path, *argv):
    return main([*argv, "--report-dir", str(tmp_path)])


def read_report(tmp_path, name, command):
    return json.loads((tmp_path / f"{name}.{command}.json").read_text())


def test_fixtures_list_and_show():
    assert main(["fixtures", "list"]) == constants.EXIT_OK
    assert main(["fixtures", "show", "carlitz-f2"]) == constants.EXIT_OK
    assert main(["fixtures", "show"]) == constants.EXIT_CONFIG_ERROR
    assert main(["fixtures", "show", "no-such-fixture"]) == constants.EXIT_CONFIG_ERROR


def test_lvalue_matches_zeta(tmp_path):
    assert run(tmp_path, "lvalue", "--fixture", "carlitz-f2", "--precision", "2") == constants.EXIT_OK
    report = read_report(tmp_path, "carlitz-f2", "lvalue")
    assert report["command"] == "lvalue"
    assert report["result"]["holds"] is True
    assert report["result"]["certified"] is True
    assert report["result"]["prime_bound"] == 3


def test_reports_are_reproducible(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    for directory in (first, second):
        assert run(directory, "lvalue", "--fixture", "carlitz-f2", "--precision", "2") == constants.EXIT_OK
    name = "carlitz-f2.lvalue.json"
    assert (first / name).read_bytes() == (second / name).read_bytes()


def test_overridden_cutoff_fails_and_is_uncertified(tmp_path):
    """Without t^2 + t + 1 the coefficient of t^-2 is 0 instead of 1."""
    code = run(tmp_path, "lvalue", "--fixture", "carlitz-f2", "--precision", "2", "--prime-bound-override", "1")
    assert code == constants.EXIT_ASSERTION_FAILED
    result = read_report(tmp_path, "carlitz-f2", "lvalue")["result"]
    assert result["certified"] is False
    assert result["holds"] is False


def test_trace_formula_command(tmp_path):
    assert run(tmp_path, "trace-formula", "--fixture", "carlitz-f2", "--precision", "3") == constants.EXIT_OK
    result = read_report(tmp_path, "carlitz-f2", "trace-formula")["result"]
    assert result["holds"] is True
    assert result["ball"] == 3
    assert len(result["phi"]) == 2


def test_small_nucleus_is_a_budget_failure(tmp_path):
    code = run(tmp_path, "trace-formula", "--fixture", "carlitz-f2", "--precision", "3", "--ball", "1")
    assert code == constants.EXIT_BUDGET_EXCEEDED


def test_class_module_command(tmp_path):
    assert run(tmp_path, "class-module", "--fixture", "carlitz-f3", "--precision", "2") == constants.EXIT_OK
    result = read_report(tmp_path, "carlitz-f3", "class-module")["result"]
    assert result["dim"] == 0
    assert result["holds"] is True


def test_malformed_config_exits_with_config_error(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("name: bad\nprecision: 2\n")
    assert run(tmp_path, "lvalue", "--config", str(path)) == constants.EXIT_CONFIG_ERROR


def test_missing_drinfeld_section(tmp_path):
    path = tmp_path / "nodrinfeld.yaml"
    path.write_text("name: nodrinfeld\nfield:\n  char: 2\ncover:\n  g: [[0], [1]]\n")
    assert run(tmp_path, "units", "--config", str(path)) == constants.EXIT_CONFIG_ERROR


def test_source_is_required():
    with pytest.raises(SystemExit):
        main(["lvalue"])


def test_seed_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv("EQUIVCNF_SEED", "7")
    assert Session(["lvalue", "--fixture", "carlitz-f2"]).load().seed == 7
    assert Session(["lvalue", "--fixture", "carlitz-f2", "--seed", "11"]).load().seed == 11
    monkeypatch.delenv("EQUIVCNF_SEED")
    assert Session(["lvalue", "--fixture", "carlitz-f2"]).load().seed == constants.DEFAULT_SEED


def test_parse_module():
    assert parse_module(None) is None
    assert parse_module("[[1], [0, 1]]").coefficients == [[1], [0, 1]]
    with pytest.raises(ConfigError):
        parse_module("[[1], [0")


def test_zero_precision_is_a_config_error(tmp_path, caplog, monkeypatch):
    monkeypatch.setattr("runners.session.configure_logging", lambda verbose: None)
    assert run(tmp_path, "lvalue", "--fixture", "carlitz-f2", "--precision", "0") == constants.EXIT_CONFIG_ERROR
    assert "in config" in caplog.text


def test_explicit_phi_for_the_trace_formula(tmp_path):
    code = run(tmp_path, "trace-formula", "--fixture", "carlitz-f2", "--precision", "3",
               "--phi", "[[[], [0, 1]], [[], [1]]]")
    assert code == constants.EXIT_OK
    result = read_report(tmp_path, "carlitz-f2", "trace-formula")["result"]
    assert result["holds"] is True
    assert result["phi"] == [[[], [0, 1]], [[], [1]]]


def test_phi_and_module_are_exclusive():
    with pytest.raises(SystemExit):
        main(["trace-formula", "--fixture", "carlitz-f2", "--module", "[[1]]", "--phi", "[[[], [1]]]"])


def test_parse_phi():
    field = FqField(2)
    assert parse_phi(None, field) is None
    phi = parse_phi("[[[], [0, 1]]]", field)
    assert phi.precision == 2
    assert phi.to_report() == [[[], [0, 1]]]
    for text in ("[[[1]]]", "{phi: 1}", "[[[], [0"):
        with pytest.raises(ConfigError):
            parse_phi(text, field)


def test_failures_name_the_stage(tmp_path, caplog, monkeypatch):
    monkeypatch.setattr("runners.session.configure_logging", lambda verbose: None)
    code = run(tmp_path, "mt3", "--fixture", "wild-c2-f2", "--precision", "2")
    assert code == constants.EXIT_CONFIG_ERROR
    assert "HypothesisViolated in mt3" in caplog.text
