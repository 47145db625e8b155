import json

import pytest
from pydantic import ValidationError

from bergman_jets import __version__
from bergman_jets.cli.main import build_parser, load_run_config, main

WORKED_EXAMPLE = "(1|Pperp0 2 1) ∘ (z1*zb1|Pperp0 2 1)"


def test_compose_prints_canonical_text(capsys):
    assert main(["compose", WORKED_EXAMPLE]) == 0
    assert capsys.readouterr().out.strip() == "z1*zb'1 + pi^-1 | Pperp0 2 1"


def test_compose_accepts_split_arguments(capsys):
    assert main(["compose", "(1|Pperp0 2 1)", "@", "(z1*zb1|Pperp0 2 1)"]) == 0
    assert capsys.readouterr().out.strip() == "z1*zb'1 + pi^-1 | Pperp0 2 1"


def test_compose_json(capsys):
    assert main(["compose", "--format", "json", WORKED_EXAMPLE]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["text"] == "z1*zb'1 + pi^-1 | Pperp0 2 1"
    assert data["base"] == "Pperp0 2 1"


def test_compose_parse_error(capsys):
    assert main(["compose", "(z1 + * z2|Pperp0 2 1)"]) == 2
    assert "parse error at position 6" in capsys.readouterr().err


def test_compose_unsupported_pair(capsys):
    assert main(["compose", "(1|Pperp0 2 1) ∘ (1|E0 2 1)"]) == 2
    assert "cannot compose" in capsys.readouterr().err


def test_version(capsys):
    assert main(["--version"]) == 0
    assert __version__ in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["experiment", "isometry", "--p", "16..8"],
        ["experiment", "isometry"],
        ["experiment", "spiral", "--p", "8..12"],
        ["experiment", "peak-cp1", "--p", "8..64:8"],
        ["verify-model", "--n", "4"],
    ],
)
def test_usage_errors(argv):
    assert main(argv) == 2


def test_verify_model_writes_report(tmp_path, capsys):
    argv = ["verify-model", "--n", "1", "--k", "0", "--cutoff", "2", "--oracle-samples", "1", "--out", str(tmp_path)]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert "PASS bargmann_idempotent" in out
    assert "PASS model_profiles" in out
    report = json.loads((tmp_path / "verify-model.json").read_text())
    assert report["passed"] is True
    assert report["config"]["cutoff"] == 2


def test_isometry_experiment_writes_files(tmp_path, capsys):
    argv = ["experiment", "isometry", "--y-kind", "point", "--p", "8..24:4", "--samples", "1", "--out", str(tmp_path)]
    assert main(argv) == 0
    assert "PASS jet isometry ratio k=0" in capsys.readouterr().out
    csv_lines = (tmp_path / "isometry.csv").read_text().splitlines()
    assert csv_lines[0] == "p,quantity,value,target,ratio,notes"
    report = json.loads((tmp_path / "isometry.json").read_text())
    assert report["config"]["p_values"] == [8, 12, 16, 20, 24]
    assert report["passed"] is True


def test_default_step_depends_on_experiment():
    parser = build_parser()
    peak = load_run_config(parser.parse_args(["experiment", "peak-cp1", "--p", "8..24"]))
    line = load_run_config(parser.parse_args(["experiment", "line-cp2", "--p", "6..10"]))
    assert peak.p_values == [8, 12, 16, 20, 24]
    assert line.p_values == [6, 8, 10]


def test_config_file_precedence(tmp_path):
    config = tmp_path / "run.env"
    config.write_text("SEED=7\nSAMPLES=3\n")
    parser = build_parser()
    from_file = load_run_config(parser.parse_args(["compose", "--config", str(config), WORKED_EXAMPLE]))
    assert (from_file.seed, from_file.samples) == (7, 3)
    overridden = load_run_config(parser.parse_args(["compose", "--config", str(config), "--seed", "9", WORKED_EXAMPLE]))
    assert overridden.seed == 9


def test_config_file_rejects_unknown_keys(tmp_path):
    config = tmp_path / "run.env"
    config.write_text("COLOR=blue\n")
    args = build_parser().parse_args(["compose", "--config", str(config), WORKED_EXAMPLE])
    with pytest.raises(ValidationError):
        load_run_config(args)
    assert main(["compose", "--config", str(config), WORKED_EXAMPLE]) == 2
