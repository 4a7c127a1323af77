"""Command line interface: payloads, exit codes, determinism.

Fixtures under tests/fixtures are static files so these tests exercise
the same read path as a user invocation.
"""

import io
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from canonica import cli

FIXTURES = Path(__file__).parent / "fixtures"


def fx(name):
    return str(FIXTURES / name)


def run_cli(*argv):
    out = io.StringIO()
    code = cli.run(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run_cli(*argv)
    assert code == cli.EXIT_OK, text
    return json.loads(text)


def test_canon_star_nilpotent_report():
    payload = run_json("canon", "--star", "--verify", fx("j2_nilpotent.json"))
    assert payload["schema"] == "canonica/1"
    assert payload["mode"] == "star"
    assert payload["form"]["one_by_one"] == []
    assert payload["form"]["two_by_two"] == [{"tau": 1.0, "mu": [0.0, 0.0]}]
    assert payload["residual"] <= 1e-10
    assert payload["verify"]["relative_residual"] <= 1e-10
    assert payload["verify"]["transform_unitarity"] <= 1e-10


def test_canon_congruence_normalizes_the_pair():
    payload = run_json("canon", "--congruence", fx("coninvolutory.json"))
    two = payload["form"]["two_by_two"][0]
    assert two["tau"] == pytest.approx(2.0)
    assert two["mu"] == pytest.approx([0.25, 0.0])


def test_canon_star_triangular_rendering():
    payload = run_json("canon", "--star", "--triangular", fx("weighted.json"))
    two = payload["form"]["two_by_two"][0]
    assert two["tau"] == pytest.approx(2.0)
    assert two["mu"] == pytest.approx([0.5, 0.0])
    assert two["nu"] == pytest.approx([2.0**0.5, 0.0])
    assert two["r"] == pytest.approx(1.0)
    assert payload["form"]["representation"] == "triangular"


def test_canon_unitary_style():
    payload = run_json(
        "canon", "--congruence", "--style", "hermitian_unitary", fx("rotation.json")
    )
    assert payload["style"] == "hermitian_unitary"
    block = payload["blocks"][0]
    expected = [[0.0, 0.0], [0.0, -1.0], [0.0, 1.0], [0.0, 0.0]]
    assert np.allclose(block["data"], expected, atol=1e-12)


def test_classify_report():
    payload = run_json("classify", fx("j2_nilpotent.json"))
    flags = payload["report"]["flags"]
    assert flags["congruence_normal"]
    assert flags["squared_normal"]
    assert not flags["normal"]
    assert payload["report"]["lambda"] == [0.0, 0.0]


def test_compare_star_pearcy():
    payload = run_json(
        "compare", "--star", fx("j2_nilpotent.json"), fx("j2_nilpotent.json")
    )
    assert payload["result"]["verdict"] == "equivalent"
    assert payload["result"]["method"] == "pearcy"


def test_compare_congruence_not_equivalent():
    payload = run_json(
        "compare", "--congruence", fx("h2_i.json"), fx("coninvolutory.json")
    )
    assert payload["result"]["verdict"] == "not_equivalent"


def test_regularize_star():
    payload = run_json("regularize", "--star", fx("singular_mixed.json"))
    result = payload["result"]
    assert result["m1"] == 1
    assert result["m2"] == 1
    assert result["sigma"] == pytest.approx([1.0])


def test_simulate_default_start_vector():
    payload = run_json(
        "simulate", "--congruence", "--steps", "40", fx("weighted.json")
    )
    assert payload["steps"] == 40
    assert payload["result"]["growth_classification"] == "unbounded"


def test_simulate_with_start_vector_file():
    payload = run_json(
        "simulate",
        "--congruence",
        "--steps",
        "50",
        "--x0",
        fx("x0_pair.json"),
        fx("rotation.json"),
    )
    assert payload["result"]["growth_classification"] == "bounded"
    assert len(payload["result"]["norms"]) == 51


def test_reports_are_byte_identical():
    first = run_cli("canon", "--star", "--verify", fx("h2_i.json"))
    second = run_cli("canon", "--star", "--verify", fx("h2_i.json"))
    assert first == second
    assert first[1]


def test_output_flag_writes_file(tmp_path):
    target = tmp_path / "report.json"
    code, text = run_cli(
        "classify", fx("rotation.json"), "--output", str(target)
    )
    assert code == cli.EXIT_OK
    assert text == ""
    assert json.loads(target.read_text())["command"] == "classify"


def test_tolerance_override_changes_the_verdict():
    # With a huge residual tolerance everything is "equal".
    payload = run_json(
        "compare",
        "--congruence",
        fx("h2_i.json"),
        fx("h2_i.json"),
        "--residual-rtol",
        "1e-2",
    )
    assert payload["result"]["verdict"] == "equivalent"


class TestExitCodes:
    def test_missing_file(self, capsys):
        code, _ = run_cli("classify", "no_such_file.json")
        assert code == cli.EXIT_PARSE
        assert "cannot read" in capsys.readouterr().err

    def test_malformed_json(self):
        code, _ = run_cli("classify", fx("not_json.json"))
        assert code == cli.EXIT_PARSE

    def test_shape_mismatch(self):
        code, _ = run_cli("classify", fx("bad_shape.json"))
        assert code == cli.EXIT_PARSE

    def test_precondition_out_of_class(self, capsys):
        code, _ = run_cli("canon", "--congruence", fx("upper.json"))
        assert code == cli.EXIT_PRECONDITION
        assert "precondition" in capsys.readouterr().err

    def test_precondition_singular_simulate(self):
        code, _ = run_cli("simulate", "--star", fx("j2_nilpotent.json"))
        assert code == cli.EXIT_PRECONDITION

    def test_usage_requires_mode(self):
        code, _ = run_cli("canon", fx("h2_i.json"))
        assert code == cli.EXIT_PARSE

    def test_usage_triangular_needs_star(self):
        code, _ = run_cli("canon", "--congruence", "--triangular", fx("h2_i.json"))
        assert code == cli.EXIT_PARSE

    def test_usage_style_needs_congruence(self):
        code, _ = run_cli(
            "canon", "--star", "--style", "h2", fx("rotation.json")
        )
        assert code == cli.EXIT_PARSE

    def test_usage_style_excludes_verify(self):
        code, _ = run_cli(
            "canon",
            "--congruence",
            "--style",
            "h2",
            "--verify",
            fx("rotation.json"),
        )
        assert code == cli.EXIT_PARSE

    def test_bad_steps_value(self):
        code, _ = run_cli(
            "simulate", "--star", "--steps", "0", fx("rotation.json")
        )
        assert code == cli.EXIT_PARSE


def test_selftest_command_passes():
    out = io.StringIO()
    code = cli.run(["selftest"], out=out)
    assert code == cli.EXIT_OK
    payload = json.loads(out.getvalue())
    assert payload["passed"] == 10
    assert payload["failed"] == 0
    assert len(payload["criteria"]) == 10


def test_console_entry_point():
    # One end-to-end run through the installed script.
    proc = subprocess.run(
        [sys.executable, "-m", "canonica.cli", "canon", "--star", fx("j2_nilpotent.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["form"]["two_by_two"][0]["tau"] == 1.0
