"""
End-to-end tests for the command-line interface.
"""

import json
import logging
from io import StringIO

from django.conf import settings as django_settings
from django.core.management import call_command
from django.core.management.base import CommandError

import pytest

from apps.cli.main import load_tool, main, run
from apps.tools.base import BaseTool, render
from apps.tools.serializers import SCHEMA_VERSION, RunResult, RunStatus

pytestmark = pytest.mark.integration

SUBCOMMANDS = [
    "check-subsume",
    "derive-ct",
    "entails",
    "induce",
    "least-model",
    "verify-ct",
    "verify-theorem",
]


@pytest.fixture
def birds(write_file):
    return write_file("birds.lp", "#abducible flies/1.\nbird(a).\nbird(b).\n")


@pytest.fixture
def rule(write_file):
    return write_file("rule.lp", "flies(X) :- bird(X).\n")


class TestExitCodes:
    """Test the pass/fail/error exit code contract."""

    def test_pass(self, birds, rule, capsys):
        """An entailed query exits 0 and prints the verdict."""
        code = main(["entails", "--program", birds, "--program", rule, "--query", "flies(a)"])
        assert code == 0
        assert capsys.readouterr().out == "flies(a): entailed\n"

    def test_fail(self, birds, capsys):
        """A negative verdict exits 1."""
        assert main(["entails", "--program", birds, "--query", "flies(a)"]) == 1
        assert capsys.readouterr().out == "flies(a): not entailed\n"

    def test_fail_diagnostics_on_stderr(self, write_file, capsys):
        """Failed checks list what failed on stderr."""
        program = write_file("b.lp", "#abducible c/0.\na.\n")
        lt = write_file("t.lp", "c :- b.\n#layer\nb :- a.\n")
        assert main(["verify-ct", "--program", program, "--layered", lt, "--example", "c"]) == 1
        assert "fail: abducible: b :- a." in capsys.readouterr().err

    def test_parse_error(self, write_file, capsys):
        """Malformed input exits 2 with a positioned diagnostic on stderr."""
        bad = write_file("bad.lp", "p(a")
        assert main(["least-model", "--program", bad]) == 2
        captured = capsys.readouterr()
        assert captured.out == ""
        assert f"CommandError: {bad}:1:4: Unclosed '('" in captured.err

    def test_unknown_subcommand(self, capsys):
        """Unknown commands exit 2."""
        assert main(["prove", "--program", "x.lp"]) == 2
        assert "Unknown command: 'prove'" in capsys.readouterr().err

    def test_no_subcommand(self, capsys):
        """A bare invocation prints usage and exits 2."""
        assert main([]) == 2
        assert "Commands:" in capsys.readouterr().err

    def test_unknown_flag_from_command_line(self, birds, capsys):
        """argparse reports usage errors with exit 2."""
        assert main(["least-model", "--program", birds, "--orcale"]) == 2
        assert "unrecognized arguments: --orcale" in capsys.readouterr().err

    def test_unknown_flag(self, birds):
        """Unknown flags are usage errors, not abbreviations."""
        result = run(["entails", "--program", birds, "--que", "flies(a)"])
        assert result.status is RunStatus.ERROR
        assert result.payload["error"]["code"] == "usage_error"

    def test_unknown_subcommand_result(self):
        """run() reports unknown commands as usage errors."""
        result = run(["prove"])
        assert result.exit_code == 2
        assert result.payload["error"]["code"] == "usage_error"
        assert "least-model" in result.diagnostics[0]

    def test_missing_required_flag(self):
        """Required flags are enforced."""
        assert run(["verify-ct", "--example", "c"]).exit_code == 2

    def test_precondition_error(self, write_file):
        """A degenerate construction is an error, not a failed check."""
        program = write_file("b.lp", "#abducible b/0.\na.\nc :- a.\n")
        hypothesis = write_file("h.lp", "b :- a.\n")
        result = run(
            ["derive-ct", "--program", program, "--hypothesis", hypothesis, "--example", "c"]
        )
        assert result.exit_code == 2
        assert result.payload["error"]["code"] == "degenerate_theory"

    def test_harness_counterexample_fails(self, mocker, tmp_path):
        """A harness counterexample exits 1 with the bundle in the payload."""
        mocker.patch(
            "apps.logic.harness._witness_problem", return_value=("forced failure", None)
        )
        result = run(
            [
                "verify-theorem",
                "--runs",
                "3",
                "--seed",
                "7",
                "--counterexample-dir",
                str(tmp_path),
            ]
        )
        assert result.status is RunStatus.FAIL
        assert result.exit_code == 1
        assert result.payload["error"]["details"]["bundle"]["index"] == 0
        assert (tmp_path / "counterexample-seed7-0.json").exists()


class TestJsonOutput:
    """Test the machine-readable schema."""

    def test_schema(self, birds, rule, capsys):
        """--json prints the versioned result and nothing else."""
        code = main(
            ["entails", "--json", "--program", birds, "--program", rule, "--query", "flies(a)"]
        )
        data = json.loads(capsys.readouterr().out)
        assert code == 0
        assert data["schema_version"] == SCHEMA_VERSION
        assert data["command"] == "entails"
        assert data["status"] == "pass"
        assert data["payload"]["entailed"] is True
        assert "lines" not in data

    def test_error_schema(self, write_file, capsys):
        """Errors use the same envelope with an error payload."""
        bad = write_file("bad.lp", "p(a).\np(a, b).\n")
        assert main(["least-model", "--json", "--program", bad]) == 2
        data = json.loads(capsys.readouterr().out)
        assert data["status"] == "error"
        assert data["payload"]["error"]["code"] == "arity_clash"
        assert data["diagnostics"][0].endswith("used with arity 2, previously 1")

    def test_verify_theorem(self, capsys):
        """The harness summary is serialized."""
        assert main(["verify-theorem", "--runs", "5", "--seed", "7", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)["payload"]
        assert payload["runs"] == 5
        assert payload["witnesses"] == 5

    def test_induce(self, birds, capsys):
        """Hypotheses are listed in discovery order."""
        argv = ["induce", "--json", "--program", birds, "--example", "flies(a)"]
        assert main(argv + ["--max-candidates", "1"]) == 0
        payload = json.loads(capsys.readouterr().out)["payload"]
        assert payload["hypotheses"] == [["flies(X0)."]]

    def test_byte_identical_output(self, birds, capsys):
        """Repeated runs print the same JSON."""
        argv = ["induce", "--json", "--program", birds, "--example", "flies(a)"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first

    def test_render(self):
        """Text mode prints the lines; JSON mode the model."""
        result = RunResult(command="entails", status=RunStatus.PASS, lines=["a", "b"])
        assert render(result, json_output=False) == "a\nb\n"
        assert json.loads(render(result, json_output=True))["status"] == "pass"


class TestDispatch:
    """Test command lookup, help and Django entry points."""

    def test_underscored_subcommand(self, write_file, capsys):
        """least_model is accepted as well as least-model."""
        path = write_file("p.lp", "q.\n")
        assert main(["least_model", "--program", path]) == 0
        assert capsys.readouterr().out == "q.  % depth 1\n"

    def test_help_lists_tools_only(self, capsys):
        """Top-level help lists each reasoning tool with its summary."""
        assert main(["help"]) == 0
        out = capsys.readouterr().out
        for name in SUBCOMMANDS:
            assert f"    {name}" in out
        assert "runserver" not in out
        assert load_tool("induce").help in out

    def test_call_command(self, write_file):
        """Commands run through Django's call_command."""
        path = write_file("p.lp", "p :- q.\nq.\n")
        out = StringIO()
        call_command("least_model", program=path, stdout=out)
        assert out.getvalue() == "q.  % depth 1\np.  % depth 2\n"

    def test_call_command_error(self, write_file):
        """Errors surface as CommandError with return code 2."""
        bad = write_file("bad.lp", "p(a")
        with pytest.raises(CommandError) as exc_info:
            call_command("least_model", program=bad, stdout=StringIO())
        assert exc_info.value.returncode == 2
        assert "Unclosed '('" in str(exc_info.value)

    @pytest.mark.parametrize("verbosity,level", [("0", logging.ERROR), ("3", logging.DEBUG)])
    def test_verbosity_sets_apps_logger(self, birds, mocker, verbosity, level):
        """-v 0 quiets and -v 3 opens the apps logger for the run only."""
        seen = []
        original = BaseTool.run_tool

        def recording(tool, options):
            seen.append(logging.getLogger("apps").level)
            return original(tool, options)

        mocker.patch.object(BaseTool, "run_tool", recording)
        main(["entails", "--program", birds, "--query", "bird(a)", "-v", verbosity])
        assert seen == [level]
        configured = logging.getLevelName(django_settings.LOG_LEVEL)
        assert logging.getLogger("apps").level == configured


class TestParser:
    """Test the argument parser."""

    def test_common_flags(self):
        """Every tool parser has the shared and Django flags."""
        parser = load_tool("least-model").create_parser("logictoolbox", "least-model")
        options = parser.parse_args(["--program", "p.lp", "--depth-bound", "3", "-v", "2"])
        assert options.depth_bound == 3
        assert options.verbosity == 2
        assert options.json_output is False

    def test_no_abbreviations(self):
        """Prefixes of long flags are not accepted."""
        parser = load_tool("least-model").create_parser("logictoolbox", "least-model")
        with pytest.raises(CommandError):
            parser.parse_args(["--program", "p.lp", "--orac"])

    def test_harness_defaults_from_settings(self):
        """verify-theorem defaults come from settings."""
        parser = load_tool("verify-theorem").create_parser("logictoolbox", "verify-theorem")
        options = parser.parse_args([])
        assert (options.runs, options.seed, options.workers) == (500, 7, 1)

    def test_harness_defaults_follow_overrides(self, settings):
        """Overridden settings change the defaults."""
        settings.HARNESS_RUNS = 20
        settings.SEARCH_MAX_CANDIDATES = 3
        runs = load_tool("verify-theorem").create_parser("logictoolbox", "verify-theorem")
        induce = load_tool("induce").create_parser("logictoolbox", "induce")
        assert runs.parse_args([]).runs == 20
        options = induce.parse_args(["--program", "p.lp", "--example", "e"])
        assert options.max_candidates == 3
