"""
Tests for core utilities, exceptions and settings.
"""

import importlib

from django.conf import settings

import pytest

from apps.core.exceptions import (
    EXIT_ERROR,
    EXIT_FAIL,
    FileReadError,
    LogicToolboxError,
    NotEntailedError,
    ParseError,
    PreconditionError,
    TheoremViolationError,
    ToolValidationError,
    build_error_payload,
    exit_code_for,
)
from apps.core.utils import get_text_hash, parse_signature_list, read_text_file


class TestFileUtils:
    """Test file utility functions."""

    def test_read_text_file(self, write_file):
        """Test reading a UTF-8 file."""
        path = write_file("p.lp", "p(a).\n")
        assert read_text_file(path) == "p(a).\n"

    def test_read_missing_file(self, tmp_path):
        """Test that a missing file raises FileReadError with its path."""
        with pytest.raises(FileReadError) as exc_info:
            read_text_file(tmp_path / "missing.lp")
        assert exc_info.value.details["path"].endswith("missing.lp")

    def test_get_text_hash(self):
        """Test text hash generation."""
        digest = get_text_hash("p(a).")
        assert len(digest) == 64  # SHA256 produces 64 hex characters
        assert digest == get_text_hash("p(a).")
        assert digest != get_text_hash("p(b).")
        assert len(get_text_hash("p(a).", algorithm="md5")) == 32

    def test_parse_signature_list(self):
        """Test parsing name/arity lists."""
        assert parse_signature_list("flies/1, q/0") == [("flies", 1), ("q", 0)]
        assert parse_signature_list("") == []

    @pytest.mark.parametrize("value", ["flies", "flies/x", "/1"])
    def test_parse_signature_list_invalid(self, value):
        """Test malformed signatures."""
        with pytest.raises(ToolValidationError):
            parse_signature_list(value)


class TestExceptions:
    """Test the exception hierarchy and error payloads."""

    def test_parse_error_location(self):
        """Parse errors render source, line and column."""
        assert str(ParseError("Bad token", line=3, column=7, source="b.lp")) == (
            "b.lp:3:7: Bad token"
        )
        assert str(ParseError("Bad token", line=1, column=2)) == "1:2: Bad token"
        assert str(ParseError()) == "Syntax error"

    def test_exit_codes(self):
        """Input errors exit 2; a harness counterexample exits 1."""
        assert exit_code_for(ParseError()) == EXIT_ERROR
        assert exit_code_for(TheoremViolationError()) == EXIT_FAIL
        assert exit_code_for(ValueError("boom")) == EXIT_ERROR

    def test_precondition_family(self):
        """Specific precondition failures share a base class."""
        assert issubclass(NotEntailedError, PreconditionError)
        assert NotEntailedError().code == "not_entailed"

    def test_error_payload(self):
        """Custom errors keep their code and details."""
        payload = build_error_payload(
            LogicToolboxError("Broken", code="broken", details={"clause": "p(a)."})
        )
        assert payload == {
            "error": {"message": "Broken", "code": "broken", "details": {"clause": "p(a)."}}
        }

    def test_error_payload_for_unexpected_exception(self):
        """Other exceptions become internal errors."""
        payload = build_error_payload(RuntimeError("boom"))
        assert payload == {"error": {"message": "boom", "code": "internal_error"}}

    def test_theorem_violation_bundle(self):
        """The counterexample bundle travels in the details."""
        error = TheoremViolationError("Instance 3 failed", bundle={"index": 3})
        assert error.bundle == {"index": 3}
        assert error.get_full_details()["bundle"] == {"index": 3}


class TestSettings:
    """Test the settings modules read through django.conf."""

    def test_base_defaults(self):
        """Base settings carry the harness and search defaults."""
        assert settings.HARNESS_RUNS == 500
        assert settings.HARNESS_SEED == 7
        assert settings.SEARCH_MAX_CANDIDATES == 10
        assert settings.DEPTH_BOUND is None
        assert settings.INSTALLED_APPS == ["apps.core", "apps.tools"]

    def test_development_module(self):
        """Development settings log verbosely and run a smaller harness."""
        development = importlib.import_module("logictoolbox.settings.development")
        assert development.HARNESS_RUNS == 100
        assert development.LOGGING["handlers"]["console"]["formatter"] == "verbose"
        assert development.LOGGING["loggers"]["apps"]["level"] == development.LOG_LEVEL

    def test_development_keeps_base_logging(self):
        """Development overrides a copy of LOGGING, not the base dict."""
        importlib.import_module("logictoolbox.settings.development")
        base = importlib.import_module("logictoolbox.settings.base")
        assert base.LOGGING["handlers"]["console"]["formatter"] == "simple"

