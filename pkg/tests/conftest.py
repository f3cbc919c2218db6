"""
Pytest configuration and shared fixtures for LogicToolbox tests.
"""

import pytest

from apps.logic.parser import parse_atom

from .helpers import layered, open_program


# ============================================================================
# File Fixtures
# ============================================================================


@pytest.fixture
def write_file(tmp_path):
    """Write text to a file under tmp_path and return its path as a string."""

    def _write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


# ============================================================================
# Logic Fixtures
# ============================================================================


@pytest.fixture
def birds():
    """B = {bird(a), bird(b)} with U = {flies/1} and e = flies(a)."""
    program = open_program("bird(a). bird(b).", {("flies", 1)})
    return program, parse_atom("flies(a)")


@pytest.fixture
def chain_program():
    """B = {a}, U = {b/0, c/0}, e = c and the two-layer theory [{c :- b}, {b :- a}]."""
    program = open_program("a.", {("b", 0), ("c", 0)})
    return program, parse_atom("c"), layered(["c :- b."], ["b :- a."])
