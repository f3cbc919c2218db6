"""
Utility functions for LogicToolbox core app.
"""

import hashlib
from pathlib import Path
from typing import List, Tuple, Union

from .exceptions import FileReadError, ToolValidationError


def read_text_file(path: Union[str, Path]) -> str:
    """
    Read a UTF-8 input file.

    Args:
        path: Path of the file to read

    Returns:
        File contents

    Raises:
        FileReadError: If the file is missing, unreadable or not UTF-8
    """
    file_path = Path(path)
    try:
        return file_path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise FileReadError(f"File not found: {file_path}", details={"path": str(file_path)})
    except (OSError, UnicodeDecodeError) as e:
        raise FileReadError(f"Cannot read {file_path}: {e}", details={"path": str(file_path)})


def get_text_hash(text: str, algorithm: str = "sha256") -> str:
    """
    Calculate hash of a text document.

    Args:
        text: Text to hash
        algorithm: Hash algorithm to use (sha256, md5, etc.)

    Returns:
        Hexadecimal hash string
    """
    hasher = hashlib.new(algorithm)
    hasher.update(text.encode("utf-8"))
    return hasher.hexdigest()


def parse_signature_list(value: str) -> List[Tuple[str, int]]:
    """
    Parse a comma-separated list of predicate signatures.

    Args:
        value: Text such as "flies/1, q/0"

    Returns:
        List of (predicate, arity) pairs

    Raises:
        ToolValidationError: If an entry is not of the form name/arity
    """
    signatures = []
    for raw in value.split(","):
        entry = raw.strip()
        if not entry:
            continue
        name, sep, arity = entry.rpartition("/")
        if not sep or not name or not arity.isdigit():
            raise ToolValidationError(f"Invalid signature '{entry}', expected name/arity")
        signatures.append((name, int(arity)))
    return signatures
