"""
Base settings for LogicToolbox.

This file contains settings common to all environments.
Environment-specific settings should be in development.py.
"""

from pathlib import Path

from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent

MB = 1024 * 1024

# Only used by Django internals; the toolbox signs nothing.
SECRET_KEY = config("SECRET_KEY", default="logictoolbox-insecure-local-key")

INSTALLED_APPS = [
    "apps.core",
    "apps.tools",
]

# No models, so no database.
DATABASES: dict = {}
USE_TZ = True


def _optional_int(value: str):
    return int(value) if str(value).strip() else None


# Default term depth bound k; unset keeps the engine function-free.
# The --depth-bound flag takes precedence.
DEPTH_BOUND = config("LOGICTOOLBOX_DEPTH_BOUND", default="", cast=_optional_int)

# Theorem harness
HARNESS_RUNS = config("HARNESS_RUNS", default=500, cast=int)
HARNESS_SEED = config("HARNESS_SEED", default=7, cast=int)
HARNESS_WORKERS = config("HARNESS_WORKERS", default=1, cast=int)
HARNESS_COUNTEREXAMPLE_DIR = config("HARNESS_COUNTEREXAMPLE_DIR", default="")

# Hypothesis search defaults
SEARCH_GENERALIZATION_BUDGET = config("SEARCH_GENERALIZATION_BUDGET", default=8, cast=int)
SEARCH_MAX_CANDIDATES = config("SEARCH_MAX_CANDIDATES", default=10, cast=int)
SEARCH_MAX_CLAUSE_VARS = config("SEARCH_MAX_CLAUSE_VARS", default=2, cast=int)
SEARCH_MAX_THEORY_CLAUSES = config("SEARCH_MAX_THEORY_CLAUSES", default=2, cast=int)
SEARCH_MAX_BODY_LITERALS = config("SEARCH_MAX_BODY_LITERALS", default=2, cast=int)

# Input files larger than this are rejected
MAX_INPUT_SIZE = config("MAX_INPUT_SIZE", default=5 * MB, cast=int)

# Logging
LOG_LEVEL = config("LOG_LEVEL", default="WARNING")
LOG_FILE = config("LOG_FILE", default="")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {name} {process:d} {message}",
            "style": "{",
        },
        "simple": {
            "format": "{levelname} {message}",
            "style": "{",
        },
    },
    "handlers": {
        # stdout carries results only
        "console": {
            "level": "DEBUG",
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "simple",
        },
    },
    "root": {
        "handlers": ["console"],
        "level": "WARNING",
    },
    "loggers": {
        "apps": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
    },
}

if LOG_FILE:
    LOGGING["handlers"]["file"] = {
        "level": "DEBUG",
        "class": "logging.handlers.RotatingFileHandler",
        "filename": LOG_FILE,
        "maxBytes": 15 * MB,
        "backupCount": 10,
        "formatter": "verbose",
    }
    LOGGING["loggers"]["apps"]["handlers"].append("file")
