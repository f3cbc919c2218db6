"""
Development settings for LogicToolbox.

Verbose logging and a smaller default harness for quick local runs.
"""

import copy

from decouple import config

from .base import *

LOGGING = copy.deepcopy(LOGGING)
LOG_LEVEL = config("LOG_LEVEL", default="DEBUG")
LOGGING["loggers"]["apps"]["level"] = LOG_LEVEL
LOGGING["handlers"]["console"]["formatter"] = "verbose"

HARNESS_RUNS = config("HARNESS_RUNS", default=100, cast=int)
