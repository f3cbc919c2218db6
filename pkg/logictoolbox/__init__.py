"""LogicToolbox project package: settings for the reasoning engine and its CLI."""

__version__ = "1.0.0"
