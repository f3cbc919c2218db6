"""Core app for LogicToolbox - Exceptions, settings access and utilities."""

# Version information
__version__ = "1.0.0"
