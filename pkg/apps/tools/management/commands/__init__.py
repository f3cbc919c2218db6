"""Reasoning tool commands - one per CLI subcommand."""
