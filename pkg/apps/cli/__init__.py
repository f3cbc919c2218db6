"""Command-line front end for LogicToolbox."""
