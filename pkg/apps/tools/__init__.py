"""Tools app for LogicToolbox - Plugin-based subcommand system."""
