"""
Settings for LogicToolbox.

This package contains split settings for different environments.
The active module is named by the DJANGO_SETTINGS_MODULE environment variable.
"""
