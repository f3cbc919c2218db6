"""Tests package - contains all test modules."""
