"""Tests package for symineq."""
