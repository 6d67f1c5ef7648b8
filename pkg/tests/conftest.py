"""
Pytest configuration and shared fixtures.
"""

import pytest


@pytest.fixture
def sample_vector():
    """Provide the small vector used by most worked examples."""
    return [1.0, 2.0, 3.0]


@pytest.fixture
def in_tmp_dir(tmp_path, monkeypatch):
    """Run a test with the working directory (and default report dir) in tmp_path."""
    monkeypatch.chdir(tmp_path)
    return tmp_path
