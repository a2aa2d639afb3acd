"""
Shared pytest setup: puts the repository root on sys.path and registers markers.
"""

import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exact identities on the larger algebras")
