import logging
import os
import sys

import pytest

# Make the repository root importable without installing the package
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from gbec_lab.core.oracle import SpectrumSpec, solve_alpha_exact  # noqa: E402


@pytest.fixture(autouse=True)
def restore_root_logger():
    """Drop the handlers main() installs on the root logger"""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    for handler in root.handlers[:]:
        if handler not in handlers:
            root.removeHandler(handler)
    root.setLevel(level)


@pytest.fixture
def exact():
    """Solve the exact number equation of a geometry at temperature t"""
    def solve(geometry, t, **policy):
        return solve_alpha_exact(SpectrumSpec(geometry, **policy), t)
    return solve
