"""
Shared pytest options: the n = 7 enumeration cells only run with --runslow
"""

import pytest


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run the slow n = 7 enumeration and realization tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running enumeration cell")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
