import pytest


def pytest_runtest_setup(item: pytest.Item):
    if not item.config.getoption("--craterlens-slow", default=False):  # type: ignore
        pytest.skip("need --craterlens-slow option to run this test")
