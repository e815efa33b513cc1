from pathlib import Path

import pytest

from craterlens.utils.logging import setup_logging_from_env

__all__ = ["TestCaseWithTmpDir"]


class TestCaseWithTmpDir:
    """Base for tests that write files.

    Every test gets a fresh directory in `self.tmp_dir` and logging set up
    from the environment variables exported by the test configuration.
    """

    tmp_dir: Path

    @pytest.fixture(autouse=True)
    def configure_tmp_dir(self, tmp_path: Path):
        self.tmp_dir = tmp_path

    @pytest.fixture(autouse=True)
    def configure_logging(self):
        setup_logging_from_env()
