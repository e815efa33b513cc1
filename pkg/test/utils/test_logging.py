import logging

import pytest
from parameterized import parameterized

from craterlens.utils import Provenance
from craterlens.utils.logging import get_logger, parse_logging_level, setup_logging, setup_logging_from_env


class TestLogging:
    def test_logger_names(self):
        assert get_logger("detect.merge").name == "craterlens.detect.merge"
        assert get_logger("craterlens.liif.training").name == "craterlens.liif.training"
        assert get_logger("craterlens").name == "craterlens"

    @parameterized.expand([("info", logging.INFO), ("DEBUG", logging.DEBUG), ("warning", logging.WARNING), ("5", 5)])
    def test_parse_level(self, text, level):
        assert parse_logging_level(text) == level

    @parameterized.expand([("-1",), ("loud",)])
    def test_parse_invalid_level(self, text):
        with pytest.raises(ValueError):
            parse_logging_level(text)

    def test_namespace_filter(self, capsys: pytest.CaptureFixture[str]):
        try:
            setup_logging("DEBUG", "detect", colors=False)
            get_logger("detect.merge").debug("merged %d", 3)
            get_logger("liif.training").debug("hidden")
            err = capsys.readouterr().err
            assert "DEBUG craterlens.detect.merge merged 3" in err
            assert "hidden" not in err
        finally:
            setup_logging_from_env()


class TestProvenance:
    def test_comment_line(self):
        p = Provenance("0.1.0", "0123456789abcdef", 42)
        assert p.comment_line() == "# craterlens 0.1.0 config=0123456789abcdef seed=42\n"
        assert Provenance.from_dict(p.to_dict()) == p  # type: ignore
