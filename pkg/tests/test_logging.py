import io
import logging

import pytest

from gbec_lab.utils.logging import get_logger, setup_logging


class TestLogging:
    def test_writes_to_stream(self):
        stream = io.StringIO()
        setup_logging("INFO", stream=stream)
        get_logger("gbec_lab.test").info("band equation solved")
        assert "band equation solved" in stream.getvalue()
        assert "gbec_lab.test" in stream.getvalue()

    def test_level_filters(self):
        stream = io.StringIO()
        setup_logging("WARNING", stream=stream)
        get_logger("gbec_lab.test").info("hidden")
        assert stream.getvalue() == ""

    def test_single_handler(self):
        setup_logging("INFO", stream=io.StringIO())
        setup_logging("DEBUG", stream=io.StringIO())
        assert len(logging.getLogger().handlers) == 1

    def test_unknown_level(self):
        with pytest.raises(ValueError):
            setup_logging("LOUD")

    def test_logger_override(self):
        assert get_logger("gbec_lab.test.quiet", "ERROR").level == logging.ERROR
