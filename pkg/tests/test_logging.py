import logging

import pytest

import chatwatch.cwlogger as cwlogger
from chatwatch.cwlogger import LOG_DIR_ENV_VAR, enable_file_logging, logger, set_verbosity


@pytest.fixture
def log_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(LOG_DIR_ENV_VAR, str(tmp_path / "logs"))
    yield tmp_path / "logs"
    if cwlogger._file_handler is not None:
        logger.removeHandler(cwlogger._file_handler)
        cwlogger._file_handler.close()
        cwlogger._file_handler = None
    set_verbosity(False)


def test_file_logging(log_dir):
    path = enable_file_logging()
    assert path.parent == log_dir
    assert enable_file_logging() == path
    assert sum(isinstance(h, logging.FileHandler) for h in logger.handlers) == 1

    logger.info("hello from the test")
    cwlogger._file_handler.flush()
    text = path.read_text()
    assert "hello from the test" in text
    assert "INFO - " in text and ".test_file_logging" in text


def test_verbosity(log_dir):
    set_verbosity(True)
    assert logger.level == logging.DEBUG
    set_verbosity(False)
    assert logger.level == logging.INFO
