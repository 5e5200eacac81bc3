import inspect
import logging
import os
from datetime import datetime
from pathlib import Path
from typing import Optional

LOG_DIR_ENV_VAR = "CHATWATCH_LOG_DIR"


class CustomLogger(logging.Logger):
    """
    Logger whose records carry a ``caller`` field (`` - module.function``)
    and which knows its month-stamped log file.
    """

    @property
    def log_directory(self) -> Path:
        configured = os.environ.get(LOG_DIR_ENV_VAR, "").strip()
        log_directory = (
            Path(configured).expanduser() if configured else Path.home() / ".chatwatch" / "logs"
        )
        log_directory.mkdir(parents=True, exist_ok=True)
        return log_directory

    @property
    def log_file(self) -> Path:
        log_file = self.log_directory / f"{datetime.now().strftime('%m-%Y')}.log"
        log_file.touch(exist_ok=True)
        return log_file

    def find_caller_info(self) -> str:
        # stack[3] is the frame that called logger.info() and friends
        stack = inspect.stack()
        if len(stack) <= 3:
            return ""
        frame = stack[3]
        module = inspect.getmodule(frame[0])
        return f" - {module.__name__ if module else 'chatwatch'}.{frame.function}"

    def _log(
        self, level, msg, args, exc_info=None, extra=None, stack_info=False, **kwargs
    ):
        extra = dict(extra or {})
        extra.setdefault("caller", self.find_caller_info())
        super()._log(level, msg, args, exc_info, extra, stack_info, **kwargs)


logging.setLoggerClass(CustomLogger)

logger: CustomLogger = logging.getLogger("chatwatch")  # type: ignore[assignment]
logger.setLevel(logging.INFO)
logger.propagate = False

formatter = logging.Formatter(
    "%(asctime)s - %(levelname)s%(caller)s\n%(message)s",
    datefmt="%m-%d-%y %I:%M %p",
)

# stderr: stdout carries the prediction stream
handler = logging.StreamHandler()
handler.setFormatter(formatter)
logger.addHandler(handler)

_file_handler: Optional[logging.FileHandler] = None


def set_verbosity(verbose: bool) -> None:
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)


def enable_file_logging() -> Path:
    """Attach a file handler for the current month's log; repeated calls reuse it."""
    global _file_handler
    log_file = logger.log_file
    if _file_handler is not None and _file_handler.baseFilename == os.path.abspath(log_file):
        return log_file
    if _file_handler is not None:
        logger.removeHandler(_file_handler)
        _file_handler.close()
    _file_handler = logging.FileHandler(log_file)
    _file_handler.setFormatter(formatter)
    logger.addHandler(_file_handler)
    return log_file


__all__ = ["logger", "CustomLogger", "LOG_DIR_ENV_VAR", "set_verbosity", "enable_file_logging"]
