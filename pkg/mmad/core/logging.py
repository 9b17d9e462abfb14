import logging
import sys
from pathlib import Path
from typing import Optional

from mmad.core.config import LOG_DIR, LOG_LEVEL

# Configure logging
def setup_logger(log_dir: Optional[str] = LOG_DIR, level: str = LOG_LEVEL) -> logging.Logger:
    """
    Attach file, error-file and console handlers to the package logger.

    Passing ``log_dir=None`` keeps console output only. Calling it again
    replaces the handlers instead of stacking them.
    """
    logger = logging.getLogger("mmad")
    logger.setLevel(level)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    # Create formatters
    file_formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )
    console_formatter = logging.Formatter(
        "%(levelname)s: %(message)s"
    )

    if log_dir is not None:
        Path(log_dir).mkdir(parents=True, exist_ok=True)

        # Create file handler for all logs
        file_handler = logging.FileHandler(Path(log_dir) / "mmad.log")
        file_handler.setLevel(level)
        file_handler.setFormatter(file_formatter)

        # Create file handler for error logs
        error_handler = logging.FileHandler(Path(log_dir) / "error.log")
        error_handler.setLevel(logging.ERROR)
        error_handler.setFormatter(file_formatter)

        logger.addHandler(file_handler)
        logger.addHandler(error_handler)

    # Create console handler
    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setLevel(level)
    console_handler.setFormatter(console_formatter)
    logger.addHandler(console_handler)

    return logger
