"""
Some utility constructs.

"""

from __future__ import annotations

import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Union


class ClassLoggingMixin:
    """Mixin class that enables logging for instances of a specific class"""

    def __init__(self, *args: Any, **kwds: Any) -> None:
        """Initialise the logger instance"""
        super().__init__(*args, **kwds)
        self.logger = logging.getLogger(self.__class__.__name__)

    def debug(self, msg: str) -> None:
        self.logger.debug(msg)

    def info(self, msg: str) -> None:
        self.logger.info(msg)

    def warn(self, msg: str) -> None:
        self.logger.warning(msg)

    def error(self, msg: str) -> None:
        self.logger.error(msg)

    @staticmethod
    def setup_basic_config(level: int = logging.INFO) -> None:
        """Setup basic logging configuration"""
        logging.basicConfig(
            level=level,
            format="%(name)-18s \t %(levelname)-8s %(message)s",
            datefmt="%m-%d %H:%M",
        )


def atomic_write(path: Union[str, Path], data: Union[str, bytes]) -> Path:
    """Write a file through a temporary sibling and rename it into place

    Concurrent writers of different files in the same directory never see a
    partially written file.

    Args:
        path: Destination file
        data: Text (written with ``\\n`` line endings, UTF-8) or bytes

    Returns:
        The destination path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = data.encode("utf-8") if isinstance(data, str) else data
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        Path(tmp_name).replace(path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    return path
