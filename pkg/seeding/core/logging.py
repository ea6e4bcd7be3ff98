import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str | int = "WARNING") -> None:
    """
    Install one stream handler on the package logger.

    Safe to call repeatedly: later calls only update the level and point the
    handler at the current stderr (the CLI calls this once per invocation).
    """
    logger = logging.getLogger("seeding")
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    logger.setLevel(level)

    for handler in logger.handlers:
        if getattr(handler, "_seeding_handler", False):
            handler.setStream(sys.stderr)
            return

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._seeding_handler = True  # type: ignore[attr-defined]
    logger.addHandler(handler)
