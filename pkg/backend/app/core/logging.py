import logging
import sys


LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

_configured = False


def configure_logging(level: str | int = "WARNING") -> None:
    global _configured

    root = logging.getLogger()
    if isinstance(level, str):
        level = level.upper()
    root.setLevel(level)

    if _configured:
        return

    # stdout carries reports only.
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    _configured = True
