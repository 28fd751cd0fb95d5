"""
Logging setup for bapcore.

Provides:
- configure_logging(...) to configure the root logger (idempotent)
- get_logger(name) -> ContextLoggerAdapter that carries bound solver context
"""

from __future__ import annotations

import logging
import logging.handlers
import os
from typing import Any, Dict, MutableMapping, Optional

try:
    from typing import override
except ImportError:  # Python < 3.12
    from typing_extensions import override

from bapcore.config import settings

DEFAULT_LEVEL = logging.getLevelName(settings.LOG_LEVEL.upper())
if not isinstance(DEFAULT_LEVEL, int):
    DEFAULT_LEVEL = logging.INFO


class ContextLoggerAdapter(logging.LoggerAdapter):
    """
    LoggerAdapter that merges bound context into every record's `extra`.
    Use logger = get_logger(__name__).bind(n=..., strategy=...)
    """

    @override
    def process(
        self, msg: Any, kwargs: MutableMapping[str, Any]
    ) -> tuple[Any, MutableMapping[str, Any]]:
        extra_any = kwargs.get("extra", {})
        base_extra = dict(self.extra) if not isinstance(self.extra, dict) else self.extra
        call_extra = dict(extra_any) if not isinstance(extra_any, dict) else extra_any
        merged: Dict[str, Any] = {**base_extra, **call_extra}
        kwargs["extra"] = merged  # type: ignore[index]
        if merged:
            context = " ".join(f"{key}={value}" for key, value in merged.items())
            msg = f"{msg} [{context}]"
        return msg, kwargs

    def bind(self, **kwargs: Any) -> "ContextLoggerAdapter":
        base_extra = dict(self.extra) if not isinstance(self.extra, dict) else self.extra
        new_extra: Dict[str, Any] = {**base_extra, **kwargs}
        return ContextLoggerAdapter(self.logger, new_extra)


class ExtraFilter(logging.Filter):
    """
    Ensures that an 'extra' attribute exists on the LogRecord to avoid KeyError in formatters.
    """

    def filter(self, record: logging.LogRecord) -> bool:
        if not hasattr(record, "extra"):
            record.extra = {}
        return True


def _make_formatter() -> logging.Formatter:
    fmt = "%(asctime)s %(levelname)-8s %(name)s %(message)s"
    return logging.Formatter(fmt=fmt, datefmt="%Y-%m-%dT%H:%M:%S")


def configure_logging(
    level: int = DEFAULT_LEVEL,
    *,
    log_file: Optional[str] = None,
    max_bytes: int = settings.LOG_MAX_BYTES,
    backup_count: int = settings.LOG_BACKUP_COUNT,
) -> None:
    """
    Configure the root logger. Safe to call multiple times; a console handler is
    always present and a rotating file handler is added once per configured path.
    """
    root = logging.getLogger()
    root.setLevel(level)
    formatter = _make_formatter()

    has_stream = False
    for handler in root.handlers:
        if isinstance(handler, logging.StreamHandler) and not isinstance(
            handler, logging.handlers.RotatingFileHandler
        ):
            has_stream = True
            handler.setLevel(level)
    if not has_stream:
        ch = logging.StreamHandler()
        ch.setLevel(level)
        ch.setFormatter(formatter)
        ch.addFilter(ExtraFilter())
        root.addHandler(ch)

    if log_file is None:
        log_file = settings.LOG_FILE
    if not log_file:
        return

    abs_log_file = os.path.abspath(log_file)
    for handler in root.handlers:
        if (
            isinstance(handler, logging.handlers.RotatingFileHandler)
            and os.path.abspath(getattr(handler, "baseFilename", "")) == abs_log_file
        ):
            handler.setLevel(level)
            return

    try:
        os.makedirs(os.path.dirname(abs_log_file) or ".", exist_ok=True)
        fh = logging.handlers.RotatingFileHandler(
            abs_log_file, maxBytes=max_bytes, backupCount=backup_count, encoding="utf-8"
        )
    except OSError as e:
        root.warning("Could not create log file handler for %s (%s); console only.", log_file, e)
        return
    fh.setLevel(level)
    fh.setFormatter(formatter)
    fh.addFilter(ExtraFilter())
    root.addHandler(fh)


def get_logger(name: str, *, level: Optional[int] = None) -> ContextLoggerAdapter:
    """
    Return a ContextLoggerAdapter for the given name.
    """
    logger = logging.getLogger(name)
    if level is not None:
        logger.setLevel(level)
    return ContextLoggerAdapter(logger, {})


__all__ = ["configure_logging", "get_logger", "ContextLoggerAdapter", "ExtraFilter"]
