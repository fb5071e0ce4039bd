"""Structured JSON logging configuration."""

import logging
import sys
from contextvars import ContextVar
from typing import Any

from pythonjsonlogger import jsonlogger

# Context variables for correlation
master_seed_ctx: ContextVar[int | None] = ContextVar("master_seed", default=None)
condition_ctx: ContextVar[str | None] = ContextVar("condition", default=None)
trial_id_ctx: ContextVar[int | None] = ContextVar("trial_id", default=None)


class CorrelationFilter(logging.Filter):
    """Add run correlation fields to log records."""

    def filter(self, record: logging.LogRecord) -> bool:
        """Copy correlation fields from context onto the record."""
        record.master_seed = master_seed_ctx.get()  # type: ignore[attr-defined]
        record.condition = condition_ctx.get()  # type: ignore[attr-defined]
        record.trial_id = trial_id_ctx.get()  # type: ignore[attr-defined]
        return True


class CustomJsonFormatter(jsonlogger.JsonFormatter):  # type: ignore[misc]
    """JSON formatter that emits correlation fields only when set."""

    def add_fields(  # type: ignore[override]
        self, log_record: dict[str, Any], record: logging.LogRecord, message_dict: dict[str, Any]
    ) -> None:
        """Add custom fields to the log record."""
        super().add_fields(log_record, record, message_dict)

        # merge_record_extra has already copied every record attribute, unset ones included
        for name in ("master_seed", "condition", "trial_id"):
            if log_record.get(name) is None:
                log_record.pop(name, None)

        log_record["level"] = record.levelname
        log_record["logger"] = record.name


def setup_logging(level: str = "WARNING") -> None:
    """Configure structured JSON logging on stderr; stdout is reserved for results."""
    handler = logging.StreamHandler(sys.stderr)
    formatter = CustomJsonFormatter("%(asctime)s %(name)s %(levelname)s %(message)s")
    handler.setFormatter(formatter)
    handler.addFilter(CorrelationFilter())

    root_logger = logging.getLogger()
    root_logger.handlers.clear()
    root_logger.addHandler(handler)
    root_logger.setLevel(level.upper())

    # Reduce noise from third-party libraries
    logging.getLogger("numpy").setLevel(logging.WARNING)
    logging.getLogger("scipy").setLevel(logging.WARNING)
