"""
Structured Logging Configuration for the properization toolkit
Implements structured JSON or console logging on stderr, so stdout stays free for results
"""

import json
import logging
import sys
import time
from contextlib import contextmanager
from datetime import datetime, timezone
from typing import Any, Dict, Iterator, Optional

import structlog

SERVICE_NAME = "properize-toolkit"
SERVICE_VERSION = "1.0.0"


def add_timestamp(_, __, event_dict: Dict[str, Any]) -> Dict[str, Any]:
    """Add ISO timestamp to log events"""
    event_dict["timestamp"] = datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")
    return event_dict


def add_service_info(_, __, event_dict: Dict[str, Any]) -> Dict[str, Any]:
    """Add service metadata to log events"""
    event_dict["service"] = SERVICE_NAME
    event_dict["version"] = SERVICE_VERSION
    return event_dict


class JSONRenderer:
    """JSON renderer that stringifies values json cannot encode (tuples of states, frozensets)"""

    def __call__(self, logger, method_name: str, event_dict: Dict[str, Any]) -> str:
        clean_dict = {}
        for key, value in event_dict.items():
            if isinstance(value, (set, frozenset)):
                value = sorted(value, key=str)
            try:
                json.dumps(value)
                clean_dict[key] = value
            except (TypeError, ValueError):
                clean_dict[key] = str(value)

        return json.dumps(clean_dict, default=str, ensure_ascii=False)


def configure_logging(
    log_level: str = "WARNING",
    json_format: bool = False,
    log_file: Optional[str] = None,
) -> structlog.BoundLogger:
    """
    Configure structured logging for the toolkit.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        json_format: Render events as JSON lines instead of the console format
        log_file: Optional file path that receives a copy of every event

    Returns:
        Configured structlog logger
    """
    level = getattr(logging, log_level.upper(), logging.WARNING)

    shared_processors = [
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_log_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.PositionalArgumentsFormatter(),
        add_timestamp,
        add_service_info,
        structlog.processors.StackInfoRenderer(),
        structlog.processors.UnicodeDecoder(),
    ]

    renderer = JSONRenderer() if json_format else structlog.dev.ConsoleRenderer(colors=False)
    structlog.configure(
        processors=shared_processors + [
            structlog.processors.format_exc_info,
            renderer,
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(logging.Formatter("%(message)s"))
        handlers.append(file_handler)

    logging.basicConfig(
        format="%(message)s",
        handlers=handlers,
        level=level,
        force=True,
    )

    return structlog.get_logger()


def configure_library_defaults() -> None:
    """
    Route structlog through stdlib logging without touching stdlib handlers.

    Until an application calls ``configure_logging``, events are filtered by the stdlib
    level (WARNING unless configured) and anything that passes goes to stderr.
    """
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.processors.format_exc_info,
            structlog.dev.ConsoleRenderer(colors=False),
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=False,
    )


configure_library_defaults()


def get_logger(name: str = __name__) -> structlog.BoundLogger:
    """
    Get a configured logger instance.

    Args:
        name: Logger name (typically __name__)

    Returns:
        Configured structlog logger bound with the name
    """
    return structlog.get_logger(name)


class TransformLogger:
    """Logger for the heavy model operations (properization, refinement, exploration)"""

    def __init__(self, component: str, logger: Optional[structlog.BoundLogger] = None):
        self.component = component
        self.logger = logger or get_logger(f"transform.{component}")

    def log_transform(
        self,
        operation: str,
        duration_ms: float,
        input_size: Optional[int] = None,
        output_size: Optional[int] = None,
        success: bool = True,
        error: Optional[str] = None,
        **extra,
    ):
        """Log one completed (or failed) operation"""
        log_data = {
            "component": self.component,
            "operation": operation,
            "duration_ms": round(duration_ms, 2),
            "success": success,
            "event": "model_transform",
        }

        if input_size is not None:
            log_data["input_size"] = input_size
        if output_size is not None:
            log_data["output_size"] = output_size
        if error:
            log_data["error"] = error

        log_data.update(extra)

        if success:
            self.logger.debug(**log_data)
        else:
            self.logger.error(**log_data)

    @contextmanager
    def timed(self, operation: str, input_size: Optional[int] = None, **extra) -> Iterator[Dict[str, Any]]:
        """Time a block; the caller may set ``output_size`` (or extra keys) on the yielded dict"""
        record: Dict[str, Any] = {}
        started = time.perf_counter()
        try:
            yield record
        except Exception as exc:
            self.log_transform(
                operation,
                (time.perf_counter() - started) * 1000,
                input_size=input_size,
                success=False,
                error=str(exc),
                **extra,
            )
            raise
        output_size = record.pop("output_size", None)
        self.log_transform(
            operation,
            (time.perf_counter() - started) * 1000,
            input_size=input_size,
            output_size=output_size,
            **{**extra, **record},
        )

