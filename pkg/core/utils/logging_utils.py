"""
Logging utilities for consistent logging across solvers, protocols and commands.
"""

import functools
import logging
import time
import traceback
from typing import Any, Callable, Dict, Optional, Tuple, Type, TypeVar, cast

F = TypeVar("F", bound=Callable[..., Any])


def log_execution_time(logger: Optional[logging.Logger] = None) -> Callable[[F], F]:
    """
    Decorator to log the wall-clock time of a solver or protocol driver at DEBUG.

    Args:
        logger: Optional logger to use (if None, the function's module logger is used)

    Returns:
        Function decorator
    """

    def decorator(func: F) -> F:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            target = logger or logging.getLogger(func.__module__)
            started = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                elapsed_ms = (time.perf_counter() - started) * 1000.0
                target.debug(f"{func.__qualname__} took {elapsed_ms:.1f} ms")

        return cast(F, wrapper)

    return decorator


def log_exceptions(
    logger: Optional[logging.Logger] = None,
    level: int = logging.ERROR,
    reraise: bool = True,
    expected: Tuple[Type[BaseException], ...] = (),
) -> Callable[[F], F]:
    """
    Decorator to log exceptions raised in a function.

    Exceptions listed in ``expected`` are user-facing (bad input, exhausted
    budget) and are logged at WARNING without a traceback; anything else is
    logged at ``level`` with one.

    Args:
        logger: Optional logger to use (if None, the function's module logger is used)
        level: Logging level for unexpected exceptions (default: logging.ERROR)
        reraise: Whether to reraise the exception after logging (default: True)
        expected: Exception types logged without a traceback

    Returns:
        Function decorator
    """

    def decorator(func: F) -> F:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            target = logger or logging.getLogger(func.__module__)
            try:
                return func(*args, **kwargs)
            except expected as e:
                target.warning(f"{func.__qualname__}: {type(e).__name__}: {e}")
                if reraise:
                    raise
            except Exception as e:
                tb_str = traceback.format_exc()
                target.log(level, f"Exception in {func.__qualname__}: {e}\n{tb_str}")
                if reraise:
                    raise

        return cast(F, wrapper)

    return decorator


class LoggerAdapter(logging.LoggerAdapter):
    """
    Logger adapter that prepends a context prefix to all log messages.

    Args:
        logger: The logger to adapt
        prefix: The prefix to add to all log messages, e.g. a protocol name
        extra: Additional context to pass to logger
    """

    def __init__(self, logger: logging.Logger, prefix: str, extra: Optional[Dict[str, Any]] = None):
        super().__init__(logger, extra or {})
        self.prefix = prefix

    def process(self, msg: str, kwargs: Dict[str, Any]) -> tuple:
        return f"[{self.prefix}] {msg}", kwargs


def get_prefixed_logger(name: str, prefix: str) -> LoggerAdapter:
    """
    Get a logger with a prefix added to all messages.

    Args:
        name: The name of the logger
        prefix: The prefix to add to all log messages

    Returns:
        LoggerAdapter: A logger adapter that prepends the prefix to all messages
    """
    return LoggerAdapter(logging.getLogger(name), prefix)
