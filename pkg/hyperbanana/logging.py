from contextvars import ContextVar
from datetime import datetime
from logging import Filter, getLogger
from typing import Optional


_run_context: ContextVar[Optional[dict]] = ContextVar('hyperbanana_run', default=None)

CONTEXT_ATTRIBUTES = ['n', 'm', 'd', 'source']


class ContextFilter(Filter):
    """A filter injecting the graph under analysis into the log."""

    def filter(self, record):
        context = _run_context.get()
        for attr in CONTEXT_ATTRIBUTES:
            if context is not None and context.get(attr) is not None:
                setattr(record, attr, context[attr])
            else:
                setattr(record, attr, '-')
        return True


def set_run_context(**attributes) -> None:
    """Describe the graph the current command is working on."""
    _run_context.set(dict(attributes))


def getLoggers():
    """Create default loggers."""
    mainLog = getLogger('hyperbanana')
    accountLog = getLogger('hyperbanana.accounting')
    if not any(isinstance(f, ContextFilter) for f in accountLog.filters):
        accountLog.addFilter(ContextFilter())

    def accountLogger(command, execution_start, execution_time, ticket='-', success=1, comment=None):
        assert isinstance(execution_start, datetime)
        success = bool(success)
        execution_start = execution_start.strftime("%Y-%m-%d %H:%M:%S")
        accountLog.info(f"ticket={ticket}, command={command}, success={success}, "
                        f"execution_start={execution_start}, execution_time={execution_time}, comment={comment}")
    return mainLog, accountLogger
