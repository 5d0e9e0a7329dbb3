"""
Exception types raised by confalg, and the helper that turns them into CLI exit codes
"""
from __future__ import annotations
from contextlib import contextmanager
from typing import TYPE_CHECKING, Iterator, Optional
import logging

from typer import Exit

if TYPE_CHECKING:
    from confalg.report import CheckReport

logger = logging.getLogger(__name__)

#: Exit status of a run in which some check failed
EXIT_CHECK_FAILED = 1
#: Exit status of a run that could not be carried out (bad usage or bad input)
EXIT_USAGE = 2

class ConfalgError(Exception):
    """
    Base class for every error confalg raises on purpose
    """

class PolyParseError(ConfalgError):
    """
    A polynomial string could not be parsed
    """
    #: The text that failed to parse
    text: str
    #: 0-based offset of the offending token
    position: int

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")

class VariableError(ConfalgError):
    """
    A polynomial uses a variable that is not allowed where it was passed
    """

class MissingOperationError(ConfalgError):
    """
    A structure lacks an operation or co-operation that a check needs
    """
    #: Name of the absent operation
    operation: str

    def __init__(self, operation: str, where: str = "structure"):
        self.operation = operation
        super().__init__(f"The {where} has no operation named {operation!r}")

class DimensionError(ConfalgError):
    """
    Dimensions, ranks or basis indices are inconsistent
    """

class SpecFileError(ConfalgError):
    """
    A spec file does not follow the schema
    """
    #: Location of the problem inside the document, such as `conf.ops.bracket[2]`
    path: str

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)

class PreconditionError(ConfalgError):
    """
    A construction was asked to run on input that fails its required check
    """
    #: The pipeline stage that refused its input
    stage: str
    #: The failed report, if the precondition was a check
    report: Optional[CheckReport]

    def __init__(self, stage: str, report: Optional[CheckReport] = None, message: Optional[str] = None):
        self.stage = stage
        self.report = report
        if message is None:
            message = f"Precondition of stage {stage!r} failed"
            if report is not None and report.first_witness() is not None:
                message += f": {report.first_witness()}"
        super().__init__(message)

def exception_to_message(e: BaseException) -> str:
    if isinstance(e, ConfalgError):
        return str(e)
    elif isinstance(e, (OSError, ValueError)):
        return f"{type(e).__name__}: {e}"
    else:
        return repr(e)

@contextmanager
def report_errors() -> Iterator[None]:
    """
    Does nothing if the body succeeds.
    If it raises a confalg error (or fails to read a file), logs a user friendly message and exits with status 2.
    """
    try:
        yield
    except (ConfalgError, OSError) as e:
        logger.error(exception_to_message(e))
        raise Exit(EXIT_USAGE) from e
