"""
Exception hierarchy for the properization toolkit.

Every input problem raised by a library operation derives from ``ModelInputError``
(itself a ``ValueError``), so callers can catch either the toolkit root or the
builtin they already expect.
"""

from typing import Any, List, Optional, Sequence


class ToolkitError(Exception):
    """Root of all toolkit errors"""


class ModelInputError(ToolkitError, ValueError):
    """An operation received an argument outside its precondition"""


class ModelValidationError(ModelInputError):
    """A model failed ``validate``; the diagnostics are attached"""

    def __init__(self, message: str, diagnostics: Sequence[Any] = ()):
        self.diagnostics: List[Any] = list(diagnostics)
        details = "; ".join(str(d) for d in self.diagnostics)
        super().__init__(f"{message}: {details}" if details else message)


class ModelSchemaError(ModelInputError):
    """A serialized model or map does not match the JSON schema"""


class SingleAgentError(ModelInputError):
    """Properization needs at least two agents"""

    def __init__(self, message: str = "properization undefined for a single agent"):
        super().__init__(message)


class FormulaSyntaxError(ToolkitError, ValueError):
    """Formula text that does not follow the concrete grammar"""

    def __init__(self, message: str, text: str, position: Optional[int] = None):
        self.text = text
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}: {text!r}")


__all__ = [
    "ToolkitError",
    "ModelInputError",
    "ModelValidationError",
    "ModelSchemaError",
    "SingleAgentError",
    "FormulaSyntaxError",
]
