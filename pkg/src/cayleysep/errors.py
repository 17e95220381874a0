"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration and resource problems are
user errors (exit 2), anything else is an internal error (exit 1).
"""


class ConfigurationError(ValueError):
    """Bad user input: unknown group spec, missing presentation data, etc."""


class UnsupportedPresentationError(ConfigurationError):
    """Presentation does not satisfy the C'(1/6) piece condition."""


class GraphFormatError(ValueError):
    """Malformed edge-list file; carries a 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceBudgetError(RuntimeError):
    """A size or time budget was exceeded; reports how far the work got."""

    def __init__(self, message, radius_reached=None):
        self.radius_reached = radius_reached
        super().__init__(message)
