"""Exception types shared across the package."""


class MigrationError(Exception):
    """Base class for all domain errors raised by this package."""


class SchemaError(MigrationError):
    """Invalid schema text or a query against an unknown class/feature."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ModelError(MigrationError):
    """Instance-level violation: undeclared feature, kind mismatch, bad id."""


class FormatError(MigrationError):
    """Malformed serialized document (command log, instance file, mutation script)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MergeError(MigrationError):
    """A command failed while merging an incoming log; carries the command."""

    def __init__(self, message, command=None):
        super().__init__(message)
        self.command = command
