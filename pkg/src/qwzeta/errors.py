"""Exception hierarchy shared by all modules.

Each class carries the process exit code the CLI maps it to.
"""


class QWZetaError(Exception):
    exit_code = 1


class InputError(QWZetaError, ValueError):
    """Malformed or out-of-range arguments."""

    exit_code = 3


class ParseError(InputError):
    exit_code = 2

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class PreconditionError(InputError):
    """Input is well-formed but outside the domain of the operation."""

    exit_code = 3


class NonUnitaryError(PreconditionError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class SingularityError(QWZetaError, ArithmeticError):
    exit_code = 3


class ResourceError(QWZetaError):
    """Requested enumeration exceeds the configured budget."""

    exit_code = 3


class NumericalError(QWZetaError, ArithmeticError):
    exit_code = 4
