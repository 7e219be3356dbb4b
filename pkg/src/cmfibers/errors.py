"""Exception hierarchy shared by all modules; the CLI maps each class to an exit code."""


class CmError(Exception):
    exit_code = 3


class UsageError(CmError, ValueError):
    exit_code = 1


class DomainError(CmError, ValueError):
    exit_code = 2


class InvariantError(CmError, RuntimeError):
    exit_code = 3


class ResourceError(CmError, RuntimeError):
    exit_code = 4


class UnsupportedCaseError(DomainError):
    """Inputs outside the range where a closed form is known."""
