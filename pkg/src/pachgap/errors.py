"""Exception types shared by all modules.

Each class carries a distinct CLI exit code so batch callers can tell a bad
argument from an exhausted budget without parsing messages.
"""


class PachgapError(Exception):
    exit_code = 1


class ParameterError(PachgapError, ValueError):
    exit_code = 3


class PreconditionError(PachgapError, ValueError):
    exit_code = 4


class CapacityError(PachgapError, RuntimeError):
    exit_code = 5


class GenericPositionError(PachgapError, RuntimeError):
    exit_code = 6

    def __init__(self, message, family=None):
        super().__init__(message)
        self.family = family


class InvariantViolation(PachgapError, AssertionError):
    exit_code = 1
