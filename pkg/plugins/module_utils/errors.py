from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

# exit codes returned as ``rc`` by every module
EXIT_OK = 0
EXIT_RESOURCE = 2
EXIT_BUDGET = 3
EXIT_TEST_FAILED = 4
EXIT_INVALID_INPUT = 5


class ConcaveLabError(Exception):
    exit_code = 1


class ResourceLimitError(ConcaveLabError):
    exit_code = EXIT_RESOURCE


class NonConvergenceError(ConcaveLabError):
    exit_code = EXIT_RESOURCE


class BudgetExceededError(ConcaveLabError):
    exit_code = EXIT_BUDGET

    def __init__(self, msg, trials=0):
        super().__init__(msg)
        self.trials = trials


class BoundExceededError(ConcaveLabError):
    exit_code = EXIT_INVALID_INPUT


class InvalidCompositionError(ConcaveLabError):
    exit_code = EXIT_INVALID_INPUT


class EmptySampleError(ConcaveLabError):
    exit_code = EXIT_INVALID_INPUT


class DomainError(ConcaveLabError):
    exit_code = EXIT_INVALID_INPUT


def exit_code_for(err) -> int:
    """
    exit_code_for maps an exception onto the module exit-code contract.
    Anything that is not a ConcaveLabError is reported as a generic failure (1).
    """
    if isinstance(err, ConcaveLabError):
        return err.exit_code
    return 1
