"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: input errors exit 2, contract and
refusal errors exit 3, budget errors exit 4.
"""


class CoarseError(Exception):
    """Base class for all library errors."""


class InputError(CoarseError, ValueError):
    """Malformed input: unknown generator, bad catalog id, bad config."""


class ContractError(CoarseError):
    """A documented precondition does not hold.

    ``precondition`` names the violated condition and ``anchor`` the
    statement it operationalizes, so refusals are machine readable.
    """

    def __init__(self, message, precondition=None, anchor=None, details=None):
        super().__init__(message)
        self.precondition = precondition
        self.anchor = anchor
        self.details = details or {}


class RefusalError(ContractError):
    """An analysis declined to run because its hypotheses are not met."""


class WindowError(ContractError):
    """A finite window does not intersect the sets it was asked about."""


class DegenerateInputError(ContractError):
    """The input collapses to nothing (e.g. a collar swallowing a window)."""


class NonReducedError(ContractError):
    """A graph of groups has an index-one inclusion at an amalgam endpoint."""


class BudgetExceeded(CoarseError):
    """An enumeration hit its node budget.

    ``completed`` is the largest radius (or step) fully finished before the
    budget ran out; ``partial`` optionally carries the partial result.
    """

    def __init__(self, message, completed=None, partial=None):
        super().__init__(message)
        self.completed = completed
        self.partial = partial
