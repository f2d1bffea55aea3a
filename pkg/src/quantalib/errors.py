"""Exception taxonomy shared by all modules.

Exit-code mapping used by the CLI: InputError -> 2, ResourceLimitError -> 3,
verdict failures are ordinary reports (exit 1), everything else is a bug.
"""


class QuantalibError(Exception):
    """Base class for all library errors."""


class InputError(QuantalibError):
    """Malformed or inconsistent input data (unknown ids, bad JSON, failed
    structural validation of user-supplied values)."""


class CompositionError(InputError):
    """Source/target mismatch in a composition or residuation request."""


class CapabilityError(QuantalibError):
    """Operation needs structure the value does not carry (e.g. an
    involution, or a stably Gelfand base)."""


class ResourceLimitError(QuantalibError):
    """A configured search/enumeration cap was exceeded.

    Carries enough context to report how far the search got.
    """

    def __init__(self, message, limit=None, reached=None):
        super().__init__(message)
        self.limit = limit
        self.reached = reached


class InternalConsistencyError(QuantalibError):
    """A construction violated a property it is guaranteed to have.

    Raised when an asserted postcondition of a constructor fails; this
    indicates a bug in the library, never bad user input.
    """
