"""Exception types shared across the package."""


class MwrcError(Exception):
    """Base class for domain errors raised by this package."""


class InvalidProfileError(MwrcError, ValueError):
    pass


class InvalidOrderingError(MwrcError, ValueError):
    pass


class InfeasibleOrderingError(MwrcError):
    """The client graph does not let every user recover all messages."""


class EnumerationCapError(MwrcError):
    """Exhaustive enumeration was requested beyond the configured user cap."""
