class PiliftError(Exception):
    pass


class InputError(PiliftError, ValueError):
    """Bad user input: unknown group, malformed prime set, index out of range."""


class OrderCapExceeded(InputError):
    pass


class IntegrityError(PiliftError):
    """An internal consistency check failed; the computation cannot be trusted."""


class TheoremViolation(PiliftError):
    """A proved statement failed on concrete data, so the implementation is wrong."""
