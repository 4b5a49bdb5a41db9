"""Shared exception types."""


class ContractViolation(ValueError):
    """A precondition of a public operation was violated by the caller."""


class EnumerationCapError(RuntimeError):
    """Exact enumeration was refused because the configuration exceeds the state cap."""


class InvariantError(RuntimeError):
    """An internal consistency check failed; indicates a bug, not caller error."""
