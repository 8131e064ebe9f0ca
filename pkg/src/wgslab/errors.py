"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the domain an operation is defined on."""


class ResourceLimitError(RuntimeError):
    """A requested computation would exceed the configured size caps."""


class NumericalError(RuntimeError):
    """A numerical routine failed or produced an out-of-tolerance result."""
