"""Exception types shared across the package."""


class DropletLabError(Exception):
    """Base class for all errors raised by droplet_lab."""


class DomainError(DropletLabError, ValueError):
    """An argument violates a documented precondition."""


class ResourceError(DropletLabError, RuntimeError):
    """A request exceeds the configured desk-scale limits."""


class NumericError(DropletLabError, RuntimeError):
    """A numerical kernel failed to meet its accuracy contract."""


class VerificationError(DropletLabError, RuntimeError):
    """A checked model property failed at its stated tolerance."""
