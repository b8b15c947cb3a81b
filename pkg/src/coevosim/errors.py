"""Exception types shared across the package."""


class UsageError(ValueError):
    """Invalid parameters or requests outside a component's supported range."""


class IntegrityError(RuntimeError):
    """Internal consistency violated (out-of-order events, corrupt logs)."""
