"""Shared exception types."""


class CapacityError(RuntimeError):
    """A guarded enumeration outgrew its configured cap."""


class UndefinedPointError(ValueError):
    """Evaluation requested at a point where the map is undefined."""
