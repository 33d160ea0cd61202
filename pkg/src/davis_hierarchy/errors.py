"""Exception hierarchy shared by every module."""


class DHError(Exception):
    """Base class for all library errors."""


class ParseError(DHError):
    pass


class InvalidMatrix(DHError):
    pass


class NotSpherical(DHError):
    pass


class ResourceLimit(DHError):
    """A configured resource cap (memo table, matrix size, ...) was exceeded."""

    def __init__(self, limit_name, value, cap):
        self.limit_name = limit_name
        self.value = value
        self.cap = cap
        super().__init__(f"resource limit {limit_name!r} exceeded: {value} > {cap}")


class SimplexNotFound(DHError):
    pass


class LabelCollision(DHError):
    pass


class RelationViolation(DHError):
    pass


class UnsupportedRecipe(DHError):
    pass


class PanelNotActive(DHError):
    pass


class TidyViolation(DHError):
    def __init__(self, message, step=None, certificate=None):
        self.step = step
        self.certificate = certificate
        super().__init__(message if step is None else f"step {step}: {message}")


class NotAComponent(DHError):
    pass


class NotFlag(DHError):
    pass


class NotClosedBoundary(DHError):
    pass
