"""Exception hierarchy shared across the package."""


class EntanglemetryError(ValueError):
    """Base class for all input and validation errors raised by the package."""


class LengthMismatch(EntanglemetryError):
    pass


class ZeroVector(EntanglemetryError):
    pass


class NormOutOfTolerance(EntanglemetryError):
    pass


class SizeOverflow(EntanglemetryError):
    pass


class InvalidPermutation(EntanglemetryError):
    pass


class EmptySubset(EntanglemetryError):
    pass


class FullSubset(EntanglemetryError):
    pass


class InvalidDensityMatrix(EntanglemetryError):
    pass


class UnsupportedSize(EntanglemetryError):
    pass


class DomainError(EntanglemetryError):
    pass


class NegativeSide(EntanglemetryError):
    pass


class TriangleViolation(EntanglemetryError):
    pass


class NotTwoToTwo(EntanglemetryError):
    pass


class UnknownName(EntanglemetryError):
    pass


class InvalidCount(EntanglemetryError):
    pass


class KetSyntaxError(EntanglemetryError):
    """Malformed ket expression; ``position`` is a 0-based byte offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class MixedKetLength(EntanglemetryError):
    pass


class SchemaMismatch(EntanglemetryError):
    pass


class MalformedInput(EntanglemetryError):
    pass


class ConfigError(EntanglemetryError):
    pass
