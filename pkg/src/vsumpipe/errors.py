"""Exception types shared across the package."""


class IoError(OSError):
    """File missing, unreadable, or unwritable."""


class FormatError(Exception):
    """File content violates the declared on-disk format."""


class ShapeError(ValueError):
    """Array dimensions incompatible with the operation."""


class IdMismatchError(ValueError):
    """Two per-video objects refer to different videos."""
