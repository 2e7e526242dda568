"""Exception types shared across the package.

Kept in one module so the HTTP service and CLI can map them to status
codes / exit codes without importing every subsystem.
"""

from __future__ import annotations


class TerrarankError(Exception):
    """Base class for all package-specific errors."""


class PolylineError(TerrarankError, ValueError):
    """Malformed encoded polyline. ``offset`` is the byte offset at fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


class DemParseError(TerrarankError, ValueError):
    """Invalid ESRI ASCII grid content. ``line`` is 1-based."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DemBoundsError(TerrarankError):
    """Query point outside the rectangle spanned by the outermost cell centers."""


class DemNodataError(TerrarankError):
    """Interpolation would touch a nodata cell. ``col``/``row`` name the cell."""

    def __init__(self, col: int, row: int):
        super().__init__(f"nodata cell at col={col}, row={row}")
        self.col = col
        self.row = row


class ElevationProviderError(TerrarankError):
    """Elevation lookup failed.

    ``unresolved`` lists the points that never received an elevation;
    ``transport`` is True for network-level failures (retryable) as opposed
    to a well-formed error response.
    """

    def __init__(self, message: str, unresolved=(), transport: bool = False):
        super().__init__(message)
        self.unresolved = tuple(unresolved)
        self.transport = transport


class MissingElevationError(TerrarankError):
    """A route point lacks the elevation required for slope weighting."""

    def __init__(self, index: int):
        super().__init__(f"route point {index} has no elevation")
        self.index = index


class NoRouteError(TerrarankError):
    """No route exists between the requested endpoints."""


class DirectionsProviderError(TerrarankError):
    """Directions provider failure.

    ``status`` carries the provider's non-OK status verbatim when there is
    one; ``transport`` is True for network-level failures.
    """

    def __init__(self, message: str, status: str | None = None, transport: bool = False):
        super().__init__(message)
        self.status = status
        self.transport = transport


class ConfigError(TerrarankError, ValueError):
    """Invalid configuration. ``problems`` lists every issue found."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = list(problems)
