"""Exception types shared across the package."""


class PurcellNetError(Exception):
    """Base class for all purcellnet errors."""


class InvalidElementError(PurcellNetError, ValueError):
    """A circuit element was constructed with invalid parameters."""


class SingularityError(PurcellNetError):
    """An exact short was met where a finite admittance is required.

    `path` names the subtree that produced the short, as a tuple of node
    labels from the observation port down.
    """

    def __init__(self, message: str, path: tuple[str, ...] = ()):
        super().__init__(message)
        self.path = tuple(path)


class NumericOverflowError(PurcellNetError):
    """A network evaluation produced a non-finite intermediate value."""


class PassivityError(PurcellNetError):
    """Re[Y] was negative beyond numerical tolerance; the network is broken."""


class ResolutionError(PurcellNetError):
    """A frequency sweep is too sparse for the requested analysis."""


class InconsistentMeasurementError(PurcellNetError):
    """Measured lifetimes and pulse powers violate the extraction assumptions.

    `assumption` names the violated assumption.
    """

    def __init__(self, message: str, assumption: str = ""):
        super().__init__(message)
        self.assumption = assumption


class GridError(PurcellNetError, ValueError):
    """A field grid file or array set failed validation."""


class DegenerateFieldError(PurcellNetError):
    """Every voxel of the overlap metric is undefined."""


class NetlistError(PurcellNetError, ValueError):
    """A netlist document failed schema or unit validation."""
