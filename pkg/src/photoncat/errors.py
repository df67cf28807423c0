"""Exception types shared across the toolkit."""


class PhotoncatError(Exception):
    """Base class for all toolkit errors."""


class TruncationError(PhotoncatError):
    """The Fock cutoff is too small for the requested state or operation."""


class PhysicalityError(PhotoncatError):
    """Requested variances violate the uncertainty bound or sign convention."""


class DegenerateCatError(PhotoncatError):
    """Cat amplitude too small: the odd superposition is 0/0 at alpha = 0."""


class VacuumSubtractionError(PhotoncatError):
    """Photon subtraction from a state with no photons."""


class VacuumError(PhotoncatError):
    """Photon-number statistics requested for an (effectively) empty mode."""


class DimensionMismatch(PhotoncatError):
    """Operands live in Fock spaces of different dimension."""


class GridError(PhotoncatError):
    """Empty or inverted phase-space grid specification."""


class ConfigError(PhotoncatError):
    """Invalid experiment configuration (unknown keys, bad values)."""
