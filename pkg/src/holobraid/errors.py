"""Exception types raised across the package."""


class HolobraidError(Exception):
    """Base class for all package-specific errors."""


class InvalidDegreeError(HolobraidError, ValueError):
    """Root-of-unity degree is not an odd integer >= 3."""


class SingularParameterError(HolobraidError, ValueError):
    """A q-type parameter sits on a pole of the requested quantity (e.g. q = 1)."""


class DegenerateSpectralParameterError(HolobraidError, ValueError):
    """Spectral parameter hits the orbit singularity s^ell = 1."""


class InvalidParamsError(HolobraidError, ValueError):
    """Representation parameters violate their preconditions (zero entries etc.)."""


class NonGenericRepresentationError(HolobraidError):
    """A representation (or pair) fails the genericity predicate where it is required."""


class DegenerateCharacterError(HolobraidError):
    """Character cannot be lifted to a cyclic representation (eta = 0)."""


class InconsistentLiftError(HolobraidError):
    """Lift with the given strand data does not reproduce the character."""


class SingularBraidingError(HolobraidError):
    """Braiding correction factor vanished; the map is singular at this pair."""


class NonFactorizableError(HolobraidError, ValueError):
    """2x2 matrix admits no triangular factorization with the fixed normalization."""


class NoIntertwinerError(HolobraidError):
    """Stacked intertwining system has an empty nullspace."""


class BranchMismatchError(HolobraidError):
    """A quantity that must be a root of unity is not one within tolerance."""


class SamplingExhaustedError(HolobraidError):
    """Too many consecutive rejections while sampling generic parameters."""


class AssemblyError(HolobraidError):
    """Colorings do not chain consistently while assembling a triple product."""


class InvalidInputError(HolobraidError, ValueError):
    """Generic bad input (zero matrix where a nonzero one is required, etc.)."""
