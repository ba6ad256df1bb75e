"""quadtally: counting quadratic extensions of quadratic fields with odd class number."""

from . import analytic, localdata, oracle, quadfield, series
from .errors import (
    CapacityExceeded,
    DepthInsufficient,
    MethodUnsupported,
    NonConvergence,
    NotSquarefree,
    OutOfRange,
    OutOfScope,
    Overflow,
    ParityViolation,
    QuadratureFailure,
    QuadtallyError,
    TooLarge,
    UnsupportedPrime,
)
from .quadfield import FieldSpec, Kind, SplitType, validate_field

__version__ = "0.1.0"
