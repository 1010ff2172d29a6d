"""Bell-CHSH correlators for entangled two-mode coherent states.

Closed-form correlators and an independent truncated-Fock-space oracle for
three families of entangled states (symmetric, asymmetric, Schrodinger-cat)
measured with pseudospin dichotomic operators.
"""

__version__ = "0.1.0"

from ._kernels import TSIRELSON
from .analytic import (
    CANONICAL_ANGLES,
    CANONICAL_ANGLES_SWAPPED,
    ChshAngles,
    SeriesControl,
    chsh_value,
)
from .bell import BellSetup, bell_operator
from .errors import (
    ChshError,
    DegenerateStateError,
    DimensionMismatchError,
    IncompatibleSetupError,
    InvalidArgumentError,
    SeriesTruncationError,
)
from .oracle import chsh_expectation
from .states import Family, StateSpec, build_state

__all__ = [
    "__version__",
    "TSIRELSON",
    "CANONICAL_ANGLES",
    "CANONICAL_ANGLES_SWAPPED",
    "ChshAngles",
    "SeriesControl",
    "chsh_value",
    "BellSetup",
    "bell_operator",
    "ChshError",
    "DegenerateStateError",
    "DimensionMismatchError",
    "IncompatibleSetupError",
    "InvalidArgumentError",
    "SeriesTruncationError",
    "chsh_expectation",
    "Family",
    "StateSpec",
    "build_state",
]
