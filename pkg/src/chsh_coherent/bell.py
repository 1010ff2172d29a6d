"""Pseudospin operators and the dichotomic measurement operators A(a), B(b).

Operators are dense matrices on the truncated single-mode space: a phase
block e^{i theta}|hi><lo| + e^{-i theta}|lo><hi| on the measured pair, the
identity everywhere else.  Hermiticity is exact by construction (the two
block entries are complex conjugates of the same float pair).
"""

import cmath
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DimensionMismatchError, IncompatibleSetupError, InvalidArgumentError
from .states import Family, TwoModeState


class BellSetup(str, Enum):
    SINGLE_PAIR = "single-pair"
    ALL_PAIRS = "all-pairs"
    CAT_EVEN_PAIR = "cat-even-pair"
    CAT_ODD_PAIR = "cat-odd-pair"


# which dichotomic construction goes with which state family
COMPATIBLE_SETUPS = {
    Family.SYMMETRIC: (BellSetup.SINGLE_PAIR, BellSetup.ALL_PAIRS),
    Family.ASYMMETRIC: (BellSetup.SINGLE_PAIR, BellSetup.ALL_PAIRS),
    Family.CAT_EVEN: (BellSetup.CAT_EVEN_PAIR,),
    Family.CAT_ODD: (BellSetup.CAT_ODD_PAIR,),
}


def check_setup_compatible(family: Family, setup: BellSetup) -> None:
    if BellSetup(setup) not in COMPATIBLE_SETUPS[Family(family)]:
        raise IncompatibleSetupError(
            f"setup {BellSetup(setup).value!r} cannot measure family {Family(family).value!r}"
        )


@dataclass(frozen=True)
class DichotomicOperator:
    """Hermitian, involutory single-mode operator with its defining angle."""

    matrix: np.ndarray
    angle: float
    setup: Optional[BellSetup]

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex).copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def cutoff(self) -> int:
        return self.matrix.shape[0]


def pseudospin(component: str, pair_index: int, cutoff: int) -> np.ndarray:
    """Pauli block on the pair (|2n>, |2n+1>), zero elsewhere."""
    if component not in ("x", "y", "z"):
        raise InvalidArgumentError(f"component must be x, y or z, got {component!r}")
    n = int(pair_index)
    if n < 0 or 2 * n + 1 >= cutoff:
        raise InvalidArgumentError(
            f"pair index {pair_index} does not fit below cutoff {cutoff}"
        )
    lo, hi = 2 * n, 2 * n + 1
    m = np.zeros((cutoff, cutoff), dtype=complex)
    if component == "x":
        m[hi, lo] = 1.0
        m[lo, hi] = 1.0
    elif component == "y":
        m[lo, hi] = 1.0j
        m[hi, lo] = -1.0j
    else:
        m[hi, hi] = 1.0
        m[lo, lo] = -1.0
    return m


def pseudospin_full(component: str, cutoff: int) -> np.ndarray:
    """Sum of the pair blocks over every complete pair below the cutoff."""
    m = np.zeros((cutoff, cutoff), dtype=complex)
    for n in range(cutoff // 2):
        m += pseudospin(component, n, cutoff)
    return m


def _phase_block(m: np.ndarray, lo: int, hi: int, phase: complex) -> None:
    m[lo, lo] = 0.0
    m[hi, hi] = 0.0
    m[hi, lo] = phase
    m[lo, hi] = phase.conjugate()


def bell_operator(setup: BellSetup, angle: float, cutoff: int) -> DichotomicOperator:
    """The dichotomic operator of the given setup at measurement angle `angle`."""
    setup = BellSetup(setup)
    if cutoff < 4:
        raise InvalidArgumentError(f"cutoff must be >= 4, got {cutoff}")
    if setup is BellSetup.ALL_PAIRS and cutoff % 2:
        raise InvalidArgumentError(
            f"all-pairs setup needs an even cutoff (got {cutoff}): an unpaired "
            "top state would break the involution"
        )
    phase = cmath.exp(1j * float(angle))
    m = np.eye(cutoff, dtype=complex)
    if setup is BellSetup.SINGLE_PAIR:
        _phase_block(m, 0, 1, phase)
    elif setup is BellSetup.ALL_PAIRS:
        for n in range(cutoff // 2):
            _phase_block(m, 2 * n, 2 * n + 1, phase)
    elif setup is BellSetup.CAT_EVEN_PAIR:
        _phase_block(m, 0, 2, phase)
    else:  # CAT_ODD_PAIR
        _phase_block(m, 1, 3, phase)
    return DichotomicOperator(m, float(angle), setup)


def identity_operator(cutoff: int) -> DichotomicOperator:
    """Identity dressed as a dichotomic operator (test helper)."""
    return DichotomicOperator(np.eye(cutoff, dtype=complex), 0.0, None)


def apply_AB(state: TwoModeState, op_a: DichotomicOperator, op_b: DichotomicOperator) -> TwoModeState:
    """(A (x) B)|psi>: amplitude grid A @ amplitudes @ B^T."""
    if not (state.cutoff == op_a.cutoff == op_b.cutoff):
        raise DimensionMismatchError(
            f"dimension mismatch: state {state.cutoff}, A {op_a.cutoff}, B {op_b.cutoff}"
        )
    grid = op_a.matrix @ state.amplitudes @ op_b.matrix.T
    return TwoModeState(grid, state.cutoff, state.spec, state.truncation_bound)
