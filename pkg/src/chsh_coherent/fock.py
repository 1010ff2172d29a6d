"""Single-mode truncated Fock-space vectors: coherent and cat amplitudes.

All displacements are real; amplitudes are stored as complex so relative
phases compose uniformly downstream.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStateError, DimensionMismatchError, InvalidArgumentError

# Largest displacement for which the default cutoff rule keeps the Poisson
# tail below 1e-12.
ALPHA_MAX = 10.0

# An odd cat below this is the null vector for all practical purposes.
ODD_CAT_ALPHA_MIN = 1e-12


@dataclass(frozen=True)
class FockVector:
    """Complex amplitudes over the number states |0> .. |cutoff-1>."""

    amplitudes: np.ndarray
    cutoff: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.cutoff,):
            raise InvalidArgumentError(
                f"amplitudes shape {amps.shape} != (cutoff,) = ({self.cutoff},)"
            )
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


def _check_alpha(alpha) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise InvalidArgumentError(f"displacement must be finite, got {alpha!r}")
    if abs(alpha) > ALPHA_MAX:
        raise InvalidArgumentError(
            f"|alpha| = {abs(alpha)} exceeds the supported maximum {ALPHA_MAX}"
        )
    return alpha


def _check_cutoff(cutoff, minimum: int = 1) -> int:
    if cutoff != int(cutoff) or int(cutoff) < minimum:
        raise InvalidArgumentError(f"cutoff must be an integer >= {minimum}, got {cutoff!r}")
    return int(cutoff)


def default_cutoff(alpha_max: float, floor: int = 40) -> int:
    """Cutoff keeping the Poisson tail below ~1e-12 for displacements up to alpha_max."""
    a = abs(float(alpha_max))
    return max(floor, math.ceil(a * a + 10.0 * a + 20.0))


def coherent_amplitudes(alpha: float, cutoff: int) -> FockVector:
    """Coherent-state amplitudes exp(-a^2/2) a^n / sqrt(n!).

    Computed by the stable recurrence amp[n] = amp[n-1] * a / sqrt(n); the
    norm deficit equals the Poisson tail mass beyond the cutoff.
    """
    alpha = _check_alpha(alpha)
    cutoff = _check_cutoff(cutoff, 1)
    amps = np.zeros(cutoff, dtype=complex)
    amps[0] = math.exp(-0.5 * alpha * alpha)
    for n in range(1, cutoff):
        amps[n] = amps[n - 1] * (alpha / math.sqrt(n))
    return FockVector(amps, cutoff)


def cat_amplitudes(alpha: float, parity: str, cutoff: int) -> FockVector:
    """Even or odd cat-state amplitudes, normalized with the closed-form factor.

    even: amp[n] = a^n / (sqrt(n!) sqrt(cosh a^2)) on even n, zero elsewhere;
    odd:  amp[n] = a^n / (sqrt(n!) sqrt(sinh a^2)) on odd n.
    """
    alpha = _check_alpha(alpha)
    cutoff = _check_cutoff(cutoff, 2)
    if parity not in ("even", "odd"):
        raise InvalidArgumentError(f"parity must be 'even' or 'odd', got {parity!r}")
    if parity == "odd" and abs(alpha) < ODD_CAT_ALPHA_MIN:
        raise DegenerateStateError(
            f"odd cat state with alpha = {alpha} is the null vector"
        )
    x = alpha * alpha
    scale = math.sqrt(math.cosh(x)) if parity == "even" else math.sqrt(math.sinh(x))
    amps = np.zeros(cutoff, dtype=complex)
    term = 1.0  # alpha^n / sqrt(n!)
    start = 0 if parity == "even" else 1
    for n in range(cutoff):
        if n:
            term *= alpha / math.sqrt(n)
        if n % 2 == start % 2:
            amps[n] = term / scale
    return FockVector(amps, cutoff)


def overlap(u: FockVector, v: FockVector) -> complex:
    """<u|v> = sum conj(u[n]) v[n]."""
    if u.cutoff != v.cutoff:
        raise DimensionMismatchError(
            f"cutoff mismatch: {u.cutoff} != {v.cutoff}"
        )
    return complex(np.vdot(u.amplitudes, v.amplitudes))


def truncation_error(alpha: float, cutoff: int) -> float:
    """Poisson tail mass sum_{n >= cutoff} e^{-a^2} a^{2n} / n!."""
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise InvalidArgumentError(f"displacement must be finite, got {alpha!r}")
    cutoff = _check_cutoff(cutoff, 1)
    lam = alpha * alpha
    if lam == 0.0:
        return 0.0
    # first tail term in log space, then forward recurrence
    log_term = -lam + cutoff * math.log(lam) - math.lgamma(cutoff + 1)
    if log_term < -745.0:  # underflows double precision entirely
        return 0.0
    term = math.exp(log_term)
    total = 0.0
    n = cutoff
    while True:
        total += term
        n += 1
        term *= lam / n
        if term <= 1e-18 * total + 5e-324:
            return min(total, 1.0)


def annihilation_matrix(cutoff: int) -> np.ndarray:
    """Truncated annihilation operator: a|n> = sqrt(n)|n-1>."""
    cutoff = _check_cutoff(cutoff, 1)
    return np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1).astype(complex)
