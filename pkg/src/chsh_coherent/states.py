"""Two-mode entangled states: symmetric, asymmetric, and cat families.

Each builder superposes product vectors and applies the family's closed-form
normalization factor; the unit-norm invariant of the result doubles as a
numerical check of those factors against the truncated amplitudes.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import fock
from ._kernels import (
    DEGENERACY_THRESHOLD,
    asymmetric_weight,
    cat_even_weight,
    cat_odd_weight,
    symmetric_weight,
)
from .errors import DegenerateStateError, InvalidArgumentError

TWO_PI = 2.0 * math.pi


class Family(str, Enum):
    SYMMETRIC = "symmetric"
    ASYMMETRIC = "asymmetric"
    CAT_EVEN = "cat-even"
    CAT_ODD = "cat-odd"


@dataclass(frozen=True)
class StateSpec:
    """Which entangled state to build: family, displacements, relative phase."""

    family: Family
    alpha: float
    beta: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        for name in ("alpha", "beta", "phi"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise InvalidArgumentError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "phi", self.phi % TWO_PI)

    @classmethod
    def from_dict(cls, data: dict) -> "StateSpec":
        try:
            return cls(
                family=Family(data["family"]),
                alpha=data["alpha"],
                beta=data["beta"],
                phi=data.get("phi", 0.0),
            )
        except KeyError as exc:
            raise InvalidArgumentError(f"state spec missing key {exc}") from exc
        except ValueError as exc:
            raise InvalidArgumentError(str(exc)) from exc

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "alpha": self.alpha,
            "beta": self.beta,
            "phi": self.phi,
        }


@dataclass(frozen=True)
class TwoModeState:
    """Amplitude grid over |x>_a |y>_b, entry (x, y), plus provenance."""

    amplitudes: np.ndarray
    cutoff: int
    spec: StateSpec
    truncation_bound: float = 0.0

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.cutoff, self.cutoff):
            raise InvalidArgumentError(
                f"amplitudes shape {amps.shape} != ({self.cutoff}, {self.cutoff})"
            )
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


def _superpose(u_a, u_b, v_a, v_b, phi: float, norm_factor: float):
    """norm_factor * (u_a (x) u_b + e^{i phi} v_a (x) v_b)."""
    grid = np.outer(u_a.amplitudes, u_b.amplitudes)
    grid = grid + np.exp(1j * phi) * np.outer(v_a.amplitudes, v_b.amplitudes)
    return norm_factor * grid


def build_symmetric(alpha: float, beta: float, phi: float, cutoff: int) -> TwoModeState:
    """N_S [ |a>|b> + e^{i phi} |b>|a> ]."""
    spec = StateSpec(Family.SYMMETRIC, alpha, beta, phi)
    weight = symmetric_weight(spec.alpha, spec.beta, spec.phi)
    if abs(weight) < DEGENERACY_THRESHOLD:
        raise DegenerateStateError(
            "symmetric state is a null vector: denominator "
            f"1 + cos(phi) exp[-(alpha-beta)^2] = {weight:.3e} "
            f"(alpha={spec.alpha}, beta={spec.beta}, phi={spec.phi})"
        )
    ca = fock.coherent_amplitudes(spec.alpha, cutoff)
    cb = fock.coherent_amplitudes(spec.beta, cutoff)
    nf = 1.0 / math.sqrt(2.0 * weight)
    tail = fock.truncation_error(spec.alpha, cutoff) + fock.truncation_error(spec.beta, cutoff)
    return TwoModeState(
        _superpose(ca, cb, cb, ca, spec.phi, nf), cutoff, spec,
        truncation_bound=4.0 * nf * nf * tail,
    )


def build_asymmetric(alpha: float, beta: float, phi: float, cutoff: int) -> TwoModeState:
    """N_A [ |a>|b> + e^{i phi} |-a>|-b> ]."""
    spec = StateSpec(Family.ASYMMETRIC, alpha, beta, phi)
    weight = asymmetric_weight(spec.alpha, spec.beta, spec.phi)
    if abs(weight) < DEGENERACY_THRESHOLD:
        raise DegenerateStateError(
            "asymmetric state is a null vector: denominator "
            f"1 + cos(phi) exp[-2(alpha^2+beta^2)] = {weight:.3e} "
            f"(alpha={spec.alpha}, beta={spec.beta}, phi={spec.phi})"
        )
    ca = fock.coherent_amplitudes(spec.alpha, cutoff)
    cb = fock.coherent_amplitudes(spec.beta, cutoff)
    cma = fock.coherent_amplitudes(-spec.alpha, cutoff)
    cmb = fock.coherent_amplitudes(-spec.beta, cutoff)
    nf = 1.0 / math.sqrt(2.0 * weight)
    tail = fock.truncation_error(spec.alpha, cutoff) + fock.truncation_error(spec.beta, cutoff)
    return TwoModeState(
        _superpose(ca, cb, cma, cmb, spec.phi, nf), cutoff, spec,
        truncation_bound=4.0 * nf * nf * tail,
    )


def build_cat(parity: str, alpha: float, beta: float, phi: float, cutoff: int) -> TwoModeState:
    """C_+- [ |a>_+- |b>_+- + e^{i phi} |b>_+- |a>_+- ]."""
    if parity not in ("even", "odd"):
        raise InvalidArgumentError(f"parity must be 'even' or 'odd', got {parity!r}")
    family = Family.CAT_EVEN if parity == "even" else Family.CAT_ODD
    spec = StateSpec(family, alpha, beta, phi)
    if parity == "odd" and (
        abs(spec.alpha) < fock.ODD_CAT_ALPHA_MIN or abs(spec.beta) < fock.ODD_CAT_ALPHA_MIN
    ):
        raise DegenerateStateError(
            f"odd cat state requires nonzero displacements, got alpha={spec.alpha}, beta={spec.beta}"
        )
    weight_fn = cat_even_weight if parity == "even" else cat_odd_weight
    weight = weight_fn(spec.alpha, spec.beta, spec.phi)
    if abs(weight) < DEGENERACY_THRESHOLD:
        raise DegenerateStateError(
            f"{parity} cat state is a null vector: normalization denominator "
            f"{weight:.3e} (alpha={spec.alpha}, beta={spec.beta}, phi={spec.phi})"
        )
    ka = fock.cat_amplitudes(spec.alpha, parity, cutoff)
    kb = fock.cat_amplitudes(spec.beta, parity, cutoff)
    nf = 1.0 / math.sqrt(2.0 * weight)
    tail = 2.0 * (
        fock.truncation_error(spec.alpha, cutoff) + fock.truncation_error(spec.beta, cutoff)
    )
    return TwoModeState(
        _superpose(ka, kb, kb, ka, spec.phi, nf), cutoff, spec,
        truncation_bound=4.0 * nf * nf * tail,
    )


def build_state(spec: StateSpec, cutoff: int) -> TwoModeState:
    """Dispatch to the family builder."""
    if spec.family is Family.SYMMETRIC:
        return build_symmetric(spec.alpha, spec.beta, spec.phi, cutoff)
    if spec.family is Family.ASYMMETRIC:
        return build_asymmetric(spec.alpha, spec.beta, spec.phi, cutoff)
    parity = "even" if spec.family is Family.CAT_EVEN else "odd"
    return build_cat(parity, spec.alpha, spec.beta, spec.phi, cutoff)
