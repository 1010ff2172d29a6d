"""Closed-form CHSH correlators for every state family and measurement setup.

The general-angle <AB> expressions are evaluated in factorized form, as
products of single-mode matrix elements <gamma|M(theta)|delta>; expanding
those products reproduces the usual polynomial-in-(alpha, beta) expressions
term by term, but the factorized form stays accurate at small displacements
where the expanded one loses all its digits to cancellation.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

from ._kernels import (
    DEGENERACY_THRESHOLD,
    SQRT2,
    asymmetric_weight,
    cat_even_weight,
    cat_odd_weight,
    cosh_rem,
    coshm1,
    exp_rem,
    kappa_even,
    kappa_odd,
    sinh_rem,
    symmetric_weight,
)
from .bell import BellSetup
from .errors import DegenerateStateError, InvalidArgumentError, SeriesTruncationError
from .states import Family

SQRT6 = math.sqrt(6.0)


@dataclass(frozen=True)
class ChshAngles:
    """The four measurement angles (a, a', b, b')."""

    a: float
    a_prime: float
    b: float
    b_prime: float

    def __post_init__(self):
        for name in ("a", "a_prime", "b", "b_prime"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise InvalidArgumentError(f"angle {name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)


CANONICAL_ANGLES = ChshAngles(0.0, math.pi / 2, math.pi / 4, -math.pi / 4)
CANONICAL_ANGLES_SWAPPED = ChshAngles(0.0, math.pi / 2, -math.pi / 4, math.pi / 4)


@dataclass(frozen=True)
class SeriesControl:
    """Caps and tolerance for the all-pairs correlator series.

    max_pair_index is an exclusive cap: pair indices 0 .. max_pair_index-1
    may be summed, so 1 keeps exactly the leading term.  tail_tolerance is
    the additive error allowed on the returned <AB>.
    """

    max_pair_index: int = 200
    tail_tolerance: float = 1e-12

    def __post_init__(self):
        if self.max_pair_index < 1:
            raise InvalidArgumentError(
                f"max_pair_index must be >= 1, got {self.max_pair_index}"
            )
        if not self.tail_tolerance > 0.0:
            raise InvalidArgumentError(
                f"tail_tolerance must be positive, got {self.tail_tolerance}"
            )


_DEFAULT_CTRL = SeriesControl()


def _require(weight: float, what: str, alpha: float, beta: float, phi: float) -> float:
    if abs(weight) < DEGENERACY_THRESHOLD:
        raise DegenerateStateError(
            f"{what} is numerically a null vector: normalization denominator "
            f"{weight:.3e} below {DEGENERACY_THRESHOLD:g} "
            f"(alpha={alpha}, beta={beta}, phi={phi})"
        )
    return weight


def _pair_phase(gamma: float, delta: float, theta: float) -> complex:
    return gamma * cmath.exp(1j * theta) + delta * cmath.exp(-1j * theta)


# ---------------------------------------------------------------------------
# first setup (single pair |0>,|1>)

def ab_symmetric_setup1(alpha: float, beta: float, phi: float, a: float, b: float) -> float:
    """<AB> for the symmetric state, measurement block on (|0>, |1>)."""
    x, y = alpha * alpha, beta * beta
    weight = _require(symmetric_weight(alpha, beta, phi), "symmetric state", alpha, beta, phi)
    ex, ey, exy = exp_rem(x), exp_rem(y), exp_rem(alpha * beta)
    f_aa_a = 2.0 * alpha * math.cos(a) + ex
    f_bb_b = 2.0 * beta * math.cos(b) + ey
    f_bb_a = 2.0 * beta * math.cos(a) + ey
    f_aa_b = 2.0 * alpha * math.cos(b) + ex
    f_ab_a = _pair_phase(alpha, beta, a) + exy
    f_ba_b = _pair_phase(beta, alpha, b) + exy
    cross = 2.0 * (cmath.exp(1j * phi) * f_ab_a * f_ba_b).real
    total = f_aa_a * f_bb_b + f_bb_a * f_aa_b + cross
    return math.exp(-(x + y)) * total / (2.0 * weight)


def ab_asymmetric_setup1(alpha: float, beta: float, phi: float, a: float, b: float) -> float:
    """<AB> for the asymmetric state, measurement block on (|0>, |1>)."""
    x, y = alpha * alpha, beta * beta
    weight = _require(asymmetric_weight(alpha, beta, phi), "asymmetric state", alpha, beta, phi)
    ex, ey = exp_rem(x), exp_rem(y)
    mex, mey = exp_rem(-x), exp_rem(-y)  # e^{-t} - 1 + t
    total = (
        4.0 * alpha * beta * (math.cos(a) * math.cos(b) - math.cos(phi) * math.sin(a) * math.sin(b))
        - 2.0 * math.sin(phi) * (alpha * math.sin(a) * mey + beta * math.sin(b) * mex)
        + ex * ey
        + math.cos(phi) * mex * mey
    )
    return math.exp(-(x + y)) * total / weight


def ab_cat(parity: str, alpha: float, beta: float, phi: float, a: float, b: float) -> float:
    """<AB> for the entangled cat state, block on (|0>,|2>) or (|1>,|3>)."""
    if parity not in ("even", "odd"):
        raise InvalidArgumentError(f"parity must be 'even' or 'odd', got {parity!r}")
    x, y = alpha * alpha, beta * beta
    z = alpha * beta
    if parity == "even":
        weight = _require(cat_even_weight(alpha, beta, phi), "even cat state", alpha, beta, phi)
        denom = weight * math.cosh(x) * math.cosh(y)
        rx, ry, rz = cosh_rem(x), cosh_rem(y), cosh_rem(z)
        g_aa_a = SQRT2 * x * math.cos(a) + rx
        g_bb_b = SQRT2 * y * math.cos(b) + ry
        g_bb_a = SQRT2 * y * math.cos(a) + ry
        g_aa_b = SQRT2 * x * math.cos(b) + rx
        g_ab_a = _pair_phase(x, y, a) / SQRT2 + rz
        g_ba_b = _pair_phase(y, x, b) / SQRT2 + rz
    else:
        if abs(alpha) < 1e-12 or abs(beta) < 1e-12:
            raise DegenerateStateError(
                f"odd cat state requires nonzero displacements, got alpha={alpha}, beta={beta}"
            )
        weight = _require(cat_odd_weight(alpha, beta, phi), "odd cat state", alpha, beta, phi)
        denom = weight * math.sinh(x) * math.sinh(y)
        rx, ry, rz = sinh_rem(x), sinh_rem(y), sinh_rem(z)
        g_aa_a = 2.0 * x * x * math.cos(a) / SQRT6 + rx
        g_bb_b = 2.0 * y * y * math.cos(b) / SQRT6 + ry
        g_bb_a = 2.0 * y * y * math.cos(a) / SQRT6 + ry
        g_aa_b = 2.0 * x * x * math.cos(b) / SQRT6 + rx
        g_ab_a = z * _pair_phase(x, y, a) / SQRT6 + rz
        g_ba_b = z * _pair_phase(y, x, b) / SQRT6 + rz
    cross = 2.0 * (cmath.exp(1j * phi) * g_ab_a * g_ba_b).real
    total = g_aa_a * g_bb_b + g_bb_a * g_aa_b + cross
    return total / (2.0 * denom)


# ---------------------------------------------------------------------------
# second setup (all pairs): factorized series

def _pair_series(t: float, quartic: bool, ctrl: SeriesControl):
    """Sum t^(4n+1)/w_n (quartic) or t^(2n)/w_n with w_n = sqrt((2n)!(2n+1)!).

    Returns (value, terms_used, tail_bound); the bound covers everything the
    cap or the machine-precision stop dropped.
    """
    step = t ** 4 if quartic else t * t
    term = t if quartic else 1.0
    acc = term
    n = 0
    while n + 1 < ctrl.max_pair_index:
        n += 1
        term *= step / ((2 * n) * math.sqrt((2 * n - 1) * (2 * n + 1)))
        acc += term
        if abs(term) <= 1e-17 * abs(acc):
            break
    nxt = n + 1
    next_term = abs(term) * abs(step) / ((2 * nxt) * math.sqrt((2 * nxt - 1) * (2 * nxt + 1)))
    ratio = abs(step) / ((2 * nxt + 2) * math.sqrt((2 * nxt + 1) * (2 * nxt + 3)))
    bound = next_term / (1.0 - ratio) if ratio < 1.0 else math.inf
    return acc, n + 1, bound


def _series_pieces(alpha: float, beta: float, ctrl: SeriesControl):
    fa, _, ea = _pair_series(alpha, True, ctrl)
    fb, _, eb = _pair_series(beta, True, ctrl)
    h, _, eh = _pair_series(alpha * beta, False, ctrl)
    return fa, fb, h, ea, eb, eh


def ab_symmetric_setup2(
    alpha: float, beta: float, phi: float, a: float, b: float,
    ctrl: Optional[SeriesControl] = None,
) -> float:
    """<AB> for the symmetric state with the all-pairs operators (series)."""
    ctrl = ctrl or _DEFAULT_CTRL
    x, y = alpha * alpha, beta * beta
    weight = _require(symmetric_weight(alpha, beta, phi), "symmetric state", alpha, beta, phi)
    omega = math.exp(-(x + y)) / weight
    fa, fb, h, ea, eb, eh = _series_pieces(alpha, beta, ctrl)
    angular = (
        2.0 * alpha * beta * math.cos(phi) * math.cos(a + b)
        + x * math.cos(a - b + phi)
        + y * math.cos(a - b - phi)
    )
    cab = 4.0 * math.cos(a) * math.cos(b)
    value = omega * (cab * fa * fb + angular * h * h)
    residual = abs(omega) * (
        abs(cab) * (abs(fa) * eb + abs(fb) * ea + ea * eb)
        + abs(angular) * (2.0 * abs(h) * eh + eh * eh)
    )
    if residual > ctrl.tail_tolerance:
        raise SeriesTruncationError(
            f"series not converged within {ctrl.max_pair_index} pair indices: "
            f"residual bound {residual:.3e} > tail tolerance {ctrl.tail_tolerance:.3e}",
            residual,
        )
    return value


def ab_asymmetric_setup2(
    alpha: float, beta: float, phi: float, a: float, b: float,
    ctrl: Optional[SeriesControl] = None,
) -> float:
    """<AB> for the asymmetric state with the all-pairs operators (series)."""
    ctrl = ctrl or _DEFAULT_CTRL
    x, y = alpha * alpha, beta * beta
    weight = _require(asymmetric_weight(alpha, beta, phi), "asymmetric state", alpha, beta, phi)
    omega = math.exp(-(x + y)) / weight
    fa, _, ea = _pair_series(alpha, True, ctrl)
    fb, _, eb = _pair_series(beta, True, ctrl)
    angular = 4.0 * (math.cos(a) * math.cos(b) - math.cos(phi) * math.sin(a) * math.sin(b))
    value = omega * angular * fa * fb
    residual = abs(omega * angular) * (abs(fa) * eb + abs(fb) * ea + ea * eb)
    if residual > ctrl.tail_tolerance:
        raise SeriesTruncationError(
            f"series not converged within {ctrl.max_pair_index} pair indices: "
            f"residual bound {residual:.3e} > tail tolerance {ctrl.tail_tolerance:.3e}",
            residual,
        )
    return value


# ---------------------------------------------------------------------------
# simplified phi = pi forms at the canonical angles
#
# These are the standard simplified expressions, regrouped exactly so the
# polynomial part that cancels against the exponential/hyperbolic constants
# is removed symbolically instead of numerically.

def chsh_symmetric_setup1_pi(alpha: float, beta: float) -> float:
    """<C> at phi = pi, canonical angles, symmetric state, first setup."""
    x, y = alpha * alpha, beta * beta
    d2 = (alpha - beta) ** 2
    denom = -math.expm1(-d2)
    if abs(denom) < DEGENERACY_THRESHOLD:
        raise DegenerateStateError(
            f"symmetric phi=pi form diverges at alpha = beta (alpha={alpha}, beta={beta})"
        )

    def p(t: float) -> float:
        return 2.0 - (2.0 + SQRT2) * t + 2.0 * t * t

    q = 4.0 + 4.0 * alpha * beta - (2.0 + SQRT2) * (alpha + beta)
    bracket = (
        -2.0 * (SQRT2 + 1.0) * d2
        - exp_rem(y) * p(alpha)
        - exp_rem(x) * p(beta)
        + exp_rem(alpha * beta) * q
    )
    return 2.0 + math.exp(-(x + y)) * bracket / denom


def chsh_asymmetric_setup1_pi(alpha: float, beta: float) -> float:
    """<C> at phi = pi, canonical angles, asymmetric state, first setup."""
    x, y = alpha * alpha, beta * beta
    if -math.expm1(-2.0 * (x + y)) < DEGENERACY_THRESHOLD:
        raise DegenerateStateError(
            f"asymmetric phi=pi form diverges at the origin (alpha={alpha}, beta={beta})"
        )
    bracket = (
        math.sinh(x) + math.sinh(y)
        + x * coshm1(y) + y * coshm1(x)
        - 2.0 * SQRT2 * alpha * beta
    )
    return 2.0 - 2.0 * bracket / math.sinh(x + y)


def chsh_cat_pi(parity: str, alpha: float, beta: float) -> float:
    """<C> at phi = pi, canonical angles, entangled cat state."""
    if parity not in ("even", "odd"):
        raise InvalidArgumentError(f"parity must be 'even' or 'odd', got {parity!r}")
    x, y = alpha * alpha, beta * beta
    z = alpha * beta
    if parity == "even":
        kappa = kappa_even(alpha, beta)
        if abs(kappa) / (math.cosh(x) * math.cosh(y)) < DEGENERACY_THRESHOLD:
            raise DegenerateStateError(
                f"even cat phi=pi form diverges at |alpha| = |beta| (alpha={alpha}, beta={beta})"
            )
        g = 4.0 + 2.0 * x * y - (1.0 + SQRT2) * (x + y)
        numer = (
            SQRT2 * (x - y) ** 2
            + coshm1(2.0 * z)
            - coshm1(z) * g
            - 2.0 * coshm1(x) * coshm1(y)
            + coshm1(x) * (y * y - (1.0 + SQRT2) * y)
            + coshm1(y) * (x * x - (1.0 + SQRT2) * x)
        )
        return numer / kappa
    if abs(alpha) < 1e-12 or abs(beta) < 1e-12:
        raise DegenerateStateError(
            f"odd cat state requires nonzero displacements, got alpha={alpha}, beta={beta}"
        )
    kappa = kappa_odd(alpha, beta)
    if abs(kappa) / (math.sinh(x) * math.sinh(y)) < DEGENERACY_THRESHOLD:
        raise DegenerateStateError(
            f"odd cat phi=pi form diverges at |alpha| = |beta| (alpha={alpha}, beta={beta})"
        )
    s36 = math.sqrt(3.0) + SQRT6
    g2 = 12.0 + 2.0 * x * y - s36 * (x + y)

    def h2(t: float) -> float:
        return 6.0 - s36 * t + t * t

    numer = (
        (SQRT2 + 1.0) * x * y * (x - y) ** 2
        - z * sinh_rem(z) * g2
        + x * sinh_rem(y) * h2(x)
        + y * sinh_rem(x) * h2(y)
    )
    return 2.0 + numer / (3.0 * kappa)


# leading (n = m = 0) terms of the all-pairs CHSH assemblies at phi = pi

def chsh_symmetric_setup2_leading(alpha: float, beta: float) -> float:
    """2 sqrt2 (a-b)^2 / (e^{2ab} - e^{a^2+b^2})."""
    x, y = alpha * alpha, beta * beta
    d2 = (alpha - beta) ** 2
    denom = math.exp(2.0 * alpha * beta) - math.exp(x + y)
    if abs(denom) < DEGENERACY_THRESHOLD:
        raise DegenerateStateError(
            f"leading term diverges at alpha = beta (alpha={alpha}, beta={beta})"
        )
    return 2.0 * SQRT2 * d2 / denom


def chsh_asymmetric_setup2_leading(alpha: float, beta: float) -> float:
    """4 sqrt2 ab / sinh(a^2 + b^2)."""
    s = alpha * alpha + beta * beta
    if s < DEGENERACY_THRESHOLD:
        raise DegenerateStateError(
            f"leading term diverges at the origin (alpha={alpha}, beta={beta})"
        )
    return 4.0 * SQRT2 * alpha * beta / math.sinh(s)


# ---------------------------------------------------------------------------
# CHSH assembly and dispatch

def chsh(ab_fn: Callable[..., float], alpha: float, beta: float, phi: float,
         angles: ChshAngles, **kwargs) -> float:
    """ab(a,b) + ab(a',b) + ab(a,b') - ab(a',b')."""
    return (
        ab_fn(alpha, beta, phi, angles.a, angles.b, **kwargs)
        + ab_fn(alpha, beta, phi, angles.a_prime, angles.b, **kwargs)
        + ab_fn(alpha, beta, phi, angles.a, angles.b_prime, **kwargs)
        - ab_fn(alpha, beta, phi, angles.a_prime, angles.b_prime, **kwargs)
    )


def ab_fn_for(family: Family, setup: BellSetup) -> Callable[..., float]:
    """The <AB> closed form matching (family, setup); raises if incompatible."""
    from .bell import check_setup_compatible

    family, setup = Family(family), BellSetup(setup)
    check_setup_compatible(family, setup)
    if family is Family.SYMMETRIC:
        return ab_symmetric_setup1 if setup is BellSetup.SINGLE_PAIR else ab_symmetric_setup2
    if family is Family.ASYMMETRIC:
        return ab_asymmetric_setup1 if setup is BellSetup.SINGLE_PAIR else ab_asymmetric_setup2
    parity = "even" if family is Family.CAT_EVEN else "odd"

    def cat_ab(alpha, beta, phi, a, b):
        return ab_cat(parity, alpha, beta, phi, a, b)

    return cat_ab


def chsh_value(family: Family, setup: BellSetup, alpha: float, beta: float, phi: float,
               angles: ChshAngles = CANONICAL_ANGLES,
               ctrl: Optional[SeriesControl] = None) -> float:
    """Closed-form <C> for any compatible (family, setup) pair."""
    fn = ab_fn_for(family, setup)
    if BellSetup(setup) is BellSetup.ALL_PAIRS:
        return chsh(fn, alpha, beta, phi, angles, ctrl=ctrl)
    return chsh(fn, alpha, beta, phi, angles)
