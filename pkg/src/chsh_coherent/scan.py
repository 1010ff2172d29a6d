"""Parameter sweeps, violation-window and saturation searches, angle tuning.

Scans are deterministic: fixed iteration order, results gathered by index
(never by completion order), and no wall-clock data in the rows.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Optional, Union

from scipy.optimize import minimize

from . import __version__
from ._kernels import TSIRELSON
from .analytic import CANONICAL_ANGLES, ChshAngles, SeriesControl, chsh_value
from .bell import BellSetup, check_setup_compatible
from .errors import ChshError, DegenerateStateError, InvalidArgumentError
from .oracle import TRUNCATION_TARGET, chsh_expectation, expectation_chsh, resolve_cutoff
from .states import Family, StateSpec, build_state


class Engine(str, Enum):
    ANALYTIC = "analytic"
    ORACLE = "oracle"
    BOTH = "both"


@dataclass(frozen=True)
class GridBeta:
    """beta sweeps its own range (contour scans)."""

    minimum: float
    maximum: float
    steps: int


@dataclass(frozen=True)
class OffsetFromAlpha:
    """beta = alpha + delta (line scans just off the diagonal)."""

    delta: float = 0.001


@dataclass(frozen=True)
class EqualAlpha:
    """beta = alpha."""


BetaRule = Union[GridBeta, OffsetFromAlpha, EqualAlpha]


@dataclass(frozen=True)
class ScanGrid:
    alpha_range: tuple  # (min, max, steps)
    beta_rule: BetaRule
    phi: float
    angles: ChshAngles
    family: Family
    setup: BellSetup
    engine: Engine = Engine.ANALYTIC
    cutoff: Optional[int] = None
    series: Optional[SeriesControl] = None

    def __post_init__(self):
        lo, hi, steps = self.alpha_range
        if steps < 2 or not (math.isfinite(lo) and math.isfinite(hi)):
            raise InvalidArgumentError(f"bad alpha range {self.alpha_range!r}")
        if isinstance(self.beta_rule, GridBeta) and self.beta_rule.steps < 2:
            raise InvalidArgumentError("beta grid needs at least 2 steps")
        check_setup_compatible(self.family, self.setup)


@dataclass(frozen=True)
class ScanRow:
    alpha: float
    beta: float
    phi: float
    value_signed: Optional[float]
    value_abs: Optional[float]
    engine: str
    violation: Optional[bool]
    skipped: bool = False
    skip_reason: Optional[str] = None
    discrepancy: Optional[float] = None


@dataclass
class ScanResult:
    rows: list
    metadata: dict = field(default_factory=dict)


def _worker_count() -> int:
    raw = os.environ.get("CHSH_COHERENT_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _linspace(lo: float, hi: float, steps: int):
    return [lo + (hi - lo) * k / (steps - 1) for k in range(steps)]


def _evaluate_point(family, setup, alpha, beta, phi, angles, engine, ctrl, cutoff):
    try:
        if engine is Engine.ORACLE:
            value = chsh_expectation(family, setup, alpha, beta, phi, angles, cutoff).value
            disc = None
        elif engine is Engine.BOTH:
            value = chsh_value(family, setup, alpha, beta, phi, angles, ctrl)
            disc = abs(value - chsh_expectation(family, setup, alpha, beta, phi, angles, cutoff).value)
        else:
            value = chsh_value(family, setup, alpha, beta, phi, angles, ctrl)
            disc = None
    except DegenerateStateError as exc:
        return ScanRow(alpha, beta, phi, None, None, engine.value, None,
                       skipped=True, skip_reason=str(exc))
    return ScanRow(alpha, beta, phi, value, abs(value), engine.value,
                   abs(value) > 2.0, discrepancy=disc)


def _run_points(grid: ScanGrid, points):
    engine = Engine(grid.engine)
    cutoff = grid.cutoff
    if cutoff is None:
        worst = max(max(abs(a), abs(b)) for a, b in points)
        cutoff = resolve_cutoff(worst, worst)
    oracle_cutoff = cutoff if engine in (Engine.ORACLE, Engine.BOTH) else None

    def job(point):
        a, b = point
        return _evaluate_point(grid.family, grid.setup, a, b, grid.phi,
                               grid.angles, engine, grid.series, oracle_cutoff)

    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(job, points))  # map preserves submission order
    else:
        rows = [job(p) for p in points]
    if all(r.skipped for r in rows):
        raise DegenerateStateError("every grid point is degenerate; nothing to scan")
    meta = {
        "family": Family(grid.family).value,
        "setup": BellSetup(grid.setup).value,
        "phi": grid.phi,
        "angles": (grid.angles.a, grid.angles.a_prime, grid.angles.b, grid.angles.b_prime),
        "engine": engine.value,
        "cutoff": cutoff,
        "alpha_range": tuple(grid.alpha_range),
        "beta_rule": repr(grid.beta_rule),
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "version": __version__,
    }
    discs = [r.discrepancy for r in rows if r.discrepancy is not None]
    if discs:
        meta["max_engine_discrepancy"] = max(discs)
    return ScanResult(rows, meta)


def line_scan(grid: ScanGrid) -> ScanResult:
    """One row per alpha step; beta follows the offset or equality rule."""
    rule = grid.beta_rule
    if isinstance(rule, GridBeta):
        raise InvalidArgumentError("line_scan needs an OffsetFromAlpha or EqualAlpha rule")
    lo, hi, steps = grid.alpha_range
    alphas = _linspace(lo, hi, steps)
    delta = rule.delta if isinstance(rule, OffsetFromAlpha) else 0.0
    points = [(a, a + delta) for a in alphas]
    return _run_points(grid, points)


def grid_scan(grid: ScanGrid) -> ScanResult:
    """steps x steps rows over the (alpha, beta) rectangle, row-major."""
    rule = grid.beta_rule
    if not isinstance(rule, GridBeta):
        raise InvalidArgumentError("grid_scan needs a GridBeta rule")
    lo, hi, steps = grid.alpha_range
    alphas = _linspace(lo, hi, steps)
    betas = _linspace(rule.minimum, rule.maximum, rule.steps)
    points = [(a, b) for a in alphas for b in betas]
    return _run_points(grid, points)


# ---------------------------------------------------------------------------
# violation windows

def phase_window(family, setup, alpha: float, beta: float,
                 angles: ChshAngles = CANONICAL_ANGLES, resolution: float = 1e-3,
                 center: float = math.pi):
    """Maximal contiguous phi interval around `center` with |<C>| > 2.

    Returns (phi_low, phi_high), or None when there is no violation at the
    center.  Edges are bisection-refined to `resolution`.
    """
    if resolution <= 0.0:
        raise InvalidArgumentError(f"resolution must be positive, got {resolution}")

    def violating(phi):
        return abs(chsh_value(family, setup, alpha, beta, phi, angles)) > 2.0

    if not violating(center):
        return None

    def edge(direction):
        coarse = max(resolution, 0.01)
        inside = 0.0
        outside = None
        w = coarse
        while w <= math.pi:
            if violating(center + direction * w):
                inside = w
            else:
                outside = w
                break
            w += coarse
        if outside is None:
            return math.pi  # violation persists across the whole half-circle
        while outside - inside > resolution:
            mid = 0.5 * (inside + outside)
            if violating(center + direction * mid):
                inside = mid
            else:
                outside = mid
        return 0.5 * (inside + outside)

    return center - edge(-1.0), center + edge(+1.0)


# ---------------------------------------------------------------------------
# saturation search (coarse grid + simplex refinement)

SATURATION_POINTS = (
    (Family.SYMMETRIC, BellSetup.SINGLE_PAIR, 0.001, 0.002),
    (Family.SYMMETRIC, BellSetup.ALL_PAIRS, 0.001, 0.002),
    (Family.ASYMMETRIC, BellSetup.SINGLE_PAIR, 0.06, 0.06),
    (Family.ASYMMETRIC, BellSetup.ALL_PAIRS, 0.1, 0.1),
    (Family.CAT_EVEN, BellSetup.CAT_EVEN_PAIR, 0.07, 0.08),
    (Family.CAT_ODD, BellSetup.CAT_ODD_PAIR, 0.08, 0.09),
)


def saturation_search(family, setup, tolerance: float = 5e-5,
                      angles: ChshAngles = CANONICAL_ANGLES, phi: float = math.pi):
    """Find (alpha, beta) with |<C>| >= 2*sqrt(2) - tolerance.

    Coarse 50x50 grid on (0, 0.5]^2, then Nelder-Mead refinement confined to
    the positive quadrant.
    """
    if tolerance <= 0.0:
        raise InvalidArgumentError(f"tolerance must be positive, got {tolerance}")

    def gap(a, b):
        try:
            return TSIRELSON - abs(chsh_value(family, setup, a, b, phi, angles))
        except DegenerateStateError:
            return 4.0

    vals = [0.01 * k for k in range(1, 51)]
    best = min(((gap(a, b), a, b) for a in vals for b in vals), key=lambda t: t[0])
    _, a0, b0 = best

    res = minimize(
        lambda p: gap(p[0], p[1]),
        x0=[a0, b0],
        method="Nelder-Mead",
        bounds=[(1e-4, 0.5), (1e-4, 0.5)],
        options={"xatol": 1e-6, "fatol": tolerance * 1e-3, "maxiter": 400},
    )
    a, b = float(res.x[0]), float(res.x[1])
    if gap(a, b) > gap(a0, b0):
        a, b = a0, b0
    value = abs(chsh_value(family, setup, a, b, phi, angles))
    if value < TSIRELSON - tolerance:
        raise ChshError(
            f"saturation search stalled at |<C>| = {value:.8f} "
            f"(needs >= {TSIRELSON - tolerance:.8f})"
        )
    return a, b, value


# ---------------------------------------------------------------------------
# angle optimization (coordinate-wise golden section)

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    """Argmax of a unimodal f on [lo, hi]."""
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = f(x1)
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class OptimizeResult:
    angles: ChshAngles
    value: float
    converged: bool
    passes: int


def optimize_angles(family, setup, alpha: float, beta: float, phi: float,
                    start: ChshAngles = CANONICAL_ANGLES, tie_primed: bool = False,
                    max_passes: int = 60, improvement_tol: float = 1e-10) -> OptimizeResult:
    """Derivative-free local maximization of |<C>| over the four angles.

    Each pass sweeps the coordinates, bracketing the best of 13 samples over
    a full period and refining by golden section; with tie_primed the primed
    angles are pinned to their partners (a' = a, b' = b), which caps the
    optimum at 2.
    """
    names = ("a", "a_prime", "b", "b_prime") if not tie_primed else ("a", "b")

    def assemble(values: dict) -> ChshAngles:
        if tie_primed:
            return ChshAngles(values["a"], values["a"], values["b"], values["b"])
        return ChshAngles(values["a"], values["a_prime"], values["b"], values["b_prime"])

    current = {name: getattr(start, name) for name in names}

    def objective(values: dict) -> float:
        return abs(chsh_value(family, setup, alpha, beta, phi, assemble(values)))

    best = objective(current)
    passes = 0
    converged = False
    n_probe = 13
    while passes < max_passes:
        passes += 1
        improved = 0.0
        for name in names:
            center = current[name]

            def slice_fn(theta, _name=name):
                trial = dict(current)
                trial[_name] = theta
                return objective(trial)

            probes = [center - math.pi + 2.0 * math.pi * k / n_probe for k in range(n_probe)]
            probe_best = max(probes, key=slice_fn)
            span = 2.0 * math.pi / n_probe
            candidate = _golden_max(slice_fn, probe_best - span, probe_best + span)
            cand_val = slice_fn(candidate)
            if cand_val > best:
                improved += cand_val - best
                best = cand_val
                current[name] = candidate
        if improved < improvement_tol:
            converged = True
            break
    return OptimizeResult(assemble(current), best, converged, passes)


# ---------------------------------------------------------------------------
# figure presets

_LINE = (0.01, 3.0, 300)
_CONTOUR = (0.02, 1.0, 40)


def figure_preset(number: int, engine: Engine = Engine.ANALYTIC,
                  cutoff: Optional[int] = None) -> ScanGrid:
    """Built-in scan grids 1..10 (line scans odd numbers 1-9, contours even)."""
    presets = {
        1: (Family.SYMMETRIC, BellSetup.SINGLE_PAIR, OffsetFromAlpha(0.001), _LINE),
        2: (Family.SYMMETRIC, BellSetup.SINGLE_PAIR, GridBeta(*_CONTOUR), _CONTOUR),
        3: (Family.SYMMETRIC, BellSetup.ALL_PAIRS, OffsetFromAlpha(0.001), _LINE),
        4: (Family.SYMMETRIC, BellSetup.ALL_PAIRS, GridBeta(*_CONTOUR), _CONTOUR),
        5: (Family.ASYMMETRIC, BellSetup.SINGLE_PAIR, EqualAlpha(), _LINE),
        6: (Family.ASYMMETRIC, BellSetup.ALL_PAIRS, GridBeta(*_CONTOUR), _CONTOUR),
        7: (Family.CAT_EVEN, BellSetup.CAT_EVEN_PAIR, OffsetFromAlpha(0.001), _LINE),
        8: (Family.CAT_EVEN, BellSetup.CAT_EVEN_PAIR, GridBeta(*_CONTOUR), _CONTOUR),
        9: (Family.CAT_ODD, BellSetup.CAT_ODD_PAIR, OffsetFromAlpha(0.001), _LINE),
        10: (Family.CAT_ODD, BellSetup.CAT_ODD_PAIR, GridBeta(*_CONTOUR), _CONTOUR),
    }
    if number not in presets:
        raise InvalidArgumentError(f"figure preset must be 1..10, got {number}")
    family, setup, rule, alpha_range = presets[number]
    return ScanGrid(
        alpha_range=alpha_range, beta_rule=rule, phi=math.pi,
        angles=CANONICAL_ANGLES, family=family, setup=setup,
        engine=engine, cutoff=cutoff,
    )


def run_figure(number: int, engine: Engine = Engine.ANALYTIC,
               cutoff: Optional[int] = None) -> ScanResult:
    grid = figure_preset(number, engine, cutoff)
    if isinstance(grid.beta_rule, GridBeta):
        return grid_scan(grid)
    return line_scan(grid)


# ---------------------------------------------------------------------------
# engine cross-validation sweep

VALIDATION_PAIRS = (
    (Family.SYMMETRIC, BellSetup.SINGLE_PAIR),
    (Family.SYMMETRIC, BellSetup.ALL_PAIRS),
    (Family.ASYMMETRIC, BellSetup.SINGLE_PAIR),
    (Family.ASYMMETRIC, BellSetup.ALL_PAIRS),
    (Family.CAT_EVEN, BellSetup.CAT_EVEN_PAIR),
    (Family.CAT_ODD, BellSetup.CAT_ODD_PAIR),
)


@dataclass(frozen=True)
class PairValidation:
    family: Family
    setup: BellSetup
    max_discrepancy: float
    points: int
    skipped: int
    truncation_warning: bool


def validation_sweep(pairs=VALIDATION_PAIRS, steps: int = 15, alpha_max: float = 1.2,
                     phis=None, angles: ChshAngles = CANONICAL_ANGLES,
                     cutoff: Optional[int] = None):
    """Max |analytic - oracle| per (family, setup) over the standard grid."""
    if phis is None:
        phis = (math.pi, math.pi - 0.3, math.pi + 0.3)
    values = [alpha_max * k / steps for k in range(1, steps + 1)]
    reports = []
    for family, setup in pairs:
        check_setup_compatible(family, setup)
        n = cutoff if cutoff is not None else resolve_cutoff(alpha_max, alpha_max)
        worst = 0.0
        used = skipped = 0
        trunc_warn = False
        for phi in phis:
            for a in values:
                for b in values:
                    try:
                        state = build_state(StateSpec(family, a, b, phi), n)
                    except DegenerateStateError:
                        skipped += 1
                        continue
                    if state.truncation_bound > TRUNCATION_TARGET:
                        trunc_warn = True
                    num = expectation_chsh(state, setup, angles).value
                    ana = chsh_value(family, setup, a, b, phi, angles)
                    worst = max(worst, abs(num - ana))
                    used += 1
        reports.append(PairValidation(family, setup, worst, used, skipped, trunc_warn))
    return reports
