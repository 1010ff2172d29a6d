"""Command-line front end: point evaluation, figure scans, saturation table,
and full analytic-vs-oracle validation.

Exit codes: 0 success, 1 validation/acceptance failure, 2 invalid or
degenerate input, 3 I/O failure.
"""

import argparse
import json
import math
import os
import re
import sys
import tempfile

from . import __version__
from ._kernels import TSIRELSON
from .analytic import CANONICAL_ANGLES, CANONICAL_ANGLES_SWAPPED, ChshAngles, chsh_value
from .bell import BellSetup
from .errors import (
    ChshError,
    DegenerateStateError,
    IncompatibleSetupError,
    InvalidArgumentError,
)
from .oracle import TRUNCATION_TARGET, chsh_expectation, resolve_cutoff
from .scan import (
    Engine,
    EqualAlpha,
    GridBeta,
    OffsetFromAlpha,
    SATURATION_POINTS,
    ScanGrid,
    VALIDATION_PAIRS,
    grid_scan,
    line_scan,
    run_figure,
    validation_sweep,
)
from .states import Family

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BAD_INPUT = 2
EXIT_IO = 3

_PI_RE = re.compile(r"^([+-]?)(\d+(?:\.\d*)?)?\s*\*?\s*pi(?:\s*/\s*(\d+(?:\.\d*)?))?$")


def parse_angle(text: str) -> float:
    """Parse '0.3', 'pi', '-pi/4', '3pi/4' style angle strings."""
    s = str(text).strip().lower()
    m = _PI_RE.match(s)
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        num = float(m.group(2)) if m.group(2) else 1.0
        den = float(m.group(3)) if m.group(3) else 1.0
        if den == 0.0:
            raise InvalidArgumentError(f"zero denominator in angle {text!r}")
        return sign * num * math.pi / den
    try:
        return float(s)
    except ValueError:
        raise InvalidArgumentError(f"cannot parse angle {text!r}") from None


def parse_angles_spec(text: str) -> ChshAngles:
    """'canonical', 'canonical-swapped', or four comma-separated angles."""
    s = str(text).strip().lower()
    if s == "canonical":
        return CANONICAL_ANGLES
    if s == "canonical-swapped":
        return CANONICAL_ANGLES_SWAPPED
    parts = s.split(",")
    if len(parts) != 4:
        raise InvalidArgumentError(
            f"angles must be 'canonical', 'canonical-swapped' or a,a',b,b' — got {text!r}"
        )
    a, ap, b, bp = (parse_angle(p) for p in parts)
    return ChshAngles(a, ap, b, bp)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def format_csv(result) -> str:
    """Self-describing CSV: one metadata header line, then the value rows."""
    meta = result.metadata
    a, ap, b, bp = meta["angles"]
    lines = [
        f"# chsh-coherent v{__version__} family={meta['family']} setup={meta['setup']} "
        f"phi={_fmt(meta['phi'])} angles={_fmt(a)},{_fmt(ap)},{_fmt(b)},{_fmt(bp)} "
        f"cutoff={meta['cutoff']}",
        "alpha,beta,value_signed,value_abs,violation",
    ]
    for row in result.rows:
        if row.skipped:
            lines.append(f"{_fmt(row.alpha)},{_fmt(row.beta)},skipped,skipped,skipped")
        else:
            lines.append(
                f"{_fmt(row.alpha)},{_fmt(row.beta)},{_fmt(row.value_signed)},"
                f"{_fmt(row.value_abs)},{1 if row.violation else 0}"
            )
    return "\n".join(lines) + "\n"


def write_csv_atomic(result, path: str) -> None:
    """Write the CSV in one shot: temp file in the target dir, then rename."""
    text = format_csv(result)
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_config(path):
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise InvalidArgumentError(f"config {path} must hold a JSON object")
    return data


def _merged(args, keys):
    """Config-file values with CLI flags overriding them."""
    cfg = _load_config(args.config) if getattr(args, "config", None) else {}
    out = {}
    for key in keys:
        flag = getattr(args, key, None)
        out[key] = flag if flag is not None else cfg.get(key)
    return out


def _default_setup(family: Family):
    if family is Family.CAT_EVEN:
        return BellSetup.CAT_EVEN_PAIR
    if family is Family.CAT_ODD:
        return BellSetup.CAT_ODD_PAIR
    return None


# ---------------------------------------------------------------------------
# subcommands

def cmd_chsh(args) -> int:
    cfg = _merged(args, ("family", "setup", "alpha", "beta", "phi", "angles", "engine", "cutoff"))
    for key in ("family", "alpha", "beta", "phi"):
        if cfg[key] is None:
            raise InvalidArgumentError(f"missing required parameter --{key}")
    family = Family(cfg["family"])
    setup = BellSetup(cfg["setup"]) if cfg["setup"] else _default_setup(family)
    if setup is None:
        raise InvalidArgumentError(f"--setup is required for family {family.value!r}")
    alpha, beta = float(cfg["alpha"]), float(cfg["beta"])
    phi = parse_angle(str(cfg["phi"]))
    angles = parse_angles_spec(cfg["angles"] or "canonical")
    engine = Engine(cfg["engine"] or "both")
    cutoff = int(cfg["cutoff"]) if cfg["cutoff"] is not None else None

    analytic_value = oracle_value = None
    if engine in (Engine.ANALYTIC, Engine.BOTH):
        analytic_value = chsh_value(family, setup, alpha, beta, phi, angles)
    if engine in (Engine.ORACLE, Engine.BOTH):
        report = chsh_expectation(family, setup, alpha, beta, phi, angles, cutoff)
        oracle_value = report.value
        if report.truncation_bound > TRUNCATION_TARGET:
            print(
                f"warning: truncation bound {report.truncation_bound:.2e} exceeds "
                f"{TRUNCATION_TARGET:g} at cutoff {report.cutoff}",
                file=sys.stderr,
            )
    value = analytic_value if analytic_value is not None else oracle_value

    print(
        f"family={family.value} setup={setup.value} alpha={_fmt(alpha)} beta={_fmt(beta)} "
        f"phi={_fmt(phi)}"
    )
    print(
        f"angles: a={_fmt(angles.a)} a'={_fmt(angles.a_prime)} "
        f"b={_fmt(angles.b)} b'={_fmt(angles.b_prime)}  engine={engine.value}"
    )
    print(f"<C> = {_fmt(value)}   |<C>| = {_fmt(abs(value))}")
    print(f"violation: {'yes' if abs(value) > 2.0 else 'no'} (local bound 2, quantum maximum {_fmt(TSIRELSON)})")
    if engine is Engine.BOTH:
        print(f"analytic/oracle discrepancy = {abs(analytic_value - oracle_value):.3e}")
    return EXIT_OK


def cmd_scan(args) -> int:
    engine = Engine(args.engine or "analytic")
    cutoff = int(args.cutoff) if args.cutoff is not None else None
    if args.figure is not None:
        result = run_figure(int(args.figure), engine, cutoff)
    else:
        for key in ("family", "alpha_min", "alpha_max", "alpha_steps"):
            if getattr(args, key, None) is None:
                raise InvalidArgumentError(f"custom scans require --{key.replace('_', '-')}")
        family = Family(args.family)
        setup = BellSetup(args.setup) if args.setup else _default_setup(family)
        if setup is None:
            raise InvalidArgumentError(f"--setup is required for family {family.value!r}")
        rule_name = args.beta_rule or "offset"
        if rule_name == "grid":
            rule = GridBeta(
                args.beta_min if args.beta_min is not None else args.alpha_min,
                args.beta_max if args.beta_max is not None else args.alpha_max,
                args.beta_steps if args.beta_steps is not None else args.alpha_steps,
            )
        elif rule_name == "equal":
            rule = EqualAlpha()
        else:
            rule = OffsetFromAlpha(args.delta if args.delta is not None else 0.001)
        grid = ScanGrid(
            alpha_range=(args.alpha_min, args.alpha_max, args.alpha_steps),
            beta_rule=rule,
            phi=parse_angle(args.phi or "pi"),
            angles=parse_angles_spec(args.angles or "canonical"),
            family=family,
            setup=setup,
            engine=engine,
            cutoff=cutoff,
        )
        result = grid_scan(grid) if isinstance(rule, GridBeta) else line_scan(grid)

    if args.out:
        write_csv_atomic(result, args.out)
        skipped = sum(1 for r in result.rows if r.skipped)
        print(f"wrote {len(result.rows)} rows ({skipped} skipped) to {args.out}")
    else:
        sys.stdout.write(format_csv(result))
    return EXIT_OK


def cmd_table1(args) -> int:
    engine_disagreement = 0.0
    failures = 0
    target = 2.8284
    print(f"{'family':<12} {'setup':<14} {'alpha':>6} {'beta':>6} "
          f"{'analytic':>12} {'oracle':>12} {'discrepancy':>12}")
    for family, setup, alpha, beta in SATURATION_POINTS:
        ana = chsh_value(family, setup, alpha, beta, math.pi, CANONICAL_ANGLES)
        num = chsh_expectation(family, setup, alpha, beta, math.pi, CANONICAL_ANGLES).value
        disc = abs(ana - num)
        engine_disagreement = max(engine_disagreement, disc)
        ok = abs(abs(ana) - target) <= 5e-4 and abs(abs(num) - target) <= 5e-4
        failures += not ok
        print(f"{family.value:<12} {setup.value:<14} {alpha:>6} {beta:>6} "
              f"{abs(ana):>12.6f} {abs(num):>12.6f} {disc:>12.3e}"
              + ("" if ok else "  MISS"))
    print(f"target |<C>| = {target} +- 5e-4; max engine discrepancy {engine_disagreement:.3e}")
    return EXIT_OK if failures == 0 else EXIT_FAIL


def cmd_validate(args) -> int:
    pairs = VALIDATION_PAIRS
    if args.family or args.setup:
        family = Family(args.family) if args.family else None
        setup = BellSetup(args.setup) if args.setup else None
        pairs = tuple(
            (f, s)
            for f, s in VALIDATION_PAIRS
            if (family is None or f is family) and (setup is None or s is setup)
        )
        if not pairs:
            # an explicitly requested combination that no valid pair matches
            if family is not None and setup is not None:
                from .bell import check_setup_compatible

                check_setup_compatible(family, setup)  # raises IncompatibleSetupError
            raise InvalidArgumentError("no (family, setup) pair matches the filters")
    cutoff = int(args.cutoff) if args.cutoff is not None else None
    alpha_max = float(args.alpha_max) if args.alpha_max is not None else 1.2
    reports = validation_sweep(pairs, alpha_max=alpha_max, cutoff=cutoff)
    tol = 1e-6
    worst = 0.0
    for rep in reports:
        worst = max(worst, rep.max_discrepancy)
        print(json.dumps({
            "family": rep.family.value,
            "setup": rep.setup.value,
            "max_discrepancy": rep.max_discrepancy,
            "points": rep.points,
            "skipped": rep.skipped,
            "pass": rep.max_discrepancy <= tol,
        }))
        if rep.truncation_warning:
            print(
                f"warning: truncation bound above {TRUNCATION_TARGET:g} for "
                f"{rep.family.value}/{rep.setup.value} at the forced cutoff",
                file=sys.stderr,
            )
    print(f"max discrepancy {worst:.3e} (tolerance {tol:g})")
    return EXIT_OK if worst <= tol else EXIT_FAIL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chsh-coherent",
        description="Bell-CHSH correlators for entangled two-mode coherent states",
    )
    parser.add_argument("--version", action="version", version=f"chsh-coherent {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_point=True):
        p.add_argument("--family", choices=[f.value for f in Family])
        p.add_argument("--setup", choices=[s.value for s in BellSetup])
        if with_point:
            p.add_argument("--alpha", type=float)
            p.add_argument("--beta", type=float)
            p.add_argument("--phi")
        p.add_argument("--angles")
        p.add_argument("--engine", choices=[e.value for e in Engine])
        p.add_argument("--cutoff", type=int)
        p.add_argument("--config")

    p_chsh = sub.add_parser("chsh", help="evaluate <C> at one parameter point")
    common(p_chsh)
    p_chsh.set_defaults(fn=cmd_chsh)

    p_scan = sub.add_parser("scan", help="line or contour scans; CSV output")
    common(p_scan, with_point=False)
    p_scan.add_argument("--figure", type=int, help="built-in preset 1..10")
    p_scan.add_argument("--phi")
    p_scan.add_argument("--alpha-min", type=float, dest="alpha_min")
    p_scan.add_argument("--alpha-max", type=float, dest="alpha_max")
    p_scan.add_argument("--alpha-steps", type=int, dest="alpha_steps")
    p_scan.add_argument("--beta-rule", choices=["grid", "offset", "equal"], dest="beta_rule")
    p_scan.add_argument("--beta-min", type=float, dest="beta_min")
    p_scan.add_argument("--beta-max", type=float, dest="beta_max")
    p_scan.add_argument("--beta-steps", type=int, dest="beta_steps")
    p_scan.add_argument("--delta", type=float)
    p_scan.add_argument("--out")
    p_scan.set_defaults(fn=cmd_scan)

    p_table = sub.add_parser("table1", help="check the six saturation reference points")
    p_table.set_defaults(fn=cmd_table1)

    p_val = sub.add_parser("validate", help="analytic vs oracle over the standard grid")
    p_val.add_argument("--family", choices=[f.value for f in Family])
    p_val.add_argument("--setup", choices=[s.value for s in BellSetup])
    p_val.add_argument("--cutoff", type=int)
    p_val.add_argument("--alpha-max", type=float, dest="alpha_max")
    p_val.set_defaults(fn=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (InvalidArgumentError, DegenerateStateError, IncompatibleSetupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ChshError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
