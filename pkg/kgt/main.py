"""
Command-line front end.

    kgt params | green1d | green3d | evolve1d | evolve3d | oracle | verify

Data goes to stdout (or --out), logs to stderr. Exit codes: 0 success,
1 verification failure, 2 usage/input error, 3 domain/physics error.
"""

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError

from kgt import __version__
from kgt.calculations.evolution import Evolution
from kgt.calculations.green_functions import GreenFunctions
from kgt.calculations.physical_parameters import PhysicalParameters
from kgt.config import settings
from kgt.errors import ConfigurationError, DomainError, KGTError, VerificationFailure
from kgt.models import (
    ELECTRON_MASS,
    ELEMENTARY_CHARGE,
    FieldGrid,
    InitialData,
    KGParams,
    ParamFile,
    PhysicalParams,
    QuadratureSpec,
    SampleGrid,
    SphereQuadrature,
)
from kgt.verification import CASES, FAULTS, STANDARD_POINTS, STANDARD_Q, run_cases, standard_kg

logger = logging.getLogger(__name__)


# ============================================================================
# OUTPUT HELPERS
# ============================================================================

def format_number(value: float) -> str:
    """17 significant digits; zeros (including -0.0) print as "0"."""
    if value == 0:
        return "0"
    if not math.isfinite(value):
        return str(value)
    return f"{value:.{settings.OUTPUT_DIGITS}g}"


def to_csv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(cell) if isinstance(cell, float) else cell for cell in row])
    return buffer.getvalue()


def to_json(payload: object) -> str:
    return json.dumps(payload, indent=2) + "\n"


def write_output(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    Path(out).write_text(text)
    logger.info(f"wrote {out}")


# ============================================================================
# INPUT HELPERS
# ============================================================================

def load_physical_params(args: argparse.Namespace) -> PhysicalParams:
    """Defaults, then the --params file, then --mass / --v0 flags."""
    overrides: Dict[str, float] = {}
    if args.params:
        overrides.update(ParamFile.model_validate_json(Path(args.params).read_text()).overrides())
    if getattr(args, "mass", None) is not None:
        overrides["mass"] = args.mass * ELECTRON_MASS
    if getattr(args, "v0", None) is not None:
        overrides["v0"] = args.v0 * ELEMENTARY_CHARGE
    try:
        return PhysicalParams(**overrides)
    except ValidationError as e:
        raise DomainError(f"non-physical parameters: {e}") from e


def resolve_kg(args: argparse.Namespace) -> KGParams:
    """--v / --q-sq when given, otherwise derived from the physical parameters."""
    v, q_sq = args.v, args.q_sq
    if v is None or q_sq is None:
        p = load_physical_params(args)
        v = PhysicalParameters.wave_speed(p) if v is None else v
        q_sq = PhysicalParameters.q_squared(p) if q_sq is None else q_sq
    try:
        return KGParams(v=v, q_sq=q_sq)
    except ValidationError as e:
        raise DomainError(f"invalid equation coefficients: {e}") from e


def resolve_tau(args: argparse.Namespace) -> float:
    if args.tau is not None:
        return args.tau
    return PhysicalParameters.relaxation_time(load_physical_params(args))


def sample_positions(lo: float, hi: float, n: int) -> SampleGrid:
    if n < 2 or not hi > lo:
        raise ConfigurationError(f"invalid sample range [{lo!r}, {hi!r}] with n={n}")
    return SampleGrid(origin=lo, spacing=(hi - lo) / (n - 1), n=n)


def load_initial_data(path: Optional[str]) -> InitialData:
    if path is None:
        return InitialData()
    return InitialData.model_validate_json(Path(path).read_text())


# ============================================================================
# COMMANDS
# ============================================================================

def cmd_params(args: argparse.Namespace) -> None:
    derived = PhysicalParameters.derive(load_physical_params(args))
    payload = derived.model_dump()
    if args.format == "csv":
        write_output(to_csv(list(payload), [[float(v) for v in payload.values()]]), args.out)
    else:
        write_output(to_json(payload), args.out)


def cmd_green1d(args: argparse.Namespace) -> None:
    kg = resolve_kg(args)
    grid = sample_positions(args.x_min, args.x_max, args.n)
    x = grid.positions
    g = GreenFunctions.green_1d(x, args.t, kg)
    if args.format == "json":
        write_output(to_json({"t": args.t, "v": kg.v, "q_sq": kg.q_sq,
                              "x_m": x.tolist(), "G": np.asarray(g).tolist()}), args.out)
        return
    write_output(to_csv(["x_m", "G"], zip(map(float, x), map(float, g))), args.out)


def cmd_green3d(args: argparse.Namespace) -> None:
    kg = resolve_kg(args)
    if args.r_min < 0:
        raise ConfigurationError(f"r_min must be >= 0, got {args.r_min!r}")
    grid = sample_positions(args.r_min, args.r_max, args.n)
    rows = []
    for r in grid.positions:
        value = GreenFunctions.green_3d(float(r), args.t, kg)
        rows.append([float(r), value.regular, value.cone_layer_coefficient, value.region.value])
    header = ["r_m", "G_regular", "cone_layer_coefficient", "region"]
    if args.format == "json":
        write_output(to_json([dict(zip(header, row)) for row in rows]), args.out)
        return
    write_output(to_csv(header, rows), args.out)


def _evolve(args: argparse.Namespace, dimension: int) -> None:
    kg = resolve_kg(args)
    tau = resolve_tau(args)
    data = load_initial_data(args.initial)
    grid = sample_positions(args.x_min, args.x_max, args.n)
    if dimension == 3:
        if args.x_min < 0:
            raise ConfigurationError(f"radial grids start at r >= 0, got {args.x_min!r}")
        grid = SampleGrid(origin=grid.origin, spacing=grid.spacing, n=grid.n, dimension=3)
        sphere = SphereQuadrature(
            n_theta=args.n_theta or settings.SPHERE_N_THETA,
            n_phi=args.n_phi or settings.SPHERE_N_PHI,
        )
    else:
        sphere = None
    u = Evolution.evolve_u_grid(data, grid, args.t, kg, tau, args.quad_tol, sphere)
    temperature = u.to_temperature()
    write_field(u, temperature, data, args)


def write_field(u: FieldGrid, temperature: FieldGrid, data: InitialData,
                args: argparse.Namespace) -> None:
    """CSV (or JSON) of u and T plus the parameter sidecar <out>.params.json."""
    metadata = u.metadata()
    metadata["initial_data"] = data.model_dump(by_alias=True)
    positions = u.positions
    if args.format == "json":
        payload = {"metadata": metadata, "position_m": positions.tolist(),
                   "u_K": u.values.tolist(), "temperature_K": temperature.values.tolist()}
        write_output(to_json(payload), args.out)
    else:
        rows = zip(map(float, positions), map(float, u.values), map(float, temperature.values))
        write_output(to_csv(["position_m", "u_K", "temperature_K"], rows), args.out)
    if args.out is not None:
        write_output(to_json(metadata), f"{args.out}.params.json")
    else:
        logger.info("no --out given: parameter sidecar not written")


def cmd_evolve1d(args: argparse.Namespace) -> None:
    _evolve(args, dimension=1)


def cmd_evolve3d(args: argparse.Namespace) -> None:
    _evolve(args, dimension=3)


def cmd_oracle(args: argparse.Namespace) -> None:
    if args.r is not None or args.t is not None:
        if args.r is None or args.t is None:
            raise ConfigurationError("--r and --t must be given together")
        cases = [(resolve_kg(args), args.r, args.t)]
    else:
        cases = [(standard_kg(q), r, t) for q in STANDARD_Q for r, t in STANDARD_POINTS]

    spec = QuadratureSpec.from_settings()
    header = ["point", "closed_form", "deriv_oracle", "spectral_oracle", "max_rel_disagreement"]
    rows = []
    for kg, r, t in cases:
        row = GreenFunctions.oracle_comparison(r, t, kg, spec, h_deriv=args.h)
        label = f"v={kg.v:g};q_sq={kg.q_sq:g};r={r:g};t={t:g}"
        rows.append([label] + [row[name] for name in header[1:]])
    if args.format == "json":
        write_output(to_json([dict(zip(header, row)) for row in rows]), args.out)
        return
    write_output(to_csv(header, rows), args.out)


def cmd_verify(args: argparse.Namespace) -> None:
    if args.list:
        write_output("\n".join(CASES) + "\n", args.out)
        return
    results = run_cases(args.case or None, fault=args.inject_fault)
    report = [result.model_dump(by_alias=True) for result in results]
    write_output(to_json(report), args.out)
    failed = [result.case for result in results if not result.passed]
    if failed:
        raise VerificationFailure(failed)


# ============================================================================
# PARSER
# ============================================================================

def _common(parser: argparse.ArgumentParser, default_format: str) -> None:
    parser.add_argument("--params", metavar="FILE", help="JSON parameter file (mass_kg, alpha, c_m_s, v0_joule, epsilon0_f_m, hbar_j_s)")
    parser.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default=default_format,
                        help="output format (default: %(default)s)")
    parser.add_argument("--log-level", default=None, help="logging level (default: KGT_LOG_LEVEL or warning)")


def _coefficients(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--v", type=float, help="wave speed, m/s (default: alpha c)")
    parser.add_argument("--q-sq", dest="q_sq", type=float, help="q², 1/s² (default: derived)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgt",
        description="Green functions, evolution and verification for the Klein-Gordon thermal equation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = commands.add_parser("params", help="derived parameters v, tau, q², sigma0, lambda_B")
    _common(p, "json")
    p.add_argument("--mass", type=float, help="heaton mass in electron masses")
    p.add_argument("--v0", type=float, help="potential V0 in eV")
    p.set_defaults(handler=cmd_params)

    p = commands.add_parser("green1d", help="tabulate the 1D Green function")
    _common(p, "csv")
    _coefficients(p)
    p.add_argument("--t", type=float, required=True, help="time, s")
    p.add_argument("--x-min", dest="x_min", type=float, required=True)
    p.add_argument("--x-max", dest="x_max", type=float, required=True)
    p.add_argument("--n", type=int, default=101, help="number of points (default: %(default)s)")
    p.set_defaults(handler=cmd_green1d)

    p = commands.add_parser("green3d", help="tabulate the 3D Green function (regular part and cone layer)")
    _common(p, "csv")
    _coefficients(p)
    p.add_argument("--t", type=float, required=True, help="time, s")
    p.add_argument("--r-min", dest="r_min", type=float, default=0.0)
    p.add_argument("--r-max", dest="r_max", type=float, required=True)
    p.add_argument("--n", type=int, default=101, help="number of points (default: %(default)s)")
    p.set_defaults(handler=cmd_green3d)

    for name, handler, help_text in (
        ("evolve1d", cmd_evolve1d, "evolve 1D initial data by convolution"),
        ("evolve3d", cmd_evolve3d, "evolve radially symmetric 3D initial data"),
    ):
        p = commands.add_parser(name, help=help_text)
        _common(p, "csv")
        _coefficients(p)
        p.add_argument("--tau", type=float, help="relaxation time, s; 'inf' disables damping (default: derived)")
        p.add_argument("--initial", metavar="FILE", help='initial data JSON, e.g. {"phi": {"shape": "gaussian", "width": 1e-10}, "psi": {"shape": "zero"}}')
        p.add_argument("--t", type=float, required=True, help="time, s")
        p.add_argument("--x-min", dest="x_min", type=float, required=True, help="first position (r >= 0 in 3D), m")
        p.add_argument("--x-max", dest="x_max", type=float, required=True, help="last position, m")
        p.add_argument("--n", type=int, default=101, help="number of points (default: %(default)s)")
        p.add_argument("--quad-tol", dest="quad_tol", type=float, default=None, help="relative quadrature tolerance")
        if name == "evolve3d":
            p.add_argument("--n-theta", dest="n_theta", type=int, default=None)
            p.add_argument("--n-phi", dest="n_phi", type=int, default=None)
        p.set_defaults(handler=handler)

    p = commands.add_parser("oracle", help="closed form vs derivative and spectral oracles for the 3D Green function")
    _common(p, "csv")
    _coefficients(p)
    p.add_argument("--r", type=float, help="radius, m (default: standard point set)")
    p.add_argument("--t", type=float, help="time, s")
    p.add_argument("--h", type=float, default=1e-5, help="derivative-oracle step (default: %(default)s)")
    p.set_defaults(handler=cmd_oracle)

    p = commands.add_parser("verify", help="run the acceptance suite and emit a JSON report")
    _common(p, "json")
    p.add_argument("--list", action="store_true", help="print case names and exit")
    p.add_argument("--case", action="append", choices=list(CASES), help="run only this case (repeatable)")
    p.add_argument("--inject-fault", dest="inject_fault", choices=FAULTS, default=None, help=argparse.SUPPRESS)
    p.set_defaults(handler=cmd_verify)

    return parser


# ============================================================================
# ENTRY POINT
# ============================================================================

def configure_logging(level: Optional[str]) -> None:
    level = (level or settings.LOG_LEVEL).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


def attach_negative_values(argv: Sequence[str]) -> List[str]:
    """
    Join ``--opt -3e-10`` into ``--opt=-3e-10``.

    argparse only recognises plain negative numbers like ``-3`` or ``-0.5``
    as values; exponent forms would otherwise be parsed as option flags.
    """
    joined: List[str] = []
    tokens = list(argv)
    i = 0
    while i < len(tokens):
        token = tokens[i]
        following = tokens[i + 1] if i + 1 < len(tokens) else None
        if (token.startswith("--") and "=" not in token and following is not None
                and following.startswith("-") and _is_number(following)):
            joined.append(f"{token}={following}")
            i += 2
            continue
        joined.append(token)
        i += 1
    return joined


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(attach_negative_values(sys.argv[1:] if argv is None else argv))
    configure_logging(args.log_level)
    logger.debug(f"🚀 {settings.APP_NAME} {__version__}: {args.command}")

    try:
        args.handler(args)
    except KGTError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        print(f"error: invalid input: {e}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
