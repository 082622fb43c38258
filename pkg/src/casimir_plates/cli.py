"""Command-line front end.

Subcommands: ``pressure`` (one cell), ``sweep`` (grid to CSV/text),
``diff`` (two-temperature comparison), ``materials`` (list presets),
``import-table`` (validate a permittivity CSV).  Exit codes: 0 success,
1 usage error, 2 computation error.
"""

from __future__ import annotations

import argparse
import re
import sys

from .constants import EV_RAD_PER_S
from .dispersion import (
    DrudeParams,
    Material,
    TableError,
    load_permittivity_table,
    material_preset,
    preset_names,
    _PRESETS,
)
from .lifshitz import (
    ConvergenceError,
    PlateSystem,
    SolverOptions,
    ThermalState,
    casimir_pressure,
)
from .quadrature import QuadratureError
from .scenarios import (
    SweepSpec,
    _evaluate_cell,
    diff_results_to_csv,
    gap_grid,
    relative_correction_curve,
    sweep,
    sweep_rows_to_csv,
    SweepRow,
)

__all__ = ["run", "main", "RunConfig"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # route argparse's own complaints through the usage-error path (exit 1)
    def error(self, message):
        raise _UsageError(message)


_LENGTH_UNITS = {"nm": 1e-9, "um": 1e-6, "µm": 1e-6, "m": 1.0}
_ENERGY_UNITS = {"meV": 1e-3 * EV_RAD_PER_S, "eV": EV_RAD_PER_S}


def parse_length(text: str) -> float:
    """'200nm' | '1um' | '2.5e-7m' -> metres."""
    m = re.fullmatch(r"\s*([0-9.eE+-]+?)\s*(nm|um|µm|m)\s*", text)
    if not m:
        raise _UsageError(f"cannot parse length {text!r}; use e.g. 200nm, 1um, 2.5e-7m")
    try:
        value = float(m.group(1))
    except ValueError:
        raise _UsageError(f"cannot parse length {text!r}") from None
    value *= _LENGTH_UNITS[m.group(2)]
    if value <= 0.0:
        raise _UsageError(f"length must be > 0, got {text!r}")
    return value


def parse_temperature(text: str) -> float:
    """'300K' or '300' -> kelvin."""
    t = text.strip()
    if t.endswith("K"):
        t = t[:-1]
    try:
        value = float(t)
    except ValueError:
        raise _UsageError(f"cannot parse temperature {text!r}; use e.g. 300 or 300K") from None
    if value <= 0.0:
        raise _UsageError(f"temperature must be > 0, got {text!r}")
    return value


def parse_energy(text: str) -> float:
    """'9.0eV' | '35meV' -> rad/s (imaginary-axis angular frequency)."""
    m = re.fullmatch(r"\s*([0-9.eE+-]+?)\s*(meV|eV)\s*", text)
    if not m:
        raise _UsageError(f"cannot parse energy {text!r}; use e.g. 9.0eV or 35meV")
    try:
        value = float(m.group(1))
    except ValueError:
        raise _UsageError(f"cannot parse energy {text!r}") from None
    value *= _ENERGY_UNITS[m.group(2)]
    if value <= 0.0:
        raise _UsageError(f"energy must be > 0, got {text!r}")
    return value


def parse_gaps(text: str) -> list[float]:
    """Comma list of lengths, or a grid 'start:stop:lin|log:count'."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 4:
            raise _UsageError(
                f"gap grid must be start:stop:lin|log:count, got {text!r}"
            )
        start, stop = parse_length(parts[0]), parse_length(parts[1])
        spacing = parts[2].strip().lower()
        try:
            count = int(parts[3])
        except ValueError:
            raise _UsageError(f"gap grid count must be an integer, got {parts[3]!r}") from None
        try:
            return [float(a) for a in gap_grid(start, stop, spacing, count)]
        except ValueError as exc:
            raise _UsageError(str(exc)) from None
    return [parse_length(p) for p in text.split(",") if p.strip()]


def parse_temperatures(text: str) -> list[float]:
    values = [parse_temperature(p) for p in text.split(",") if p.strip()]
    if not values:
        raise _UsageError(f"no temperatures in {text!r}")
    return values


class RunConfig:
    """Materials available to one invocation: presets plus --drude/--table."""

    def __init__(self, drude_specs=(), table_specs=()):
        self.custom: dict[str, Material] = {}
        for spec in drude_specs:
            name, mat = _parse_drude_spec(spec)
            self.custom[name.lower()] = mat
        for spec in table_specs:
            name, mat = _parse_table_spec(spec)
            self.custom[name.lower()] = mat

    def material(self, name: str) -> Material:
        key = name.strip().lower()
        if key in self.custom:
            return self.custom[key]
        try:
            return material_preset(key)
        except KeyError:
            known = list(preset_names()) + [m.name for m in self.custom.values()]
            raise _UsageError(
                f"unknown material {name!r}; available: {', '.join(known)}"
            ) from None

    def pair(self, text: str) -> tuple[Material, Material]:
        names = [p for p in text.split(",") if p.strip()]
        if len(names) != 2:
            raise _UsageError(f"a pair needs exactly two materials, got {text!r}")
        return self.material(names[0]), self.material(names[1])


def _parse_drude_spec(spec: str) -> tuple[str, Material]:
    parts = spec.split(":")
    if len(parts) != 3 or not parts[0].strip():
        raise _UsageError(
            f"--drude must be NAME:OMEGA_P:NU (e.g. MyAu:9.0eV:35meV), got {spec!r}"
        )
    name = parts[0].strip()
    params = DrudeParams(omega_p=parse_energy(parts[1]), nu=parse_energy(parts[2]))
    return name, Material(name=name, model=params)


def _parse_table_spec(spec: str) -> tuple[str, Material]:
    name, sep, path = spec.partition("=")
    if not sep or not name.strip() or not path.strip():
        raise _UsageError(f"--table must be NAME=path.csv, got {spec!r}")
    name = name.strip()
    table = load_permittivity_table(path.strip())
    return name, Material(name=name, model=table)


def _solver_options(args) -> SolverOptions:
    try:
        return SolverOptions(quad_tol=args.tol, m_max=args.m_max)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _row_text(row: SweepRow) -> str:
    return (
        f"pair: {row.pair}\n"
        f"gap: {row.gap:.6e} m\n"
        f"temperature: {row.temperature:g} K\n"
        f"pressure: {-row.pressure:.6e} Pa  (|F| = {row.pressure * 1e3:.4g} mPa, attractive)\n"
        f"TM share: {row.tm_share:.4f}  TE share: {row.te_share:.4f}  "
        f"matsubara terms: {row.m_used}\n"
    )


def _cmd_pressure(args) -> int:
    config = RunConfig(args.drude, args.table)
    mat1, mat3 = config.pair(args.pair)
    gap = parse_length(args.gap)
    temp = parse_temperature(args.temp)
    opts = _solver_options(args)
    row = _evaluate_cell((mat1, mat3, gap, temp, opts))
    if args.format == "csv":
        _emit(sweep_rows_to_csv([row], opts), args.output)
    else:
        _emit(_row_text(row), args.output)
    return 0


def _cmd_sweep(args) -> int:
    config = RunConfig(args.drude, args.table)
    if args.pairs.strip().lower() == "all":
        names = ["Au,Au", "Au,Cu", "Cu,Cu", "Al,Al", "Al,Au", "Al,Cu"]
    else:
        names = [p for p in args.pairs.split(";") if p.strip()]
    pairs = tuple(config.pair(p) for p in names)
    spec = SweepSpec(
        pairs=pairs,
        temperatures=tuple(parse_temperatures(args.temps)),
        gaps=tuple(parse_gaps(args.gaps)),
    )
    opts = _solver_options(args)
    rows = sweep(spec, opts, jobs=args.jobs)
    if args.format == "text":
        lines = [f"{'pair':10} {'gap_m':>14} {'T_K':>8} {'|F|_Pa':>14} {'tm':>7} {'te':>7} {'m':>7}"]
        for r in rows:
            lines.append(
                f"{r.pair:10} {r.gap:14.6e} {r.temperature:8g} {r.pressure:14.6e} "
                f"{r.tm_share:7.4f} {r.te_share:7.4f} {r.m_used:7d}"
            )
        _emit("\n".join(lines) + "\n", args.output)
    else:
        _emit(sweep_rows_to_csv(rows, opts), args.output)
    return 0


def _cmd_diff(args) -> int:
    config = RunConfig(args.drude, args.table)
    mat1, mat3 = config.pair(args.pair)
    temps = parse_temperatures(args.temps)
    if len(temps) != 2 or temps[0] == temps[1]:
        raise _UsageError(f"--temps needs exactly two distinct temperatures, got {args.temps!r}")
    t_low, t_high = sorted(temps)
    gaps = parse_gaps(args.gaps)
    opts = _solver_options(args)
    results = relative_correction_curve(mat1, mat3, gaps, t_low, t_high, opts)
    if args.format == "csv":
        _emit(diff_results_to_csv(results, mat1, mat3, opts), args.output)
    else:
        lines = [
            f"pair: {mat1.name}-{mat3.name}   T_low = {t_low:g} K   T_high = {t_high:g} K",
            f"{'gap_m':>14} {'|F|(T_low)_Pa':>15} {'|F|(T_high)_Pa':>15} {'delta_Pa':>14} {'rel_%':>8}",
        ]
        for r in results:
            lines.append(
                f"{r.a:14.6e} {r.f_low_T:15.6e} {r.f_high_T:15.6e} "
                f"{r.delta:14.6e} {100 * r.relative:8.3f}"
            )
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_materials(args) -> int:
    lines = ["built-in materials (Drude):"]
    for display, wp_ev, nu_mev in _PRESETS.values():
        mat = material_preset(display)
        lines.append(
            f"  {display}: omega_p = {wp_ev:g} eV ({mat.model.omega_p:.5g} rad/s), "
            f"nu = {nu_mev:g} meV ({mat.model.nu:.5g} rad/s)"
        )
    lines.append("units: gaps nm/um/m; temperatures K; custom Drude parameters eV/meV")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_import_table(args) -> int:
    fallback = None
    if args.fallback:
        parts = args.fallback.split(":")
        if len(parts) != 2:
            raise _UsageError(f"--fallback must be OMEGA_P:NU, got {args.fallback!r}")
        fallback = DrudeParams(omega_p=parse_energy(parts[0]), nu=parse_energy(parts[1]))
    table = load_permittivity_table(args.file, fallback=fallback)
    Material(name="imported", model=table)  # runs the monotonicity check
    lines = [
        f"table ok: {args.file}",
        f"samples: {table.zeta.size}",
        f"zeta range: {table.zeta_min:.6g} .. {table.zeta_max:.6g} rad/s",
        f"eps range: {table.eps.min():.6g} .. {table.eps.max():.6g}",
        f"fallback: {'Drude' if table.fallback else 'none (queries outside range fail)'}",
    ]
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def _add_common(p: _Parser, *, jobs: bool = False) -> None:
    p.add_argument("--tol", type=float, default=1e-10, help="per-term quadrature tolerance")
    p.add_argument("--m-max", type=int, default=None, help="override the Matsubara sum ceiling")
    p.add_argument("--format", choices=("text", "csv"), default="text", help="output format")
    p.add_argument("--output", default=None, help="write output to a file instead of stdout")
    p.add_argument(
        "--drude",
        action="append",
        default=[],
        metavar="NAME:OMEGA_P:NU",
        help="define a custom Drude material, e.g. MyAu:9.0eV:35meV (repeatable)",
    )
    p.add_argument(
        "--table",
        action="append",
        default=[],
        metavar="NAME=FILE",
        help="define a material from a permittivity CSV (repeatable)",
    )
    if jobs:
        p.add_argument("--jobs", type=int, default=1, help="worker processes for sweep cells")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="casimir-plates",
        description="Finite-temperature Casimir pressure between parallel metal plates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pressure", help="pressure of a single (pair, gap, T) cell")
    p.add_argument("--pair", required=True, help="two materials, e.g. Au,Cu")
    p.add_argument("--gap", required=True, help="gap width, e.g. 200nm")
    p.add_argument("--temp", required=True, help="temperature, e.g. 300K")
    _add_common(p)
    p.set_defaults(func=_cmd_pressure)

    p = sub.add_parser("sweep", help="evaluate a (pairs x temps x gaps) grid")
    p.add_argument("--pairs", required=True, help="semicolon-separated pairs, e.g. 'Au,Au;Al,Cu', or 'all'")
    p.add_argument("--gaps", required=True, help="comma list or start:stop:lin|log:count, e.g. 50nm:3um:log:60")
    p.add_argument("--temps", required=True, help="comma-separated temperatures, e.g. 1,300,350")
    _add_common(p, jobs=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("diff", help="pressure difference between two temperatures")
    p.add_argument("--pair", required=True, help="two materials, e.g. Au,Au")
    p.add_argument("--gaps", required=True, help="comma list or start:stop:lin|log:count")
    p.add_argument("--temps", required=True, help="exactly two temperatures, e.g. 300,350")
    _add_common(p)
    p.set_defaults(func=_cmd_diff)

    p = sub.add_parser("materials", help="list built-in materials")
    p.add_argument("--output", default=None, help="write output to a file instead of stdout")
    p.set_defaults(func=_cmd_materials)

    p = sub.add_parser("import-table", help="validate a permittivity CSV")
    p.add_argument("file", help="path to the CSV file")
    p.add_argument("--fallback", default=None, metavar="OMEGA_P:NU",
                   help="attach a Drude fallback, e.g. 9.0eV:35meV")
    p.add_argument("--output", default=None, help="write output to a file instead of stdout")
    p.set_defaults(func=_cmd_import_table)

    return parser


def run(argv) -> int:
    """Parse argv (without the program name) and execute; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else 0
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (TableError, ConvergenceError, QuadratureError, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
