"""Derived observables and parameter sweeps over (pair, temperature, gap).

Temperature-difference observables quantify how much thermal occupation of
the Matsubara modes weakens the attraction; sweeps evaluate grids of cells
and render them as CSV (SI units throughout) with ``#`` metadata lines
recording the solver settings and constants, so a result file is
self-describing.
"""

from __future__ import annotations

import concurrent.futures
import itertools
from dataclasses import dataclass

import numpy as np

from .constants import BOLTZMANN, HBAR, SPEED_OF_LIGHT
from .dispersion import Material, material_preset
from .lifshitz import (
    DEFAULT_OPTIONS,
    PlateSystem,
    PressureResult,
    SolverOptions,
    ThermalState,
    casimir_pressure,
)

__all__ = [
    "SweepSpec",
    "SweepRow",
    "DiffResult",
    "PairGroup",
    "GAP_RANGE",
    "temperature_difference",
    "relative_correction_curve",
    "sweep",
    "sweep_rows_to_csv",
    "diff_results_to_csv",
    "group_ordering",
    "gap_grid",
]

#: default gap span covered by sweeps, in metres
GAP_RANGE = (50e-9, 3e-6)

SWEEP_CSV_HEADER = "pair,material_1,material_2,gap_m,temperature_K,pressure_Pa,tm_share,te_share,m_used"
DIFF_CSV_HEADER = (
    "pair,material_1,material_2,gap_m,T_low_K,T_high_K,"
    "pressure_low_Pa,pressure_high_Pa,delta_Pa,relative"
)


def gap_grid(start: float, stop: float, spacing: str, count: int) -> np.ndarray:
    """Gap grid in metres, ``spacing`` either 'lin' or 'log'."""
    if not (0.0 < start < stop):
        raise ValueError(f"need 0 < start < stop, got {start!r}, {stop!r}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if spacing == "lin":
        return np.linspace(start, stop, count)
    if spacing == "log":
        return np.geomspace(start, stop, count)
    raise ValueError(f"spacing must be 'lin' or 'log', got {spacing!r}")


@dataclass(frozen=True)
class SweepSpec:
    """A sweep grid: material pairs x temperatures x gaps.

    Gaps and temperatures are sorted ascending at construction; pairs keep
    their given order.  Gaps outside ``GAP_RANGE`` are allowed but the
    default grids stay inside it.
    """

    pairs: tuple[tuple[Material, Material], ...]
    temperatures: tuple[float, ...]
    gaps: tuple[float, ...]

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("need at least one material pair")
        if not self.temperatures or any(t <= 0.0 for t in self.temperatures):
            raise ValueError("temperatures must be non-empty and all > 0")
        if not self.gaps or any(a <= 0.0 for a in self.gaps):
            raise ValueError("gaps must be non-empty and all > 0")
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))
        object.__setattr__(self, "temperatures", tuple(sorted(float(t) for t in self.temperatures)))
        object.__setattr__(self, "gaps", tuple(sorted(float(a) for a in self.gaps)))


@dataclass(frozen=True)
class SweepRow:
    """One sweep cell; ``pressure`` is |F| in Pa (the attraction magnitude)."""

    pair: str
    material_1: str
    material_2: str
    gap: float
    temperature: float
    pressure: float
    tm_share: float
    te_share: float
    m_used: int


@dataclass(frozen=True)
class DiffResult:
    """Pressure magnitudes of one gap at two temperatures and their difference.

    delta = f_low_T - f_high_T exactly as evaluated; relative = delta/f_low_T.
    For Drude metals below the large-gap classical crossover the attraction
    weakens with temperature, so delta > 0.
    """

    a: float
    T_low: float
    T_high: float
    f_low_T: float
    f_high_T: float
    delta: float
    relative: float


@dataclass(frozen=True)
class PairGroup:
    """A set of material pairs ranked together by mean attraction strength."""

    label: str
    pairs: tuple[str, ...]
    pressures: tuple[float, ...]
    mean_pressure: float


def _pair_label(mat1: Material, mat3: Material) -> str:
    return f"{mat1.name}-{mat3.name}"


def temperature_difference(
    system: PlateSystem,
    T_low: float,
    T_high: float,
    opts: SolverOptions = DEFAULT_OPTIONS,
) -> DiffResult:
    """Compare |F| at two temperatures with identical solver settings.

    The two temperatures must differ; calling with them swapped negates
    ``delta`` exactly (the same two pressures are computed either way).

    Raises
    ------
    ValueError
        If either temperature is <= 0 or they are equal.
    """
    if T_low <= 0.0 or T_high <= 0.0:
        raise ValueError(f"temperatures must be > 0, got {T_low!r}, {T_high!r}")
    if T_low == T_high:
        raise ValueError(f"temperatures must differ, both are {T_low!r}")
    f_low = abs(casimir_pressure(system, ThermalState(T_low), opts).pressure)
    f_high = abs(casimir_pressure(system, ThermalState(T_high), opts).pressure)
    delta = f_low - f_high
    return DiffResult(
        a=system.gap,
        T_low=T_low,
        T_high=T_high,
        f_low_T=f_low,
        f_high_T=f_high,
        delta=delta,
        relative=delta / f_low,
    )


def relative_correction_curve(
    mat1: Material,
    mat3: Material,
    gaps,
    T_low: float,
    T_high: float,
    opts: SolverOptions = DEFAULT_OPTIONS,
) -> list[DiffResult]:
    """:func:`temperature_difference` across a gap grid (ascending order)."""
    return [
        temperature_difference(PlateSystem(mat1, mat3, gap=float(a)), T_low, T_high, opts)
        for a in sorted(float(a) for a in gaps)
    ]


def _evaluate_cell(args) -> SweepRow:
    mat1, mat3, a, T, opts = args
    try:
        result: PressureResult = casimir_pressure(
            PlateSystem(mat1, mat3, gap=a), ThermalState(T), opts
        )
    except Exception as exc:
        raise RuntimeError(
            f"cell failed: pair={_pair_label(mat1, mat3)}, a={a:g} m, T={T:g} K: {exc}"
        ) from exc
    return SweepRow(
        pair=_pair_label(mat1, mat3),
        material_1=mat1.name,
        material_2=mat3.name,
        gap=a,
        temperature=T,
        pressure=result.abs_pressure,
        tm_share=result.tm_share,
        te_share=result.te_share,
        m_used=result.m_used,
    )


def sweep(spec: SweepSpec, opts: SolverOptions = DEFAULT_OPTIONS, jobs: int = 1) -> list[SweepRow]:
    """Evaluate every (pair, T, a) cell of ``spec``.

    Rows come back ordered by (pair in given order, T ascending, a
    ascending) regardless of ``jobs``; with jobs > 1 the cells are
    evaluated in worker processes but assembled in order, so the output is
    identical to a sequential run.  The first failing cell aborts the whole
    sweep, naming the offending (pair, a, T).
    """
    cells = [
        (mat1, mat3, a, T, opts)
        for (mat1, mat3), T, a in itertools.product(spec.pairs, spec.temperatures, spec.gaps)
    ]
    if jobs <= 1:
        return [_evaluate_cell(c) for c in cells]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate_cell, cells, chunksize=max(1, len(cells) // (4 * jobs))))


def _metadata_lines(opts: SolverOptions) -> list[str]:
    return [
        f"# solver: quad_tol={opts.quad_tol:g} sum_rel_tol={opts.sum_rel_tol:g} "
        f"sum_consecutive={opts.sum_consecutive} m_max={opts.m_max}",
        f"# constants: hbar={HBAR:.9e} J*s c={SPEED_OF_LIGHT:.9e} m/s k_B={BOLTZMANN:.6e} J/K",
        "# pressure columns hold |F| in Pa; the force is attractive",
    ]


def _fmt(x: float) -> str:
    return f"{x:.12e}"


def sweep_rows_to_csv(rows: list[SweepRow], opts: SolverOptions = DEFAULT_OPTIONS) -> str:
    """Render sweep rows as CSV text (12 significant digits, metadata in #-lines)."""
    lines = _metadata_lines(opts) + [SWEEP_CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.pair},{r.material_1},{r.material_2},{_fmt(r.gap)},{_fmt(r.temperature)},"
            f"{_fmt(r.pressure)},{_fmt(r.tm_share)},{_fmt(r.te_share)},{r.m_used}"
        )
    return "\n".join(lines) + "\n"


def diff_results_to_csv(
    results: list[DiffResult],
    mat1: Material,
    mat3: Material,
    opts: SolverOptions = DEFAULT_OPTIONS,
) -> str:
    """Render temperature-difference results as CSV text."""
    pair = _pair_label(mat1, mat3)
    lines = _metadata_lines(opts)
    lines.append("# relative = delta / pressure at T_low")
    lines.append(DIFF_CSV_HEADER)
    for r in results:
        lines.append(
            f"{pair},{mat1.name},{mat3.name},{_fmt(r.a)},{_fmt(r.T_low)},{_fmt(r.T_high)},"
            f"{_fmt(r.f_low_T)},{_fmt(r.f_high_T)},{_fmt(r.delta)},{_fmt(r.relative)}"
        )
    return "\n".join(lines) + "\n"


# the six preset pairs ranked: pure Al, mixed Al, noble-noble
_GROUPS = (
    ("I", (("Al", "Al"),)),
    ("II", (("Al", "Au"), ("Al", "Cu"))),
    ("III", (("Au", "Au"), ("Au", "Cu"), ("Cu", "Cu"))),
)


def group_ordering(
    a: float,
    T: float,
    pairs: list[tuple[str, str]] | None = None,
    opts: SolverOptions = DEFAULT_OPTIONS,
) -> list[PairGroup]:
    """Rank the preset material pairs by mean |F| at one (a, T) cell.

    The six preset pairs split into three groups (pure Al / Al with a noble
    metal / noble-noble); higher plasma frequency means stronger
    attraction, so the groups come out ordered I > II > III by group-mean
    |F|.  Passing an explicit ``pairs`` subset restricts the grouping
    (a single pair degenerates to one group of one).  Only preset material
    names are supported.
    """
    requested = None
    if pairs is not None:
        requested = {tuple(sorted((p[0].lower(), p[1].lower()))) for p in pairs}
        known = {
            tuple(sorted((x.lower(), y.lower()))) for _, members in _GROUPS for x, y in members
        }
        unknown = requested - known
        if unknown:
            raise ValueError(f"unsupported pairs for grouping: {sorted(unknown)}")

    out = []
    for label, members in _GROUPS:
        names = []
        pressures = []
        for n1, n2 in members:
            if requested is not None and tuple(sorted((n1.lower(), n2.lower()))) not in requested:
                continue
            system = PlateSystem(material_preset(n1), material_preset(n2), gap=a)
            result = casimir_pressure(system, ThermalState(T), opts)
            names.append(f"{n1}-{n2}")
            pressures.append(result.abs_pressure)
        if names:
            out.append(
                PairGroup(
                    label=label,
                    pairs=tuple(names),
                    pressures=tuple(pressures),
                    mean_pressure=float(np.mean(pressures)),
                )
            )
    return out
