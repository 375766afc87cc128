"""Statistic battery: named decision statistics evaluated jointly.

A battery is an ordered list of statistic identifiers, all evaluated on
the same tables so that comparisons between tests are matched. For each
identifier the battery produces the *decision value*: |Z| for two-sided
normal-type statistics (signed Z when one-sided, with absolute values
taken inside MAX statistics), and the raw value for the chi-square and
composite statistics, which reject for large values either way.
"""

from __future__ import annotations

import numpy as np

from .classical import allele_chisq_values, chi2df_values, hwd_values
from .errors import InputError, UnknownStatistic
from .robust import DEFAULT_GRID, batch_correlations
from .trend import trend_values

# Normal-type statistics have signed values; the rest are chi-square-like.
NORMAL_TYPE = frozenset(
    {"Z0", "Z_HALF", "Z1", "MERT", "MERT_REC_ADD", "MAX2", "MAX2_REC_ADD", "MAX3", "MAXGRID"}
)
CHISQ_TYPE = frozenset({"CHI2_2DF", "AA", "HWD", "T_P", "T_MAX"})

ALL_STATISTICS = (
    "Z0",
    "Z_HALF",
    "Z1",
    "MERT",
    "MERT_REC_ADD",
    "MAX2",
    "MAX2_REC_ADD",
    "MAX3",
    "MAXGRID",
    "CHI2_2DF",
    "AA",
    "HWD",
    "T_P",
    "T_MAX",
)

# MAXGRID needs an explicit grid, so it stays opt-in.
DEFAULT_BATTERY = tuple(name for name in ALL_STATISTICS if name != "MAXGRID")


def validate_battery(battery) -> tuple[str, ...]:
    battery = tuple(battery)
    if not battery:
        raise InputError("battery must contain at least one statistic")
    seen = set()
    for name in battery:
        if name not in ALL_STATISTICS:
            raise UnknownStatistic(
                f"unknown statistic {name!r}; known: {', '.join(ALL_STATISTICS)}"
            )
        if name in seen:
            raise InputError(f"duplicate statistic {name!r} in battery")
        seen.add(name)
    return battery


def evaluate_battery(
    cells: np.ndarray,
    battery,
    two_sided: bool = True,
    grid=DEFAULT_GRID,
) -> dict[str, np.ndarray]:
    """Decision values for every battery statistic on a batch of tables.

    ``cells`` has shape (B, 6) with columns r0, r1, r2, s0, s1, s2.
    Shared components (the three trend statistics, the correlation
    plug-ins, the composite parts) are computed once. Undefined entries
    are NaN; with the +1/2 continuity correction applied they never occur.
    """
    battery = validate_battery(battery)
    cells = np.atleast_2d(np.asarray(cells, dtype=float))

    z: dict[float, np.ndarray] = {}

    def trend(x: float) -> np.ndarray:
        if x not in z:
            z[x] = trend_values(cells, x)
        return z[x]

    rho: list[np.ndarray] | None = None

    def correlations():
        nonlocal rho
        if rho is None:
            rho = list(batch_correlations(cells))
        return rho

    def decide(values: np.ndarray) -> np.ndarray:
        return np.abs(values) if two_sided else values

    aa_vals = hwd_vals = None

    def aa() -> np.ndarray:
        nonlocal aa_vals
        if aa_vals is None:
            aa_vals = allele_chisq_values(cells)
        return aa_vals

    def hwd() -> np.ndarray:
        nonlocal hwd_vals
        if hwd_vals is None:
            hwd_vals = hwd_values(cells[..., 0:3])
        return hwd_vals

    out: dict[str, np.ndarray] = {}
    for name in battery:
        if name == "Z0":
            out[name] = decide(trend(0.0))
        elif name == "Z_HALF":
            out[name] = decide(trend(0.5))
        elif name == "Z1":
            out[name] = decide(trend(1.0))
        elif name == "MERT":
            r01 = correlations()[1]
            out[name] = decide((trend(0.0) + trend(1.0)) / np.sqrt(2.0 * (1.0 + r01)))
        elif name == "MERT_REC_ADD":
            r0h = correlations()[0]
            out[name] = decide((trend(0.0) + trend(0.5)) / np.sqrt(2.0 * (1.0 + r0h)))
        elif name == "MAX2":
            out[name] = np.maximum(decide(trend(0.0)), decide(trend(1.0)))
        elif name == "MAX2_REC_ADD":
            out[name] = np.maximum(decide(trend(0.0)), decide(trend(0.5)))
        elif name == "MAX3":
            out[name] = np.maximum(
                np.maximum(decide(trend(0.0)), decide(trend(0.5))), decide(trend(1.0))
            )
        elif name == "MAXGRID":
            vals = decide(trend(float(grid[0])))
            for x in grid[1:]:
                vals = np.maximum(vals, decide(trend(float(x))))
            out[name] = vals
        elif name == "CHI2_2DF":
            out[name] = chi2df_values(cells)
        elif name == "AA":
            out[name] = aa()
        elif name == "HWD":
            out[name] = hwd()
        elif name == "T_P":
            out[name] = aa() * hwd()
        elif name == "T_MAX":
            out[name] = np.maximum(aa(), hwd())
    return out


def evaluate_single(table_cells, name: str, two_sided: bool = True, grid=DEFAULT_GRID) -> float:
    """Decision value of one statistic on one table (NaN if undefined)."""
    values = evaluate_battery(np.asarray(table_cells, dtype=float), (name,), two_sided, grid)
    return float(values[name][0])
