"""Cochran-Armitage trend statistics over genotype scores (0, x, 1).

For scores x = (x0, x1, x2) assigned to (NN, NM, MM) the statistic is

    Z = sqrt(n) * sum_i x_i (s r_i - r s_i)
        / sqrt( r s [ n sum_i x_i^2 n_i - (sum_i x_i n_i)^2 ] )

which is asymptotically N(0, 1) under the null of no association. The
statistic is invariant to affine transformations of the scores, so the
one-parameter family (0, x, 1) with x in [0, 1] covers every ordered
scoring. x = 0, 1/2, 1 are optimal for the recessive, additive and
dominant models respectively.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, ZeroVariance
from .population import canonical_model_kind
from .tables import GenotypeTable

OPTIMAL_SCORES = {"recessive": 0.0, "additive": 0.5, "dominant": 1.0}


@dataclass(frozen=True)
class TrendStatistic:
    """Signed trend statistic together with the middle-genotype score used."""

    value: float
    score: float


def trend_values_general(cells: np.ndarray, scores) -> np.ndarray:
    """Vectorized trend statistic for arbitrary scores (x0, x1, x2).

    ``cells`` has shape (..., 6) with columns r0, r1, r2, s0, s1, s2.
    Entries where the variance term is not positive come back as NaN.
    """
    cells = np.asarray(cells, dtype=float)
    x = np.asarray(scores, dtype=float)
    rr = cells[..., 0:3]
    ss = cells[..., 3:6]
    r = rr.sum(axis=-1)
    s = ss.sum(axis=-1)
    nn = rr + ss
    n = r + s
    num = np.sqrt(n) * ((x * (s[..., None] * rr - r[..., None] * ss)).sum(axis=-1))
    var = r * s * (n * (x * x * nn).sum(axis=-1) - (x * nn).sum(axis=-1) ** 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = num / np.sqrt(var)
        return np.where(var > 0, out, np.nan)


def trend_values(cells: np.ndarray, x: float) -> np.ndarray:
    """Vectorized trend statistic with scores (0, x, 1)."""
    return trend_values_general(cells, (0.0, float(x), 1.0))


def trend_statistic(table: GenotypeTable, score: float) -> TrendStatistic:
    """Trend statistic Z_x for one table, scores (0, x, 1) with x in [0, 1]."""
    x = float(score)
    if not 0.0 <= x <= 1.0:
        raise InputError(f"middle genotype score {x!r} must lie in [0, 1]")
    if table.r <= 0 or table.s <= 0:
        raise ZeroVariance("both case and control totals must be positive")
    value = float(trend_values(table.to_array(), x))
    if np.isnan(value):
        raise ZeroVariance(
            f"variance term vanishes for score x={x!r}: all weight sits on one score value"
        )
    return TrendStatistic(value=value, score=x)


def optimal_score(kind: str) -> float:
    """Model-optimal middle score: 0 (recessive), 1/2 (additive), 1 (dominant)."""
    kind = canonical_model_kind(kind)
    if kind not in OPTIMAL_SCORES:
        raise InputError(f"no optimal score for model kind {kind!r}")
    return OPTIMAL_SCORES[kind]
