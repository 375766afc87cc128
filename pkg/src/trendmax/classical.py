"""Model-free comparison statistics.

  * chisq_2df    - Pearson chi-square on the 2x3 genotype table (2 df)
  * chisq_allele - chi-square on the collapsed 2x2 allele table (1 df);
                   valid on its own only when both samples are in HWE,
                   but used here as a building block regardless
  * chisq_hwd    - chi-square for Hardy-Weinberg disequilibrium in cases
  * product_test / tmax - product and maximum of the two pieces above;
                   these have no usable asymptotic null distribution, so
                   significance comes from permutation or simulation
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MonomorphicSample, ZeroMargin
from .tables import GenotypeTable


@dataclass(frozen=True)
class CompositeStatistic:
    value: float
    parts: dict
    kind: str


def chi2df_values(cells: np.ndarray) -> np.ndarray:
    """Vectorized 2-df Pearson chi-square; NaN where a margin is zero."""
    cells = np.asarray(cells, dtype=float)
    rr = cells[..., 0:3]
    ss = cells[..., 3:6]
    r = rr.sum(axis=-1, keepdims=True)
    s = ss.sum(axis=-1, keepdims=True)
    nn = rr + ss
    n = r + s
    with np.errstate(divide="ignore", invalid="ignore"):
        er = r * nn / n
        es = s * nn / n
        stat = ((rr - er) ** 2 / er + (ss - es) ** 2 / es).sum(axis=-1)
        ok = (nn > 0).all(axis=-1) & (r[..., 0] > 0) & (s[..., 0] > 0)
        return np.where(ok, stat, np.nan)


def allele_chisq_values(cells: np.ndarray) -> np.ndarray:
    """Vectorized allele-association chi-square on the collapsed 2x2 table."""
    cells = np.asarray(cells, dtype=float)
    r0, r1, r2 = cells[..., 0], cells[..., 1], cells[..., 2]
    s0, s1, s2 = cells[..., 3], cells[..., 4], cells[..., 5]
    r = r0 + r1 + r2
    s = s0 + s1 + s2
    n0, n1, n2 = r0 + s0, r1 + s1, r2 + s2
    n = r + s
    det = (2 * r0 + r1) * (s1 + 2 * s2) - (2 * s0 + s1) * (r1 + 2 * r2)
    denom = 4 * r * s * (2 * n0 + n1) * (n1 + 2 * n2)
    with np.errstate(divide="ignore", invalid="ignore"):
        stat = 2 * n * det**2 / denom
        return np.where(denom > 0, stat, np.nan)


def hwd_values(case_cells: np.ndarray) -> np.ndarray:
    """Vectorized HWD chi-square from case rows with shape (..., 3).

    The allele frequency is estimated from the cases themselves; rows
    whose estimate hits 0 or 1 come back as NaN.
    """
    rr = np.asarray(case_cells, dtype=float)
    r = rr.sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = (rr[..., 1] + 2 * rr[..., 2]) / (2 * r)
        q = 1.0 - p
        e0 = r * q * q
        e1 = 2 * r * p * q
        e2 = r * p * p
        stat = (
            (rr[..., 0] - e0) ** 2 / e0
            + (rr[..., 1] - e1) ** 2 / e1
            + (rr[..., 2] - e2) ** 2 / e2
        )
        ok = (r > 0) & (p > 0) & (p < 1)
        return np.where(ok, stat, np.nan)


def chisq_2df(table: GenotypeTable) -> float:
    """Pearson chi-square over the six genotype cells (2 df)."""
    if table.r <= 0 or table.s <= 0 or min(table.n0, table.n1, table.n2) <= 0:
        raise ZeroMargin("all row and column totals must be positive")
    return float(chi2df_values(table.to_array()))


def chisq_allele(table: GenotypeTable) -> float:
    """Allele-association chi-square on the collapsed allele table (1 df)."""
    value = float(allele_chisq_values(table.to_array()))
    if np.isnan(value):
        raise ZeroMargin("allele table has a zero margin")
    return value


def chisq_hwd(case_row) -> float:
    """Hardy-Weinberg disequilibrium chi-square computed in cases only."""
    rr = np.asarray(case_row, dtype=float)
    if rr.shape != (3,):
        raise ZeroMargin("expected a case row of three genotype counts")
    if rr.sum() <= 0:
        raise ZeroMargin("case total must be positive")
    value = float(hwd_values(rr))
    if np.isnan(value):
        raise MonomorphicSample(
            f"case row {tuple(rr)!r} is monomorphic: estimated allele frequency is 0 or 1"
        )
    return value


def product_test(table: GenotypeTable) -> CompositeStatistic:
    """Product of the allele-association and HWD chi-squares."""
    aa = chisq_allele(table)
    hwd = chisq_hwd(table.case_row)
    return CompositeStatistic(value=aa * hwd, parts={"AA": aa, "HWD": hwd}, kind="PRODUCT")


def tmax(table: GenotypeTable) -> CompositeStatistic:
    """Maximum of the allele-association and HWD chi-squares."""
    aa = chisq_allele(table)
    hwd = chisq_hwd(table.case_row)
    return CompositeStatistic(value=max(aa, hwd), parts={"AA": aa, "HWD": hwd}, kind="TMAX")
