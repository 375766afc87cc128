import numpy as np
import pytest

from trendmax import (
    GenotypeTable,
    MonomorphicSample,
    ZeroMargin,
    chisq_2df,
    chisq_allele,
    chisq_hwd,
    product_test,
    tmax,
    to_allele_table,
)
from trendmax.classical import allele_chisq_values

from conftest import random_tables


def pearson_2x2_oracle(table: GenotypeTable) -> float:
    """Brute-force Pearson chi-square on the collapsed allele table."""
    a = to_allele_table(table)
    obs = np.array([[a.case_n, a.case_m], [a.ctrl_n, a.ctrl_m]])
    rows = obs.sum(axis=1, keepdims=True)
    cols = obs.sum(axis=0, keepdims=True)
    exp = rows * cols / obs.sum()
    return float(((obs - exp) ** 2 / exp).sum())


def test_chisq_2df_worked_example(worked_table):
    assert chisq_2df(worked_table) == pytest.approx(20.0)


def test_chisq_2df_zero_on_identical_rows():
    assert chisq_2df(GenotypeTable(5, 6, 7, 5, 6, 7)) == pytest.approx(0.0)


def test_chisq_2df_scales_linearly(worked_table):
    doubled = GenotypeTable(*(2 * c for c in worked_table.cells()))
    assert chisq_2df(doubled) == pytest.approx(2 * chisq_2df(worked_table))


def test_chisq_2df_zero_margin():
    with pytest.raises(ZeroMargin):
        chisq_2df(GenotypeTable(1, 2, 0, 3, 4, 0))


def test_chisq_allele_worked_example(worked_table):
    assert chisq_allele(worked_table) == pytest.approx(26.6667, abs=5e-5)


def test_chisq_allele_zero_on_identical_rows():
    assert chisq_allele(GenotypeTable(5, 6, 7, 5, 6, 7)) == pytest.approx(0.0)


def test_chisq_allele_scales_linearly(worked_table):
    doubled = GenotypeTable(*(2 * c for c in worked_table.cells()))
    assert chisq_allele(doubled) == pytest.approx(2 * chisq_allele(worked_table))


def test_chisq_allele_matches_bruteforce_pearson():
    cells = random_tables(1000, seed=301)
    batch = allele_chisq_values(cells)
    for row, expected in zip(cells[:250], batch[:250]):
        t = GenotypeTable(*row)
        assert chisq_allele(t) == pytest.approx(pearson_2x2_oracle(t), abs=1e-10)
        assert expected == pytest.approx(pearson_2x2_oracle(t), abs=1e-10)


def test_chisq_hwd_exact_proportions():
    assert chisq_hwd((25, 50, 25)) == pytest.approx(0.0)


def test_chisq_hwd_worked_example():
    assert chisq_hwd((10, 20, 30)) == pytest.approx(3.75)


def test_chisq_hwd_monomorphic():
    with pytest.raises(MonomorphicSample):
        chisq_hwd((0, 0, 60))
    with pytest.raises(MonomorphicSample):
        chisq_hwd((60, 0, 0))


def test_chisq_hwd_zero_iff_hwe_identity():
    rng = np.random.default_rng(302)
    for _ in range(200):
        row = rng.integers(1, 80, size=3).astype(float)
        stat = chisq_hwd(tuple(row))
        identity = abs(row[1] ** 2 - 4 * row[0] * row[2])
        if stat < 1e-9:
            assert identity < 1e-6 * max(1.0, row.prod())
        if identity == 0:
            assert stat == pytest.approx(0.0, abs=1e-9)


def test_composites_worked_example(worked_table):
    tp = product_test(worked_table)
    tm_ = tmax(worked_table)
    assert tp.value == pytest.approx(100.0, abs=1e-3)
    assert tm_.value == pytest.approx(26.6667, abs=5e-5)
    assert tp.parts["AA"] == tm_.parts["AA"]


def test_product_zero_when_cases_in_hwe():
    # cases exactly at HWE, controls far off: the HWD factor kills T_P
    t = GenotypeTable(25, 50, 25, 60, 20, 20)
    assert product_test(t).value == pytest.approx(0.0, abs=1e-12)
    assert chisq_allele(t) > 0


def test_composites_zero_for_identical_hwe_rows():
    t = GenotypeTable(25, 50, 25, 25, 50, 25)
    assert product_test(t).value == pytest.approx(0.0, abs=1e-12)
    assert tmax(t).value == pytest.approx(0.0, abs=1e-12)
