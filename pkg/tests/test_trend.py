import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trendmax import GenotypeTable, InputError, ZeroVariance, optimal_score, trend_statistic
from trendmax.trend import trend_values, trend_values_general

from conftest import random_tables


def score_test_oracle(cells: np.ndarray, x: float) -> np.ndarray:
    """First-principles 1-df score statistic for the trend alternative.

    U = sum x_i (r_i - r n_i / n) is the centered case score total;
    Var(U) = r (n - r) / n * Var_phat(X) with X the score variable under
    the pooled plug-in distribution phat_i = n_i / n. Z^2 = U^2 / Var(U).
    This takes a different algebraic route from the production formula.
    """
    cells = np.asarray(cells, dtype=float)
    scores = np.array([0.0, x, 1.0])
    rr, ss = cells[..., :3], cells[..., 3:]
    r = rr.sum(-1)
    n_cols = rr + ss
    n = n_cols.sum(-1)
    phat = n_cols / n[..., None]
    u = (scores * (rr - r[..., None] * phat)).sum(-1)
    mean = (scores * phat).sum(-1)
    var_score = (scores**2 * phat).sum(-1) - mean**2
    var_u = r * (n - r) / n * var_score
    return u**2 / var_u


def test_worked_example_values(worked_table):
    assert trend_statistic(worked_table, 1.0).value == pytest.approx(3.8730, abs=5e-5)
    assert trend_statistic(worked_table, 0.0).value == pytest.approx(3.8730, abs=5e-5)
    assert trend_statistic(worked_table, 0.5).value == pytest.approx(4.4721, abs=5e-5)


def test_identical_rows_give_zero():
    t = GenotypeTable(12, 7, 31, 12, 7, 31)
    for x in (0.0, 0.3, 0.5, 1.0):
        assert trend_statistic(t, x).value == pytest.approx(0.0, abs=1e-12)


def test_score_outside_unit_interval_rejected(worked_table):
    with pytest.raises(InputError):
        trend_statistic(worked_table, 1.5)


def test_zero_variance_reported_as_error():
    # all weight on genotype NN: every score vector is constant on the support
    t = GenotypeTable(10, 0, 0, 5, 0, 0)
    with pytest.raises(ZeroVariance):
        trend_statistic(t, 0.5)


def test_oracle_equivalence_on_random_tables():
    cells = random_tables(1000, seed=101)
    for x in (0.0, 0.25, 0.5, 1.0):
        z = trend_values(cells, x)
        chi = score_test_oracle(cells, x)
        assert np.allclose(z**2, chi, atol=1e-10, rtol=1e-10)


def test_affine_score_invariance_on_random_tables():
    cells = random_tables(300, seed=102)
    rng = np.random.default_rng(103)
    for _ in range(20):
        x = rng.uniform(0, 1)
        a = rng.uniform(-5, 5)
        b = rng.uniform(0.1, 5)
        base = trend_values(cells, x)
        shifted = trend_values_general(cells, (a, a + b * x, a + b))
        assert np.allclose(base, shifted, atol=1e-10)


def test_antisymmetry_under_row_swap():
    cells = random_tables(200, seed=104)
    swapped = cells[:, [3, 4, 5, 0, 1, 2]]
    for x in (0.0, 0.5, 1.0):
        assert np.allclose(trend_values(cells, x), -trend_values(swapped, x), atol=1e-12)


def test_continuity_in_x(worked_table):
    xs = np.linspace(0, 1, 201)
    vals = np.array([trend_statistic(worked_table, x).value for x in xs])
    assert np.all(np.abs(np.diff(vals)) < 0.05)


@given(st.floats(0, 1, allow_nan=False))
@settings(max_examples=50)
def test_statistic_reports_score(x):
    t = GenotypeTable(10.5, 20.5, 30.5, 30.5, 20.5, 10.5)
    assert trend_statistic(t, x).score == x


@pytest.mark.parametrize("kind,x", [("recessive", 0.0), ("additive", 0.5), ("dominant", 1.0)])
def test_optimal_scores(kind, x):
    assert optimal_score(kind) == x


def test_optimal_score_aliases():
    assert optimal_score("rec") == 0.0
    with pytest.raises(InputError):
        optimal_score("custom")
