import numpy as np
import pytest

from trendmax import GenotypeTable


@pytest.fixture
def worked_table() -> GenotypeTable:
    """The symmetric regression table used across the suite."""
    return GenotypeTable(10, 20, 30, 30, 20, 10)


def random_tables(n: int, seed: int, max_count: int = 60, corrected: bool = True) -> np.ndarray:
    """(n, 6) batch of random nondegenerate tables.

    Cell counts are uniform integers; the +1/2 shift keeps every margin
    positive so all statistics are defined.
    """
    rng = np.random.default_rng(seed)
    cells = rng.integers(0, max_count + 1, size=(n, 6)).astype(float)
    if corrected:
        cells += 0.5
    return cells


def random_interior_simplex(n: int, seed: int, floor: float = 1e-4) -> np.ndarray:
    """(n, 3) strictly interior probability triples."""
    rng = np.random.default_rng(seed)
    props = rng.dirichlet((1.0, 1.0, 1.0), size=n)
    keep = props.min(axis=1) > floor
    return props[keep]
