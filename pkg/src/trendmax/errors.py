"""Exception hierarchy for trendmax.

Every contract violation raises a named subclass of :class:`TrendmaxError`
so callers can distinguish failure modes without string matching. Errors
that arise from bad user input also subclass ``ValueError``.
"""


class TrendmaxError(Exception):
    """Base class for all trendmax errors."""


class InputError(TrendmaxError, ValueError):
    """Invalid input that does not fit a more specific category."""


# ---- genotype tables ----

class NegativeCell(InputError):
    """A genotype count is negative."""


class EmptyRow(InputError):
    """An entire case or control row is zero."""


class DegenerateTable(InputError):
    """Table cannot support the requested resampling procedure."""


# ---- population model ----

class FrequencyOutOfRange(InputError):
    """An allele frequency lies outside (0, 1)."""


class DegeneratePrevalence(InputError):
    """Disease prevalence is not strictly between 0 and 1."""


class OrderViolation(InputError):
    """Penetrances violate the required ordering f0 <= f1 <= f2."""


# ---- test statistics ----

class ZeroVariance(TrendmaxError):
    """The trend statistic's variance term is not positive."""


class ZeroMargin(TrendmaxError):
    """A row or column margin needed by a chi-square statistic is zero."""


class MonomorphicSample(TrendmaxError):
    """Estimated allele frequency is 0 or 1; the HWD test is undefined."""


class DegenerateProportions(TrendmaxError):
    """Pooled genotype proportions do not allow correlation estimation."""


class CorrelationOutOfRange(InputError):
    """A pairwise null correlation lies outside (-1, 1]."""


class NotExtremePair(InputError):
    """The designated pair does not achieve the minimum correlation."""


class NotPSD(InputError):
    """A correlation matrix is not positive semidefinite."""


# ---- simulation engine ----

class ScenarioError(InputError):
    """A scenario definition is inconsistent or incomplete."""


class MismatchedScenario(InputError):
    """Critical values were estimated under a different null scenario."""


class UnknownStatistic(InputError):
    """A statistic identifier is not in the battery registry."""
