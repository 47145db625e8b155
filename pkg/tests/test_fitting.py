import math

import pytest

from bergman_jets.core.errors import FitError
from bergman_jets.services.fitting import decay_fit, trend_fit

P_VALUES = [8, 12, 16, 20, 24]


def test_power_law():
    fit = trend_fit([(p, 3.0 / p) for p in P_VALUES])
    assert fit.exponent == pytest.approx(-1.0)
    assert fit.intercept == pytest.approx(math.log(3.0))
    assert fit.r2 == pytest.approx(1.0)
    assert fit.count == 5
    assert "rate" not in fit.to_dict()


def test_exponential_decay():
    samples = [(p, d, 2.0 * math.exp(-1.5 * math.sqrt(p) * d)) for p in P_VALUES for d in (0.2, 0.3)]
    fit = decay_fit(samples)
    assert fit.rate == pytest.approx(1.5)
    assert fit.to_dict()["rate"] == pytest.approx(1.5)
    assert fit.model == "exp-decay"


def test_fit_needs_five_distinct_abscissae():
    with pytest.raises(FitError):
        trend_fit([(8, 1.0), (12, 0.5), (16, 0.3), (16, 0.31)])
    with pytest.raises(FitError):
        trend_fit([(p, 1.0) for p in [8, 8, 8, 8, 8]])


def test_fit_rejects_nonpositive_values():
    with pytest.raises(FitError):
        trend_fit([(p, 0.0) for p in P_VALUES])
    with pytest.raises(FitError):
        decay_fit([(p, -0.1, 1.0) for p in P_VALUES])
