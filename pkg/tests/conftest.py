import numpy as np
import pytest

from vpsums.fourier import TrigPoly


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)


def random_trig_poly(rng, degree, zero_mean=False):
    a0 = 0.0 if zero_mean else float(rng.normal())
    return TrigPoly(a0, rng.normal(size=degree), rng.normal(size=degree))
