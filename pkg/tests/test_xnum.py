import cmath

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from dlab import xnum
from dlab.xnum import LogPolar

val = st.builds(complex, st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))


@settings(max_examples=200, deadline=None)
@given(a=val, b=val)
def test_arithmetic_matches_complex(a, b):
    A, B = LogPolar.from_complex(a), LogPolar.from_complex(b)
    for got, want in ((A * B, a * b), (A + B, a + b), (A - B, a - b)):
        assert complex(got.to_complex()) == pytest.approx(want, rel=1e-10, abs=1e-9)
    if b != 0:
        want = a / b
        assume(cmath.isfinite(want))  # beyond double range is covered below
        assert complex((A / B).to_complex()) == pytest.approx(want, rel=1e-10)


def test_zero_and_powers():
    Z = LogPolar.from_complex(0)
    assert Z.lg == -np.inf
    assert (Z + Z).lg == -np.inf
    v = LogPolar.from_complex(np.array([2 + 1j]))
    assert np.allclose((v**3).to_complex(), (2 + 1j) ** 3)
    assert np.allclose((v**0).to_complex(), 1)
    with pytest.raises(ValueError):
        v ** -1


def test_exp_beyond_range():
    v = xnum.exp(LogPolar.from_complex(np.array([2000 + 1j])))
    assert v.lg[0] == pytest.approx(2000)
    assert v.ph[0] == pytest.approx(np.exp(1j))


def test_ndarray_defers_to_logpolar():
    v = LogPolar.from_complex(np.array([1e300]))
    out = np.array([1e300 + 0j]) * v
    assert isinstance(out, LogPolar)
    assert out.lg[0] == pytest.approx(600 * np.log(10))


def test_log_abs_survives_modulus_overflow():
    v = np.array([1.6e308 + 1.6e308j, 0, np.inf, np.nan])
    out = xnum.log_abs(v)
    assert out[0] == pytest.approx(np.log(1.6e308) + 0.5 * np.log(2))
    assert out[1] == -np.inf and out[2] == np.inf and np.isnan(out[3])


@pytest.mark.parametrize("u", [0, 1e-9, 1e-5 + 1e-5j, 0.5, -3 + 2j])
def test_expm1_ratio(u):
    if abs(u) < 1e-3:
        want = 1 + u / 2 + u * u / 6 + u**3 / 24
    else:
        want = (np.exp(u) - 1) / u
    assert xnum.expm1_ratio(u) == pytest.approx(want, rel=1e-13)
