import numpy as np
import pytest

from dlab import entire as E
from dlab.autos import I, Overshear, Word, word_apply
from dlab.checks import _generic
from dlab.functions import SurfaceFunction, coordinate, parse_expression
from dlab.nevanlinna import (
    BLOCK,
    CharacteristicEstimate,
    RSchedule,
    characteristic,
    characteristic_many,
    characteristic_table,
    jacobian_xz,
    sample_sphere,
    slope_vs_logr,
    theta_apply,
    theta_function,
)
from dlab.surface import Danielewski, SurfacePoint, chart_xz, fiber

S4 = Danielewski("-1,0,0,0,1")
Z = coordinate("z")


def test_sample_sphere():
    a, b = sample_sphere(np.random.default_rng(0), 100_000)
    assert np.max(np.abs(np.abs(a) ** 2 + np.abs(b) ** 2 - 1)) < 1e-12
    m = np.abs(b) ** 2
    assert abs(m.mean() - 0.5) < 3 * m.std() / np.sqrt(m.size)
    a2, b2 = sample_sphere(np.random.default_rng(0), 100_000)
    assert np.array_equal(a, a2) and np.array_equal(b, b2)
    a1, b1 = sample_sphere(np.random.default_rng(1))
    assert abs(abs(a1) ** 2 + abs(b1) ** 2 - 1) < 1e-12


def test_constant_is_zero():
    F = SurfaceFunction(lambda x, y, z: 0.5 + 0 * x, "c")
    e = characteristic(S4, F, 1e3, 1000)
    assert e.mean == 0.0 and e.stderr == 0.0 and e.valid


def test_argument_errors():
    with pytest.raises(ValueError):
        characteristic(S4, Z, 0.0, 1000)
    with pytest.raises(ValueError):
        characteristic(S4, Z, 10.0, 99)
    with pytest.raises(ValueError):
        RSchedule(0, 10, 3)
    with pytest.raises(ValueError):
        RSchedule(1, 1, 3)


def test_slope_of_z():
    rows = characteristic_table(S4, Z, RSchedule(100, 10, 5), 20_000, seed=1)
    slope, se = slope_vs_logr(rows)
    assert 1.8 <= slope <= 2.2
    assert se > 0
    means = [e.mean for e in rows]
    for lo, hi, e in zip(means, means[1:], rows):
        assert hi > lo - 3 * e.stderr


def test_slope_vs_logr_examples():
    mk = lambda r, m: CharacteristicEstimate(r, m, 0.0, 100, 0, 0)
    assert slope_vs_logr([mk(r, 3.0) for r in (1e2, 1e3, 1e4)])[0] == pytest.approx(0, abs=1e-12)
    assert slope_vs_logr([mk(r, 2 * np.log(r)) for r in (1e2, 1e3, 1e4)])[0] == pytest.approx(2)
    with pytest.raises(ValueError):
        slope_vs_logr([mk(1, 0), mk(2, 0)])


def test_sheet_symmetry_exact():
    F = parse_expression("x + 2*y*z")
    a = characteristic(S4, F, 50.0, 5000, seed=3)
    b = characteristic(S4, F.compose_involution(), 50.0, 5000, seed=3)
    assert a.mean == b.mean and a.stderr == b.stderr


def test_worker_count_does_not_change_results():
    n = 3 * BLOCK + 17
    F = parse_expression("x*exp(z)")
    one = characteristic_many(S4, F, [10.0, 100.0], n, seed=9, workers=1)
    four = characteristic_many(S4, F, [10.0, 100.0], n, seed=9, workers=4)
    assert [e.to_dict() for row in one for e in row] == [e.to_dict() for row in four for e in row]


def test_extended_range_avoids_skips():
    e = characteristic(S4, parse_expression("exp(z)"), 1e3, 5000)
    assert e.n_skipped == 0 and e.valid
    assert e.mean > 50


def test_skips_flag_invalid():
    F = SurfaceFunction(lambda x, y, z: np.where(z.real > 0, np.nan, z), "half", extended=False)
    e = characteristic(S4, F, 10.0, 2000)
    assert e.n_skipped > 0 and not e.valid
    assert e.n_samples + e.n_skipped == 2000


def test_paired_outputs():
    from dlab.functions import bundle

    B = bundle([coordinate("x"), coordinate("z")])
    ex, ez = characteristic(S4, B, 1e4, 20_000, seed=2)
    assert ex.mean / ez.mean == pytest.approx(2, rel=0.1)


def test_csv_row():
    e = CharacteristicEstimate(100.0, 1.5, 0.01, 1000, 0, 7)
    assert e.csv_row() == "100.0,1.5,0.01,1000,0,7"
    assert CharacteristicEstimate.CSV_HEADER.split(",") == list(e.to_dict())[:6]


# -- theta fields --------------------------------------------------------------

def _pts(n=100, seed=0):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return fiber(S4, 2 * a, b)[0]


def test_theta_examples():
    P = _pts()
    assert np.allclose(theta_apply(S4, "theta", coordinate("x"), P), 1, rtol=1e-8)
    assert np.allclose(theta_apply(S4, "theta_tilde", Z, P), 1, rtol=1e-8)
    assert np.allclose(theta_apply(S4, "theta1", Z, P), 0, atol=1e-8)
    assert np.allclose(theta_apply(S4, "theta2", Z, P), 1, rtol=1e-8)
    assert np.allclose(theta_apply(S4, "θ₁", parse_expression("x+y"), P), 1, rtol=1e-8)


def test_theta_linear_combinations():
    P = _pts(seed=1)
    F = parse_expression("x^2*z + y - 3*z^3")
    t1 = theta_apply(S4, "theta1", F, P)
    t2 = theta_apply(S4, "theta2", F, P)
    t = theta_apply(S4, "theta", F, P)
    tt = theta_apply(S4, "theta_tilde", F, P)
    x, y, z = P
    dp = 4 * z**3
    rel = lambda a, b: np.max(np.abs(a - b) / (1 + np.abs(b)))
    assert rel((x - y) / x * t1, t) < 1e-6
    assert rel(t2 + dp / x * t1, tt) < 1e-6


def test_theta_singular_points():
    # a ramification point: x = y, so p(z) = x^2
    x = 1.0 + 0.5j
    z = np.sqrt(np.sqrt(x * x + 1 + 0j))
    P = SurfacePoint(x, x, z)
    with pytest.raises(ValueError, match="near ramification/axis"):
        theta_apply(S4, "theta1", Z, P)
    with pytest.raises(ValueError, match="near ramification/axis"):
        theta_apply(S4, "theta", Z, SurfacePoint(0j, 3.0 + 0j, 1.0 + 0j))
    F = theta_function(S4, "theta1", Z)
    assert np.isnan(F(x, x, z))
    with pytest.raises(ValueError):
        theta_apply(S4, "phi", Z, P)


# -- chart Jacobian -----------------------------------------------------------

def test_jacobian_identity_and_generators():
    rng = np.random.default_rng(0)
    P = _generic(S4, rng, 20)
    O = Overshear(E.parse_entire("0.3*x"), E.parse_entire("1-x"))
    for Pk in P:
        assert jacobian_xz(S4, Word(), Pk) == pytest.approx(1, rel=1e-6)
        assert jacobian_xz(S4, Word((I,)), Pk) == pytest.approx(-1, rel=1e-6)
        x = Pk.x
        assert jacobian_xz(S4, Word((O,)), Pk) == pytest.approx(np.exp(0.3 * x * x), rel=1e-6)


def test_jacobian_chain_rule():
    rng = np.random.default_rng(5)
    P = _generic(S4, rng, 20)
    A = Word((I, Overshear("0.1*x", "1")))
    B = Word((I, Overshear("0", "0.5*x+1")))
    used = 0
    for Pk in P:
        Q = word_apply(S4, B, Pk)
        if max(abs(c) for c in Q) > 5:
            continue  # the numerical partials lose accuracy on large images
        try:
            lhs = jacobian_xz(S4, A + B, Pk)
            rhs = jacobian_xz(S4, A, Q) * jacobian_xz(S4, B, Pk)
        except ValueError:
            continue
        assert lhs == pytest.approx(rhs, rel=1e-5)
        used += 1
    assert used >= 5


def test_jacobian_chart_breakdown():
    with pytest.raises(ValueError, match="chart breakdown"):
        jacobian_xz(S4, Word(), SurfacePoint(0j, 1.0 + 0j, 1.0 + 0j))
    P = chart_xz(S4, 1.0 + 0j, 0.5 + 0j)
    with pytest.raises(ValueError, match="chart breakdown"):
        # I maps x to y = p(z)/x, which vanishes at a zero of p
        jacobian_xz(S4, Word((I,)), chart_xz(S4, 1.0 + 0j, 1.0 + 0j))
    assert np.isfinite(jacobian_xz(S4, Word((I,)), P))
