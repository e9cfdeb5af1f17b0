import json
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from hilbertdisc import series as P
from conftest import random_poly

coeff = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
polys = st.lists(coeff, min_size=1, max_size=12).map(P.TaylorPolynomial)
disc_pts = st.tuples(st.floats(0, 0.95), st.floats(0, 2 * math.pi)).map(lambda t: t[0] * complex(math.cos(t[1]), math.sin(t[1])))

# G(log, a) from mpmath: pi^2/6 + 2 Re Li2(a) - 2 arg(1-a)^2, checked against
# direct circle quadrature of |log(1/(1-e^it))|^2 against the Poisson kernel
LOG_GARSIA = {
    0.5: 2.8094151197782514483,
    0.9: 4.2443635128581440004,
    complex(-0.7, 0.2): 0.39752101357003849535,
    complex(0.3, 0.6): 1.0440976430409976451,
}


def test_evaluate_matches_horner_and_rejects_boundary():
    p = P.TaylorPolynomial([1, 2, 3])
    assert p(0.5) == pytest.approx(1 + 1 + 0.75)
    with pytest.raises(ValueError):
        P.evaluate(p, 1.0)


def test_arithmetic_and_calculus():
    p = P.TaylorPolynomial([1, 2, 3])
    q = P.TaylorPolynomial([0, 1])
    assert np.allclose((p + q).coeffs, [1, 3, 3])
    assert np.allclose((p - q).coeffs, [1, 1, 3])
    assert np.allclose((p * 2j).coeffs, [2j, 4j, 6j])
    assert np.allclose(P.differentiate(p).coeffs, [2, 6])
    assert np.allclose(P.shift(p, 2).coeffs, [0, 0, 1, 2, 3])
    assert np.allclose(P.truncate(p, 1).coeffs, [1, 2])


def test_coefficients_are_read_only():
    p = P.TaylorPolynomial([1, 2])
    with pytest.raises(ValueError):
        p.coeffs[0] = 5


def test_json_round_trip():
    p = P.TaylorPolynomial([1 + 2j, -0.5, 3j])
    text = p.to_json()
    assert json.loads(text) == [[1.0, 2.0], [-0.5, 0.0], [0.0, 3.0]]
    assert np.array_equal(P.TaylorPolynomial.from_json(text).coeffs, p.coeffs)
    t = P.log_tailed(32)
    back = P.function_from_json(t.to_json())
    assert isinstance(back, P.TailedSeries)
    assert back.evaluate(0.7) == pytest.approx(t.evaluate(0.7), abs=1e-15)


def test_malformed_polynomial_json():
    with pytest.raises(ValueError):
        P.TaylorPolynomial.from_json("[]")
    with pytest.raises(ValueError):
        P.TaylorPolynomial.from_json('[[1, 2, 3]]')


def test_hilbert_one_at_half_is_two_log_two():
    assert P.hilbert_one_series(200)(0.5) == pytest.approx(2 * math.log(2), abs=1e-14)
    assert P.hilbert_one_tailed(16)(0.5) == pytest.approx(2 * math.log(2), abs=1e-14)


@pytest.mark.parametrize("z", [0.3, 0.9, -0.99, 0.5 + 0.5j, 0.999j])
def test_tailed_log_evaluates_exactly(z):
    f = P.log_tailed(64)
    assert f(z) == pytest.approx(-np.log1p(-z), rel=1e-13)
    assert f.derivative_values(z) == pytest.approx(1 / (1 - z), rel=1e-13)


def test_tailed_hilbert_one_derivative():
    f = P.hilbert_one_tailed(40)
    z = 0.8 - 0.3j
    h = 1e-6
    fd = (f(z + h) - f(z - h)) / (2 * h)
    assert f.derivative_values(z) == pytest.approx(fd, rel=1e-8)


def test_tailed_sq_norm_is_basel():
    assert P.log_tailed(100).sq_norm() == pytest.approx(math.pi ** 2 / 6, rel=1e-15)


def test_hardy_mean_of_log_profile():
    # (1 - r^2) * M_2(r, 1/(1-z) truncated)^2 = 1 - r^(2N)
    n = 1000
    df = P.differentiate(P.log_series(n))
    for r in (0.5, 0.99, 0.999):
        assert P.hardy_mean(df, r, 2) ** 2 * (1 - r * r) == pytest.approx(1 - r ** (2 * n), rel=1e-12)


def test_hardy_mean_q_not_two_uses_circle_values():
    p = P.TaylorPolynomial([1, 1])
    # M_1(1, 1+z) = 4/pi; at r = 1/2 compare with a dense trapezoid
    t = np.linspace(0, 2 * np.pi, 20001)[:-1]
    ref = np.mean(np.abs(1 + 0.5 * np.exp(1j * t)))
    assert P.hardy_mean(p, 0.5, 1) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("a,value", list(LOG_GARSIA.items()))
def test_garsia_of_log_against_frozen_dilogarithm_values(a, value):
    f = P.log_tailed(512)
    g = P.poisson_extension_mod_sq(f, a) - abs(f(a)) ** 2
    assert g == pytest.approx(value, abs=1e-12)


def test_garsia_of_log_live_mpmath_oracle():
    f = P.log_tailed(256)
    for a in (0.99, -0.95 + 0.1j, 0.999):
        ref = float(mp.pi ** 2 / 6 + 2 * mp.re(mp.polylog(2, a)) - 2 * mp.arg(1 - mp.mpc(a)) ** 2)
        g = P.poisson_extension_mod_sq(f, a) - abs(f(a)) ** 2
        assert g == pytest.approx(ref, abs=1e-10)


def test_poisson_extension_near_circle_limited_by_lag_cap():
    f = P.log_tailed(512)
    a = 1 - 1e-5
    ref = float(mp.pi ** 2 / 6 + 2 * mp.re(mp.polylog(2, a)) - 2 * mp.arg(1 - mp.mpf(a)) ** 2)
    g = P.poisson_extension_mod_sq(f, a) - abs(f(a)) ** 2
    assert abs(g - ref) < 2e-4


def test_mobius_series_and_blaschke():
    a = 0.3 - 0.4j
    s = P.mobius_series(a, 200)
    z = 0.6 + 0.2j
    assert s(z) == pytest.approx((a - z) / (1 - np.conj(a) * z), abs=1e-14)
    b = P.blaschke_series([0.2, -0.5j], 200)
    assert b(z) == pytest.approx(P.mobius_series(0.2, 200)(z) * P.mobius_series(-0.5j, 200)(z), abs=1e-12)


def test_compose():
    p = P.TaylorPolynomial([1, 2, 1])
    q = P.mobius_series(0.4, 300)
    z = 0.5j
    w = q(z)
    assert P.compose(p, q, 300)(z) == pytest.approx(1 + 2 * w + w * w, abs=1e-12)


def test_eval_on_circle_matches_pointwise():
    rng = np.random.default_rng(3)
    p = random_poly(rng, 20)
    vals = P.eval_on_circle(p, 0.7, 16)
    t = 2 * np.pi * np.arange(16) / 16
    assert np.allclose(vals, p(0.7 * np.exp(1j * t)), atol=1e-12)


def test_disk_grid_validation():
    with pytest.raises(ValueError):
        P.EvaluationDiskGrid([1.0], [0.0], "bad")
    g = P.EvaluationDiskGrid.uniform(3, 4, 0.9)
    assert g.points().size == 12
    assert P.sup_modulus_estimate(P.TaylorPolynomial([0, 1]), g) == pytest.approx(0.9)


@given(polys, disc_pts)
def test_garsia_is_nonnegative(p, a):
    g = P.poisson_extension_mod_sq(p, a) - abs(p(a)) ** 2
    scale = float(np.sum(np.abs(p.coeffs)) ** 2)
    assert g >= -1e-12 * max(scale, 1.0)


@given(polys, polys, disc_pts)
def test_evaluation_is_linear(p, q, z):
    assert (p + q)(z) == pytest.approx(p(z) + q(z), abs=1e-9 * (1 + abs(p(z)) + abs(q(z))))


@given(polys, st.floats(0.05, 0.95))
def test_parseval_matches_circle_mean(p, r):
    vals = P.eval_on_circle(p, r, 64)
    assert P.hardy_mean(p, r, 2) == pytest.approx(math.sqrt(np.mean(np.abs(vals) ** 2)), rel=1e-10, abs=1e-12)
