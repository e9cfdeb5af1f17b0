import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hilbertdisc import measures as M
from hilbertdisc import operators as O
from hilbertdisc import seminorms as S
from hilbertdisc import series as P
from hilbertdisc.mobius import DiscAutomorphism
from hilbertdisc.quadrature import SupSearchConfig
from conftest import random_poly

# M(D_mu) functional of log(1/(1-z)) for the Q_p measure with p = 1/2 at real a:
# int_0^1 4 sqrt(1-r^2) [1/(1-r^2) + a^2/(1-a^2 r^2) + 2a/(1+a r^2)] 2r dr (mpmath)
QP_HALF_LOG = {0.0: 8.0, 0.5: 10.99310645428584093, 0.9: 15.296585783702031696, -0.7: 4.0533193600376784496}
# int_0^1 16 (1-t)^(p-1)/(1+t) dt, the norm formula integral for the Q_p measure (mpmath)
QP_FORMULA = {0.25: 36.597352045125543624, 0.5: 19.943207684487376316, 0.75: 14.128164627990817321}

# one instance, so the cached potentials are built once per session
QP_HALF = M.qp_measure(0.5)

pts = st.tuples(st.floats(0, 0.9), st.floats(0, 2 * math.pi)).map(lambda t: t[0] * complex(math.cos(t[1]), math.sin(t[1])))


def test_garsia_two_coefficient_case():
    assert S.garsia_functional(P.TaylorPolynomial([1, 1]), 0.5) == pytest.approx(0.75, abs=1e-15)
    assert S.garsia_functional(P.constant(3.0), 0.3) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        S.garsia_functional(P.constant(1.0), 1.0)


def test_garsia_log_at_zero_is_basel():
    assert S.garsia_functional(P.log_tailed(2000), 0.0) == pytest.approx(math.pi ** 2 / 6, abs=1e-12)
    # a bare truncation is short by the tail sum_{n > N} 1/n^2 ~ 1/N
    bare = S.garsia_functional(P.log_series(2000), 0.0)
    assert abs(bare - math.pi ** 2 / 6) == pytest.approx(1 / 2000.5, rel=1e-3)


def test_area_functional_examples():
    assert S.bmoa_area_functional(P.monomial(1), 0.0) == pytest.approx(1.0, abs=1e-12)
    assert S.bmoa_area_functional(P.log_tailed(64), 0.0) == pytest.approx(math.pi ** 2 / 6, abs=1e-4)
    assert S.bmoa_area_functional(P.constant(2.0), 0.4) == 0.0


def test_qp_functional_examples():
    assert S.qp_functional(P.monomial(1), 0.0, 1.0) == pytest.approx(0.5, abs=1e-12)
    assert S.qp_functional(P.constant(1.0), 0.2, 0.5) == 0.0
    with pytest.raises(ValueError):
        S.qp_functional(P.monomial(1), 0.0, 0.0)


def test_mdmu_functional_examples():
    ident = DiscAutomorphism.identity()
    atom = M.unit_atom()
    assert S.mdmu_functional(P.monomial(1), ident, atom) == pytest.approx(1.0, abs=1e-12)
    assert S.mdmu_functional(P.monomial(1), ident, atom, form="v") == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(ValueError):
        S.mdmu_functional(P.monomial(1), ident, M.power_measure(1.0, -2.0))


@pytest.mark.parametrize("a,value", list(QP_HALF_LOG.items()))
def test_mdmu_functional_against_radial_reduction(a, value):
    f = P.log_tailed(128)
    got = S.mdmu_functional(f, DiscAutomorphism(1.0, a), QP_HALF)
    assert got == pytest.approx(value, rel=1e-6)


@pytest.mark.parametrize("p,value", list(QP_FORMULA.items()))
def test_norm_formula_for_qp(p, value):
    mu = M.qp_measure(p)
    # nodes within ~1e-15 of the circle cannot resolve z, which costs about
    # (1e-15)^p of the integral near z = +-1 in the two-dimensional rule
    assert S.log_norm_sq_formula(mu) == pytest.approx(value, rel=max(1e-9, 10 * 1e-15 ** p))
    assert S.log_norm_sq_formula(mu, method="radial") == pytest.approx(value, rel=1e-8)


def test_norm_formula_closed_form_at_half():
    k = 16 * math.sqrt(2) * math.log(1 + math.sqrt(2))
    assert QP_FORMULA[0.5] == pytest.approx(k, rel=1e-15)


def test_norm_formula_unit_atom_and_scaling():
    assert S.log_norm_sq_formula(M.unit_atom()) == pytest.approx(math.pi ** 2 / 2, rel=1e-9)
    assert S.log_norm_sq_formula(M.unit_atom(mass=2.0)) == pytest.approx(math.pi ** 2, rel=1e-9)
    base = S.hilbert_norm_hinf_mdmu(M.qp_measure(0.5)) - 1
    assert S.hilbert_norm_hinf_mdmu(M.qp_measure(0.5).scaled(4.0)) - 1 == pytest.approx(2 * base, rel=1e-7)
    assert S.cesaro_norm_hinf_mdmu(M.unit_atom()) == pytest.approx(1 + math.pi / math.sqrt(2), rel=1e-9)


def test_norm_formula_divergence_is_reported():
    assert math.isinf(S.log_norm_sq_formula(M.remark_measure(0.5)))
    assert math.isinf(S.log_norm_sq_formula(M.power_measure(1.0, -2.0)))
    with pytest.raises(ValueError, match="not bounded"):
        S.hilbert_norm_hinf_mdmu(M.remark_measure(0.5))


def test_norms_of_constants():
    assert S.bmoa_norm(P.constant(-2.0)).norm_value == 2.0
    assert S.mdmu_norm(P.constant(1j), M.qp_measure(0.5)).norm_value == 1.0
    assert S.lambda_norm(P.constant(3.0), 2.0) == 3.0


def test_mdmu_norm_of_polynomial_is_finite_and_converged():
    rep = S.mdmu_norm(P.monomial(1), M.qp_measure(0.5))
    assert math.isfinite(rep.norm_value) and rep.sup_part.converged
    assert rep.norm_value == pytest.approx(math.sqrt(rep.sup_part.value))


def test_real_axis_search_agrees_with_disc_search():
    f = P.log_tailed(64)
    mu = QP_HALF
    fast = S.mdmu_norm(f, mu)
    coarse = SupSearchConfig(n_radii=5, n_angles=8, refine_iterations=15)
    full = S.mdmu_norm(f, mu, coarse)
    assert full.norm_value <= fast.norm_value + 1e-6
    assert full.norm_value == pytest.approx(fast.norm_value, rel=1e-3)


def test_atomic_u_form_routes_agree():
    f = P.TaylorPolynomial([0.3, 1.0, -0.5j, 0.2])
    mu = M.AtomicMeasure((0.5, -0.2 + 0.6j), (1.0, 0.5))
    phi = DiscAutomorphism(1j, 0.3 - 0.1j)
    exact = S.mdmu_functional(f, phi, mu, method="identity")
    quad = S.mdmu_functional(f, phi, mu, method="quadrature")
    assert exact == pytest.approx(quad, rel=1e-10)


def test_lambda_profile_of_log_is_flat():
    f = P.log_series(1 << 16)
    prof = S.lambda_profile(f, 2.0, [0.5, 0.9, 0.99])
    assert prof == pytest.approx([math.sqrt(1 - r ** (2 << 16)) for r in (0.5, 0.9, 0.99)], rel=1e-12)
    with pytest.raises(ValueError):
        S.lambda_norm(f, 1.0)


def test_lp_identity_examples():
    atom = M.unit_atom()
    assert S.lp_identity_residual(P.monomial(1), atom) <= 1e-8
    assert S.lp_identity_residual(P.constant(2.0), atom) == 0.0
    lhs, rhs = S.lp_identity_sides(P.monomial(1), atom)
    assert lhs == pytest.approx(1.0, abs=1e-15) and rhs == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=25)
@given(st.integers(0, 2 ** 31), pts)
def test_garsia_equals_area(seed, a):
    f = random_poly(np.random.default_rng(seed), int(np.random.default_rng(seed).integers(1, 21)))
    assert S.garsia_functional(f, a) == pytest.approx(S.bmoa_area_functional(f, a), abs=1e-4, rel=1e-9)


@settings(max_examples=15)
@given(pts, st.floats(0, 2 * math.pi))
def test_radial_measure_rotation_invariance(a, t):
    # rotating a together with f leaves the functional unchanged
    mu = QP_HALF
    f = P.TaylorPolynomial([0.0, 1.0, 0.5 - 0.3j, 0.25j])
    rot = complex(math.cos(t), math.sin(t))
    f_rot = P.TaylorPolynomial(f.coeffs * np.conj(rot) ** np.arange(4))
    v1 = S.mdmu_functional(f, DiscAutomorphism(1.0, a), mu)
    v2 = S.mdmu_functional(f_rot, DiscAutomorphism(1.0, rot * a), mu)
    v3 = S.mdmu_functional(f, DiscAutomorphism(1j, a), mu)
    assert v2 == pytest.approx(v1, rel=1e-8)
    assert v3 == pytest.approx(v1, rel=1e-8)


@settings(max_examples=15)
@given(st.integers(0, 2 ** 31), pts, st.floats(0.1, 0.9), st.floats(0.05, 0.5))
def test_qp_functional_nonincreasing_in_p(seed, a, p, dp):
    f = random_poly(np.random.default_rng(seed), 6)
    assert S.qp_functional(f, a, p + dp) <= S.qp_functional(f, a, p) * (1 + 1e-12) + 1e-14


@settings(max_examples=10)
@given(pts)
def test_hilbert_image_dominated_by_formula(a):
    # |b| <= sup|f| gives int |H(f)'|^2 U(phi) dA <= the norm formula integral
    mu = QP_HALF
    k = S.log_norm_sq_formula(mu)
    for f in (P.constant(1.0), P.mobius_series(0.4j, 64)):
        h = O.hilbert_coeff(f, 256)
        assert S.mdmu_functional(h, DiscAutomorphism(1.0, a), mu) <= k * 1.01


def test_bmoa_norm_is_mobius_invariant():
    f = P.TaylorPolynomial([0.0, 1.0, 0.5, -0.25j])
    g = P.compose(f, P.mobius_series(0.4, 200), 200)
    cfg = SupSearchConfig(n_radii=6, n_angles=12, refine_iterations=30)
    nf = S.bmoa_norm(f, cfg)
    ng = S.bmoa_norm(g, cfg)
    # the norm differs by |f(0)| vs |g(0)|; the seminorm parts agree
    sf = nf.norm_value - nf.point_evaluation_part
    sg = ng.norm_value - ng.point_evaluation_part
    assert sg == pytest.approx(sf, rel=0.05)
