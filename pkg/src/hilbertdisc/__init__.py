"""Hilbert matrix and Cesaro operators on conformally invariant spaces of the disc."""

from .series import (
    TailedSeries,
    TaylorPolynomial,
    differentiate,
    evaluate,
    hardy_mean,
    hilbert_one_series,
    hilbert_one_tailed,
    log_series,
    log_tailed,
    monomial,
    poisson_extension_mod_sq,
)
from .mobius import DiscAutomorphism, log_weight, sigma
from .quadrature import DiscRule, SupResult, SupSearchConfig, polar_rule, sup_over_disc, wedge_rule
from .measures import (
    AtomicMeasure,
    RadialMeasure,
    boundedness_check,
    potential_u,
    potential_u_radial,
    potential_v,
    qp_measure,
    remark_measure,
    total_moment,
    unit_atom,
)
from .operators import cesaro_coeff, hilbert_coeff, hilbert_integral, shift_relation_residual
from .seminorms import (
    SeminormReport,
    bmoa_area_functional,
    bmoa_norm,
    garsia_functional,
    hilbert_norm_hinf_mdmu,
    lambda_norm,
    log_norm_sq_formula,
    mdmu_functional,
    mdmu_norm,
    qp_functional,
)

__all__ = [name for name in dir() if not name.startswith("_")]
