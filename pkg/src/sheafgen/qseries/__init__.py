"""Truncated q-series over Laurent polynomials, with product and inversion kernels."""
from . import _backend as backend
from .series import (
    MAX_FACTORS,
    Binomial,
    Comparison,
    FracSeries,
    ProductFactor,
    merge_factor_streams,
    q4,
    qs_add,
    qs_coeff,
    qs_equal_to_order,
    qs_invert,
    qs_mul,
    qs_neg,
    qs_product,
)
from .special import eta_prefactor, qs_eta_quotient, qs_theta

__all__ = [
    "MAX_FACTORS",
    "Binomial",
    "Comparison",
    "FracSeries",
    "ProductFactor",
    "backend",
    "eta_prefactor",
    "merge_factor_streams",
    "q4",
    "qs_add",
    "qs_coeff",
    "qs_equal_to_order",
    "qs_eta_quotient",
    "qs_invert",
    "qs_mul",
    "qs_neg",
    "qs_product",
    "qs_theta",
]
