"""Integral means of Bergman-projection derivatives: sharp constants, checks and a counterexample."""

from .bounds import (
    BoundReport,
    C2Params,
    c1_constant,
    c2_constant,
    c3_constant,
    check_bpn_bound,
    check_prn_bound,
    check_sobolev_corollary,
    check_weighted_norm,
    lemma1_sharp_constant,
)
from .counterexample import build_function, build_schedule, divergence_report, smooth_variant
from .disc_fn import AnalyticFunction, CircleFunction, RadialFourierFunction, integral_mean
from .projection import NORMALIZATION, prn_operator, project_fourier, project_quadrature
from .special_fn import hyp2f1, log_gamma

__all__ = [
    "AnalyticFunction",
    "BoundReport",
    "C2Params",
    "CircleFunction",
    "NORMALIZATION",
    "RadialFourierFunction",
    "build_function",
    "build_schedule",
    "c1_constant",
    "c2_constant",
    "c3_constant",
    "check_bpn_bound",
    "check_prn_bound",
    "check_sobolev_corollary",
    "check_weighted_norm",
    "divergence_report",
    "hyp2f1",
    "integral_mean",
    "lemma1_sharp_constant",
    "log_gamma",
    "prn_operator",
    "project_fourier",
    "project_quadrature",
    "smooth_variant",
]
