from .specfun import hermite, laguerre, erfc
from .genfun import GeneratingOrder, QuasiInterpParams, GridSamples, eta_2m, moment_defect, quasi_interpolant
from .kernels import ScaledPoint, big_f, p_poly, q_poly, phi_k_closed, halfspace_integrand, freespace_integrand
from .de_rule import QuadratureRule, de_transform, trapezoid_de

__all__ = [
    "hermite",
    "laguerre",
    "erfc",
    "GeneratingOrder",
    "QuasiInterpParams",
    "GridSamples",
    "eta_2m",
    "moment_defect",
    "quasi_interpolant",
    "ScaledPoint",
    "big_f",
    "p_poly",
    "q_poly",
    "phi_k_closed",
    "halfspace_integrand",
    "freespace_integrand",
    "QuadratureRule",
    "de_transform",
    "trapezoid_de",
]
