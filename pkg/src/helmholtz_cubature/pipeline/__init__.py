from .geometry import EllipseDomain, LocalFrame, NodeSet, classify_nodes, local_frame, project_to_ellipse
from .densities import Density, density_f, density_g, density_oscill, make_density
from .coefficients import CoefficientCache, a_coeff, b_coeff, freespace_potential
from .cubature import PotentialResult, VolumePotential, potential_at_grid, potential_at_point
from .convergence import convergence_study

__all__ = [
    "EllipseDomain",
    "LocalFrame",
    "NodeSet",
    "classify_nodes",
    "local_frame",
    "project_to_ellipse",
    "Density",
    "density_f",
    "density_g",
    "density_oscill",
    "make_density",
    "CoefficientCache",
    "a_coeff",
    "b_coeff",
    "freespace_potential",
    "PotentialResult",
    "VolumePotential",
    "potential_at_grid",
    "potential_at_point",
    "convergence_study",
]
