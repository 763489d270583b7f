"""Boundary-corrected cubature of modified Helmholtz volume potentials."""

__version__ = "0.1.0"
