"""
Finite element solver for the dimensionless steady reaction-convection-diffusion
equation with standard Galerkin and micromorphic artificial diffusion (MMAD).
"""
from mmad.core.config import VERSION

__version__ = VERSION
