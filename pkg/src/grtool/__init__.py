"""Numerical companions to classical general relativity.

Submodules
----------
geometry      metric charts, curvature, Einstein-tensor classification
kinematics    special-relativistic kinematics and proper time
geodesics     Schwarzschild orbits, light bending, interior fall
cosmology     FLRW scale factors in conformal time
stellar       static stars and the incompressible closed form
asymptotics   ADM/Komar masses, Penrose ratio, Kerr structure
constraints   conformal method on the flat 3-torus
waves         linearized gravity and the 1+1 wave equation
cli           ``grtool`` command-line front end
"""

from .errors import GRError

__all__ = ["GRError"]
__version__ = "0.1.0"
