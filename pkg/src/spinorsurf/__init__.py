"""Spinor representation of surfaces in R^4 on sampled parameter grids.

Subpackages cover: quaternion / Clifford algebra in the H(+)H spinor model
(`quaternion`, `clifford`), framed surface patches with curvature data
(`surfaces`, `patch`), discrete spinor fields and Dirac-type residuals
(`spinorfield`), quaternionic Weierstrass integration (`weierstrass`),
codimension-one reductions (`reductions`), and a CLI front end (`cli`).
"""

from .quaternion import Quaternion
from .clifford import SpinorPair, CliffordOrder2

__all__ = ["Quaternion", "SpinorPair", "CliffordOrder2"]
__version__ = "0.1.0"
