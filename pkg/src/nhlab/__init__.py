"""Numerical laboratory for Newton-Hooke space-times.

Modules:

* ``geometry``  charts (Beltrami, static, linear), sigma/varsigma factors
* ``group``     finite transformations, composition, kinematic laws
* ``algebra``   exact operator realizations and bracket-table verification
* ``classical`` Lagrangian/Hamiltonian mechanics and action identities
* ``quantum``   grid wave functions, evolvers, gauge/duality maps, symmetries
* ``anomalous`` invariant connections with anomaly parameter C, geodesics
* ``gravity``   point-source gravity law, orbits, Gauss-law diagnostics
* ``cli``       config-driven verification suites and simulations
"""

from .geometry import Event, SpacetimeKind
from .group import NHTransform
from .state import GridState

__all__ = ["Event", "SpacetimeKind", "NHTransform", "GridState"]
__version__ = "0.1.0"
