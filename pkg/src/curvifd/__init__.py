"""
Finite differences in curvilinear coordinates.

Coordinate maps and their chain-rule coefficients (:mod:`curvifd.coord1d`,
:mod:`curvifd.coord2d`), difference stencils and time stepping
(:mod:`curvifd.fd_core`), three model problems (:mod:`curvifd.burgers`,
:mod:`curvifd.convdiff`, :mod:`curvifd.potential`) and the closed-form
references they are checked against (:mod:`curvifd.oracles`).
"""

__version__ = "0.1.0"
