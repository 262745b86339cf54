"""Verification toolkit for curvature-normalized flow of asymptotically hyperbolic metrics.

Subpackages:

- ``series``:   truncated Laurent-series arithmetic (exact rational or float)
- ``geometry``: curvature engines (series near the boundary, finite differences
  on radial grids) and model-metric constructors
- ``mass``:     mass aspect, boundary-integral mass, gauge normalization,
  flux-integral mass with extrapolation
- ``flow``:     boundary-coefficient ODE system and gauge-field expansion checks
- ``pde``:      radial evolution of geon-type metrics under the gauge-fixed
  normalized flow, mass fitting, scaling study
- ``cli``:      batch scenarios (``ahflow run|converge|schema``)
"""

__version__ = "0.1.0"
