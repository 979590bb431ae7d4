"""Fit-free physicalization by radial projection onto the Bloch sphere.

A Stokes vector outside the unit ball is divided by its length, which keeps
its direction and puts it on the sphere (a pure state). Vectors already in
the ball are returned untouched. The projected state is physical but not in
general the likelihood optimum.
"""

from __future__ import annotations

import math

from .core import DensityMatrix, StokesVector, density_from_stokes
from .mle import PROJECTION, FitResult


def project_to_bloch_ball(s: StokesVector) -> StokesVector:
    if not isinstance(s, StokesVector):
        s = StokesVector(*s)
    sq = s.norm_squared()
    if sq <= 1.0:
        return s
    r = math.hypot(s.s1, s.s2, s.s3)
    out = StokesVector(s.s1 / r, s.s2 / r, s.s3 / r)
    # rounding can leave |out|^2 a few ulps above 1; pull it inside
    while out.norm_squared() > 1.0:
        out = StokesVector(*(v * (1.0 - 2.0**-52) for v in out))
    return out


def physical_density_via_projection(s: StokesVector) -> DensityMatrix:
    return density_from_stokes(project_to_bloch_ball(s))


def fit_by_projection(s: StokesVector) -> FitResult:
    """Projection packaged as a FitResult; ``cost`` is the squared Stokes residual."""
    if not isinstance(s, StokesVector):
        s = StokesVector(*s)
    p = project_to_bloch_ball(s)
    a, b, c = p.s1 - s.s1, p.s2 - s.s2, p.s3 - s.s3
    return FitResult(None, density_from_stokes(p), a * a + b * b + c * c, 0, True, PROJECTION)
