"""Stokes vectors, single-qubit density matrices and the conversions between them.

Basis convention: |0> is horizontal polarization, so s3 = +1 is |0><0|, and the
off-diagonal element is rho_01 = (s1 - i*s2) / 2.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field

from .errors import InvalidInputError, UnphysicalInputError

#: Eigenvalues down to this value count as non-negative.
EIG_TOL = 1e-12


@dataclass(frozen=True)
class StokesVector:
    """Normalized Stokes parameters (s1: D/A, s2: R/L, s3: H/V).

    Raw experimental vectors are allowed to leave the unit ball; only
    finiteness is enforced.
    """

    s1: float
    s2: float
    s3: float

    def __post_init__(self):
        for name in ("s1", "s2", "s3"):
            v = getattr(self, name)
            if not isinstance(v, numbers.Real) or not math.isfinite(v):
                raise InvalidInputError(f"Stokes component {name}={v!r} is not a finite real")
            object.__setattr__(self, name, float(v))

    def __iter__(self):
        yield self.s1
        yield self.s2
        yield self.s3

    def norm_squared(self) -> float:
        return self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())


@dataclass(frozen=True)
class DensityMatrix:
    """2x2 unit-trace Hermitian matrix stored by its independent real entries.

    Only rho_01 = r01_re + i*r01_im is kept; rho_10 is its conjugate, so the
    matrix is Hermitian by construction. ``raw`` marks matrices built straight
    from measured data that fail the physicality test.
    """

    r00: float
    r11: float
    r01_re: float
    r01_im: float
    raw: bool = field(default=False, compare=False)

    def __post_init__(self):
        for name in ("r00", "r11", "r01_re", "r01_im"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"density entry {name} is not finite")
        if abs(self.r00 + self.r11 - 1.0) > 1e-12 * max(1.0, abs(self.r00) + abs(self.r11)):
            raise InvalidInputError(f"trace {self.r00 + self.r11!r} differs from 1")

    @property
    def r01(self) -> complex:
        return complex(self.r01_re, self.r01_im)

    def to_list(self) -> list[list[complex]]:
        """Full matrix as nested lists of complex numbers."""
        return [
            [complex(self.r00, 0.0), complex(self.r01_re, self.r01_im)],
            [complex(self.r01_re, -self.r01_im), complex(self.r11, 0.0)],
        ]

    def to_numpy(self):
        import numpy as np

        return np.array(self.to_list(), dtype=complex)

    def determinant(self) -> float:
        return self.r00 * self.r11 - (self.r01_re * self.r01_re + self.r01_im * self.r01_im)


def is_physical(s: StokesVector, tol: float = 0.0) -> bool:
    """True when ``s1^2 + s2^2 + s3^2 <= 1 + tol``."""
    if tol < 0:
        raise InvalidInputError("physicality tolerance must be non-negative")
    return s.norm_squared() <= 1.0 + tol


def density_from_stokes(s: StokesVector) -> DensityMatrix:
    """Build rho = (I + s1 X + s2 Y + s3 Z) / 2.

    The result is flagged ``raw`` when ``s`` lies outside the Bloch ball.
    """
    if not isinstance(s, StokesVector):
        s = StokesVector(*s)
    return DensityMatrix(
        r00=(1.0 + s.s3) / 2.0,
        r11=(1.0 - s.s3) / 2.0,
        r01_re=s.s1 / 2.0,
        r01_im=-s.s2 / 2.0,
        raw=not is_physical(s),
    )


def stokes_from_density(rho: DensityMatrix) -> StokesVector:
    """Stokes vector s_i = Tr(rho sigma_i)."""
    return StokesVector(2.0 * rho.r01_re, -2.0 * rho.r01_im, rho.r00 - rho.r11)


def eigenvalues(rho: DensityMatrix) -> tuple[float, float]:
    """Closed-form eigenvalues, largest first; they sum to 1."""
    h = math.hypot((rho.r00 - rho.r11) / 2.0, rho.r01_re, rho.r01_im)
    return 0.5 + h, 0.5 - h


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2)."""
    off = rho.r01_re * rho.r01_re + rho.r01_im * rho.r01_im
    return rho.r00 * rho.r00 + rho.r11 * rho.r11 + 2.0 * off


def _checked_det(rho: DensityMatrix, which: str) -> float:
    lo = eigenvalues(rho)[1]
    if lo < -EIG_TOL:
        raise UnphysicalInputError(f"{which} has eigenvalue {lo!r} < 0")
    return max(rho.determinant(), 0.0)


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity of two qubit states, in the squared convention.

    Uses the 2x2 identity ``F = Tr(rho sigma) + 2 sqrt(det rho det sigma)``.
    Both inputs must be physical; eigenvalues within ``EIG_TOL`` below zero
    are treated as zero.
    """
    det_rho = _checked_det(rho, "rho")
    det_sigma = _checked_det(sigma, "sigma")
    overlap = (
        rho.r00 * sigma.r00
        + rho.r11 * sigma.r11
        + 2.0 * (rho.r01_re * sigma.r01_re + rho.r01_im * sigma.r01_im)
    )
    return max(overlap + 2.0 * math.sqrt(det_rho * det_sigma), 0.0)
