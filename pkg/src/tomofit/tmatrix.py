"""Lower-triangular T-matrix parametrization and its analytic seeding.

    T = [[t1,        0 ],
         [t3 + i t4, t2]],      rho = T^dagger T / Tr(T^dagger T)

Every non-zero real 4-vector gives a physical density matrix, and scaling the
vector by any non-zero constant leaves rho unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import DensityMatrix, StokesVector
from .errors import DegenerateParametersError, InvalidInputError, PureStateLimitError

DEFAULT_EPSILON = 0.1

GENERIC = "generic"
NEAR_ZERO_STATE = "near_zero_state"


@dataclass(frozen=True)
class TParams:
    t1: float
    t2: float
    t3: float
    t4: float

    def __post_init__(self):
        for name in ("t1", "t2", "t3", "t4"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise InvalidInputError(f"{name}={v!r} is not finite")
            object.__setattr__(self, name, v)
        if self.t1 == 0.0 and self.t2 == 0.0 and self.t3 == 0.0 and self.t4 == 0.0:
            raise DegenerateParametersError("all T-matrix parameters are zero")

    def __iter__(self):
        yield self.t1
        yield self.t2
        yield self.t3
        yield self.t4

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.t1, self.t2, self.t3, self.t4)

    def scaled(self, c: float) -> "TParams":
        return TParams(c * self.t1, c * self.t2, c * self.t3, c * self.t4)


@dataclass(frozen=True)
class SeedReport:
    """Starting point for the likelihood search, with how it was obtained.

    ``clamped`` is set when the mixedness numerator 1 - |s|^2 was negative and
    replaced by zero; ``branch`` is ``"generic"`` or ``"near_zero_state"``.
    """

    t: TParams
    clamped: bool
    branch: str
    s_in: StokesVector


def density_from_t(t: TParams | Sequence[float]) -> DensityMatrix:
    t1, t2, t3, t4 = (float(x) for x in t)
    n = t1 * t1 + t2 * t2 + t3 * t3 + t4 * t4
    if not 1e-250 < n < 1e250:
        # squares under/overflow; rescaling leaves rho unchanged
        m = max(abs(t1), abs(t2), abs(t3), abs(t4))
        if m == 0.0:
            raise DegenerateParametersError("all T-matrix parameters are zero")
        t1, t2, t3, t4 = t1 / m, t2 / m, t3 / m, t4 / m
        n = t1 * t1 + t2 * t2 + t3 * t3 + t4 * t4
    return DensityMatrix(
        r00=(t1 * t1 + t3 * t3 + t4 * t4) / n,
        r11=(t2 * t2) / n,
        r01_re=(t2 * t3) / n,
        r01_im=-(t2 * t4) / n,
    )


def t_from_pure_angles(theta: float, phi: float, amplitude: float = 1.0) -> TParams:
    """T parameters of the pure state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.

    Always has t1 = 0.
    """
    if not amplitude > 0:
        raise InvalidInputError("amplitude must be positive")
    c = math.cos(theta / 2.0)
    return TParams(
        0.0,
        amplitude * math.sin(theta / 2.0),
        amplitude * c * math.cos(phi),
        amplitude * c * math.sin(phi),
    )


def seed_from_stokes(s: StokesVector, epsilon: float = DEFAULT_EPSILON) -> SeedReport:
    """Analytic T parameters reproducing ``s``, pinned at t2 = 1.

    With t2 = 1::

        t3 = s1 / (1 - s3)
        t4 = s2 / (1 - s3)
        t1 = sqrt(1 - s1^2 - s2^2 - s3^2) / (1 - s3)

    For physical ``s`` this is an exact preimage. A negative numerator under
    the root (data outside the Bloch ball) is clamped to zero. When
    ``s3 >= 1 - epsilon`` the state is predominantly |0>, the denominator
    would blow up, and the seed is (1, 0, 1, 1) instead; that seed is exactly
    |0><0|.
    """
    if not 0.0 <= epsilon < 1.0:
        raise InvalidInputError("epsilon must lie in [0, 1)")
    if not isinstance(s, StokesVector):
        s = StokesVector(*s)
    s1, s2, s3 = s.s1, s.s2, s.s3
    if s3 >= 1.0 - epsilon:
        return SeedReport(TParams(1.0, 0.0, 1.0, 1.0), False, NEAR_ZERO_STATE, s)
    d = 1.0 - s3
    numerator = 1.0 - s3 * s3 - s1 * s1 - s2 * s2
    clamped = numerator < 0.0
    if clamped:
        numerator = 0.0
    t = TParams(math.sqrt(numerator) / d, 1.0, s1 / d, s2 / d)
    return SeedReport(t, clamped, GENERIC, s)


def t2_from_t1(s: StokesVector, t1: float) -> float:
    """Solve the mixedness relation for t2 given t1 (strictly mixed states only)."""
    s1, s2, s3 = s
    denom = 1.0 - s3 * s3 - s1 * s1 - s2 * s2
    if denom <= 0.0:
        raise PureStateLimitError(
            "1 - |s|^2 must be positive; use seed_from_stokes for pure or unphysical data"
        )
    return abs(1.0 - s3) * abs(t1) / math.sqrt(denom)


def is_mixed(t: TParams) -> bool:
    """Both t1 and t2 non-zero, i.e. the parametrized state has full rank."""
    return t.t1 != 0.0 and t.t2 != 0.0
