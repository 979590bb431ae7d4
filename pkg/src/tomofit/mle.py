"""Likelihood-style refinement of T parameters against measured data.

Two objectives are provided:

``stokes_lsq``
    Squared distance between the Stokes vector of the parametrized state and
    the measured one.
``count_likelihood``
    Gaussian approximation to the Poisson count likelihood,
    ``sum_x (N p_x - n_x)^2 / max(N p_x, 1)`` over the H, D and R detectors.

Physical data never reach the optimizer: the measured density matrix is
already the answer. Unphysical data are seeded analytically and refined with
Nelder-Mead directly in T space, where every candidate is a valid state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from . import _backend, _simplex
from .core import DensityMatrix, StokesVector, density_from_stokes, is_physical, stokes_from_density
from .errors import DegenerateParametersError, InvalidInputError
from .ingest import CountRecord
from .tmatrix import DEFAULT_EPSILON, SeedReport, TParams, density_from_t, seed_from_stokes

STOKES_LSQ = "stokes_lsq"
COUNT_LIKELIHOOD = "count_likelihood"
COST_KINDS = (STOKES_LSQ, COUNT_LIKELIHOOD)

EXACT_PASSTHROUGH = "exact_passthrough"
MLE = "mle"
PROJECTION = "projection"

NAIVE_SEED = TParams(1.0, 1.0, 1.0, 1.0)


@dataclass(frozen=True)
class FitOptions:
    cost_kind: str = STOKES_LSQ
    max_iterations: int = 2000
    f_tol: float = 1e-12
    x_tol: float = 1e-10
    restarts: int = 1

    def __post_init__(self):
        if self.cost_kind not in COST_KINDS:
            raise InvalidInputError(f"unknown cost kind {self.cost_kind!r}")
        if self.max_iterations < 1:
            raise InvalidInputError("max_iterations must be at least 1")
        if not (self.f_tol > 0 and self.x_tol > 0):
            raise InvalidInputError("tolerances must be positive")
        if self.restarts < 0:
            raise InvalidInputError("restarts must be non-negative")


@dataclass(frozen=True)
class FitResult:
    """Outcome of :func:`fit`.

    ``t`` is None for the passthrough and projection methods, which never
    work in T space. ``seed`` is only present when the analytic seed was used.
    """

    t: TParams | None
    rho: DensityMatrix
    cost: float
    iterations: int
    converged: bool
    method: str
    seed: SeedReport | None = None


def cost_stokes_lsq(t: TParams, s_meas: StokesVector) -> float:
    s = stokes_from_density(density_from_t(t))
    a = s.s1 - s_meas.s1
    b = s.s2 - s_meas.s2
    c = s.s3 - s_meas.s3
    return a * a + b * b + c * c


def cost_count_likelihood(t: TParams, rec: CountRecord) -> float:
    s = stokes_from_density(density_from_t(t))
    total = rec.n_h + rec.n_v
    cost = 0.0
    for component, observed in ((s.s3, rec.n_h), (s.s1, rec.n_d), (s.s2, rec.n_r)):
        expected = total * ((1.0 + component) / 2.0)
        diff = expected - observed
        cost += diff * diff / max(expected, 1.0)
    return cost


class _BuiltinObjective:
    """A cost callable that the compiled kernel also knows how to evaluate."""

    kind: int
    data: tuple[float, float, float, float]

    def __call__(self, t: TParams) -> float:
        return _simplex.RAW_COSTS[self.kind](tuple(t), self.data)


class StokesLsqObjective(_BuiltinObjective):
    kind = _simplex.STOKES_LSQ

    def __init__(self, s_meas: StokesVector):
        self.data = (s_meas.s1, s_meas.s2, s_meas.s3, 0.0)


class CountLikelihoodObjective(_BuiltinObjective):
    kind = _simplex.COUNT_LIKELIHOOD

    def __init__(self, rec: CountRecord):
        self.data = (rec.n_h + rec.n_v, rec.n_h, rec.n_d, rec.n_r)


def make_objective(kind: str, s_meas: StokesVector, rec: CountRecord | None = None) -> _BuiltinObjective:
    if kind == STOKES_LSQ:
        return StokesLsqObjective(s_meas)
    if kind == COUNT_LIKELIHOOD:
        if not isinstance(rec, CountRecord):
            raise InvalidInputError("count_likelihood needs a 4-count record (n_h, n_v, n_d, n_r)")
        return CountLikelihoodObjective(rec)
    raise InvalidInputError(f"unknown cost kind {kind!r}")


def optimize(
    cost: Callable[[TParams], float],
    x0: TParams,
    opts: FitOptions | None = None,
) -> tuple[TParams, float, int, bool]:
    """Nelder-Mead minimization of ``cost`` starting at ``x0``.

    Built-in objectives (see :func:`make_objective`) run on the compiled
    kernel when it is available; any other callable runs on the pure-Python
    simplex. The search is deterministic and never returns a point worse
    than ``x0``.

    Raises:
        OptimizerAbort: the cost was NaN/Inf at some visited point.
    """
    opts = opts or FitOptions()
    start = tuple(x0)
    if isinstance(cost, _BuiltinObjective):
        x, fx, iterations, converged = _backend.builtin_nelder_mead(
            cost.kind, cost.data, start, opts.max_iterations, opts.f_tol, opts.x_tol, opts.restarts
        )
    else:

        def wrapped(x):
            try:
                return float(cost(TParams(*x)))
            except DegenerateParametersError:
                return math.nan

        x, fx, iterations, converged = _simplex.nelder_mead(
            wrapped, start, opts.max_iterations, opts.f_tol, opts.x_tol, opts.restarts
        )
    return TParams(*x), fx, iterations, converged


def fit(
    s_meas: StokesVector,
    rec: CountRecord | None = None,
    opts: FitOptions | None = None,
    epsilon: float = DEFAULT_EPSILON,
    *,
    tol: float = 0.0,
    force: bool = False,
    start: TParams | None = None,
) -> FitResult:
    """Turn a measured Stokes vector into a physical density matrix.

    If the data already satisfy ``|s|^2 <= 1 + tol`` the measured matrix is
    returned unchanged (``exact_passthrough``). Otherwise, or when ``force``
    is set, the analytic seed (or ``start``, if given) is refined by
    :func:`optimize` and the result has ``method == "mle"``.
    """
    opts = opts or FitOptions()
    if not isinstance(s_meas, StokesVector):
        s_meas = StokesVector(*s_meas)
    if not force and is_physical(s_meas, tol):
        return FitResult(None, density_from_stokes(s_meas), 0.0, 0, True, EXACT_PASSTHROUGH)

    objective = make_objective(opts.cost_kind, s_meas, rec)
    seed = None
    if start is None:
        seed = seed_from_stokes(s_meas, epsilon)
        start = seed.t
    t, cost, iterations, converged = optimize(objective, start, opts)
    return FitResult(t, density_from_t(t), cost, iterations, converged, MLE, seed)
