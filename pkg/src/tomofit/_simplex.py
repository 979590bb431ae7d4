"""Pure-Python Nelder-Mead over the four T parameters.

This is the reference implementation and the fallback when the compiled
``_simplex_ext`` module is unavailable. The compiled kernel mirrors the
floating-point operation order here exactly, so both produce identical
results for the built-in objectives.
"""

import math

from .errors import OptimizerAbort

DIM = 4

STOKES_LSQ = 0
COUNT_LIKELIHOOD = 1

ALPHA = 1.0  # reflection
GAMMA = 2.0  # expansion
RHO = 0.5  # contraction
SIGMA = 0.5  # shrink


def stokes_lsq_raw(x, data):
    """Sum of squared Stokes residuals; data = (s1, s2, s3, unused)."""
    t1, t2, t3, t4 = x
    n = t1 * t1 + t2 * t2 + t3 * t3 + t4 * t4
    r00 = (t1 * t1 + t3 * t3 + t4 * t4) / n
    r11 = (t2 * t2) / n
    re = (t2 * t3) / n
    im = -(t2 * t4) / n
    a = 2.0 * re - data[0]
    b = -2.0 * im - data[1]
    c = (r00 - r11) - data[2]
    return a * a + b * b + c * c


def count_likelihood_raw(x, data):
    """Variance-weighted count residuals; data = (N, n_h, n_d, n_r)."""
    t1, t2, t3, t4 = x
    n = t1 * t1 + t2 * t2 + t3 * t3 + t4 * t4
    r00 = (t1 * t1 + t3 * t3 + t4 * t4) / n
    r11 = (t2 * t2) / n
    re = (t2 * t3) / n
    im = -(t2 * t4) / n
    total = data[0]
    ph = (1.0 + (r00 - r11)) / 2.0
    pd = (1.0 + 2.0 * re) / 2.0
    pr = (1.0 + -2.0 * im) / 2.0
    cost = 0.0
    for p, observed in ((ph, data[1]), (pd, data[2]), (pr, data[3])):
        expected = total * p
        diff = expected - observed
        cost += diff * diff / max(expected, 1.0)
    return cost


RAW_COSTS = {STOKES_LSQ: stokes_lsq_raw, COUNT_LIKELIHOOD: count_likelihood_raw}


def initial_steps(x0):
    return [max(0.05, 0.05 * abs(v)) for v in x0]


def _eval(func, x):
    try:
        value = func(x)
    except ZeroDivisionError:
        value = math.nan
    if not math.isfinite(value):
        raise OptimizerAbort(x, value)
    return value


def nelder_mead(func, x0, max_iter=2000, f_tol=1e-12, x_tol=1e-10, restarts=1):
    """Minimize ``func`` (a function of a 4-list of floats) from ``x0``.

    Terminates a run when the spread of function values over the simplex
    drops below ``f_tol`` or the largest vertex offset from the best vertex
    drops below ``x_tol``. After a converged run the simplex is rebuilt
    around the incumbent up to ``restarts`` times. ``max_iter`` bounds the
    total number of simplex steps over all runs.

    Returns:
        (x, fx, iterations, converged)

    Raises:
        OptimizerAbort: the objective returned NaN/Inf (or divided by zero).
    """
    best = [float(v) for v in x0]
    fbest = _eval(func, best)
    iterations = 0
    converged = False
    for run in range(restarts + 1):
        best, fbest, used, converged = _run(func, best, fbest, max_iter - iterations, f_tol, x_tol)
        iterations += used
        if not converged:
            break
    return best, fbest, iterations, converged


def _run(func, x0, f0, budget, f_tol, x_tol):
    steps = initial_steps(x0)
    pts = [list(x0)]
    vals = [f0]
    for j in range(DIM):
        p = list(x0)
        p[j] = p[j] + steps[j]
        pts.append(p)
        vals.append(_eval(func, p))

    used = 0
    while True:
        order = sorted(range(DIM + 1), key=vals.__getitem__)
        pts = [pts[i] for i in order]
        vals = [vals[i] for i in order]

        xspread = 0.0
        for i in range(1, DIM + 1):
            for j in range(DIM):
                d = abs(pts[i][j] - pts[0][j])
                if d > xspread:
                    xspread = d
        if vals[DIM] - vals[0] < f_tol or xspread < x_tol:
            return pts[0], vals[0], used, True
        if used >= budget:
            return pts[0], vals[0], used, False
        used += 1

        worst = pts[DIM]
        c = [0.0] * DIM
        for i in range(DIM):
            for j in range(DIM):
                c[j] += pts[i][j]
        for j in range(DIM):
            c[j] = c[j] / DIM

        xr = [c[j] + ALPHA * (c[j] - worst[j]) for j in range(DIM)]
        fr = _eval(func, xr)
        if fr < vals[0]:
            xe = [c[j] + GAMMA * (c[j] - worst[j]) for j in range(DIM)]
            fe = _eval(func, xe)
            if fe < fr:
                pts[DIM], vals[DIM] = xe, fe
            else:
                pts[DIM], vals[DIM] = xr, fr
            continue
        if fr < vals[DIM - 1]:
            pts[DIM], vals[DIM] = xr, fr
            continue
        if fr < vals[DIM]:
            xc = [c[j] + RHO * (xr[j] - c[j]) for j in range(DIM)]
            fc = _eval(func, xc)
            if fc <= fr:
                pts[DIM], vals[DIM] = xc, fc
                continue
        else:
            xc = [c[j] + RHO * (worst[j] - c[j]) for j in range(DIM)]
            fc = _eval(func, xc)
            if fc < vals[DIM]:
                pts[DIM], vals[DIM] = xc, fc
                continue
        for i in range(1, DIM + 1):
            pts[i] = [pts[0][j] + SIGMA * (pts[i][j] - pts[0][j]) for j in range(DIM)]
            vals[i] = _eval(func, pts[i])


def builtin_nelder_mead(kind, data, x0, max_iter, f_tol, x_tol, restarts):
    """Nelder-Mead on one of the built-in objectives (``STOKES_LSQ`` or ``COUNT_LIKELIHOOD``)."""
    cost = RAW_COSTS[kind]
    data = tuple(float(v) for v in data)
    return nelder_mead(lambda x: cost(x, data), x0, max_iter, f_tol, x_tol, restarts)
