# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Nelder-Mead for the built-in objectives.

Mirrors ``tomofit._simplex`` operation for operation so results are
bit-identical to the pure-Python path (built with -ffp-contract=off).
"""

from libc.math cimport fabs, isfinite

from tomofit.errors import OptimizerAbort

cdef enum:
    DIM = 4
    STOKES_LSQ = 0
    COUNT_LIKELIHOOD = 1


cdef inline double _stokes_lsq(const double* x, const double* data) noexcept nogil:
    cdef double t1 = x[0], t2 = x[1], t3 = x[2], t4 = x[3]
    cdef double n = t1 * t1 + t2 * t2 + t3 * t3 + t4 * t4
    cdef double r00 = (t1 * t1 + t3 * t3 + t4 * t4) / n
    cdef double r11 = (t2 * t2) / n
    cdef double re = (t2 * t3) / n
    cdef double im = -(t2 * t4) / n
    cdef double a = 2.0 * re - data[0]
    cdef double b = -2.0 * im - data[1]
    cdef double c = (r00 - r11) - data[2]
    return a * a + b * b + c * c


cdef inline double _term(double total, double p, double observed) noexcept nogil:
    cdef double expected = total * p
    cdef double diff = expected - observed
    cdef double floor = expected if expected > 1.0 else 1.0
    return diff * diff / floor


cdef inline double _count_likelihood(const double* x, const double* data) noexcept nogil:
    cdef double t1 = x[0], t2 = x[1], t3 = x[2], t4 = x[3]
    cdef double n = t1 * t1 + t2 * t2 + t3 * t3 + t4 * t4
    cdef double r00 = (t1 * t1 + t3 * t3 + t4 * t4) / n
    cdef double r11 = (t2 * t2) / n
    cdef double re = (t2 * t3) / n
    cdef double im = -(t2 * t4) / n
    cdef double total = data[0]
    cdef double ph = (1.0 + (r00 - r11)) / 2.0
    cdef double pd = (1.0 + 2.0 * re) / 2.0
    cdef double pr = (1.0 + -2.0 * im) / 2.0
    cdef double cost = 0.0
    cost += _term(total, ph, data[1])
    cost += _term(total, pd, data[2])
    cost += _term(total, pr, data[3])
    return cost


cdef class _Objective:
    cdef int kind
    cdef double data[4]
    cdef bint failed
    cdef double bad_x[4]
    cdef double bad_value

    cdef inline double eval(self, const double* x) noexcept nogil:
        cdef double v
        cdef int j
        if self.failed:
            return 0.0
        if self.kind == STOKES_LSQ:
            v = _stokes_lsq(x, self.data)
        else:
            v = _count_likelihood(x, self.data)
        if not isfinite(v):
            self.failed = True
            self.bad_value = v
            for j in range(DIM):
                self.bad_x[j] = x[j]
        return v


cdef inline void _copy(double* dst, const double* src) noexcept nogil:
    cdef int j
    for j in range(DIM):
        dst[j] = src[j]


cdef int _run(_Objective obj, double* x0, double* f0, int budget,
              double f_tol, double x_tol, int* converged):
    """One simplex run started from x0; writes the best point back into x0."""
    cdef double pts[DIM + 1][DIM]
    cdef double vals[DIM + 1]
    cdef double c[DIM]
    cdef double xr[DIM]
    cdef double xe[DIM]
    cdef double xc[DIM]
    cdef double tmp[DIM]
    cdef double fr, fe, fc, ftmp, d, xspread, step
    cdef int i, j, k, used = 0

    _copy(pts[0], x0)
    vals[0] = f0[0]
    for j in range(DIM):
        _copy(pts[j + 1], x0)
        step = 0.05 * fabs(x0[j])
        if step < 0.05:
            step = 0.05
        pts[j + 1][j] = pts[j + 1][j] + step
        vals[j + 1] = obj.eval(pts[j + 1])
        if obj.failed:
            return used

    while True:
        # stable insertion sort by value
        for i in range(1, DIM + 1):
            ftmp = vals[i]
            _copy(tmp, pts[i])
            k = i - 1
            while k >= 0 and vals[k] > ftmp:
                vals[k + 1] = vals[k]
                _copy(pts[k + 1], pts[k])
                k -= 1
            vals[k + 1] = ftmp
            _copy(pts[k + 1], tmp)

        xspread = 0.0
        for i in range(1, DIM + 1):
            for j in range(DIM):
                d = fabs(pts[i][j] - pts[0][j])
                if d > xspread:
                    xspread = d
        if vals[DIM] - vals[0] < f_tol or xspread < x_tol:
            converged[0] = 1
            break
        if used >= budget:
            converged[0] = 0
            break
        used += 1

        for j in range(DIM):
            c[j] = 0.0
        for i in range(DIM):
            for j in range(DIM):
                c[j] += pts[i][j]
        for j in range(DIM):
            c[j] = c[j] / DIM

        for j in range(DIM):
            xr[j] = c[j] + 1.0 * (c[j] - pts[DIM][j])
        fr = obj.eval(xr)
        if obj.failed:
            return used
        if fr < vals[0]:
            for j in range(DIM):
                xe[j] = c[j] + 2.0 * (c[j] - pts[DIM][j])
            fe = obj.eval(xe)
            if obj.failed:
                return used
            if fe < fr:
                _copy(pts[DIM], xe)
                vals[DIM] = fe
            else:
                _copy(pts[DIM], xr)
                vals[DIM] = fr
            continue
        if fr < vals[DIM - 1]:
            _copy(pts[DIM], xr)
            vals[DIM] = fr
            continue
        if fr < vals[DIM]:
            for j in range(DIM):
                xc[j] = c[j] + 0.5 * (xr[j] - c[j])
            fc = obj.eval(xc)
            if obj.failed:
                return used
            if fc <= fr:
                _copy(pts[DIM], xc)
                vals[DIM] = fc
                continue
        else:
            for j in range(DIM):
                xc[j] = c[j] + 0.5 * (pts[DIM][j] - c[j])
            fc = obj.eval(xc)
            if obj.failed:
                return used
            if fc < vals[DIM]:
                _copy(pts[DIM], xc)
                vals[DIM] = fc
                continue
        for i in range(1, DIM + 1):
            for j in range(DIM):
                pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j])
            vals[i] = obj.eval(pts[i])
            if obj.failed:
                return used

    _copy(x0, pts[0])
    f0[0] = vals[0]
    return used


def builtin_nelder_mead(int kind, data, x0, int max_iter, double f_tol, double x_tol, int restarts):
    """Same contract as ``tomofit._simplex.builtin_nelder_mead``."""
    cdef _Objective obj = _Objective()
    cdef double x[DIM]
    cdef double f
    cdef int j, run, used, iterations = 0
    cdef int converged = 0
    if kind != STOKES_LSQ and kind != COUNT_LIKELIHOOD:
        raise KeyError(kind)
    obj.kind = kind
    obj.failed = False
    for j in range(DIM):
        obj.data[j] = float(data[j])
        x[j] = float(x0[j])
    f = obj.eval(x)
    if obj.failed:
        raise OptimizerAbort([x[j] for j in range(DIM)], obj.bad_value)
    for run in range(restarts + 1):
        converged = 0
        used = _run(obj, x, &f, max_iter - iterations, f_tol, x_tol, &converged)
        iterations += used
        if obj.failed:
            raise OptimizerAbort([obj.bad_x[j] for j in range(DIM)], obj.bad_value)
        if not converged:
            break
    return [x[j] for j in range(DIM)], f, iterations, bool(converged)
