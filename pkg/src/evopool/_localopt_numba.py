"""Jitted twin of :mod:`evopool.localopt` for the built-in kernels.

``minimize_kernel`` mirrors ``localopt.minimize`` step for step; the
test suite checks the two paths agree.  Status codes: 0 converged,
1 max-iter, 2 line-search failure, 3 non-finite objective.
"""

import numpy as np
from numba import njit

from .functions._kernels_numba import value_and_grad

_PAIR_SKIP_TOL = 1e-10
_MAX_LS_EVALS = 60
_MIN_STEP = 1e-20
_MAX_RESTARTS = 3


@njit(cache=True)
def _all_finite(v):
    for i in range(v.size):
        if not np.isfinite(v[i]):
            return False
    return True


@njit(cache=True)
def minimize_kernel(
    fid, fp, gw, gz, gc, x0, m, ftol, gtol, maxit, c1, c2, orthant,
    cliff=False, lo=0.0, hi=0.0,
):
    n = x0.size
    x = x0.copy()
    gx = np.empty(n)
    fx = value_and_grad(fid, x, fp, gw, gz, gc, gx)
    if not np.isfinite(fx) or not _all_finite(gx):
        return x, fx, 3, 0

    S = np.zeros((m, n))
    Y = np.zeros((m, n))
    k = 0
    alphas = np.zeros(m)
    xa = np.empty(n)
    ga = np.empty(n)
    xbest = np.empty(n)
    gbest = np.empty(n)
    sx = np.empty(n)
    geff = np.empty(n)
    in_box = np.empty(n, dtype=np.bool_)
    restarts = 0
    it = 0
    while it < maxit:
        # projected gradient: coordinates pinned on the penalty cliff
        # pointing outward do not count against convergence
        gmax = 0.0
        for i in range(n):
            geff[i] = gx[i]
            if cliff and ((x[i] == lo and gx[i] > 0.0)
                          or (x[i] == hi and gx[i] < 0.0)):
                geff[i] = 0.0
            if abs(geff[i]) > gmax:
                gmax = abs(geff[i])
        if gmax < gtol:
            return x, fx, 0, it

        # two-loop recursion
        q = gx.copy()
        for i in range(k - 1, -1, -1):
            a = 0.0
            ys = 0.0
            for j in range(n):
                a += S[i, j] * q[j]
                ys += Y[i, j] * S[i, j]
            a /= ys
            alphas[i] = a
            for j in range(n):
                q[j] -= a * Y[i, j]
        if k > 0:
            sy = 0.0
            yy = 0.0
            for j in range(n):
                sy += S[k - 1, j] * Y[k - 1, j]
                yy += Y[k - 1, j] * Y[k - 1, j]
            gamma = sy / yy
            for j in range(n):
                q[j] *= gamma
            for i in range(k):
                b = 0.0
                ys = 0.0
                for j in range(n):
                    b += Y[i, j] * q[j]
                    ys += Y[i, j] * S[i, j]
                b /= ys
                for j in range(n):
                    q[j] += (alphas[i] - b) * S[i, j]
        d = -q
        if orthant:
            for i in range(n):
                if d[i] * gx[i] > 0.0 or gx[i] == 0.0:
                    d[i] = 0.0
        if cliff:
            for i in range(n):
                if (x[i] == lo and d[i] < 0.0) or (x[i] == hi and d[i] > 0.0):
                    d[i] = 0.0
        dd = 0.0
        for i in range(n):
            dd += gx[i] * d[i]
        if dd >= 0.0:
            for i in range(n):
                d[i] = -geff[i]
                if orthant and gx[i] == 0.0:
                    d[i] = 0.0
            dd = 0.0
            for i in range(n):
                dd += gx[i] * d[i]

        # line search: double while the curvature condition says the step
        # is too short, halve while sufficient decrease fails
        d0 = dd
        slope = d0 if d0 < -1e-300 else -1e-300
        for i in range(n):
            sx[i] = 1.0 if x[i] > 0.0 else (-1.0 if x[i] < 0.0 else 0.0)
            in_box[i] = lo <= x[i] <= hi
        a = 1.0
        have_best = False
        fbest = 0.0
        expanding = True
        nonfinite = False
        for _ in range(_MAX_LS_EVALS):
            for i in range(n):
                xa[i] = x[i] + a * d[i]
                if orthant and sx[i] != 0.0:
                    if (xa[i] > 0.0 and sx[i] < 0.0) or (xa[i] < 0.0 and sx[i] > 0.0):
                        xa[i] = 0.0
                if cliff and in_box[i]:
                    if xa[i] < lo:
                        xa[i] = lo
                    elif xa[i] > hi:
                        xa[i] = hi
            fa = value_and_grad(fid, xa, fp, gw, gz, gc, ga)
            if not np.isfinite(fa) or not _all_finite(ga):
                nonfinite = True
                break
            if fa <= fx + c1 * a * slope:
                for i in range(n):
                    xbest[i] = xa[i]
                    gbest[i] = ga[i]
                fbest = fa
                have_best = True
                da = 0.0
                for i in range(n):
                    da += ga[i] * d[i]
                if abs(da) <= c2 * abs(d0) or da >= 0.0 or not expanding:
                    break
                a *= 2.0
            else:
                if have_best:
                    break
                expanding = False
                a *= 0.5
                if a < _MIN_STEP:
                    break
        if nonfinite:
            return xa.copy(), fx, 3, it
        if not have_best:
            if k > 0:
                k = 0
                continue
            return x, fx, 2, it

        sy = 0.0
        snorm = 0.0
        ynorm = 0.0
        for i in range(n):
            si = xbest[i] - x[i]
            yi = gbest[i] - gx[i]
            sy += si * yi
            snorm += si * si
            ynorm += yi * yi
        if sy > _PAIR_SKIP_TOL * np.sqrt(snorm) * np.sqrt(ynorm):
            if k == m:
                for i in range(m - 1):
                    for j in range(n):
                        S[i, j] = S[i + 1, j]
                        Y[i, j] = Y[i + 1, j]
                k = m - 1
            for j in range(n):
                S[k, j] = xbest[j] - x[j]
                Y[k, j] = gbest[j] - gx[j]
            k += 1

        small = abs(fbest - fx) < ftol
        for i in range(n):
            x[i] = xbest[i]
            gx[i] = gbest[i]
        fx = fbest
        it += 1
        if small:
            if k > 0 and restarts < _MAX_RESTARTS:
                k = 0
                restarts += 1
                continue
            return x, fx, 0, it
        restarts = 0
    return x, fx, 1, it


@njit(cache=True)
def minimize_many(fid, fp, gw, gz, gc, X0, m, ftol, gtol, maxit, c1, c2, orthant):
    """Run ``minimize_kernel`` from every row of ``X0``."""
    nstarts, n = X0.shape
    X = np.empty((nstarts, n))
    F = np.empty(nstarts)
    status = np.empty(nstarts, dtype=np.int64)
    iters = np.empty(nstarts, dtype=np.int64)
    for r in range(nstarts):
        x, f, st, it = minimize_kernel(
            fid, fp, gw, gz, gc, X0[r].copy(), m, ftol, gtol, maxit, c1, c2, orthant
        )
        for j in range(n):
            X[r, j] = x[j]
        F[r] = f
        status[r] = st
        iters[r] = it
    return X, F, status, iters
