"""Numba loop kernels for the objective functions.

Same dispatch surface as ``_kernels_numpy``; see that module for the
contract.  These are the hot path: they get called millions of times per
optimization run, both directly for fitness evaluation and from inside
the jitted local optimizer.
"""

import math

import numpy as np
from numba import njit

FID_ACKLEY = 0
FID_ACKLEY_DECOUPLED = 1
FID_RASTRIGIN = 2
FID_SCHWEFEL = 3
FID_SCHAFFER_F7 = 4
FID_SCHAFFER_F6 = 5
FID_LUNACEK = 6
FID_GAUSSMIX = 7

SCHWEFEL_OFFSET = 418.9829
TWO_PI = 2.0 * math.pi


@njit(cache=True)
def ackley_value(x):
    n = x.size
    sq = 0.0
    cs = 0.0
    for i in range(n):
        sq += x[i] * x[i]
        cs += math.cos(TWO_PI * x[i])
    a = math.sqrt(sq / n)
    return -20.0 * math.exp(-0.2 * a) - math.exp(cs / n) + 20.0 + math.e


@njit(cache=True)
def ackley_grad(x, gout):
    n = x.size
    sq = 0.0
    cs = 0.0
    for i in range(n):
        sq += x[i] * x[i]
        cs += math.cos(TWO_PI * x[i])
    a = math.sqrt(sq / n)
    if a == 0.0:
        for i in range(n):
            gout[i] = 0.0
        return
    c1 = 4.0 * math.exp(-0.2 * a) / (n * a)
    c2 = TWO_PI * math.exp(cs / n) / n
    for i in range(n):
        gout[i] = c1 * x[i] + c2 * math.sin(TWO_PI * x[i])


@njit(cache=True)
def ackley_decoupled_value(x):
    n = x.size
    rn = math.sqrt(n)
    en = math.exp(1.0 / n)
    total = 0.0
    for i in range(n):
        total += 20.0 - 20.0 * math.exp(-0.2 * abs(x[i]) / rn)
        total += en - math.exp(math.cos(TWO_PI * x[i]) / n)
    return total


@njit(cache=True)
def ackley_decoupled_grad(x, gout):
    n = x.size
    rn = math.sqrt(n)
    for i in range(n):
        xi = x[i]
        if xi == 0.0:
            gout[i] = 0.0
            continue
        sign = 1.0 if xi > 0.0 else -1.0
        pull = 4.0 * sign * math.exp(-0.2 * abs(xi) / rn) / rn
        ripple = TWO_PI * math.sin(TWO_PI * xi) * math.exp(math.cos(TWO_PI * xi) / n) / n
        gout[i] = pull + ripple


@njit(cache=True)
def rastrigin_value(x):
    n = x.size
    total = 10.0 * n
    for i in range(n):
        xi = x[i]
        if abs(xi) > 5.12:
            total += 10.0 * xi * xi
        else:
            total += xi * xi - 10.0 * math.cos(TWO_PI * xi)
    return total


@njit(cache=True)
def rastrigin_grad(x, gout):
    for i in range(x.size):
        xi = x[i]
        if abs(xi) > 5.12:
            gout[i] = 20.0 * xi
        else:
            gout[i] = 2.0 * xi + 20.0 * math.pi * math.sin(TWO_PI * xi)


@njit(cache=True)
def schwefel_value(x):
    n = x.size
    total = SCHWEFEL_OFFSET * n
    for i in range(n):
        xi = x[i]
        if abs(xi) > 500.0:
            total += 0.02 * xi * xi
        else:
            total += -xi * math.sin(math.sqrt(abs(xi)))
    return total


@njit(cache=True)
def schwefel_grad(x, gout):
    for i in range(x.size):
        xi = x[i]
        axi = abs(xi)
        if axi > 500.0:
            gout[i] = 0.04 * xi
        elif axi == 0.0:
            gout[i] = 0.0
        else:
            r = math.sqrt(axi)
            gout[i] = -math.sin(r) - 0.5 * r * math.cos(r)


@njit(cache=True)
def schaffer7_value(x):
    n = x.size
    total = 0.0
    for i in range(n - 1):
        s = math.sqrt(x[i] * x[i] + x[i + 1] * x[i + 1])
        if s > 0.0:
            total += math.sqrt(s) * (math.sin(50.0 * s ** 0.2) + 1.0)
    total /= n - 1
    return total * total


@njit(cache=True)
def schaffer7_grad(x, gout):
    n = x.size
    total = 0.0
    for i in range(n):
        gout[i] = 0.0
    for i in range(n - 1):
        s = math.sqrt(x[i] * x[i] + x[i + 1] * x[i + 1])
        if s > 0.0:
            total += math.sqrt(s) * (math.sin(50.0 * s ** 0.2) + 1.0)
    for i in range(n - 1):
        s = math.sqrt(x[i] * x[i] + x[i + 1] * x[i + 1])
        if s == 0.0:
            continue
        s5 = s ** 0.2
        dt_ds = (math.sin(50.0 * s5) + 1.0) / (2.0 * math.sqrt(s)) + 10.0 * math.cos(
            50.0 * s5
        ) / s ** 0.3
        ratio = dt_ds / s
        gout[i] += ratio * x[i]
        gout[i + 1] += ratio * x[i + 1]
    scale = 2.0 * total / ((n - 1) * (n - 1))
    for i in range(n):
        gout[i] *= scale


@njit(cache=True)
def schaffer6_value(x):
    q = x[0] * x[0] + x[1] * x[1]
    r = math.sqrt(q)
    num = math.sin(r) ** 2 - 0.5
    den = (1.0 + 0.001 * q) ** 2
    return 0.5 + num / den


@njit(cache=True)
def schaffer6_grad(x, gout):
    q = x[0] * x[0] + x[1] * x[1]
    if q == 0.0:
        gout[0] = 0.0
        gout[1] = 0.0
        return
    r = math.sqrt(q)
    u = 1.0 + 0.001 * q
    num = math.sin(r) ** 2 - 0.5
    df_dq = (math.sin(2.0 * r) / (2.0 * r) * u * u - num * 2.0 * u * 0.001) / u ** 4
    gout[0] = df_dq * 2.0 * x[0]
    gout[1] = df_dq * 2.0 * x[1]


@njit(cache=True)
def lunacek_value(x, fp):
    mu1 = fp[0]
    d = fp[1]
    s = fp[2]
    mu2 = fp[3]
    n = x.size
    b1 = 0.0
    b2 = 0.0
    ripple = 0.0
    for i in range(n):
        t1 = x[i] - mu1
        t2 = x[i] - mu2
        b1 += t1 * t1
        b2 += t2 * t2
        ripple += 1.0 - math.cos(TWO_PI * t1)
    b2 = d * n + s * b2
    lo = b1 if b1 <= b2 else b2
    return lo + 10.0 * ripple


@njit(cache=True)
def lunacek_grad(x, fp, gout):
    mu1 = fp[0]
    d = fp[1]
    s = fp[2]
    mu2 = fp[3]
    n = x.size
    b1 = 0.0
    b2 = 0.0
    for i in range(n):
        t1 = x[i] - mu1
        t2 = x[i] - mu2
        b1 += t1 * t1
        b2 += t2 * t2
    b2 = d * n + s * b2
    for i in range(n):
        t1 = x[i] - mu1
        if b1 <= b2:
            gout[i] = 2.0 * t1
        else:
            gout[i] = 2.0 * s * (x[i] - mu2)
        gout[i] += 20.0 * math.pi * math.sin(TWO_PI * t1)


@njit(cache=True)
def gaussmix_value(x, gw, gz, gc):
    total = 0.0
    for i in range(gw.size):
        d2 = 0.0
        for j in range(x.size):
            t = x[j] - gc[i, j]
            d2 += t * t
        e = -gz[i] * d2
        if e > -745.0:
            total += gw[i] * math.exp(e)
    return total


@njit(cache=True)
def gaussmix_grad(x, gw, gz, gc, gout):
    m = x.size
    for j in range(m):
        gout[j] = 0.0
    for i in range(gw.size):
        d2 = 0.0
        for j in range(m):
            t = x[j] - gc[i, j]
            d2 += t * t
        e = -gz[i] * d2
        if e > -745.0:
            coef = gw[i] * math.exp(e) * (-2.0 * gz[i])
            for j in range(m):
                gout[j] += coef * (x[j] - gc[i, j])


@njit(cache=True)
def value(fid, x, fp, gw, gz, gc):
    if fid == FID_ACKLEY:
        return ackley_value(x)
    elif fid == FID_ACKLEY_DECOUPLED:
        return ackley_decoupled_value(x)
    elif fid == FID_RASTRIGIN:
        return rastrigin_value(x)
    elif fid == FID_SCHWEFEL:
        return schwefel_value(x)
    elif fid == FID_SCHAFFER_F7:
        return schaffer7_value(x)
    elif fid == FID_SCHAFFER_F6:
        return schaffer6_value(x)
    elif fid == FID_LUNACEK:
        return lunacek_value(x, fp)
    else:
        return gaussmix_value(x, gw, gz, gc)


@njit(cache=True)
def value_and_grad(fid, x, fp, gw, gz, gc, gout):
    if fid == FID_ACKLEY:
        ackley_grad(x, gout)
        return ackley_value(x)
    elif fid == FID_ACKLEY_DECOUPLED:
        ackley_decoupled_grad(x, gout)
        return ackley_decoupled_value(x)
    elif fid == FID_RASTRIGIN:
        rastrigin_grad(x, gout)
        return rastrigin_value(x)
    elif fid == FID_SCHWEFEL:
        schwefel_grad(x, gout)
        return schwefel_value(x)
    elif fid == FID_SCHAFFER_F7:
        schaffer7_grad(x, gout)
        return schaffer7_value(x)
    elif fid == FID_SCHAFFER_F6:
        schaffer6_grad(x, gout)
        return schaffer6_value(x)
    elif fid == FID_LUNACEK:
        lunacek_grad(x, fp, gout)
        return lunacek_value(x, fp)
    else:
        gaussmix_grad(x, gw, gz, gc, gout)
        return gaussmix_value(x, gw, gz, gc)
