"""Vectorized numpy implementations of the objective kernels.

These are the fallback twins of the numba loop kernels in
``_kernels_numba``; both expose the same dispatch surface:

    value(fid, x, fp, gw, gz, gc) -> float
    value_and_grad(fid, x, fp, gw, gz, gc, gout) -> float

``fp`` holds per-function constants (only used by the two-funnel
function), ``gw``/``gz``/``gc`` hold the Gaussian-mixture weights,
widths and centers (empty for the closed-form functions).
"""

import numpy as np

FID_ACKLEY = 0
FID_ACKLEY_DECOUPLED = 1
FID_RASTRIGIN = 2
FID_SCHWEFEL = 3
FID_SCHAFFER_F7 = 4
FID_SCHAFFER_F6 = 5
FID_LUNACEK = 6
FID_GAUSSMIX = 7

SCHWEFEL_OFFSET = 418.9829
TWO_PI = 2.0 * np.pi


def ackley_value(x):
    n = x.size
    a = np.sqrt(np.dot(x, x) / n)
    b = np.sum(np.cos(TWO_PI * x)) / n
    return -20.0 * np.exp(-0.2 * a) - np.exp(b) + 20.0 + np.e


def ackley_grad(x, gout):
    n = x.size
    a = np.sqrt(np.dot(x, x) / n)
    b = np.sum(np.cos(TWO_PI * x)) / n
    if a == 0.0:
        gout[:] = 0.0
        return
    c1 = 4.0 * np.exp(-0.2 * a) / (n * a)
    c2 = TWO_PI * np.exp(b) / n
    gout[:] = c1 * x + c2 * np.sin(TWO_PI * x)


def ackley_decoupled_value(x):
    # Separable potential whose gradient is the dimension-decoupled
    # variant of the Ackley gradient; shifted so the minimum value is 0.
    n = x.size
    rn = np.sqrt(n)
    return float(
        np.sum(20.0 - 20.0 * np.exp(-0.2 * np.abs(x) / rn))
        + np.sum(np.exp(1.0 / n) - np.exp(np.cos(TWO_PI * x) / n))
    )


def ackley_decoupled_grad(x, gout):
    n = x.size
    rn = np.sqrt(n)
    pull = np.where(
        x == 0.0, 0.0, 4.0 * np.sign(x) * np.exp(-0.2 * np.abs(x) / rn) / rn
    )
    ripple = TWO_PI * np.sin(TWO_PI * x) * np.exp(np.cos(TWO_PI * x) / n) / n
    gout[:] = pull + ripple


def rastrigin_value(x):
    n = x.size
    outside = np.abs(x) > 5.12
    terms = np.where(outside, 10.0 * x * x, x * x - 10.0 * np.cos(TWO_PI * x))
    return 10.0 * n + float(np.sum(terms))


def rastrigin_grad(x, gout):
    outside = np.abs(x) > 5.12
    gout[:] = np.where(outside, 20.0 * x, 2.0 * x + 20.0 * np.pi * np.sin(TWO_PI * x))


def schwefel_value(x):
    n = x.size
    ax = np.abs(x)
    outside = ax > 500.0
    terms = np.where(outside, 0.02 * x * x, -x * np.sin(np.sqrt(ax)))
    return SCHWEFEL_OFFSET * n + float(np.sum(terms))


def schwefel_grad(x, gout):
    ax = np.abs(x)
    r = np.sqrt(ax)
    inside = np.where(ax == 0.0, 0.0, -np.sin(r) - 0.5 * r * np.cos(r))
    gout[:] = np.where(ax > 500.0, 0.04 * x, inside)


def _schaffer7_pair_terms(x):
    s = np.sqrt(x[:-1] ** 2 + x[1:] ** 2)
    s5 = s ** 0.2
    t = np.sqrt(s) * (np.sin(50.0 * s5) + 1.0)
    return s, s5, t


def schaffer7_value(x):
    n = x.size
    _, _, t = _schaffer7_pair_terms(x)
    total = np.sum(t) / (n - 1)
    return float(total * total)


def schaffer7_grad(x, gout):
    n = x.size
    s, s5, t = _schaffer7_pair_terms(x)
    total = np.sum(t)
    # dt/ds for each adjacent pair; pairs with s == 0 contribute nothing
    with np.errstate(divide="ignore", invalid="ignore"):
        dt_ds = np.where(
            s == 0.0,
            0.0,
            (np.sin(50.0 * s5) + 1.0) / (2.0 * np.sqrt(s))
            + 10.0 * np.cos(50.0 * s5) / s ** 0.3,
        )
        ratio = np.where(s == 0.0, 0.0, dt_ds / s)
    gout[:] = 0.0
    gout[:-1] += ratio * x[:-1]
    gout[1:] += ratio * x[1:]
    gout *= 2.0 * total / (n - 1) ** 2


def schaffer6_value(x):
    q = x[0] * x[0] + x[1] * x[1]
    r = np.sqrt(q)
    num = np.sin(r) ** 2 - 0.5
    den = (1.0 + 0.001 * q) ** 2
    return float(0.5 + num / den)


def schaffer6_grad(x, gout):
    q = x[0] * x[0] + x[1] * x[1]
    if q == 0.0:
        gout[:] = 0.0
        return
    r = np.sqrt(q)
    u = 1.0 + 0.001 * q
    num = np.sin(r) ** 2 - 0.5
    df_dq = (np.sin(2.0 * r) / (2.0 * r) * u * u - num * 2.0 * u * 0.001) / u ** 4
    gout[0] = df_dq * 2.0 * x[0]
    gout[1] = df_dq * 2.0 * x[1]


def lunacek_value(x, fp):
    mu1, d, s, mu2 = fp[0], fp[1], fp[2], fp[3]
    n = x.size
    b1 = float(np.sum((x - mu1) ** 2))
    b2 = d * n + s * float(np.sum((x - mu2) ** 2))
    ripple = 10.0 * float(np.sum(1.0 - np.cos(TWO_PI * (x - mu1))))
    return min(b1, b2) + ripple


def lunacek_grad(x, fp, gout):
    mu1, d, s, mu2 = fp[0], fp[1], fp[2], fp[3]
    n = x.size
    b1 = float(np.sum((x - mu1) ** 2))
    b2 = d * n + s * float(np.sum((x - mu2) ** 2))
    if b1 <= b2:
        gout[:] = 2.0 * (x - mu1)
    else:
        gout[:] = 2.0 * s * (x - mu2)
    gout += 20.0 * np.pi * np.sin(TWO_PI * (x - mu1))


def gaussmix_value(x, gw, gz, gc):
    d2 = np.sum((gc - x) ** 2, axis=1)
    return float(np.sum(gw * np.exp(-gz * d2)))


def gaussmix_grad(x, gw, gz, gc, gout):
    diff = x - gc
    d2 = np.sum(diff * diff, axis=1)
    coef = gw * np.exp(-gz * d2) * (-2.0 * gz)
    gout[:] = coef @ diff


def value(fid, x, fp, gw, gz, gc):
    if fid == FID_ACKLEY:
        return ackley_value(x)
    if fid == FID_ACKLEY_DECOUPLED:
        return ackley_decoupled_value(x)
    if fid == FID_RASTRIGIN:
        return rastrigin_value(x)
    if fid == FID_SCHWEFEL:
        return schwefel_value(x)
    if fid == FID_SCHAFFER_F7:
        return schaffer7_value(x)
    if fid == FID_SCHAFFER_F6:
        return schaffer6_value(x)
    if fid == FID_LUNACEK:
        return lunacek_value(x, fp)
    if fid == FID_GAUSSMIX:
        return gaussmix_value(x, gw, gz, gc)
    raise ValueError("unknown function id")


def value_and_grad(fid, x, fp, gw, gz, gc, gout):
    if fid == FID_ACKLEY:
        ackley_grad(x, gout)
        return ackley_value(x)
    if fid == FID_ACKLEY_DECOUPLED:
        ackley_decoupled_grad(x, gout)
        return ackley_decoupled_value(x)
    if fid == FID_RASTRIGIN:
        rastrigin_grad(x, gout)
        return rastrigin_value(x)
    if fid == FID_SCHWEFEL:
        schwefel_grad(x, gout)
        return schwefel_value(x)
    if fid == FID_SCHAFFER_F7:
        schaffer7_grad(x, gout)
        return schaffer7_value(x)
    if fid == FID_SCHAFFER_F6:
        schaffer6_grad(x, gout)
        return schaffer6_value(x)
    if fid == FID_LUNACEK:
        lunacek_grad(x, fp, gout)
        return lunacek_value(x, fp)
    if fid == FID_GAUSSMIX:
        gaussmix_grad(x, gw, gz, gc, gout)
        return gaussmix_value(x, gw, gz, gc)
    raise ValueError("unknown function id")
