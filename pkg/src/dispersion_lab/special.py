"""Orthogonal polynomials and elementary special functions.

All functions accept scalars or numpy arrays for the real argument and
return the same shape.
"""

import numpy as np

_SINC_SERIES_CUTOFF = 1e-4


def hermite(s, x):
    """Physicists' Hermite polynomial H_s(x) by three-term recurrence."""
    if s < 0:
        raise ValueError(f"order must be non-negative, got {s}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if s == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for k in range(2, s + 1):
        h_prev, h = h, 2.0 * x * h - 2.0 * (k - 1) * h_prev
    return h if h.ndim else float(h)


def laguerre(s, x):
    """Laguerre polynomial L_s(x) by three-term recurrence."""
    if s < 0:
        raise ValueError(f"order must be non-negative, got {s}")
    x = np.asarray(x, dtype=float)
    l_prev = np.ones_like(x)
    if s == 0:
        return l_prev if l_prev.ndim else float(l_prev)
    l = 1.0 - x
    for k in range(1, s):
        l_prev, l = l, ((2 * k + 1 - x) * l - k * l_prev) / (k + 1)
    return l if l.ndim else float(l)


def sinc(x):
    """Unnormalized sinc, sin(x)/x, with the removable singularity filled."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    x2 = x * x
    out = np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)
    return out if out.ndim else float(out)


def rect(x):
    """Rectangle function: 1 inside |x| < 1/2, 1/2 on the edge, 0 outside."""
    x = np.asarray(x, dtype=float)
    a = np.abs(x)
    out = np.where(a < 0.5, 1.0, np.where(a == 0.5, 0.5, 0.0))
    return out if out.ndim else float(out)
