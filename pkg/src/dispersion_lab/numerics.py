"""Grids, finite-difference operators, quadrature and the sheared phase region.

Samplers are plain callables over numpy arrays. Finite-difference helpers take
the sampler, a point given as a tuple of coordinates with time last, and a step.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, DomainError

# --------------------------------------------------------------------------
# constants and grids


@dataclass(frozen=True)
class ChainConstants:
    """Constants of one kinematic order: alpha = -hbar_n/2m, beta = 1/hbar_n,
    gamma = -q/m."""

    hbar_n: float = 1.0
    m: float = 1.0
    q: float = 0.0
    n: int = 1

    def __post_init__(self):
        if not self.hbar_n > 0:
            raise DomainError(f"hbar_n must be positive, got {self.hbar_n}")
        if not self.m > 0:
            raise DomainError(f"mass must be positive, got {self.m}")

    @classmethod
    def from_ladder(cls, hbar, omega, n, m=1.0, q=0.0):
        """Order-n constants with hbar_n = hbar * omega**(2(n-1))."""
        if n < 1:
            raise DomainError("kinematic order starts at 1")
        return cls(hbar_n=hbar * omega ** (2 * (n - 1)), m=m, q=q, n=n)

    @property
    def alpha(self):
        return -self.hbar_n / (2.0 * self.m)

    @property
    def beta(self):
        return 1.0 / self.hbar_n

    @property
    def gamma(self):
        return -self.q / self.m


@dataclass(frozen=True)
class Grid1D:
    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"empty grid [{self.lo}, {self.hi}]")
        if self.count < 3:
            raise DomainError("grid needs at least 3 points")

    @property
    def h(self):
        return (self.hi - self.lo) / (self.count - 1)

    def points(self):
        return np.linspace(self.lo, self.hi, self.count)

    def interior(self):
        return self.points()[1:-1]

    def spec(self):
        return {"lo": self.lo, "hi": self.hi, "count": self.count}


# --------------------------------------------------------------------------
# phase region


@dataclass(frozen=True)
class Subregion:
    """{(x, v): x_lo < x <= x_hi, lower(x) < v < upper(x)} with linear
    bounds given as (slope, intercept) pairs."""

    x_lo: float
    x_hi: float
    lower: tuple
    upper: tuple

    @property
    def empty(self):
        return not self.x_hi > self.x_lo

    def v_bounds(self, x):
        return (self.lower[0] * x + self.lower[1], self.upper[0] * x + self.upper[1])

    def area(self):
        if self.empty:
            return 0.0
        # bounds are linear so the trapezoid rule is exact
        lo_a, hi_a = self.v_bounds(self.x_lo)
        lo_b, hi_b = self.v_bounds(self.x_hi)
        return 0.5 * (self.x_hi - self.x_lo) * ((hi_a - lo_a) + (hi_b - lo_b))

    def contains(self, x, v):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        lo, hi = self.v_bounds(x)
        return (self.x_lo < x) & (x <= self.x_hi) & (lo < v) & (v < hi)


@dataclass(frozen=True)
class PhaseRegion:
    omega1: Subregion
    omega2: Subregion
    omega3: Subregion
    t: float
    dx: float
    dv: float

    @property
    def parts(self):
        return (self.omega1, self.omega2, self.omega3)

    def area(self):
        return sum(p.area() for p in self.parts)

    def contains(self, x, v):
        return self.omega1.contains(x, v) | self.omega2.contains(x, v) | self.omega3.contains(x, v)


def region_decompose(dx, dv, t):
    """Split the sheared parallelogram {|x - vt| < dx/2, |v| < dv/2} into the
    left wedge, central band and right wedge."""
    if not (dx > 0 and dv > 0):
        raise DomainError("dx and dv must be positive")
    if t < 0:
        raise DomainError("time must be non-negative")
    hv = 0.5 * dv
    flat_lo, flat_hi = (0.0, -hv), (0.0, hv)
    if t == 0:
        none = Subregion(-0.5 * dx, -0.5 * dx, flat_lo, flat_lo)
        return PhaseRegion(
            omega1=none,
            omega2=Subregion(-0.5 * dx, 0.5 * dx, flat_lo, flat_hi),
            omega3=Subregion(0.5 * dx, 0.5 * dx, flat_hi, flat_hi),
            t=t, dx=dx, dv=dv,
        )
    # v = (2x +- dx) / 2t along the characteristics eta = -+dx/2
    left_edge = (1.0 / t, dx / (2.0 * t))
    right_edge = (1.0 / t, -dx / (2.0 * t))
    spread = t * dv
    outer = 0.5 * (dx + spread)
    inner = 0.5 * abs(dx - spread)
    w1 = Subregion(-outer, -inner, flat_lo, left_edge)
    w3 = Subregion(inner, outer, right_edge, flat_hi)
    if spread <= dx:
        w2 = Subregion(-inner, inner, flat_lo, flat_hi)
    else:
        w2 = Subregion(-inner, inner, right_edge, left_edge)
    return PhaseRegion(w1, w2, w3, t=t, dx=dx, dv=dv)


# --------------------------------------------------------------------------
# quadrature


def integrate_adaptive(f, a, b, tol=1e-10, kinks=(), max_depth=40):
    """Adaptive Simpson quadrature of a scalar function on [a, b].

    The interval is first split at every abscissa in ``kinks`` lying inside
    it; each piece gets a share of ``tol`` proportional to its length.
    """
    if a > b:
        raise DomainError(f"lower limit {a} exceeds upper limit {b}")
    if a == b:
        return 0.0
    cuts = sorted({a, b, *(k for k in kinks if a < k < b)})
    total = 0.0
    failed = False
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        part, ok = _simpson_piece(f, lo, hi, tol * (hi - lo) / (b - a), max_depth)
        total += part
        failed |= not ok
    if failed:
        raise AccuracyError(f"adaptive Simpson exceeded depth {max_depth} on [{a}, {b}]", total)
    return total


def _simpson_piece(f, a, b, tol, max_depth):
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    total = 0.0
    ok = True
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, s, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        fl = f(0.5 * (lo + mid))
        fr = f(0.5 * (mid + hi))
        left = (mid - lo) * (flo + 4.0 * fl + fmid) / 6.0
        right = (hi - mid) * (fmid + 4.0 * fr + fhi) / 6.0
        delta = left + right - s
        if abs(delta) <= 15.0 * eps:
            total += left + right + delta / 15.0
        elif depth >= max_depth:
            total += left + right
            ok = False
        else:
            stack.append((lo, mid, flo, fl, fmid, left, 0.5 * eps, depth + 1))
            stack.append((mid, hi, fmid, fr, fhi, right, 0.5 * eps, depth + 1))
    return total, ok


_GL_CACHE = {}


def gauss_legendre(f, a, b, order=48):
    """Fixed-order Gauss-Legendre rule, vectorized over broadcast limits.

    ``f`` receives an array whose leading axis runs over the nodes. Unlike
    the adaptive rule the result is a smooth function of the limits and of
    any parameters baked into ``f``, which keeps nested finite differences
    of integrals clean.
    """
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    nodes, weights = _GL_CACHE[order]
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    shape = (order,) + (1,) * np.broadcast(a, b).ndim
    half = 0.5 * (b - a)
    pts = 0.5 * (a + b) + half * nodes.reshape(shape)
    vals = f(pts)
    return half * np.tensordot(weights, vals, axes=(0, 0))


# --------------------------------------------------------------------------
# finite differences


def _shift(point, axis, delta):
    pt = list(point)
    pt[axis] = pt[axis] + delta
    return pt


def fd_partial0(f, point, h):
    """Central difference in time (the last coordinate of ``point``)."""
    return (f(*_shift(point, -1, h)) - f(*_shift(point, -1, -h))) / (2.0 * h)


def fd_partial_n(f, point, velocity_args, h):
    """Convective derivative d/dt + sum_k w_k d/dxi_k by a central difference
    along the direction (w_1, ..., w_K, 0, ..., 1).

    ``velocity_args`` holds the multipliers w_k for the leading coordinates;
    e.g. for d_1 acting on f(x, v, t) pass (v,). A sampler constant along
    that direction gives an exactly zero difference.
    """
    point = list(point)
    dirs = list(velocity_args) + [0.0] * (len(point) - 1 - len(velocity_args)) + [1.0]
    fwd = [c + h * d for c, d in zip(point, dirs)]
    bwd = [c - h * d for c, d in zip(point, dirs)]
    return (f(*fwd) - f(*bwd)) / (2.0 * h)


def fd_grad(f, axis, point, h):
    """Central first derivative along coordinate ``axis``."""
    return (f(*_shift(point, axis, h)) - f(*_shift(point, axis, -h))) / (2.0 * h)


def fd_laplace(f, axis, point, h):
    """Central second derivative along coordinate ``axis``."""
    return (f(*_shift(point, axis, h)) - 2.0 * f(*point) + f(*_shift(point, axis, -h))) / (h * h)


# --------------------------------------------------------------------------
# convergence


def convergence_order(residual_fn, h_sequence, floor=1e-13):
    """Least-squares slope of log(residual) against log(h).

    Returns ``math.inf`` when every residual is below ``floor``: the discrete
    operator is then exact on the field and no order can be measured.
    """
    hs = np.asarray(list(h_sequence), dtype=float)
    if hs.size < 3:
        raise DomainError("need at least three step sizes")
    res = np.array([abs(float(residual_fn(h))) for h in hs])
    if np.all(res < floor):
        return math.inf
    res = np.maximum(res, np.finfo(float).tiny)
    slope, _ = np.polyfit(np.log(hs), np.log(res), 1)
    return float(slope)
