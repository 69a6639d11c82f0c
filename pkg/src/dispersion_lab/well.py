"""Exact second-rank solution in a sheared infinite well and its derived fields.

The phase-space wave function depends on (x, v, t) only through the
characteristic eta = x - v t, so its density is transported rigidly while the
phase region {|x - vt| < dx/2, |v| < dv/2} shears. Integrating over velocity
gives piecewise closed forms on three bands in x:

    left  band   -(dx + s) < 2x <= -|dx - s|
    central band -|dx - s| < 2x <=  |dx - s|
    right band    |dx - s| < 2x <=  dx + s

with s = t*dv. The band formulas switch at t = dx/dv; at that instant the
large-time forms are used (both agree there).

Everything here is vectorized over ``x`` (and ``v``); time is a scalar.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UndefinedFieldError
from .numerics import gauss_legendre, integrate_adaptive, region_decompose
from .special import rect, sinc


@dataclass(frozen=True)
class WellParams:
    dx: float = 1.0
    dv: float = 1.0
    hbar2: float = 1.0
    m: float = 1.0
    n: int = 0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("dx", "dv", "hbar2", "m", "hbar"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.n < 0:
            raise DomainError("state index must be non-negative")

    @property
    def eta0(self):
        return self.dx / 2.0

    @property
    def g_n(self):
        return math.pi * (2 * self.n + 1) / self.dx

    @property
    def energy(self):
        return energy_even(self)

    @property
    def t_switch(self):
        """Time at which the central band changes shape, dx/dv."""
        return self.dx / self.dv

    def tau(self, t):
        return t * self.g_n * self.dv


def energy_even(p):
    return p.hbar2**2 * math.pi**2 * (2 * p.n + 1) ** 2 / (8.0 * p.m * p.eta0**2)


def energy_odd(p, k):
    if k < 1:
        raise DomainError("odd states start at k = 1")
    return p.hbar2**2 * math.pi**2 * k**2 / (2.0 * p.m * p.eta0**2)


def mode_even(p, eta):
    """Even standing wave on [-eta0, eta0], normalized over the phase region."""
    eta = np.asarray(eta, dtype=float)
    amp = math.sqrt(2.0 / (p.dx * p.dv))
    return np.where(np.abs(eta) < p.eta0, amp * np.cos(p.g_n * eta), 0.0)


def mode_odd(p, k, eta):
    eta = np.asarray(eta, dtype=float)
    amp = math.sqrt(2.0 / (p.dx * p.dv))
    return np.where(np.abs(eta) < p.eta0, amp * np.sin(math.pi * k * eta / p.eta0), 0.0)


# --------------------------------------------------------------------------
# rank 2


def in_region(p, x, v, t):
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    return (np.abs(x - v * t) < p.eta0) & (np.abs(v) < 0.5 * p.dv)


def phase12(p, t):
    return -p.energy * t**3 / (3.0 * p.hbar2)


def psi12(p, x, v, t):
    eta = np.asarray(x, dtype=float) - np.asarray(v, dtype=float) * t
    amp = math.sqrt(2.0 / (p.dx * p.dv))
    inside = in_region(p, x, v, t)
    return np.where(inside, amp * np.cos(p.g_n * eta), 0.0) * np.exp(1j * phase12(p, t))


def f12(p, x, v, t):
    eta = np.asarray(x, dtype=float) - np.asarray(v, dtype=float) * t
    return np.where(in_region(p, x, v, t), 2.0 / (p.dx * p.dv) * np.cos(p.g_n * eta) ** 2, 0.0)


def potential12(p, x, v, t):
    """t^2 U(x - vt) for the flat-bottomed well: zero inside, infinite on and
    beyond the walls."""
    eta = np.asarray(x, dtype=float) - np.asarray(v, dtype=float) * t
    return np.where(np.abs(eta) < p.eta0, 0.0, np.inf)


def quantum_potential_rank2(p, t):
    return t * t * p.energy


def quantum_potential_rank2_fd(p, x, v, t, h=1e-3):
    """-(hbar2^2/2m) d_vv|psi| / |psi| by central differences."""
    amp = lambda vv: np.abs(psi12(p, x, vv, t))
    mid = amp(v)
    if np.any(mid <= 0):
        raise UndefinedFieldError("|psi12| vanishes on the stencil")
    lap = (amp(v + h) - 2.0 * mid + amp(v - h)) / (h * h)
    return -(p.hbar2**2 / (2.0 * p.m)) * lap / mid


def hamilton12(p, t):
    return p.energy * t * t


# --------------------------------------------------------------------------
# band bookkeeping


def band_edges(p, t):
    """(inner, outer) half-widths: the central band is |x| <= inner, the
    support is |x| < outer."""
    s = t * p.dv
    return 0.5 * abs(p.dx - s), 0.5 * (p.dx + s)


def _bands(p, x, t):
    two_x = 2.0 * x
    s = t * p.dv
    gap = abs(p.dx - s)
    wide = p.dx + s
    left = (-wide < two_x) & (two_x <= -gap)
    mid = (-gap < two_x) & (two_x <= gap)
    right = (gap < two_x) & (two_x <= wide)
    return left, mid, right


def _early(p, t):
    return 0.0 < t * p.dv < p.dx


def _g(p, x, t):
    gn, dx, dv = p.g_n, p.dx, p.dv
    arg = 2.0 * x + t * dv
    return (arg + dx) / (2.0 * t * dx * dv) + np.sin(gn * arg) / (2.0 * gn * t * dx * dv)


def _h(p, x, t):
    gn, dx, dv = p.g_n, p.dx, p.dv
    arg = 2.0 * x + t * dv
    return (
        ((2.0 * x + dx) ** 2 - t * t * dv * dv) / (8.0 * t * t * dx * dv)
        - np.cos(0.5 * gn * arg) ** 2 / (2.0 * gn * gn * t * t * dx * dv)
        - np.sin(gn * arg) / (4.0 * gn * t * dx)
    )


def _h_bar(p, x, t):
    gn, dx, dv = p.g_n, p.dx, p.dv
    arg = 2.0 * x + t * dv
    return (
        ((2.0 * x + dx) ** 3 + (t * dv) ** 3) / (24.0 * t**3 * dx * dv)
        - (2.0 * x + dx) / (4.0 * gn * gn * t**3 * dx * dv)
        + np.cos(gn * arg) / (4.0 * gn * gn * t * t * dx)
        + dv / (8.0 * gn * t * dx) * (1.0 - 2.0 / (gn * gn * t * t * dv * dv)) * np.sin(gn * arg)
    )


def _h_tilde(p, x, t):
    gn, dx, dv = p.g_n, p.dx, p.dv
    tau = gn * t * dv
    return dv * dv / (12.0 * dx) + dv * np.cos(2.0 * gn * x) / (4.0 * gn * t * dx) * (
        (1.0 - 2.0 / (tau * tau)) * np.sin(tau) + 2.0 / tau * np.cos(tau)
    )


def _check_time(t):
    if t < 0:
        raise DomainError("time must be non-negative")


# --------------------------------------------------------------------------
# rank 1: density and velocity moments


def f1(p, x, t):
    """Coordinate density: velocity marginal of the rank-2 density."""
    _check_time(t)
    x = np.asarray(x, dtype=float)
    gn, dx = p.g_n, p.dx
    if t == 0:
        return np.where(np.abs(x) < 0.5 * dx, 2.0 / dx * np.cos(gn * x) ** 2, 0.0)
    left, mid, right = _bands(p, x, t)
    return np.select([left, mid, right], [_g(p, x, t), _f1_central(p, x, t), _g(p, -x, t)], 0.0)


def _f1_central(p, x, t):
    if _early(p, t):
        return (1.0 + sinc(p.tau(t)) * np.cos(2.0 * p.g_n * x)) / p.dx
    return np.full_like(x, 1.0 / (t * p.dv))


def f2(p, v, t=0.0):
    """Velocity density; independent of time. Equals |psi2|^2."""
    return rect(np.asarray(v, dtype=float) / p.dv) ** 2 / p.dv


def flux_v(p, x, t):
    """Probability current f1 * <v>."""
    _check_time(t)
    x = np.asarray(x, dtype=float)
    if t == 0:
        return np.zeros_like(x)
    left, mid, right = _bands(p, x, t)
    return np.select([left, mid, right], [_h(p, x, t), _flux_central(p, x, t), -_h(p, -x, t)], 0.0)


def _flux_central(p, x, t):
    gn = p.g_n
    if _early(p, t):
        tau = p.tau(t)
        return np.sin(2.0 * gn * x) / (2.0 * gn * t * p.dx) * (sinc(tau) - math.cos(tau))
    return x / (t * t * p.dv)


def flux_v2(p, x, t):
    """f1 * <v^2>.

    The large-time central band is the exact velocity integral
    ((x^2 + dx^2/12) - 1/(2 G^2)) / (t^3 dv); see README for the derivation.
    """
    _check_time(t)
    x = np.asarray(x, dtype=float)
    gn, dx, dv = p.g_n, p.dx, p.dv
    if t == 0:
        return np.where(np.abs(x) < 0.5 * dx, dv * dv / (6.0 * dx) * np.cos(gn * x) ** 2, 0.0)
    left, mid, right = _bands(p, x, t)
    if _early(p, t):
        central = _h_tilde(p, x, t)
    else:
        central = (x * x + dx * dx / 12.0 - 1.0 / (2.0 * gn * gn)) / (t**3 * dv)
    return np.select([left, mid, right], [_h_bar(p, x, t), central, _h_bar(p, -x, t)], 0.0)


def _require_support(p, x, t):
    _, outer = band_edges(p, t)
    if np.any(np.abs(np.asarray(x, dtype=float)) >= outer):
        raise UndefinedFieldError(f"x outside the support |x| < {outer} at t = {t}")


def mean_v(p, x, t):
    """Velocity of the probability flow, <v> = flux / f1."""
    _check_time(t)
    _require_support(p, x, t)
    x = np.asarray(x, dtype=float)
    if t == 0:
        return np.zeros_like(x)
    return flux_v(p, x, t) / f1(p, x, t)


def mean_v2(p, x, t):
    _check_time(t)
    _require_support(p, x, t)
    x = np.asarray(x, dtype=float)
    if t == 0:
        return np.full_like(x, p.dv * p.dv / 12.0)
    return flux_v2(p, x, t) / f1(p, x, t)


def pressure(p, x, t):
    """Velocity dispersion f1 (<v^2> - <v>^2); zero outside the support."""
    x = np.asarray(x, dtype=float)
    dens = f1(p, x, t)
    j = flux_v(p, x, t)
    pos = dens > 0
    return np.where(pos, flux_v2(p, x, t) - j * j / np.where(pos, dens, 1.0), 0.0)


def velocity_slice(p, x, t):
    """(lo, hi) velocity limits of the phase region at fixed x; lo >= hi
    means x lies outside."""
    x = np.asarray(x, dtype=float)
    lo = np.full_like(x, -0.5 * p.dv)
    hi = np.full_like(x, 0.5 * p.dv)
    if t > 0:
        lo = np.maximum(lo, (x - p.eta0) / t)
        hi = np.minimum(hi, (x + p.eta0) / t)
    elif t == 0:
        outside = np.abs(x) >= p.eta0
        lo = np.where(outside, 0.0, lo)
        hi = np.where(outside, 0.0, hi)
    return lo, hi


def central_moment3(p, x, t, order=48):
    """Third central velocity moment, integral of (v - <v>)^3 f12 dv, by a
    Gauss-Legendre rule over the exact velocity slice."""
    x = np.asarray(x, dtype=float)
    _require_support(p, x, t)
    lo, hi = velocity_slice(p, x, t)
    mv = mean_v(p, x, t)
    integrand = lambda v: (v - mv) ** 3 * f12_unbounded(p, x, v, t)
    return gauss_legendre(integrand, lo, hi, order=order)


def f12_unbounded(p, x, v, t):
    """The rank-2 density formula without the support mask, for quadrature
    over limits that already encode the region."""
    return 2.0 / (p.dx * p.dv) * np.cos(p.g_n * (x - v * t)) ** 2


# --------------------------------------------------------------------------
# rank 1: phase, Hamilton function, potentials


def phase1(p, x, t, quad_tol=None, order=64):
    """phi1(x, t) = (m/hbar) * integral_0^x <v>(y, t) dy.

    The integral is split at the central-band edge. By default each smooth
    piece is done with a fixed Gauss-Legendre rule so that phi1 is smooth in
    (x, t) and can be differentiated numerically; passing ``quad_tol``
    switches to adaptive Simpson (scalar x only).
    """
    _check_time(t)
    _require_support(p, x, t)
    x = np.asarray(x, dtype=float)
    scale = p.m / p.hbar
    if t == 0:
        return np.zeros_like(x)
    inner, _ = band_edges(p, t)
    if quad_tol is not None:
        if x.ndim:
            return np.array([phase1(p, xi, t, quad_tol=quad_tol) for xi in x.ravel()]).reshape(x.shape)
        fn = lambda y: float(mean_v(p, y, t))
        lo, hi = (0.0, float(x)) if x >= 0 else (float(x), 0.0)
        val = integrate_adaptive(fn, lo, hi, tol=quad_tol, kinks=(-inner, inner))
        return scale * (val if x >= 0 else -val)
    ax = np.abs(x)
    # each piece lies inside one band, so only that band's formula is needed
    vel_mid = lambda y: _flux_central(p, y, t) / _f1_central(p, y, t)
    vel_right = lambda y: -_h(p, -y, t) / _g(p, -y, t)
    # <v> peaks sharply near the nodes of f1 at early times
    panels = 4 * (2 * p.n + 1)
    central = _composite_gl(vel_mid, np.zeros_like(ax), np.minimum(ax, inner), panels, order)
    outer = _composite_gl(vel_right, np.full_like(ax, inner), np.maximum(ax, inner), panels, order)
    # <v> is odd in x, so the integral from the origin is even
    return scale * (central + outer)


def _composite_gl(fn, a, b, panels, order):
    step = (b - a) / panels
    return sum(
        gauss_legendre(fn, a + k * step, a + (k + 1) * step, order=order) for k in range(panels)
    )


def psi1(p, x, t):
    return np.sqrt(f1(p, x, t)) * np.exp(1j * phase1(p, x, t))


def _dt(fn, t, h):
    # one-sided second-order stencil keeps t - h from going negative
    if t - h < 0:
        return (-3.0 * fn(t) + 4.0 * fn(t + h) - fn(t + 2.0 * h)) / (2.0 * h)
    return (fn(t + h) - fn(t - h)) / (2.0 * h)


def hamilton1(p, x, t, h=1e-4):
    """H1 = -hbar * d phi1 / dt by central differences."""
    return -p.hbar * _dt(lambda tt: phase1(p, x, tt), t, h)


def potential_v1(p, x, t, h=1e-4):
    """Classical potential V1 = H1 - (m/2) <v>^2."""
    mv = mean_v(p, x, t)
    return hamilton1(p, x, t, h) - 0.5 * p.m * mv * mv


def quantum_potential_rank1(p, x, t, h=1e-4):
    """-(hbar^2/2m) d_xx sqrt(f1) / sqrt(f1) by central differences."""
    x = np.asarray(x, dtype=float)
    stencil = [f1(p, x + d, t) for d in (-h, 0.0, h)]
    if any(np.any(s <= 0) for s in stencil):
        raise UndefinedFieldError("f1 vanishes on the stencil")
    r = [np.sqrt(s) for s in stencil]
    lap = (r[0] - 2.0 * r[1] + r[2]) / (h * h)
    return -(p.hbar**2 / (2.0 * p.m)) * lap / r[1]


def force_pressure(p, x, t, h=1e-4):
    """-(m / f1) dP/dx, the pressure force per unit density."""
    x = np.asarray(x, dtype=float)
    dens = f1(p, x, t)
    if np.any(dens <= 0):
        raise UndefinedFieldError("f1 vanishes")
    dp = (pressure(p, x + h, t) - pressure(p, x - h, t)) / (2.0 * h)
    return -p.m * dp / dens


# --------------------------------------------------------------------------
# velocity space


def psi2(p, v, t=0.0, phase_fn=None):
    ph = 0.0 if phase_fn is None else phase_fn(t)
    return rect(np.asarray(v, dtype=float) / p.dv) / math.sqrt(p.dv) * np.exp(1j * ph)


def psi2_position(p, x, t=0.0, phase_fn=None):
    """Inverse Fourier image of psi2 with kernel (m / sqrt(2 pi hbar)) e^{i x m v / hbar}."""
    ph = 0.0 if phase_fn is None else phase_fn(t)
    x = np.asarray(x, dtype=float)
    amp = p.m * math.sqrt(p.dv / (2.0 * math.pi * p.hbar))
    return amp * sinc(p.m * p.dv * x / (2.0 * p.hbar)) * np.exp(1j * ph)


# --------------------------------------------------------------------------
# quadrature oracles over the decomposed region


def region_slice(p, x, t):
    """Velocity limits at scalar x read off the decomposed phase region."""
    region = region_decompose(p.dx, p.dv, t)
    for part in region.parts:
        if not part.empty and part.x_lo < x <= part.x_hi:
            lo, hi = part.v_bounds(x)
            return lo, hi
    return 0.0, 0.0


def moment_quadrature(p, x, t, k, tol=1e-12):
    """integral v^k f12(x, v, t) dv by adaptive Simpson over the region slice."""
    lo, hi = region_slice(p, float(x), t)
    if hi <= lo:
        return 0.0
    a = 2.0 / (p.dx * p.dv)
    gn = p.g_n
    fn = lambda v: v**k * a * math.cos(gn * (x - v * t)) ** 2
    return integrate_adaptive(fn, lo, hi, tol=tol)


def normalization(p, t, tol=1e-10):
    """Double integral of f12 over the decomposed phase region."""
    region = region_decompose(p.dx, p.dv, t)
    a = 2.0 / (p.dx * p.dv)
    gn = p.g_n
    total = 0.0
    for part in region.parts:
        if part.empty:
            continue

        def inner(x, part=part):
            lo, hi = part.v_bounds(x)
            if hi <= lo:
                return 0.0
            return integrate_adaptive(lambda v: a * math.cos(gn * (x - v * t)) ** 2, lo, hi, tol=0.1 * tol)

        total += integrate_adaptive(inner, part.x_lo, part.x_hi, tol=tol)
    return total
