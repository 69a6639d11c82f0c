"""Residual engine for the governing equations of the chain.

Each check samples an equation at grid points by central differences, drops
points within a few steps of a branch kink or support edge, and reports
relative norms: the residual divided by the largest constituent term seen on
the sample set. The convergence order is the log-log slope over the step
ladder (h, h/2, h/4) with the same point set on every rung.

Samplers in a :class:`ChainFields` are vectorized over position (and
velocity) arrays with a scalar time: ``f(x, t)`` at rank 1, ``f(x, v, t)`` at
rank 2.
"""

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import oscillator as osc
from . import well
from .errors import CoverageError, DomainError, UndefinedFieldError
from .numerics import (
    ChainConstants,
    Grid1D,
    convergence_order,
    fd_grad,
    fd_laplace,
    fd_partial0,
    fd_partial_n,
)

DEFAULT_STEP = 1e-3
KINK_STEPS = 3  # exclusion radius around kinks, in steps
MAX_SKIPPED = 0.2
ROUNDOFF_FACTOR = 10.0


@dataclass(frozen=True)
class ResidualReport:
    equation: str
    grid: dict
    h: float
    linf: float
    l2: float
    order: float | None
    n_samples: int
    n_skipped: int = 0
    tol: float | None = None
    order_min: float | None = None

    @property
    def passed(self):
        ok = self.tol is None or self.linf < self.tol
        if self.order_min is not None and self.order is not None:
            ok = ok and self.order >= self.order_min
        return ok

    def to_json(self):
        order = self.order
        if order is not None and math.isinf(order):
            order = "inf"
        return {
            "equation": self.equation,
            "h": self.h,
            "linf": self.linf,
            "l2": self.l2,
            "order": order,
            "n_samples": self.n_samples,
            "n_skipped": self.n_skipped,
            "tol": self.tol,
            "passed": self.passed,
        }


def reports_to_json(reports):
    return json.dumps([r.to_json() for r in reports], indent=2, sort_keys=True)


@dataclass(frozen=True)
class SampleGrid:
    """Points x (and v) at each time; ``h`` is the coarsest rung of the
    step ladder."""

    x: Grid1D
    times: tuple
    v: Grid1D | None = None
    h: float = DEFAULT_STEP
    certify: bool = True

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError("step must be positive")
        if any(t < 0 for t in self.times):
            raise DomainError("times must be non-negative")

    def spec(self):
        out = {"x": self.x.spec(), "times": list(self.times), "h": self.h}
        if self.v is not None:
            out["v"] = self.v.spec()
        return out

    def points(self):
        """Sample coordinates at one time, flattened."""
        if self.v is None:
            return (self.x.points(),)
        xx, vv = np.meshgrid(self.x.points(), self.v.points(), indexing="ij")
        return xx.ravel(), vv.ravel()


def _always(*coords_and_t, margin=0.0):
    return np.ones_like(np.asarray(coords_and_t[0], dtype=float), dtype=bool)


@dataclass
class ChainFields:
    """Samplers describing one state at one rank.

    ``mean`` is the mean velocity at rank 1 and the mean acceleration at
    rank 2. ``valid(*coords, t, margin=...)`` marks points whose stencils stay
    at least ``margin`` away from kinks and support edges.
    """

    consts: ChainConstants
    rank: int
    density: Callable
    psi: Callable | None = None
    phase: Callable | None = None
    mean: Callable | None = None
    pressure: Callable | None = None
    moment3: Callable | None = None
    potential: Callable | None = None
    potential_v: Callable | None = None
    quantum: Callable | None = None
    hamilton: Callable | None = None
    mean_acc1: Callable | None = None
    valid: Callable = _always
    label: str = ""

    def __post_init__(self):
        if self.rank not in (1, 2):
            raise DomainError("only ranks 1 and 2 are supported")

    def check_consistency(self, grid, tol=1e-10):
        """|psi|^2 = f and 2 arg psi = 2 phase (mod 2 pi) on the grid."""
        if self.psi is None:
            return
        for t in grid.times:
            pts = grid.points()
            keep = self.valid(*pts, t, margin=0.0)
            pts = tuple(c[keep] for c in pts)
            if not pts[0].size:
                continue
            psi = self.psi(*pts, t)
            dens = self.density(*pts, t)
            scale = max(float(np.max(np.abs(dens))), 1e-300)
            if np.max(np.abs(np.abs(psi) ** 2 - dens)) > tol * scale:
                raise DomainError(f"|psi|^2 != f at t = {t} ({self.label})")
            if self.phase is not None:
                lit = np.abs(psi) > 1e-8 * math.sqrt(scale)
                # Phi = 2 phi + 2 pi j: the phase is fixed modulo pi
                drift = np.angle((psi[lit] * np.exp(-1j * self.phase(*pts, t)[lit])) ** 2)
                if drift.size and np.max(np.abs(drift)) > 1e-8:
                    raise DomainError(f"arg psi != phase at t = {t} ({self.label})")


# --------------------------------------------------------------------------
# engine


def _evaluate(components, pts, t, h):
    """Run each component on the point set; returns lists of residual and
    scale arrays, dropping points where a field is undefined."""
    try:
        out = [comp(*pts, t, h) for comp in components]
        return out, np.ones(pts[0].shape, dtype=bool)
    except UndefinedFieldError:
        pass
    # fall back to point-by-point to find the undefined ones
    ok = np.ones(pts[0].shape, dtype=bool)
    for i in range(pts[0].size):
        single = tuple(c[i : i + 1] for c in pts)
        try:
            for comp in components:
                comp(*single, t, h)
        except UndefinedFieldError:
            ok[i] = False
    kept = tuple(c[ok] for c in pts)
    return [comp(*kept, t, h) for comp in components], ok


def _sweep(components, fields, grid, h, reach):
    """Residuals and per-component scales at step ``h`` over all times."""
    margin = (KINK_STEPS + reach) * grid.h
    res = [[] for _ in components]
    scale = [0.0 for _ in components]
    n, skipped = 0, 0
    for t in grid.times:
        pts = grid.points()
        keep = fields.valid(*pts, t, margin=margin)
        pts = tuple(c[keep] for c in pts)
        if not pts[0].size:
            continue
        out, ok = _evaluate(components, pts, t, h)
        skipped += int(np.count_nonzero(~ok))
        n += int(np.count_nonzero(ok))
        for k, (r, terms) in enumerate(out):
            res[k].append(np.abs(np.asarray(r)).ravel())
            for term in terms:
                term = np.abs(np.asarray(term))
                if term.size:
                    scale[k] = max(scale[k], float(np.max(term)))
    return [np.concatenate(r) if r else np.zeros(0) for r in res], scale, n, skipped


def _normalized(res, scale, floor):
    out = []
    for r, s in zip(res, scale):
        # all constituent terms vanish: fall back to absolute norms
        out.append(r / (s if s > floor else 1.0))
    return np.concatenate(out)


def run_check(equation, components, fields, grid, tol, order_min=1.9, reach=1.0, floor=1e-12):
    """Sample ``components`` on ``grid`` and build a report.

    A component is ``comp(*coords, t, h) -> (residual, [terms])``; each
    component is normalized by the largest of its own terms.
    """
    res, scale, n, skipped = _sweep(components, fields, grid, grid.h, reach)
    total = n + skipped
    if total == 0:
        raise CoverageError(f"{equation}: no sample points survived exclusion")
    if skipped > MAX_SKIPPED * total:
        raise CoverageError(f"{equation}: {skipped} of {total} points undefined")
    r = _normalized(res, scale, floor)
    linf = float(np.max(r)) if r.size else 0.0
    l2 = float(np.linalg.norm(r))
    order = None
    if grid.certify:

        def rung(hh):
            rr, _, _, _ = _sweep(components, fields, grid, hh, reach)
            # keep the coarse-step scale so every rung shares a normalization
            z = _normalized(rr, scale, floor)
            return float(np.max(z)) if z.size else 0.0

        ladder = [grid.h, grid.h / 2, grid.h / 4]
        # second differences lose eps/h^2; below that a residual is exact
        noise = ROUNDOFF_FACTOR * np.finfo(float).eps / ladder[-1] ** 2
        order = convergence_order(rung, ladder, floor=max(noise, 1e-13))
    return ResidualReport(
        equation=equation,
        grid=grid.spec(),
        h=grid.h,
        linf=linf,
        l2=l2,
        order=order,
        n_samples=n,
        n_skipped=skipped,
        tol=tol,
        order_min=order_min if grid.certify else None,
    )


# --------------------------------------------------------------------------
# samplers derived from others


def _mul(a, b):
    return lambda *c: a(*c) * b(*c)


def mutate(sampler, amount, width=1.0):
    """sampler + amount * x / width: a tilt that no derivative check can
    absorb into a constant."""
    return lambda x, *rest: sampler(x, *rest) + amount * np.asarray(x) / width


def scaled(sampler, factor):
    return lambda *c: factor * sampler(*c)


# --------------------------------------------------------------------------
# rank 1


def residual_continuity_rank1(fields, grid, tol=1e-4, order_min=1.9):
    flux = _mul(fields.density, fields.mean)

    def comp(x, t, h):
        a = fd_partial0(fields.density, (x, t), h)
        b = fd_grad(flux, 0, (x, t), h)
        return a + b, [a, b]

    return run_check("continuity_rank1", [comp], fields, grid, tol, order_min)


def infer_potential_rank1(psi1, c1, grid, fields=None, tol=1e-3, order_min=1.9):
    """Potential U = [i hbar d_t psi + (hbar^2/2m) d_xx psi] / psi.

    Returns ``(U, report)``: U(x, t, h) is the real part, the report
    measures the imaginary part against the two constituent terms.
    """
    hb, m = c1.hbar_n, c1.m
    lit = 1e-10

    def ratio_terms(x, t, h):
        psi = psi1(x, t)
        if np.any(np.abs(psi) < lit):
            raise UndefinedFieldError("psi vanishes at a sample point")
        kin = (hb * hb / (2.0 * m)) * fd_laplace(psi1, 0, (x, t), h) / psi
        if t - h < 0:
            raise UndefinedFieldError("time stencil crosses t = 0")
        tim = 1j * hb * fd_partial0(psi1, (x, t), h) / psi
        return tim, kin

    def U(x, t, h):
        tim, kin = ratio_terms(x, t, h)
        return (tim + kin).real

    def comp(x, t, h):
        tim, kin = ratio_terms(x, t, h)
        return (tim + kin).imag, [tim.imag, kin.imag, (tim + kin).real]

    holder = fields or ChainFields(consts=c1, rank=1, density=lambda x, t: np.abs(psi1(x, t)) ** 2)
    return U, run_check("potential_rank1_imag", [comp], holder, grid, tol, order_min)


def quantum_potential_fd(density, c, axis=0):
    """(alpha/beta) d^2 sqrt(f) / sqrt(f) along coordinate ``axis``."""
    amp = lambda *c_: np.sqrt(density(*c_))

    def Q(*coords_t, h):
        a = amp(*coords_t)
        if np.any(a <= 0):
            raise UndefinedFieldError("density vanishes")
        return (c.alpha / c.beta) * fd_laplace(amp, axis, coords_t, h) / a

    return Q


def residual_hamilton_jacobi_rank1(fields, grid, tol=1e-3, order_min=1.9):
    """-hbar d_t phi - [(m/2)<v>^2 + U + Q] with U inferred from psi."""
    c = fields.consts
    U, _ = infer_potential_rank1(fields.psi, c, replace(grid, certify=False), fields)
    Q = quantum_potential_fd(fields.density, c)

    def comp(x, t, h):
        a = -c.hbar_n * fd_partial0(fields.phase, (x, t), h)
        mv = fields.mean(x, t)
        kin = 0.5 * c.m * mv * mv
        u = U(x, t, h)
        q = Q(x, t, h=h)
        return a - kin - u - q, [a, kin, u, q]

    return run_check("hamilton_jacobi_rank1", [comp], fields, grid, tol, order_min, reach=2.0)


def residual_motion_rank1(fields, grid, tol=1e-3, order_min=1.9):
    """(d_t + <v> d_x)<v> + (1/m) d_x V."""
    c = fields.consts

    def comp(x, t, h):
        mv = fields.mean(x, t)
        a = fd_partial0(fields.mean, (x, t), h)
        b = mv * fd_grad(fields.mean, 0, (x, t), h)
        f = fd_grad(fields.potential_v, 0, (x, t), h) / c.m
        return a + b + f, [a, b, f]

    return run_check("motion_rank1", [comp], fields, grid, tol, order_min, reach=2.0)


def residual_pressure_law(fields, grid, form="potential", tol=1e-3, order_min=1.9):
    """Pressure law at rank 1.

    ``form="potential"``: d_x V - (m/f) d_x P.
    ``form="momentum"``: (d_t + <v> d_x)<v> - <a> + (1/f) d_x P, where <a> is
    the mean acceleration averaged over velocity (absent means zero).
    """
    c = fields.consts
    if form == "potential":

        def comp(x, t, h):
            a = fd_grad(fields.potential_v, 0, (x, t), h)
            b = c.m * fd_grad(fields.pressure, 0, (x, t), h) / fields.density(x, t)
            return a - b, [a, b]

        reach = 2.0
    elif form == "momentum":

        def comp(x, t, h):
            mv = fields.mean(x, t)
            a = fd_partial0(fields.mean, (x, t), h)
            b = mv * fd_grad(fields.mean, 0, (x, t), h)
            p = fd_grad(fields.pressure, 0, (x, t), h) / fields.density(x, t)
            acc = fields.mean_acc1(x, t) if fields.mean_acc1 else np.zeros_like(x)
            return a + b - acc + p, [a, b, p, acc]

        reach = 1.0
    else:
        raise DomainError(f"unknown pressure-law form {form!r}")
    return run_check(f"pressure_law_{form}", [comp], fields, grid, tol, order_min, reach=reach)


def residual_energy_law_rank1(fields, grid, flux_coeff=1.5, tol=1e-3, order_min=1.9):
    """d_t[f<v>^2/2 + P/2] + d_x[f<v>^3/2 + k <v> P + M3/2] - RHS with k = 3/2
    in one dimension. RHS = integral of f12 <a> v dv, zero when the mean
    acceleration vanishes."""
    f, mv, P, M3 = fields.density, fields.mean, fields.pressure, fields.moment3

    def energy(x, t):
        u = mv(x, t)
        return 0.5 * f(x, t) * u * u + 0.5 * P(x, t)

    def energy_flux(x, t):
        u = mv(x, t)
        return 0.5 * f(x, t) * u**3 + flux_coeff * u * P(x, t) + 0.5 * M3(x, t)

    def comp(x, t, h):
        a = fd_partial0(energy, (x, t), h)
        b = fd_grad(energy_flux, 0, (x, t), h)
        return a + b, [a, b]

    return run_check("energy_law_rank1", [comp], fields, grid, tol, order_min)


def residual_complex_action(fields, grid, tol=1e-3, order_min=1.9):
    """Balance of Z = (1/2) ln f + i phi.

    Rank 1: Re(-d_t Z) = Q/2 with Q = d_x(f<v>)/f, Im(-d_t Z) = H/hbar.
    Rank 2: the same with d_t replaced by d_1 = d_t + v d_x, Q = d_v(f<a>)/f.
    """
    c = fields.consts
    f, phi = fields.density, fields.phase
    logf = lambda *a: 0.5 * np.log(f(*a))

    if fields.rank == 1:
        flux = _mul(f, fields.mean)

        def real(x, t, h):
            a = -fd_partial0(logf, (x, t), h)
            q = 0.5 * fd_grad(flux, 0, (x, t), h) / f(x, t)
            return a - q, [a, q]

        def imag(x, t, h):
            a = -fd_partial0(phi, (x, t), h)
            b = c.beta * fields.hamilton(x, t)
            return a - b, [a, b]

        name = "complex_action_rank1"
    else:
        acc = fields.mean or (lambda x, v, t: np.zeros_like(x))
        src = _mul(f, acc)

        def real(x, v, t, h):
            a = -fd_partial_n(logf, (x, v, t), (v,), h)
            q = 0.5 * fd_grad(src, 1, (x, v, t), h) / f(x, v, t)
            # the directional difference hides d_t and v d_x; scale on them
            dt_part = 0.5 * fd_partial0(f, (x, v, t), h) / f(x, v, t)
            dx_part = 0.5 * v * fd_grad(f, 0, (x, v, t), h) / f(x, v, t)
            return a - q, [q, dt_part, dx_part]

        def imag(x, v, t, h):
            a = -fd_partial_n(phi, (x, v, t), (v,), h)
            b = c.beta * fields.hamilton(x, v, t)
            return a - b, [a, b]

        name = "complex_action_rank2"
    return run_check(name, [real, imag], fields, grid, tol, order_min, reach=1.5)


def check_legendre_rank1(fields, grid, tol=1e-3, order_min=1.9):
    """H + L = m<v>^2 with L = (m/2)<v>^2 - V, and (d_t + <v> d_x)(hbar phi) = L."""
    c = fields.consts

    def lagrangian(x, t):
        u = fields.mean(x, t)
        return 0.5 * c.m * u * u - fields.potential_v(x, t)

    def sum_rule(x, t, h):
        H = fields.hamilton(x, t)
        L = lagrangian(x, t)
        u = fields.mean(x, t)
        p = c.m * u * u
        return H + L - p, [H, L, p]

    def action(x, t, h):
        S = lambda xx, tt: c.hbar_n * fields.phase(xx, tt)
        u = fields.mean(x, t)
        a = fd_partial0(S, (x, t), h)
        b = u * fd_grad(S, 0, (x, t), h)
        L = lagrangian(x, t)
        return a + b - L, [a, b, L]

    return run_check("legendre_rank1", [sum_rule, action], fields, grid, tol, order_min)


def check_efield_rank1(fields, c1, grid, tol=1e-3, order_min=1.9):
    """(d_t + <v> d_x)<v> = F with F = -gamma E = 2 alpha beta d_x V.

    gamma E is formed as one product so a zero charge never divides."""

    def comp(x, t, h):
        mv = fields.mean(x, t)
        a = fd_partial0(fields.mean, (x, t), h)
        b = mv * fd_grad(fields.mean, 0, (x, t), h)
        gamma_e = -2.0 * c1.alpha * c1.beta * fd_grad(fields.potential_v, 0, (x, t), h)
        force = -gamma_e
        return a + b - force, [a, b, force]

    return run_check("efield_rank1", [comp], fields, grid, tol, order_min, reach=2.0)


def check_efield_rank2(fields, c2, grid, tol=1e-4):
    """(d_1 + <a> d_v)<a> = F with F = alpha (2 d_x phi + 2 beta d_v V).

    For the well every term vanishes, so the norms are absolute; what remains
    is the truncation error of a finite-difference quantum potential."""
    acc = fields.mean or (lambda x, v, t: np.zeros_like(x))

    def comp(x, v, t, h):
        a = acc(x, v, t)
        lhs = fd_partial_n(acc, (x, v, t), (v,), h) + a * fd_grad(acc, 1, (x, v, t), h)
        force = c2.alpha * (
            2.0 * fd_grad(fields.phase, 0, (x, v, t), h)
            + 2.0 * c2.beta * fd_grad(fields.potential_v, 1, (x, v, t), h)
        )
        return lhs - force, [lhs, force]

    return run_check(
        "efield_rank2", [comp], fields, grid, tol, order_min=None, reach=2.0, floor=math.inf
    )


# --------------------------------------------------------------------------
# rank 2


def residual_continuity_rank2(fields, grid, tol=1e-8, order_min=1.9):
    """d_t f + v d_x f + d_v(f <a>); the first two terms are taken as one
    difference along the characteristic."""
    f = fields.density
    acc = fields.mean

    def comp(x, v, t, h):
        a = fd_partial_n(f, (x, v, t), (v,), h)
        dt_part = fd_partial0(f, (x, v, t), h)
        dx_part = v * fd_grad(f, 0, (x, v, t), h)
        if acc is None:
            return a, [dt_part, dx_part]
        b = fd_grad(_mul(f, acc), 1, (x, v, t), h)
        return a + b, [dt_part, dx_part, b]

    return run_check("continuity_rank2", [comp], fields, grid, tol, order_min, reach=1.5)


def residual_schrodinger_rank2(fields, U12, c2, grid, tol=1e-4, order_min=1.9):
    """i hbar2 d_1 psi + (hbar2^2/2m) d_vv psi - U psi."""
    psi = fields.psi
    hb, m = c2.hbar_n, c2.m

    def comp(x, v, t, h):
        a = 1j * hb * fd_partial_n(psi, (x, v, t), (v,), h)
        b = (hb * hb / (2.0 * m)) * fd_laplace(psi, 1, (x, v, t), h)
        u = U12(x, v, t) * psi(x, v, t)
        return a + b - u, [a, b, u]

    return run_check("schrodinger_rank2", [comp], fields, grid, tol, order_min, reach=1.5)


def infer_potential_rank2(psi, c2, x, v, t, h=DEFAULT_STEP):
    """U = [i hbar2 d_1 psi + (hbar2^2/2m) d_vv psi] / psi by central
    differences; complex, with the imaginary part measuring inconsistency."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    hb, m = c2.hbar_n, c2.m
    val = psi(x, v, t)
    if np.any(np.abs(val) == 0):
        raise UndefinedFieldError("psi vanishes at a sample point")
    a = 1j * hb * fd_partial_n(psi, (x, v, t), (v,), h)
    b = (hb * hb / (2.0 * m)) * fd_laplace(psi, 1, (x, v, t), h)
    return (a + b) / val


def hamilton_jacobi_rank2(p, x, v, t):
    """-(1/beta2) d_1 phi12 - E t^2, using the explicit phase."""
    x = np.asarray(x, dtype=float)
    dphi = -p.energy * t * t / p.hbar2  # d_1 of -E t^3 / 3 hbar2; no x or v dependence
    return -p.hbar2 * dphi - p.energy * t * t + 0.0 * x


# --------------------------------------------------------------------------
# field bundles


def _well_valid_rank1(p, core):
    def valid(x, t, margin=0.0):
        inner, outer = well.band_edges(p, t)
        ax = np.abs(x)
        ok = ax < core * outer - margin
        if t > 0:
            ok &= np.abs(ax - inner) > margin
        return ok

    return valid


def well_fields_rank1(p, inner_h=1e-4, core=0.85):
    """Rank-1 samplers of the sheared well; samples stay inside ``core``
    times the support half-width, where the density is well above zero."""
    c = ChainConstants(hbar_n=p.hbar, m=p.m, n=1)

    def guard(fn):
        def wrapped(x, t):
            if t <= 0:
                raise UndefinedFieldError("rank-1 ratio fields need t > 0 on the stencil")
            return fn(x, t)

        return wrapped

    return ChainFields(
        consts=c,
        rank=1,
        density=lambda x, t: well.f1(p, x, t),
        psi=guard(lambda x, t: well.psi1(p, x, t)),
        phase=guard(lambda x, t: well.phase1(p, x, t)),
        mean=lambda x, t: well.mean_v(p, x, t),
        pressure=lambda x, t: well.pressure(p, x, t),
        moment3=lambda x, t: well.central_moment3(p, x, t),
        potential_v=guard(lambda x, t: well.potential_v1(p, x, t, inner_h)),
        quantum=lambda x, t: well.quantum_potential_rank1(p, x, t, inner_h),
        hamilton=guard(lambda x, t: well.hamilton1(p, x, t, inner_h)),
        valid=_well_valid_rank1(p, core),
        label=f"well n={p.n} rank 1",
    )


def well_fields_rank2(p):
    c = ChainConstants(hbar_n=p.hbar2, m=p.m, n=2)

    # |psi| has kinks at the walls and at interior nodes of cos(G eta)
    nodes = (np.arange(p.n) + 0.5) * math.pi / p.g_n

    def valid(x, v, t, margin=0.0):
        eta = x - v * t
        reach = margin * (1.0 + abs(t))
        ok = (np.abs(eta) < p.eta0 - reach) & (np.abs(v) < 0.5 * p.dv - margin)
        for node in nodes:
            ok &= np.abs(np.abs(eta) - node) > reach
        return ok

    zero = lambda x, v, t: np.zeros_like(np.asarray(x, dtype=float))
    q_fd = lambda x, v, t: well.quantum_potential_rank2_fd(p, x, v, t)
    return ChainFields(
        consts=c,
        rank=2,
        density=lambda x, v, t: well.f12(p, x, v, t),
        psi=lambda x, v, t: well.psi12(p, x, v, t),
        phase=lambda x, v, t: well.phase12(p, t) + zero(x, v, t),
        mean=zero,
        potential=lambda x, v, t: well.potential12(p, x, v, t),
        potential_v=lambda x, v, t: well.potential12(p, x, v, t) + q_fd(x, v, t),
        quantum=q_fd,
        hamilton=lambda x, v, t: well.hamilton12(p, t) + zero(x, v, t),
        valid=valid,
        label=f"well n={p.n} rank 2",
    )


def gauss_fields_rank2(op, E12=0.5):
    c = ChainConstants(hbar_n=op.hbar2, m=op.m, n=2)
    return ChainFields(
        consts=c,
        rank=2,
        density=lambda x, v, t: np.abs(osc.gauss_psi12(op, x, v, t, E12)) ** 2,
        psi=lambda x, v, t: osc.gauss_psi12(op, x, v, t, E12),
        phase=lambda x, v, t: osc.gauss_phase12(op, x, v, t, E12),
        mean=lambda x, v, t: osc.gauss_acceleration(op, x, v),
        potential=lambda x, v, t: osc.gauss_potential(op, x, v, E12),
        label="gaussian rank 2",
    )


def oscillator_fields_rank1(op):
    """Ground state at rank 1: static density, phase -omega t / 2."""
    c = ChainConstants(hbar_n=op.hbar, m=op.m, n=1)
    zero = lambda x, t: np.zeros_like(np.asarray(x, dtype=float))
    return ChainFields(
        consts=c,
        rank=1,
        density=lambda x, t: np.abs(osc.ground_psi1(op, x, t)) ** 2,
        psi=lambda x, t: osc.ground_psi1(op, x, t),
        phase=lambda x, t: -0.5 * op.omega * t + zero(x, t),
        mean=zero,
        potential=lambda x, t: 0.5 * op.m * op.omega**2 * np.asarray(x) ** 2,
        potential_v=lambda x, t: 0.5 * op.m * op.omega**2 * np.asarray(x) ** 2
        + _ground_quantum(op, x),
        hamilton=lambda x, t: 0.5 * op.hbar * op.omega + zero(x, t),
        label="oscillator ground rank 1",
    )


def _ground_quantum(op, x):
    # -(hbar^2/2m) psi''/psi for the Gaussian ground state
    s1 = op.sigma1
    x = np.asarray(x, dtype=float)
    return -(op.hbar**2 / (2.0 * op.m)) * (x * x / (4.0 * s1**4) - 1.0 / (2.0 * s1 * s1))


# --------------------------------------------------------------------------
# suites


@dataclass
class SuiteConfig:
    dx: float = 1.0
    dv: float = 1.0
    hbar2: float = 1.0
    m: float = 1.0
    h: float = DEFAULT_STEP
    omega: float = 1.0
    E12: float = 0.5
    states: tuple = (0, 1)
    grid: int = 201
    extra: dict = field(default_factory=dict)


WELL_TIMES = (0.3, 0.6, 1.4, 1.9)
SCHRODINGER_TIMES = {0: (0.3, 0.6, 1.4, 1.9), 1: (0.2, 0.4)}


def well_suite(cfg):
    reports = []
    for n in cfg.states:
        p = well.WellParams(dx=cfg.dx, dv=cfg.dv, hbar2=cfg.hbar2, m=cfg.m, n=n)
        tag = f"[n={n}]"
        span = 0.5 * (p.dx + max(WELL_TIMES) * p.dv)
        g1 = SampleGrid(x=Grid1D(-span, span, cfg.grid), times=WELL_TIMES, h=cfg.h)
        f1 = well_fields_rank1(p)
        f1.check_consistency(replace(g1, certify=False))
        g2 = SampleGrid(
            x=Grid1D(-span, span, max(cfg.grid // 4, 3)),
            v=Grid1D(-0.5 * p.dv, 0.5 * p.dv, max(cfg.grid // 8, 3)),
            times=SCHRODINGER_TIMES.get(n, SCHRODINGER_TIMES[1]),
            h=cfg.h,
        )
        f2 = well_fields_rank2(p)
        f2.check_consistency(replace(g2, certify=False))
        c2 = f2.consts
        batch = [
            residual_schrodinger_rank2(f2, f2.potential, c2, g2),
            residual_continuity_rank2(f2, g2),
            residual_continuity_rank1(f1, g1),
            infer_potential_rank1(f1.psi, f1.consts, g1, f1)[1],
            residual_hamilton_jacobi_rank1(f1, g1),
            residual_motion_rank1(f1, g1),
            residual_pressure_law(f1, g1, "potential"),
            residual_pressure_law(f1, g1, "momentum"),
            residual_energy_law_rank1(f1, g1),
            residual_complex_action(f1, g1),
            residual_complex_action(f2, g2),
            check_legendre_rank1(f1, g1),
            check_efield_rank1(f1, f1.consts, g1),
            check_efield_rank2(f2, c2, replace(g2, certify=False)),
        ]
        hj2 = hamilton_jacobi_rank2(p, *g2.points(), g2.times[-1])
        batch.append(
            ResidualReport(
                equation="hamilton_jacobi_rank2",
                grid=g2.spec(),
                h=0.0,
                linf=float(np.max(np.abs(hj2))) / (p.energy * g2.times[-1] ** 2),
                l2=float(np.linalg.norm(hj2)) / (p.energy * g2.times[-1] ** 2),
                order=None,
                n_samples=int(hj2.size),
                tol=1e-12,
            )
        )
        reports += [replace(r, equation=f"{r.equation}{tag}") for r in batch]
    return reports


def oscillator_suite(cfg):
    op = osc.OscParams(m=cfg.m, omega=cfg.omega)
    fields = oscillator_fields_rank1(op)
    w = 4.0 * op.sigma1
    grid = SampleGrid(x=Grid1D(-w, w, cfg.grid), times=(0.5, 1.0, 2.0), h=cfg.h)
    fields.check_consistency(replace(grid, certify=False))
    U, imag = infer_potential_rank1(fields.psi, fields.consts, grid, fields, tol=1e-6)

    def harmonic(x, t, h):
        u = U(x, t, h)
        ref = fields.potential(x, t)
        return u - ref, [u, ref]

    return [
        imag,
        run_check("potential_rank1_harmonic", [harmonic], fields, grid, tol=1e-4),
        residual_hamilton_jacobi_rank1(fields, grid, tol=1e-4),
        residual_continuity_rank1(fields, replace(grid, certify=False), tol=1e-12),
    ]


def gaussian_suite(cfg):
    op = osc.OscParams(m=cfg.m, omega=cfg.omega)
    fields = gauss_fields_rank2(op, cfg.E12)
    w1, w2 = 3.0 * op.sigma1, 3.0 * op.sigma2
    n = max(cfg.grid // 4, 3)
    grid = SampleGrid(
        x=Grid1D(-w1, w1, n), v=Grid1D(-w2, w2, n), times=(0.0, 0.7, 1.5), h=cfg.h
    )
    fields.check_consistency(replace(grid, certify=False))
    return [
        residual_schrodinger_rank2(fields, fields.potential, fields.consts, grid),
        residual_continuity_rank2(fields, grid, tol=1e-4),
    ]


SUITES = {"well": well_suite, "oscillator": oscillator_suite, "gaussian": gaussian_suite}


def run_suite(name, cfg=None):
    cfg = cfg or SuiteConfig()
    if name == "all":
        return [r for key in ("well", "oscillator", "gaussian") for r in SUITES[key](cfg)]
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}")
    return SUITES[name](cfg)
