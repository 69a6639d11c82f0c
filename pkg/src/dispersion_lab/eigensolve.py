"""Eigenstates of -(hbar2^2/2m) psi'' + U(eta) psi = E psi on [-eta0, eta0]
with Dirichlet walls, and their lift to rank-2 wave functions.

The operator is discretized by the three-point stencil on a uniform grid
whose end points sit on the walls. Eigenvalues come from bisection on the
Sturm count of the tridiagonal matrix; eigenvectors from inverse iteration.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError, NumericError

MIN_GRID = 200


class TableError(ValueError):
    """A potential table could not be read."""


@dataclass(frozen=True)
class PotentialSpec:
    """U(eta) on the open interval; either a callable or a table with linear
    interpolation."""

    sampler: object = None
    table: tuple | None = None

    def __post_init__(self):
        if (self.sampler is None) == (self.table is None):
            raise DomainError("give exactly one of sampler or table")
        if self.table is not None:
            eta, u = (np.asarray(a, dtype=float) for a in self.table)
            if eta.ndim != 1 or eta.shape != u.shape or eta.size < 2:
                raise DomainError("table needs two equal-length columns with at least 2 rows")
            if np.any(np.diff(eta) <= 0):
                raise DomainError("table abscissae must increase strictly")
            if not np.all(np.isfinite(u)):
                raise DomainError("tabulated potential must be finite")

    @classmethod
    def free(cls):
        return cls(sampler=lambda eta: np.zeros_like(eta))

    def __call__(self, eta):
        eta = np.asarray(eta, dtype=float)
        if self.sampler is not None:
            return np.asarray(self.sampler(eta), dtype=float) + 0.0 * eta
        xs, us = self.table
        return np.interp(eta, xs, us)


def load_potential_csv(path):
    """Read a two-column (eta, U) table; a non-numeric first row is taken as
    a header. Malformed rows raise TableError naming the line."""
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if len(row) != 2:
                raise TableError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                if lineno == 1 and not rows:
                    continue
                raise TableError(f"{path}:{lineno}: non-numeric value in {row!r}") from None
    if len(rows) < 2:
        raise TableError(f"{path}: need at least 2 data rows")
    eta, u = zip(*rows)
    return PotentialSpec(table=(np.array(eta), np.array(u)))


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # (k, grid_n), wall values included
    eta: np.ndarray
    parity: tuple
    eta0: float
    hbar2: float

    def mode(self, j):
        return Mode(self.eta, self.eigenvectors[j], float(self.eigenvalues[j]), self.eta0, self.hbar2)


@dataclass(frozen=True)
class Mode:
    eta: np.ndarray
    psi: np.ndarray
    energy: float
    eta0: float
    hbar2: float


def tridiagonal(U, eta0, m, hbar2, grid_n):
    """(eta, diagonal, off-diagonal) for the interior points."""
    eta = np.linspace(-eta0, eta0, grid_n)
    h = eta[1] - eta[0]
    kin = hbar2 * hbar2 / (2.0 * m * h * h)
    inner = eta[1:-1]
    diag = 2.0 * kin + U(inner)
    off = np.full(inner.size - 1, -kin)
    return eta, diag, off


def sturm_count(diag, off, lam):
    """Number of eigenvalues below each entry of ``lam``."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    d = diag.tolist()
    off2 = (off * off).tolist()
    # smallest allowed pivot, as in LAPACK's bisection
    pivmin = np.finfo(float).tiny * max(1.0, max(off2, default=0.0))
    out = np.empty(lam.shape, dtype=int)
    # plain floats: the recurrence is sequential and numpy would only add overhead
    for j, x in enumerate(lam.tolist()):
        count = 0
        q = d[0] - x
        for di, e2 in zip(d[1:], off2):
            if abs(q) < pivmin:
                q = -pivmin
            if q < 0:
                count += 1
            q = di - x - e2 / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
        out[j] = count
    return out


def bisect_eigenvalues(diag, off, k, tol=None):
    """Lowest ``k`` eigenvalues by simultaneous bisection."""
    radius = np.abs(np.concatenate([[0.0], off])) + np.abs(np.concatenate([off, [0.0]]))
    lo0, hi0 = float(np.min(diag - radius)), float(np.max(diag + radius))
    if not (math.isfinite(lo0) and math.isfinite(hi0)):
        raise NumericError(f"non-finite Gershgorin bounds [{lo0}, {hi0}]")
    idx = np.arange(k)
    lo = np.full(k, lo0)
    hi = np.full(k, hi0)
    if tol is None:
        tol = 4.0 * np.finfo(float).eps * max(abs(lo0), abs(hi0))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        below = sturm_count(diag, off, mid) > idx
        hi = np.where(below, mid, hi)
        lo = np.where(below, lo, mid)
        if np.all(hi - lo <= tol):
            break
    else:
        raise NumericError(f"bisection did not close: widths up to {np.max(hi - lo):.3e}")
    if np.any(sturm_count(diag, off, hi) <= idx):
        raise NumericError("bisection lost an eigenvalue bracket")
    return 0.5 * (lo + hi)


def _thomas(sub, diag, sup, rhs):
    n = diag.size
    c = np.empty(n - 1)
    d = np.empty(n)
    denom = diag[0]
    c[0] = sup[0] / denom
    d[0] = rhs[0] / denom
    for i in range(1, n):
        denom = diag[i] - sub[i - 1] * c[i - 1]
        if denom == 0.0:
            denom = np.finfo(float).eps
        if i < n - 1:
            c[i] = sup[i] / denom
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / denom
    for i in range(n - 2, -1, -1):
        d[i] -= c[i] * d[i + 1]
    return d


def inverse_iteration(diag, off, lam, seed, iters=3):
    # a relative shift keeps the solve non-singular without hurting convergence
    shift = lam - 1e-10 * max(abs(lam), 1.0)
    y = seed / np.linalg.norm(seed)
    for _ in range(iters):
        y = _thomas(off, diag - shift, off, y)
        y /= np.linalg.norm(y)
    return y


def solve_spectrum(U, eta0, m=1.0, hbar2=1.0, k_states=6, grid_n=2000):
    if grid_n < MIN_GRID:
        raise DomainError(f"grid_n must be at least {MIN_GRID}")
    if k_states < 1 or k_states > grid_n // 10:
        raise DomainError(f"k_states must lie in [1, {grid_n // 10}]")
    if not (eta0 > 0 and m > 0 and hbar2 > 0):
        raise DomainError("eta0, m and hbar2 must be positive")
    eta, diag, off = tridiagonal(U, eta0, m, hbar2, grid_n)
    if not np.all(np.isfinite(diag)):
        raise NumericError("potential is not finite on the open interval")
    energies = bisect_eigenvalues(diag, off, k_states)
    if np.any(np.diff(energies) <= 0):
        raise NumericError(f"eigenvalues not strictly increasing: {energies}")
    h = eta[1] - eta[0]
    inner = eta[1:-1]
    vecs = np.zeros((k_states, grid_n))
    parity = []
    for j, lam in enumerate(energies):
        seed = np.sin((j + 1) * math.pi * (inner + eta0) / (2.0 * eta0))
        y = inverse_iteration(diag, off, lam, seed)
        full = np.concatenate([[0.0], y, [0.0]])
        # walls vanish, so the trapezoid inner product is h * sum
        full /= math.sqrt(h * np.dot(full, full))
        peak = int(np.argmax(np.abs(full)))
        if full[peak] < 0:
            full = -full
        vecs[j] = full
        parity.append(_parity(full))
    return SpectrumResult(energies, vecs, eta, tuple(parity), eta0, hbar2)


def _parity(psi, tol=1e-6):
    flipped = psi[::-1]
    scale = np.max(np.abs(psi))
    if np.max(np.abs(psi - flipped)) < tol * scale:
        return "even"
    if np.max(np.abs(psi + flipped)) < tol * scale:
        return "odd"
    return "none"


def lift_to_rank2(mode, t, dv=1.0):
    """Psi(x, v) = psi(x - v t) exp(-i E t^3 / 3 hbar2) / sqrt(dv) with a
    cubic spline through the mode; zero for |x - vt| >= eta0.

    The sampler also accepts a time as third argument."""
    spline = CubicSpline(mode.eta, mode.psi / math.sqrt(dv))
    phase = np.exp(-1j * mode.energy * t**3 / (3.0 * mode.hbar2))

    def psi(x, v, tt=t):
        eta = np.asarray(x, dtype=float) - np.asarray(v, dtype=float) * tt
        inside = np.abs(eta) < mode.eta0
        amp = np.where(inside, spline(np.clip(eta, -mode.eta0, mode.eta0)), 0.0)
        ph = phase if tt == t else np.exp(-1j * mode.energy * tt**3 / (3.0 * mode.hbar2))
        return amp * ph

    return psi
