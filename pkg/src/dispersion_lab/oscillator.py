"""Harmonic-oscillator chain: phase-space states, their marginals, the
uncertainty ladder and the Gaussian rank-2 wave function.

Dispersions follow sigma1 = sqrt(hbar / 2 m omega) and sigma2 = omega sigma1,
so sigma1 * sigma2 = hbar / 2m. Higher orders scale by omega each step with
hbar_n = hbar * omega**(2(n-1)).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import ChainConstants, gauss_legendre
from .special import hermite, laguerre

BOX = 8.0  # quadrature half-width in units of the dispersion


@dataclass(frozen=True)
class OscParams:
    m: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0
    s: int = 0
    hbar2_override: float | None = None

    def __post_init__(self):
        for name in ("m", "omega", "hbar"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.s < 0:
            raise DomainError("state index must be non-negative")

    @property
    def sigma1(self):
        return math.sqrt(self.hbar / (2.0 * self.m * self.omega))

    @property
    def sigma2(self):
        return self.omega * self.sigma1

    @property
    def hbar2(self):
        if self.hbar2_override is not None:
            return self.hbar2_override
        return self.hbar * self.omega**2

    def constants(self, n):
        return ChainConstants.from_ladder(self.hbar, self.omega, n, m=self.m)


def f12_oscillator(p, x, v):
    """Phase-space density of state s; negative somewhere for s >= 1."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    r = (v * v + p.omega**2 * x * x) / p.sigma2**2
    sign = -1.0 if p.s % 2 else 1.0
    return sign / (2.0 * math.pi * p.sigma1 * p.sigma2) * np.exp(-0.5 * r) * laguerre(p.s, r)


def f1_oscillator(p, x):
    x = np.asarray(x, dtype=float)
    s1 = p.sigma1
    norm = 2.0**p.s * math.factorial(p.s) * math.sqrt(2.0 * math.pi) * s1
    return np.exp(-0.5 * (x / s1) ** 2) * hermite(p.s, x / (s1 * math.sqrt(2.0))) ** 2 / norm


def f1_by_quadrature(p, x, order=160):
    """Velocity marginal of f12 over the +-BOX*sigma2 window."""
    x = np.asarray(x, dtype=float)
    w = BOX * p.sigma2 * np.ones_like(x)
    return gauss_legendre(lambda v: f12_oscillator(p, x, v), -w, w, order=order)


def total_mass(p, order=160):
    w = BOX * p.sigma1
    return float(gauss_legendre(lambda x: f1_by_quadrature(p, x, order), -w, w, order=order))


def ground_psi1(p, x, t):
    """Coordinate ground state e^{-i omega t / 2} (2 pi sigma1^2)^(-1/4) e^{-x^2/4 sigma1^2}."""
    x = np.asarray(x, dtype=float)
    s1 = p.sigma1
    amp = (2.0 * math.pi * s1 * s1) ** -0.25
    return amp * np.exp(-x * x / (4.0 * s1 * s1)) * np.exp(-0.5j * p.omega * t)


def gauss_phase12(p, x, v, t, E12):
    return -(p.m * p.omega**2 * x * v + E12 * t) / p.hbar2


def gauss_psi12(p, x, v, t, E12):
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    m, w = p.m, p.omega
    amp = math.sqrt(m / (math.pi * p.hbar))
    mod = np.exp(-(0.5 * m * v * v + 0.5 * m * w * w * x * x) / (p.hbar * w))
    return amp * mod * np.exp(1j * gauss_phase12(p, x, v, t, E12))


def gauss_potential(p, x, v, E12):
    """Potential under which gauss_psi12 solves the rank-2 equation."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    m, w, h, h2 = p.m, p.omega, p.hbar, p.hbar2
    return (
        E12
        - h2 * h2 / (2.0 * h * w)
        + m * w * w * (1.0 + h2 * h2 / (2.0 * h * h * w**4)) * v * v
        - 0.5 * m * w**4 * x * x
    )


def gauss_acceleration(p, x, v):
    """Mean acceleration (hbar2/m) d_v phi12 = -omega^2 x."""
    return -p.omega**2 * np.asarray(x, dtype=float) + 0.0 * np.asarray(v, dtype=float)


def uncertainty_ladder(p, n_max):
    """[(sigma_n, sigma_{n+1}) for n = 1..n_max]."""
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    sig = [p.sigma1 * p.omega**k for k in range(n_max + 1)]
    return list(zip(sig[:-1], sig[1:]))


def hbar_ladder(p, n_max):
    return [p.hbar * p.omega ** (2 * (n - 1)) for n in range(1, n_max + 1)]
