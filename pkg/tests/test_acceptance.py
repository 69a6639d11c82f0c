"""The twelve acceptance criteria, each at its stated tolerance.

Every test prints one ``ACCEPTANCE nn PASS|FAIL`` line (visible under
``pytest -v``) before asserting.
"""

import math
import os
import time
from dataclasses import replace

import numpy as np
import pytest

from dispersion_lab import cli
from dispersion_lab import eigensolve as E
from dispersion_lab import oscillator as O
from dispersion_lab import verify as V
from dispersion_lab import well as W
from dispersion_lab.numerics import ChainConstants, Grid1D


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:2d} {'PASS' if ok else 'FAIL'} {title}: {detail}")
        assert ok, detail

    return emit


@pytest.fixture(scope="module")
def well_reports():
    return {r.equation: r for r in V.run_suite("well")}


def pick(reports, prefix):
    found = [r for key, r in reports.items() if key.startswith(prefix + "[")]
    assert len(found) == 2, prefix
    return found


def test_01_normalization(report):
    start = time.perf_counter()
    errs = [
        abs(W.normalization(W.WellParams(n=n), t) - 1.0)
        for n in (0, 1)
        for t in (0.0, 0.5, 1.0, 2.0)
    ]
    took = time.perf_counter() - start
    ok = max(errs) <= 1e-6 and took < 5.0
    report(1, "normalization", ok, f"max |err| {max(errs):.2e}, {took:.2f} s")


def test_02_marginal_oracle(report):
    rng = np.random.default_rng(20240601)
    start = time.perf_counter()
    worst = 0.0
    for n in (0, 1):
        p = W.WellParams(n=n)
        for branch in ("rest", "early", "late"):
            for _ in range(100):
                if branch == "rest":
                    t = 0.0
                elif branch == "early":
                    t = rng.uniform(0.0, p.t_switch)
                else:
                    t = rng.uniform(p.t_switch, 3.0 * p.t_switch)
                _, outer = W.band_edges(p, t)
                x = rng.uniform(-outer, outer)
                for k, fn in ((0, W.f1), (1, W.flux_v), (2, W.flux_v2)):
                    worst = max(worst, abs(float(fn(p, x, t)) - W.moment_quadrature(p, x, t, k)))
    took = time.perf_counter() - start
    ok = worst <= 1e-6 and took < 30.0
    report(2, "marginal oracle", ok, f"max |err| {worst:.2e} over 1800 comparisons, {took:.1f} s")


def test_03_exact_solution_residual(report, well_reports):
    rs = pick(well_reports, "schrodinger_rank2")
    ok = all(r.linf < 1e-4 and r.order >= 1.9 for r in rs)
    detail = ", ".join(f"{r.equation} linf {r.linf:.2e} order {r.order:.3f}" for r in rs)
    report(3, "exact-solution residual", ok, detail)


def test_04_continuity(report, well_reports):
    r2 = pick(well_reports, "continuity_rank2")
    r1 = pick(well_reports, "continuity_rank1")
    ok = all(r.linf < 1e-8 for r in r2) and all(r.linf < 1e-4 and r.order >= 1.9 for r in r1)
    detail = (
        f"rank 2 linf {max(r.linf for r in r2):.2e}, rank 1 linf {max(r.linf for r in r1):.2e} "
        f"order {min(r.order for r in r1):.3f}"
    )
    report(4, "continuity", ok, detail)


def test_05_hamilton_jacobi_rank2(report):
    rng = np.random.default_rng(5)
    worst = 0.0
    for n in (0, 1):
        p = W.WellParams(n=n)
        for t in (0.0, 0.4, 1.0, 2.5):
            x, v = rng.uniform(-1, 1, 200), rng.uniform(-0.5, 0.5, 200)
            res = V.hamilton_jacobi_rank2(p, x, v, t)
            worst = max(worst, float(np.max(np.abs(res))) / max(1.0, p.energy * t * t))
    report(5, "Hamilton-Jacobi rank 2", worst <= 1e-12, f"max scaled residual {worst:.1e}")


def test_06_pressure_law(report, well_reports):
    rs = pick(well_reports, "pressure_law_potential")
    p = W.WellParams()
    fields = V.well_fields_rank1(p)
    span = 0.5 * (p.dx + max(V.WELL_TIMES) * p.dv)
    grid = V.SampleGrid(x=Grid1D(-span, span, 201), times=V.WELL_TIMES, certify=False)
    base = V.residual_pressure_law(fields, grid, "potential").linf
    bad = replace(fields, pressure=V.scaled(fields.pressure, 1.01))
    mutated = V.residual_pressure_law(bad, grid, "potential").linf
    ok = all(r.linf < 1e-3 for r in rs) and mutated >= 10 * base
    detail = f"linf {max(r.linf for r in rs):.2e}, 1% mutation raises {base:.1e} to {mutated:.1e}"
    report(6, "pressure law", ok, detail)


def test_07_energy_law(report, well_reports):
    rs = pick(well_reports, "energy_law_rank1")
    worst = max(r.linf for r in rs)
    report(7, "energy law", worst < 1e-3, f"scaled linf {worst:.2e}")


def test_08_spectrum(report):
    start = time.perf_counter()
    res = E.solve_spectrum(E.PotentialSpec.free(), 0.5, m=1.0, hbar2=1.0, k_states=6, grid_n=2000)
    took = time.perf_counter() - start
    p = W.WellParams()
    e0 = abs(res.eigenvalues[0] / W.energy_even(p) - 1)
    e1 = abs(res.eigenvalues[1] / W.energy_odd(p, 1) - 1)
    alternating = res.parity == ("even", "odd") * 3
    ok = e0 < 1e-4 and e1 < 1e-4 and alternating and took < 2.0
    report(8, "spectrum", ok, f"rel err E0 {e0:.1e}, E1 {e1:.1e}, parity {alternating}, {took:.2f} s")


def test_09_oscillator_chain(report):
    mass_err = max(abs(O.total_mass(O.OscParams(s=s)) - 1.0) for s in (0, 1, 2))
    marg_err = 0.0
    for s in (0, 1, 2):
        p = O.OscParams(s=s)
        x = np.linspace(-5 * p.sigma1, 5 * p.sigma1, 41)
        marg_err = max(marg_err, float(np.max(np.abs(O.f1_by_quadrature(p, x) - O.f1_oscillator(p, x)))))
    p = O.OscParams()
    # exact up to the rounding of one division, one sqrt and two products
    ulps = abs(p.sigma1 * p.sigma2 - p.hbar / (2 * p.m)) / math.ulp(p.hbar / (2 * p.m))
    mins = []
    for s in (0, 1):
        q = O.OscParams(s=s)
        X, Vv = np.meshgrid(
            np.linspace(-5 * q.sigma1, 5 * q.sigma1, 101),
            np.linspace(-5 * q.sigma2, 5 * q.sigma2, 101),
            indexing="ij",
        )
        mins.append(float(O.f12_oscillator(q, X, Vv).min()))
    ok = mass_err <= 1e-6 and marg_err <= 1e-6 and ulps <= 4 and mins[0] >= 0 and mins[1] < 0
    detail = (
        f"mass err {mass_err:.1e}, marginal err {marg_err:.1e}, sigma1*sigma2 off by {ulps:.0f} ulp, "
        f"min f(s=0) {mins[0]:.1e}, min f(s=1) {mins[1]:.3f}"
    )
    report(9, "oscillator chain", ok, detail)


def test_10_gaussian(report):
    p = O.OscParams(m=0.8, omega=1.3)
    E12 = 0.4
    X, Vv = np.meshgrid(np.linspace(-3, 3, 101), np.linspace(-3, 3, 101), indexing="ij")
    mod = float(np.max(np.abs(np.abs(O.gauss_psi12(p, X, Vv, 0.9, E12)) ** 2 - O.f12_oscillator(p, X, Vv))))
    c2 = ChainConstants(hbar_n=p.hbar2, m=p.m, n=2)
    psi = lambda x, v, t: O.gauss_psi12(p, x, v, t, E12)
    s = np.array([0.5, 1.0, 1.5])
    z = np.zeros_like(s)
    t = 0.6
    u0 = V.infer_potential_rank2(psi, c2, 0.0, 0.0, t).real
    cx = (V.infer_potential_rank2(psi, c2, s * p.sigma1, z, t).real - u0) / (s * p.sigma1) ** 2
    cv = (V.infer_potential_rank2(psi, c2, z, s * p.sigma2, t).real - u0) / (s * p.sigma2) ** 2
    ref_x = -0.5 * p.m * p.omega**4
    ref_v = p.m * p.omega**2 * (1 + p.hbar2**2 / (2 * p.hbar**2 * p.omega**4))
    ex = float(np.max(np.abs(cx / ref_x - 1)))
    ev = float(np.max(np.abs(cv / ref_v - 1)))
    ok = mod <= 1e-12 and ex < 1e-4 and ev < 1e-4
    report(10, "Gaussian example", ok, f"| |psi|^2 - f | {mod:.1e}, coefficient rel err x {ex:.1e}, v {ev:.1e}")


def test_11_complex_action(report, well_reports):
    r1 = pick(well_reports, "complex_action_rank1")
    r2 = pick(well_reports, "complex_action_rank2")
    worst = max(r.linf for r in r1 + r2)
    report(11, "complex action", worst < 1e-3, f"linf rank 1 {max(r.linf for r in r1):.2e}, rank 2 {max(r.linf for r in r2):.2e}")


def test_12_figures(report, tmp_path):
    counts = {}
    for name in cli.FIGURE_TIMES:
        out = tmp_path / name
        assert cli.main(["figure", name, "--out", str(out)]) == 0
        expected = len(cli.FIGURE_TIMES[name]) * len(cli.FIGURE_STATES.get(name, (0, 1)))
        counts[name] = (len(os.listdir(out)), expected)

    def at_origin(path):
        d = np.loadtxt(path, delimiter=",", skiprows=2)
        return d[np.flatnonzero(d[:, 0] == 0.0)[0], 1]

    late = [t for t in cli.FIGURE_TIMES["fig4"] if t >= 1.0]
    centre = [at_origin(tmp_path / "fig4" / f"fig4_n0_t{t!r}.csv") for t in late]
    decays = all(np.diff(centre) < 0) and np.allclose(centre, [1 / t for t in late], rtol=1e-12)

    d = np.loadtxt(tmp_path / "fig6" / "fig6_n0_t1.9.csv", delimiter=",", skiprows=2)
    inner, _ = W.band_edges(W.WellParams(), 1.9)
    band = (np.abs(d[:, 0]) <= inner) & (d[:, 0] != 0)
    dev = float(np.max(np.abs(d[band, 1] / (d[band, 0] / 1.9) - 1)))

    amps = [at_origin(tmp_path / "fig11" / f"fig11_n0_t{t!r}.csv") for t in cli.FIGURE_TIMES["fig11"]]
    non_increasing = all(np.diff(amps) <= 0)

    files_ok = all(a == b for a, b in counts.values())
    ok = files_ok and decays and dev < 0.01 and non_increasing
    detail = (
        f"{sum(a for a, _ in counts.values())} files, f1(0) for t >= 1: {np.round(centre, 4).tolist()}, "
        f"<v> vs x/t dev {dev:.1e}, P(0) non-increasing {non_increasing}"
    )
    report(12, "figure reproduction", ok, detail)
