import math
import time

import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

from dispersion_lab import eigensolve as E
from dispersion_lab import well as W
from dispersion_lab.errors import DomainError, NumericError
from dispersion_lab.numerics import ChainConstants, Grid1D
from dispersion_lab.verify import ChainFields, SampleGrid, residual_schrodinger_rank2

FREE = E.PotentialSpec.free()
BUMP = E.PotentialSpec(sampler=lambda eta: eta * eta)


@pytest.fixture(scope="module")
def free_spectrum():
    return E.solve_spectrum(FREE, 0.5, k_states=6, grid_n=2000)


@pytest.fixture(scope="module")
def bump_spectrum():
    return E.solve_spectrum(BUMP, 0.5, k_states=4, grid_n=2000)


def test_free_levels(free_spectrum):
    e = free_spectrum.eigenvalues
    exact = math.pi**2 * np.arange(1, 7) ** 2 / 2
    assert e[0] == pytest.approx(math.pi**2 / 2, rel=1e-4)
    assert e[1] == pytest.approx(2 * math.pi**2, rel=1e-4)
    assert np.allclose(e, exact, rtol=1e-3)
    assert np.all(np.diff(e) > 0)


def test_matches_dense_oracle():
    eta, d, off = E.tridiagonal(BUMP, 0.5, 1.0, 1.0, 400)
    ref = eigh_tridiagonal(d, off, eigvals_only=True, select="i", select_range=(0, 5))
    ours = E.bisect_eigenvalues(d, off, 6)
    assert np.allclose(ours, ref, rtol=1e-12)


def test_sturm_count():
    _, d, off = E.tridiagonal(FREE, 0.5, 1.0, 1.0, 300)
    ref = eigh_tridiagonal(d, off, eigvals_only=True)
    probes = np.array([ref[0] - 1, 0.5 * (ref[2] + ref[3]), ref[-1] + 1])
    assert list(E.sturm_count(d, off, probes)) == [0, 3, ref.size]


def test_interlacing():
    _, d, off = E.tridiagonal(BUMP, 0.5, 1.0, 1.0, 300)
    full = E.bisect_eigenvalues(d, off, 8)
    sub = E.bisect_eigenvalues(d[:-1], off[:-1], 7)
    assert np.all(full[:-1] <= sub) and np.all(sub <= full[1:])


def test_parity_alternates(free_spectrum, bump_spectrum):
    expect = tuple("even" if j % 2 == 0 else "odd" for j in range(6))
    assert free_spectrum.parity == expect
    assert bump_spectrum.parity == expect[:4]


def test_orthonormal_and_walls(free_spectrum):
    vecs = free_spectrum.eigenvectors
    h = free_spectrum.eta[1] - free_spectrum.eta[0]
    gram = h * vecs @ vecs.T
    assert np.allclose(gram, np.eye(6), atol=1e-10)
    assert np.all(vecs[:, 0] == 0) and np.all(vecs[:, -1] == 0)


def test_ground_shape(free_spectrum):
    eta = free_spectrum.eta
    a = free_spectrum.eigenvectors[0]
    b = np.cos(math.pi * eta)
    cos_sim = a @ b / (np.linalg.norm(a) * np.linalg.norm(b))
    assert cos_sim > 1 - 1e-6


def test_grid_convergence():
    errs = []
    for n in (250, 500, 1000):
        e0 = E.solve_spectrum(FREE, 0.5, k_states=1, grid_n=n).eigenvalues[0]
        errs.append(abs(e0 - math.pi**2 / 2))
    slope = np.polyfit(np.log([250, 500, 1000]), np.log(errs), 1)[0]
    assert slope == pytest.approx(-2.0, abs=0.1)


def test_fast_enough():
    start = time.perf_counter()
    E.solve_spectrum(FREE, 0.5, k_states=6, grid_n=2000)
    assert time.perf_counter() - start < 2.0


@pytest.mark.parametrize("kw", [dict(grid_n=150), dict(k_states=0), dict(k_states=21, grid_n=200)])
def test_preconditions(kw):
    with pytest.raises(DomainError):
        E.solve_spectrum(FREE, 0.5, **{"k_states": 2, "grid_n": 400, **kw})


def test_non_finite_potential():
    bad = E.PotentialSpec(sampler=lambda eta: 1.0 / eta)
    with np.errstate(divide="ignore"), pytest.raises(NumericError):
        E.solve_spectrum(bad, 0.5, grid_n=201)


def test_potential_spec_validation():
    with pytest.raises(DomainError):
        E.PotentialSpec()
    with pytest.raises(DomainError):
        E.PotentialSpec(sampler=np.sin, table=([0, 1], [0, 1]))
    with pytest.raises(DomainError):
        E.PotentialSpec(table=([0, 0], [1, 1]))
    spec = E.PotentialSpec(table=([-1.0, 1.0], [0.0, 2.0]))
    assert spec(np.array([0.0, 0.5])).tolist() == [1.0, 1.5]


def test_table_matches_sampler(tmp_path, bump_spectrum):
    eta = np.linspace(-0.5, 0.5, 2001)
    path = tmp_path / "u.csv"
    path.write_text("eta,U\n# comment\n" + "".join(f"{a!r},{a * a!r}\n" for a in eta.tolist()))
    spec = E.load_potential_csv(path)
    res = E.solve_spectrum(spec, 0.5, k_states=4, grid_n=2000)
    assert np.all(np.diff(res.eigenvalues) > 0)
    assert np.allclose(res.eigenvalues, bump_spectrum.eigenvalues, rtol=1e-6)


@pytest.mark.parametrize(
    "body, line",
    [("0,1\n1,2,3\n", 2), ("0,1\n0.5,abc\n1,2\n", 2), ("eta,U\n0,1\nx,y\n", 3)],
)
def test_malformed_table(tmp_path, body, line):
    path = tmp_path / "bad.csv"
    path.write_text(body)
    with pytest.raises(E.TableError, match=f":{line}:"):
        E.load_potential_csv(path)


def test_table_too_short(tmp_path):
    path = tmp_path / "short.csv"
    path.write_text("0,1\n")
    with pytest.raises(E.TableError):
        E.load_potential_csv(path)


# lifting


def test_lift_matches_closed_form(free_spectrum):
    mode = free_spectrum.mode(0)
    t = 0.7
    psi = E.lift_to_rank2(mode, t)
    rng = np.random.default_rng(2)
    x, v = rng.uniform(-0.8, 0.8, 400), rng.uniform(-0.49, 0.49, 400)
    ref = W.psi12(W.WellParams(), x, v, t)
    # the discrete energy differs from pi^2/2 by 2e-7, so compare phases at that level
    assert np.max(np.abs(psi(x, v) - ref)) < 1e-4 * math.sqrt(2)


def test_lift_phase_at_zero(free_spectrum):
    psi = E.lift_to_rank2(free_spectrum.mode(0), 0.0)
    val = psi(np.array([0.1]), np.array([0.2]))
    assert val.imag[0] == 0.0 and val.real[0] > 0
    assert psi(np.array([0.6]), np.array([0.0]))[0] == 0


@pytest.mark.parametrize("j, times", [(0, (0.3, 0.6)), (1, (0.2, 0.4))])
def test_lifted_mode_solves_rank2(bump_spectrum, j, times):
    mode = bump_spectrum.mode(j)
    psi = E.lift_to_rank2(mode, times[0])
    sampler = lambda x, v, t: psi(x, v, t)
    U12 = lambda x, v, t: t * t * BUMP(x - v * t)
    nodes = [0.0] if j == 1 else []

    def valid(x, v, t, margin=0.0):
        eta = x - v * t
        reach = margin * (1 + t)
        ok = (np.abs(eta) < 0.5 - reach) & (np.abs(v) < 0.5 - margin)
        for node in nodes:
            ok &= np.abs(eta - node) > reach
        return ok

    fields = ChainFields(
        consts=ChainConstants(n=2),
        rank=2,
        density=lambda x, v, t: np.abs(sampler(x, v, t)) ** 2,
        psi=sampler,
        valid=valid,
    )
    g = SampleGrid(x=Grid1D(-0.7, 0.7, 41), v=Grid1D(-0.5, 0.5, 21), times=times, certify=False)
    r = residual_schrodinger_rank2(fields, U12, fields.consts, g, tol=1e-3)
    assert r.passed
