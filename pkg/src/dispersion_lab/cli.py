"""Command-line front end.

    dispersion-lab figure fig4 [--times 0,0.5] [--grid 401]
    dispersion-lab verify well|oscillator|gaussian|all [--fd-step 1e-3]
    dispersion-lab spectrum --free -k 4 | --potential table.csv
    dispersion-lab oscillator -s 1

Exit codes: 0 success, 1 tolerance breach, 2 usage error, 3 I/O error.
Output goes to --out, else $DISPERSION_LAB_OUT, else the working directory.
"""

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import eigensolve, oscillator, verify, well
from .errors import DomainError, UndefinedFieldError

EXIT_OK, EXIT_BREACH, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
MIN_RESOLUTION = 64
FIGURE_STEP = 1e-4

FIGURE_TIMES = {
    "fig4": (0.0, 0.4, 0.6, 0.9, 1.0, 1.4, 1.6, 1.9),
    "fig5": (0.0, 0.4, 0.6, 0.9, 1.0, 1.4, 1.6, 1.9),
    "fig6": (0.01, 0.1, 0.2, 0.3, 0.4, 0.9, 1.9),
    "fig7": (0.01, 0.1, 0.2, 0.3, 0.4, 0.9, 1.9),
    "fig8": (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8),
    "fig9": (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8),
    "fig10": (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8),
    "fig11": (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9),
    "fig12": (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9),
}
FIGURE_STATES = {"fig4": (0,), "fig5": (1,), "fig6": (0,), "fig7": (1,)}
FIGURE_FIELDS = {
    "fig4": "f1",
    "fig5": "f1",
    "fig6": "mean_v",
    "fig7": "mean_v",
    "fig8": "phase1",
    "fig9": "hamilton1",
    "fig10": "potential_v1",
    "fig11": "pressure",
    "fig12": "force_pressure",
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    target: str = ""
    dx: float = 1.0
    dv: float = 1.0
    hbar2: float = 1.0
    mass: float = 1.0
    state: int | None = None
    times: tuple | None = None
    grid: int | None = None
    fd_step: float | None = None
    quad_tol: float | None = None
    out: str = "."
    format: str = "csv"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.times is not None and any(not (t >= 0) for t in self.times):
            raise UsageError("times must be non-negative")
        if self.grid is not None and self.grid < MIN_RESOLUTION:
            raise UsageError(f"--grid must be at least {MIN_RESOLUTION}")
        for name in ("dx", "dv", "hbar2", "mass"):
            if not getattr(self, name) > 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.fd_step is not None and not self.fd_step > 0:
            raise UsageError("--fd-step must be positive")

    def header(self):
        items = asdict(self)
        extra = items.pop("extra")
        items.update(extra)
        items.pop("out")
        parts = []
        for key in sorted(items):
            val = items[key]
            if isinstance(val, (list, tuple)):
                val = ";".join(_short(v) for v in val)
            else:
                val = _short(val)
            parts.append(f"{key}={val}")
        return "# " + " ".join(parts)


# --------------------------------------------------------------------------
# output


def _fmt(v):
    if v is None:
        return "none"
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _short(v):
    # shortest round-trip form keeps headers readable and still exact
    if isinstance(v, float):
        return repr(v)
    return _fmt(v)


def _write_atomic(path, text):
    folder = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def table_text(cfg, columns, rows):
    lines = [cfg.header(), ",".join(columns)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def json_text(cfg, payload):
    doc = {"config": cfg.header()[2:], "data": payload}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(cfg, stem, columns, rows):
    """Render a table in the configured format; returns (path, text)."""
    if cfg.format == "json":
        payload = {c: [r[i] for r in rows] for i, c in enumerate(columns)}
        payload = {k: [v if isinstance(v, str) else float(v) for v in vals] for k, vals in payload.items()}
        return os.path.join(cfg.out, stem + ".json"), json_text(cfg, payload)
    return os.path.join(cfg.out, stem + ".csv"), table_text(cfg, columns, rows)


def _flush(outputs):
    # everything is rendered before the first write, so errors leave no files
    for path, text in outputs:
        _write_atomic(path, text)
    return [path for path, _ in outputs]


# --------------------------------------------------------------------------
# figure


def symmetric_grid(half_width, count):
    """``count`` points on (-half_width, half_width) excluding the ends,
    mirror-symmetric with an exact zero when count is odd."""
    half = np.linspace(0.0, half_width, count // 2 + 2)[:-1]
    if count % 2:
        return np.concatenate([-half[:0:-1], half])
    mids = 0.5 * (half[:-1] + half[1:])
    return np.concatenate([-mids[::-1], mids])


def figure_slice(p, name, t, count, quad_tol=None, h=FIGURE_STEP):
    kind = FIGURE_FIELDS[name]
    _, outer = well.band_edges(p, t)
    if kind == "f1":
        # the density vanishes at the support edges, so they are included
        half = np.linspace(0.0, outer, count // 2 + 1)
        x = np.concatenate([-half[:0:-1], half]) if count % 2 else np.linspace(-outer, outer, count)
        return x, well.f1(p, x, t)
    x = symmetric_grid(outer, count)
    if kind == "mean_v":
        return x, well.mean_v(p, x, t)
    if kind == "phase1":
        if quad_tol is not None:
            return x, well.phase1(p, x, t, quad_tol=quad_tol)
        return x, well.phase1(p, x, t)
    if kind == "hamilton1":
        return x, well.hamilton1(p, x, t, h)
    if kind == "potential_v1":
        return x, well.potential_v1(p, x, t, h)
    if kind == "pressure":
        return x, well.pressure(p, x, t)
    return x, well.force_pressure(p, x, t, h)


def cmd_figure(cfg):
    if cfg.target not in FIGURE_TIMES:
        raise UsageError(f"unknown figure {cfg.target!r}; choose from {', '.join(FIGURE_TIMES)}")
    # echo the effective values in the file headers
    cfg = replace(
        cfg,
        times=cfg.times or FIGURE_TIMES[cfg.target],
        grid=cfg.grid or 401,
        fd_step=cfg.fd_step or FIGURE_STEP,
    )
    times, count = cfg.times, cfg.grid
    states = (cfg.state,) if cfg.state is not None else FIGURE_STATES.get(cfg.target, (0, 1))
    outputs = []
    for n in states:
        p = well.WellParams(dx=cfg.dx, dv=cfg.dv, hbar2=cfg.hbar2, m=cfg.mass, n=n)
        for t in times:
            x, y = figure_slice(p, cfg.target, t, count, cfg.quad_tol, cfg.fd_step)
            stem = f"{cfg.target}_n{n}_t{float(t)!r}"
            outputs.append(_emit(cfg, stem, ("x", "value"), list(zip(x, y))))
    return _flush(outputs), EXIT_OK


# --------------------------------------------------------------------------
# verify


def cmd_verify(cfg):
    if cfg.target not in ("well", "oscillator", "gaussian", "all"):
        raise UsageError(f"unknown suite {cfg.target!r}")
    cfg = replace(cfg, grid=cfg.grid or 201, fd_step=cfg.fd_step or verify.DEFAULT_STEP)
    suite_cfg = verify.SuiteConfig(
        dx=cfg.dx,
        dv=cfg.dv,
        hbar2=cfg.hbar2,
        m=cfg.mass,
        h=cfg.fd_step,
        states=(cfg.state,) if cfg.state is not None else (0, 1),
        grid=cfg.grid,
    )
    reports = verify.run_suite(cfg.target, suite_cfg)
    if cfg.format == "csv":
        cols = ("equation", "h", "linf", "l2", "order", "n_samples", "n_skipped", "passed")
        rows = []
        for r in reports:
            d = r.to_json()
            rows.append([d[c] if d[c] is not None else "" for c in cols])
        path, text = os.path.join(cfg.out, f"verify_{cfg.target}.csv"), table_text(cfg, cols, rows)
    else:
        path = os.path.join(cfg.out, f"verify_{cfg.target}.json")
        text = verify.reports_to_json(reports) + "\n"
    _flush([(path, text)])
    failed = [r.equation for r in reports if not r.passed]
    for r in reports:
        status = "ok  " if r.passed else "FAIL"
        order = "-" if r.order is None else f"{r.order:.3f}"
        print(f"{status} {r.equation:36s} linf={r.linf:.3e} order={order}")
    if failed:
        print("tolerance breach: " + ", ".join(failed), file=sys.stderr)
        return [path], EXIT_BREACH
    return [path], EXIT_OK


# --------------------------------------------------------------------------
# spectrum


def cmd_spectrum(cfg):
    cfg = replace(cfg, grid=cfg.grid or 2000)
    k = cfg.extra.get("k", 6)
    grid_n = cfg.grid
    eta0 = 0.5 * cfg.dx
    if cfg.extra.get("free"):
        U = eigensolve.PotentialSpec.free()
    else:
        source = cfg.extra.get("potential")
        if not source:
            raise UsageError("spectrum needs --free or --potential FILE")
        U = eigensolve.load_potential_csv(source)
    try:
        res = eigensolve.solve_spectrum(U, eta0, m=cfg.mass, hbar2=cfg.hbar2, k_states=k, grid_n=grid_n)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    cols = ["index", "energy", "parity"]
    rows = [[j, e, res.parity[j]] for j, e in enumerate(res.eigenvalues)]
    if cfg.extra.get("free"):
        cols += ["analytic", "rel_error"]
        for j, row in enumerate(rows):
            exact = cfg.hbar2**2 * math.pi**2 * (j + 1) ** 2 / (2.0 * cfg.mass * (2.0 * eta0) ** 2)
            row += [exact, abs(row[1] - exact) / exact]
    outputs = [_emit(cfg, "spectrum", cols, rows)]
    if cfg.extra.get("eigenvectors"):
        vcols = ["eta"] + [f"psi{j}" for j in range(k)]
        vrows = np.column_stack([res.eta, res.eigenvectors.T]).tolist()
        outputs.append(_emit(cfg, "eigenvectors", vcols, vrows))
    return _flush(outputs), EXIT_OK


# --------------------------------------------------------------------------
# oscillator


def cmd_oscillator(cfg):
    s = cfg.state if cfg.state is not None else 0
    op = oscillator.OscParams(
        m=cfg.mass, omega=cfg.extra.get("omega", 1.0), hbar=cfg.extra.get("hbar", 1.0), s=s
    )
    cfg = replace(cfg, grid=cfg.grid or 101, state=s)
    count = cfg.grid
    xs = np.linspace(-5.0 * op.sigma1, 5.0 * op.sigma1, count)
    vs = np.linspace(-5.0 * op.sigma2, 5.0 * op.sigma2, count)
    X, Vv = np.meshgrid(xs, vs, indexing="ij")
    F = oscillator.f12_oscillator(op, X, Vv)
    rows12 = np.column_stack([X.ravel(), Vv.ravel(), F.ravel()]).tolist()
    rows1 = np.column_stack([xs, oscillator.f1_oscillator(op, xs)]).tolist()
    n_max = cfg.extra.get("levels", 4)
    ladder = oscillator.uncertainty_ladder(op, n_max)
    hbars = oscillator.hbar_ladder(op, n_max)
    rows_l = [
        [n + 1, a, b, hb, a * b, hb / (2.0 * op.m)]
        for n, ((a, b), hb) in enumerate(zip(ladder, hbars))
    ]
    outputs = [
        _emit(cfg, f"oscillator_f12_s{s}", ("x", "v", "value"), rows12),
        _emit(cfg, f"oscillator_f1_s{s}", ("x", "value"), rows1),
        _emit(
            cfg,
            "oscillator_ladder",
            ("n", "sigma_n", "sigma_next", "hbar_n", "product", "hbar_n_over_2m"),
            rows_l,
        ),
    ]
    return _flush(outputs), EXIT_OK


# --------------------------------------------------------------------------
# argument parsing


def _times(text):
    try:
        vals = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad time list {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty time list")
    return vals


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dx", type=float, default=1.0)
    common.add_argument("--dv", type=float, default=1.0)
    common.add_argument("--hbar2", type=float, default=1.0)
    common.add_argument("--mass", type=float, default=1.0)
    common.add_argument("-n", "-s", "--state", dest="state", type=int, default=None)
    common.add_argument("--times", type=_times, default=None, help="comma-separated list")
    common.add_argument("--grid", type=int, default=None)
    common.add_argument("--fd-step", type=float, default=None)
    common.add_argument("--quad-tol", type=float, default=None)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=("csv", "json"), default=None)

    parser = argparse.ArgumentParser(prog="dispersion-lab", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    fig = sub.add_parser("figure", parents=[common], help="figure data as CSV")
    fig.add_argument("target", choices=sorted(FIGURE_TIMES, key=lambda s: int(s[3:])))
    ver = sub.add_parser("verify", parents=[common], help="run a residual suite")
    ver.add_argument("target", choices=("well", "oscillator", "gaussian", "all"))
    spec = sub.add_parser("spectrum", parents=[common], help="eigenvalues of the well problem")
    src = spec.add_mutually_exclusive_group(required=True)
    src.add_argument("--free", action="store_true", help="U = 0, with analytic comparison")
    src.add_argument("--potential", help="two-column CSV (eta, U)")
    spec.add_argument("-k", type=int, default=6, help="number of states")
    spec.add_argument("--eigenvectors", action="store_true", help="also dump eigenvectors")
    osc = sub.add_parser("oscillator", parents=[common], help="oscillator chain tables")
    osc.add_argument("--omega", type=float, default=1.0)
    osc.add_argument("--hbar", type=float, default=1.0)
    osc.add_argument("--levels", type=int, default=4)
    return parser


def config_from_args(args):
    extra = {}
    if args.command == "spectrum":
        extra = {"k": args.k, "free": args.free, "potential": args.potential or "",
                 "eigenvectors": args.eigenvectors}
    elif args.command == "oscillator":
        extra = {"omega": args.omega, "hbar": args.hbar, "levels": args.levels}
    out = args.out or os.environ.get("DISPERSION_LAB_OUT") or "."
    fmt = args.format or ("json" if args.command == "verify" else "csv")
    return RunConfig(
        command=args.command,
        target=getattr(args, "target", ""),
        dx=args.dx,
        dv=args.dv,
        hbar2=args.hbar2,
        mass=args.mass,
        state=args.state,
        times=args.times,
        grid=args.grid,
        fd_step=args.fd_step,
        quad_tol=args.quad_tol,
        out=out,
        format=fmt,
        extra=extra,
    )


COMMANDS = {
    "figure": cmd_figure,
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "oscillator": cmd_oscillator,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        os.makedirs(cfg.out, exist_ok=True)
        paths, code = COMMANDS[cfg.command](cfg)
    except (UsageError, DomainError, UndefinedFieldError) as exc:
        print(f"dispersion-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, eigensolve.TableError) as exc:
        print(f"dispersion-lab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    for path in paths:
        print(path)
    return code
