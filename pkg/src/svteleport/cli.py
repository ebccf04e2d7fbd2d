"""Command-line experiment runner.

Subcommands: figure1, figure2, figure3, resource-check, quad-sweep, mc-run.

Settings resolve as flags > environment (``SVTELE_<NAME>``, e.g.
``SVTELE_LAMBDA=0.9``) > ``--config`` JSON file > per-command defaults.
Exit status: 0 on success, 1 when a paired numeric/closed-form column
breaches its tolerance, 2 for invalid configuration, 3 when a computation
hits a truncation or grid-coverage limit.
"""

import argparse
import csv
from dataclasses import dataclass, field, fields, replace
import json
import math
import os
import sys

import numpy as np

from . import analytics, fock, numphase, quadrature, resource
from .errors import GridCoverageError, InvalidParameterError, TruncationError

ENV_PREFIX = "SVTELE_"
FLOAT_FMT = "{:.12g}"

FIG1_TOL = 1e-10
FIG1_TOTAL_TOL = 1e-9
FIG2_TOL = 1e-8
FIG3_TOL = 1e-8
VARIANCE_TOL = 1e-6
EQUIV_TOL = 1e-8
ROW_THRESHOLD = 1e-8


@dataclass
class RunConfig:
    alpha: float = 6.0
    lam: float = 0.99
    r: list = field(default_factory=lambda: [1.0])
    cutoff: object = "auto"
    tail_tol: float = fock.DEFAULT_TAIL_TOL
    grid_points: int = quadrature.DEFAULT_POINTS
    grid_extent: object = None
    seed: int = 42
    trials: int = 1000
    outcomes: list = field(default_factory=lambda: [(0.0, 0.0)])
    out: object = None
    format: str = "csv"

    def validate(self):
        if not 0 <= self.lam < 1:
            raise InvalidParameterError(f"lambda must lie in [0, 1), got {self.lam}")
        if any(r < 0 for r in self.r):
            raise InvalidParameterError(f"r must be >= 0, got {self.r}")
        if self.grid_points < 64:
            raise InvalidParameterError(f"grid-points must be >= 64, got {self.grid_points}")
        if self.cutoff != "auto" and int(self.cutoff) < 1:
            raise InvalidParameterError(f"cutoff must be 'auto' or >= 1, got {self.cutoff}")
        if self.format not in ("csv", "json"):
            raise InvalidParameterError(f"format must be csv or json, got {self.format}")
        return self


COMMAND_DEFAULTS = {
    "figure1": {"alpha": 6.0, "lam": 0.99},
    "figure2": {"alpha": 6.0, "lam": 0.9},
    "figure3": {"alpha": 6.0, "lam": 0.9},
    "resource-check": {"r": [1.0]},
    "quad-sweep": {"alpha": 1.0, "r": [0.5, 1.0, 1.5, 2.0]},
    "mc-run": {"alpha": 2.0, "lam": 0.8, "format": "json"},
}


@dataclass
class Dataset:
    columns: list
    rows: list
    failures: list = field(default_factory=list)


def _parse_cutoff(value):
    return "auto" if str(value) == "auto" else int(value)


def _parse_floats(value):
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    return [float(v) for v in str(value).replace(",", " ").split()]


def _parse_outcome(value):
    if isinstance(value, (list, tuple)):
        return (float(value[0]), float(value[1]))
    x, y = str(value).split(",")
    return (float(x), float(y))


_CONVERTERS = {
    "alpha": float,
    "lam": float,
    "r": _parse_floats,
    "cutoff": _parse_cutoff,
    "tail_tol": float,
    "grid_points": int,
    "grid_extent": lambda v: None if v in (None, "auto") else float(v),
    "seed": int,
    "trials": int,
    "outcomes": lambda v: [_parse_outcome(o) for o in v],
    "out": str,
    "format": str,
}

# config-file / environment spelling -> RunConfig attribute
_ALIASES = {"lambda": "lam", "tail-tol": "tail_tol", "grid-points": "grid_points",
            "grid-extent": "grid_extent", "outcome": "outcomes"}


def _normalize_keys(mapping):
    out = {}
    for key, value in mapping.items():
        name = _ALIASES.get(key, key.replace("-", "_"))
        if name not in _CONVERTERS:
            raise InvalidParameterError(f"unknown setting {key!r}")
        out[name] = _CONVERTERS[name](value)
    return out


def _env_settings(environ):
    raw = {}
    for f in fields(RunConfig):
        key = ENV_PREFIX + ("LAMBDA" if f.name == "lam" else f.name.upper())
        if key in environ:
            value = environ[key]
            raw[f.name] = value.split(";") if f.name == "outcomes" else value
    return _normalize_keys(raw)


def resolve_config(command, args, environ=None):
    """Merge defaults, config file, environment and flags into a RunConfig."""
    environ = os.environ if environ is None else environ
    cfg = replace(RunConfig(), **COMMAND_DEFAULTS.get(command, {}))
    if args.get("config"):
        with open(args["config"]) as fh:
            cfg = replace(cfg, **_normalize_keys(json.load(fh)))
    cfg = replace(cfg, **_env_settings(environ))
    flags = {k: v for k, v in args.items() if k in _CONVERTERS and v is not None}
    cfg = replace(cfg, **_normalize_keys(flags))
    return cfg.validate()


def _target(cfg):
    if cfg.cutoff == "auto":
        # fidelities see amplitude tails, hence the squared mass tolerance
        return numphase.TargetCoeffs.coherent(cfg.alpha, cfg.tail_tol**2)
    return numphase.TargetCoeffs.coherent(cfg.alpha, cutoff=cfg.cutoff)


def _shown_outcomes(pmf):
    return [int(m) for m in pmf.support(ROW_THRESHOLD)]


def figure1(cfg):
    """``(m, P_numeric, P_closed_form)`` for every ``m`` with ``P > 1e-8``."""
    c = _target(cfg)
    pmf = numphase.jz_pmf(c, cfg.lam, cfg.tail_tol)
    ds = Dataset(["m", "P_numeric", "P_closed_form"], [])
    for m in _shown_outcomes(pmf):
        p_num = pmf[m]
        p_cf = analytics.p_m_coherent(cfg.alpha, cfg.lam, m)
        ds.rows.append([m, p_num, p_cf])
        if abs(p_num - p_cf) > FIG1_TOL:
            ds.failures.append(f"m={m}: |P_numeric - P_closed_form| = {abs(p_num - p_cf):.2e}")
    if abs(pmf.total() - 1) > FIG1_TOTAL_TOL:
        ds.failures.append(f"pmf total {pmf.total()!r} differs from 1")
    return ds


def figure2(cfg):
    """``(m, F_numeric, F_closed_form)`` with number displacement."""
    c = _target(cfg)
    pmf = numphase.jz_pmf(c, cfg.lam, cfg.tail_tol)
    ds = Dataset(["m", "F_numeric", "F_closed_form"], [])
    for m in _shown_outcomes(pmf):
        f_num = numphase.fidelity_displaced(c, cfg.lam, m)
        f_cf = analytics.f_m_coherent(cfg.alpha, cfg.lam, m)
        ds.rows.append([m, f_num, f_cf])
        if abs(f_num - f_cf) > FIG2_TOL:
            ds.failures.append(f"m={m}: |F_numeric - F_closed_form| = {abs(f_num - f_cf):.2e}")
    return ds


def figure3(cfg):
    """``(m, F_undisplaced_numeric)``; the ``m = 0`` row is checked against F(0)."""
    c = _target(cfg)
    pmf = numphase.jz_pmf(c, cfg.lam, cfg.tail_tol)
    ds = Dataset(["m", "F_undisplaced_numeric"], [])
    for m in _shown_outcomes(pmf):
        f = numphase.fidelity_undisplaced(c, cfg.lam, m)
        ds.rows.append([m, f])
        if m == 0:
            f0 = analytics.f0_undisplaced(cfg.alpha, cfg.lam)
            if abs(f - f0) > FIG3_TOL:
                ds.failures.append(f"m=0: |F - F(0)| = {abs(f - f0):.2e}")
    return ds


def resource_check(cfg):
    """Variance and construction-equivalence diagnostics per ``r``.

    ``fidelity_schmidt_vs_evolution`` is reported as computed; the printed
    squeezing unitary produces ``(-tanh r)^n``, so only the parity-corrected
    column is held to ``1 - 1e-8``.
    """
    ds = Dataset(["r", "var_xa_plus_xb", "var_ya_minus_yb", "closed_form",
                  "fidelity_schmidt_vs_evolution", "fidelity_up_to_parity_b"], [])
    for r in cfg.r:
        lam = math.tanh(r)
        cutoff = None if cfg.cutoff == "auto" else cfg.cutoff
        evolved = resource.build_by_evolution(r, cutoff, cfg.tail_tol)
        schmidt = resource.build_schmidt(lam, evolved.cutoffs[0])
        vx, vy = resource.epr_variances(evolved)
        closed = analytics.epr_variance(r)
        f_raw = fock.fidelity(schmidt, evolved)
        f_par = fock.fidelity(schmidt, resource.parity_b(evolved))
        ds.rows.append([r, vx, vy, closed, f_raw, f_par])
        for name, v in (("Var(X_A+X_B)", vx), ("Var(Y_A-Y_B)", vy)):
            if abs(v - closed) > VARIANCE_TOL:
                ds.failures.append(f"r={r}: {name} = {v!r}, expected {closed!r}")
        if f_par < 1 - EQUIV_TOL:
            ds.failures.append(f"r={r}: parity-corrected fidelity {f_par!r} < 1 - {EQUIV_TOL}")
    return ds


def quad_sweep(cfg):
    """``(r, X, Y, fidelity)`` for a coherent target over ``r`` and outcomes."""
    target = quadrature.Coherent(cfg.alpha)
    ds = Dataset(["r", "X", "Y", "fidelity"], [])
    for r in cfg.r:
        grid = quadrature.Grid.for_protocol(r, center=2 * abs(cfg.alpha),
                                            points=cfg.grid_points, extent=cfg.grid_extent)
        for x, y in cfg.outcomes:
            f = quadrature.protocol_fidelity(target, r, quadrature.QuadOutcome(x, y), grid=grid)
            ds.rows.append([r, x, y, f])
    return ds


def mc_run(cfg):
    """Monte Carlo trials, one record per trial."""
    c = _target(cfg)
    records = numphase.sample_runs(c, cfg.lam, cfg.seed, cfg.trials, cfg.tail_tol)
    cols = ["trial", "seed", "m", "phi", "fidelity_displaced", "fidelity_undisplaced"]
    rows = [[rec.to_dict()[k] for k in cols] for rec in records]
    return Dataset(cols, rows)


COMMANDS = {
    "figure1": figure1,
    "figure2": figure2,
    "figure3": figure3,
    "resource-check": resource_check,
    "quad-sweep": quad_sweep,
    "mc-run": mc_run,
}


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return FLOAT_FMT.format(float(value))
    return str(value)


def _json_value(value):
    if isinstance(value, (float, np.floating)):
        return float(FLOAT_FMT.format(float(value)))
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_dataset(ds, fh, fmt, lines=False):
    if fmt == "csv":
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ds.columns)
        for row in ds.rows:
            writer.writerow([_fmt(v) for v in row])
        return
    records = [dict(zip(ds.columns, (_json_value(v) for v in row))) for row in ds.rows]
    if lines:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")
    else:
        json.dump(records, fh, indent=1)
        fh.write("\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, help="coherent target amplitude")
    common.add_argument("--lambda", dest="lam", type=float, help="resource lambda = tanh r")
    common.add_argument("--r", nargs="+", type=float, help="squeezing value(s)")
    common.add_argument("--cutoff", help="Fock cutoff or 'auto'")
    common.add_argument("--tail-tol", dest="tail_tol", type=float, help="truncation tail tolerance")
    common.add_argument("--grid-points", dest="grid_points", type=int)
    common.add_argument("--grid-extent", dest="grid_extent", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--trials", type=int)
    common.add_argument("--outcome", dest="outcomes", action="append",
                        help="quadrature outcome 'X,Y' (repeatable)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--config", help="JSON file of settings")

    parser = argparse.ArgumentParser(prog="svtele", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=fn.__doc__.splitlines()[0])
    return parser


def main(argv=None, environ=None):
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    try:
        cfg = resolve_config(command, args, environ)
    except (InvalidParameterError, ValueError, OSError) as exc:
        print(f"svtele: invalid configuration: {exc}", file=sys.stderr)
        return 2
    try:
        ds = COMMANDS[command](cfg)
    except (TruncationError, GridCoverageError) as exc:
        print(f"svtele {command}: {exc}", file=sys.stderr)
        return 3
    lines = command == "mc-run"
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            write_dataset(ds, fh, cfg.format, lines)
    else:
        try:
            write_dataset(ds, sys.stdout, cfg.format, lines)
        except BrokenPipeError:
            # downstream closed early (e.g. piped into head)
            sys.stdout = None
    for msg in ds.failures:
        print(f"svtele {command}: tolerance breach: {msg}", file=sys.stderr)
    return 1 if ds.failures else 0


if __name__ == "__main__":
    sys.exit(main())
