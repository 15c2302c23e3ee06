"""Command-line front end: parameter sweeps, figure datasets and oracle checks.

Every task produces a table (header plus rows in sweep order) written as CSV
or JSON.  Parameters come from an INI file section named after the task,
from flags, or both; flags win.  Exit codes: 0 success, 2 configuration
error, 3 numeric-domain error.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .bounds import (
    classical_decay_bound,
    commuting_saturator,
    finite_T_bound,
    gapped_bound,
    gapped_saturator,
)
from .engine import low_T_qfi, qfi_thermal
from .errors import QFIError
from .ising import IsingParams, Table, figure1_datasets, qfi_parallel, qfi_parallel_dense, qfi_transverse
from .operators import SIGMA_X, SIGMA_Z, spectral_seminorm
from .opfile import OperatorFileError, load_operator

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
BOUND_RTOL = 1e-9


class ConfigError(Exception):
    pass


# key -> (parser, description used in error messages)
def _positive_int(s):
    v = int(s)
    if v < 1:
        raise ValueError
    return v


def _real(s):
    v = float(s)
    if not np.isfinite(v):
        raise ValueError
    return v


def _positive(s):
    v = _real(s)
    if v <= 0:
        raise ValueError
    return v


def _nonnegative(s):
    v = _real(s)
    if v < 0:
        raise ValueError
    return v


def _steps(s):
    v = int(s)
    if v < 2:
        raise ValueError
    return v


def _choice(*options):
    def parse(s):
        if s not in options:
            raise ValueError
        return s

    return parse


KEYS = {
    "sweep": (str, "a parameter name"),
    "min": (_real, "a finite real"),
    "max": (_real, "a finite real"),
    "steps": (_steps, "an integer >= 2"),
    "scale": (_choice("linear", "log"), "'linear' or 'log'"),
    "out": (str, "a path"),
    "format": (_choice("csv", "json"), "'csv' or 'json'"),
    "method": (_choice("transfer", "dense"), "'transfer' or 'dense'"),
    "jobs": (_positive_int, "a positive integer"),
    "n": (_positive_int, "a positive integer"),
    "j": (_real, "a finite real"),
    "b": (_real, "a finite real"),
    "beta": (_positive, "a positive real"),
    "alpha": (_real, "a finite real"),
    "delta": (_nonnegative, "a nonnegative real"),
    "h": (str, "a path"),
    "hprime": (str, "a path"),
}
COMMON_KEYS = {"sweep", "min", "max", "steps", "scale", "out", "format", "jobs"}
DISPLAY = {"n": "N", "j": "J", "b": "B", "delta": "Delta", "h": "H", "hprime": "Hprime"}


@dataclass
class Task:
    name: str
    params: dict  # parameter -> default
    sweepable: tuple
    extra_keys: frozenset = frozenset()
    columns: tuple = ()
    bound_pairs: tuple = ()  # (value column, bound column) checked on every row
    row: Callable | None = None
    help: str = ""


@dataclass
class SweepConfig:
    task: str
    params: dict
    sweep: str | None = None
    values: np.ndarray | None = None
    out: str | None = None
    format: str = "csv"
    method: str = "transfer"
    jobs: int = 1
    operators: dict = field(default_factory=dict)


# ---------------------------------------------------------------- row makers


def _qubit_row(cfg, P):
    alpha, Delta, beta = P["alpha"], P["delta"], P["beta"]
    H = Delta * (np.cos(alpha) * SIGMA_Z + np.sin(alpha) * SIGMA_X)
    out = qfi_thermal(H, SIGMA_Z, beta)
    x = beta * Delta
    transverse = 1.0 if x == 0 else np.tanh(x) ** 2 / x**2
    closed = beta**2 * (np.cos(alpha) ** 2 / np.cosh(x) ** 2 + np.sin(alpha) ** 2 * transverse)
    return (alpha, Delta, beta, out.total, out.diag, out.offdiag, closed, finite_T_bound(SIGMA_Z, beta))


def _ising_params(P):
    return IsingParams(N=P["n"], J=P["j"], B=P["b"], beta=P["beta"])


def _ising_z_row(cfg, P):
    p = _ising_params(P)
    F = qfi_parallel(p) if cfg.method == "transfer" else qfi_parallel_dense(p)
    return (p.N, p.J, p.B, p.beta, F, p.beta**2 * p.N**2)


def _ising_x_row(cfg, P):
    p = _ising_params(P)
    return (p.N, p.J, p.B, p.beta, qfi_transverse(p, cfg.method), p.beta**2 * p.N**2)


def _dense_row(cfg, P):
    H, Hp = cfg.operators["h"], cfg.operators["hprime"]
    out = qfi_thermal(H, Hp, P["beta"])
    return (P["beta"], out.total, out.diag, out.offdiag, finite_T_bound(Hp, P["beta"]))


def _bounds_row(cfg, P):
    Hp = cfg.operators.get("hprime", SIGMA_Z)
    beta, Delta = P["beta"], P["delta"]
    if Delta <= 0:
        raise QFIError("bounds task needs delta > 0")
    seminorm = spectral_seminorm(Hp)
    commuting = qfi_thermal(commuting_saturator(Hp, 0.0, Delta), Hp, beta)
    gapped_H = gapped_saturator(Hp, Delta)
    gapped = qfi_thermal(gapped_H, Hp, beta)
    return (
        beta,
        Delta,
        finite_T_bound(Hp, beta),
        commuting.total,
        gapped.total,
        gapped.diag,
        gapped_bound(Hp, Delta),
        low_T_qfi(gapped_H, Hp),
        classical_decay_bound(Hp.shape[0], beta, Delta, seminorm),
    )


ISING_PARAMS = {"n": 10, "j": 1.0, "b": 0.5, "beta": 1.0}

TASKS = {
    "qubit": Task(
        "qubit",
        {"alpha": 0.0, "delta": 1.0, "beta": 1.0},
        ("alpha", "delta", "beta"),
        columns=("alpha", "Delta", "beta", "qfi_total", "qfi_diag", "qfi_offdiag", "closed_form", "bound_finite_T"),
        bound_pairs=(("qfi_total", "bound_finite_T"),),
        row=_qubit_row,
        help="qubit H = Delta (cos(alpha) Z + sin(alpha) X) probed along Z",
    ),
    "ising-z": Task(
        "ising-z",
        dict(ISING_PARAMS),
        ("beta", "j", "b"),
        extra_keys=frozenset({"method"}),
        columns=("N", "J", "B", "beta", "F_parallel", "bound_finite_T"),
        bound_pairs=(("F_parallel", "bound_finite_T"),),
        row=_ising_z_row,
        help="Ising chain, QFI for a field along Z",
    ),
    "ising-x": Task(
        "ising-x",
        dict(ISING_PARAMS),
        ("beta", "j", "b"),
        extra_keys=frozenset({"method"}),
        columns=("N", "J", "B", "beta", "F_transverse", "bound_finite_T"),
        bound_pairs=(("F_transverse", "bound_finite_T"),),
        row=_ising_x_row,
        help="Ising chain, QFI for a transverse field along X",
    ),
    "dense": Task(
        "dense",
        {"beta": 1.0},
        ("beta",),
        extra_keys=frozenset({"h", "hprime"}),
        columns=("beta", "qfi_total", "qfi_diag", "qfi_offdiag", "bound_finite_T"),
        bound_pairs=(("qfi_total", "bound_finite_T"),),
        row=_dense_row,
        help="thermal QFI of operator files H and Hprime",
    ),
    "bounds": Task(
        "bounds",
        {"beta": 1.0, "delta": 1.0},
        ("beta", "delta"),
        extra_keys=frozenset({"hprime"}),
        columns=(
            "beta",
            "Delta",
            "bound_finite_T",
            "qfi_commuting_saturator",
            "qfi_gapped_saturator",
            "qfi_gapped_saturator_diag",
            "bound_gapped",
            "ground_qfi_gapped_saturator",
            "bound_classical_decay",
        ),
        bound_pairs=(
            ("qfi_commuting_saturator", "bound_finite_T"),
            ("qfi_gapped_saturator", "bound_finite_T"),
            ("ground_qfi_gapped_saturator", "bound_gapped"),
        ),
        row=_bounds_row,
        help="bounds and their saturating Hamiltonians for Hprime (default Pauli Z)",
    ),
    "figure1a": Task(
        "figure1a",
        {},
        ("j",),
        columns=("J", "N", "F_parallel", "bound"),
        bound_pairs=(("F_parallel", "bound"),),
        help="Ising parallel-field QFI versus J at B = 0, beta = 1, N = 10, 30, 90",
    ),
    "figure1b": Task(
        "figure1b",
        {},
        ("beta",),
        columns=("beta", "F_parallel", "F_transverse", "bound", "lowT_overlay"),
        bound_pairs=(("F_parallel", "bound"), ("F_transverse", "bound")),
        help="Ising QFI versus beta at N = 50, B = 0.05, J = 2",
    ),
}


# ---------------------------------------------------------------- config


def _key_lines(text: str) -> dict:
    """(section, key) -> line number, for error messages."""
    lines, section = {}, None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        m = re.match(r"\[([^\]]+)\]", stripped)
        if m:
            section = m.group(1).strip()
            lines[(section, None)] = lineno
            continue
        m = re.match(r"([^=:#;\s][^=:]*?)\s*[=:]", stripped)
        if m and section is not None and not line[:1].isspace():
            lines.setdefault((section, m.group(1).strip().lower()), lineno)
    return lines


def read_config(path: str, task: str) -> dict:
    """Raw values of section [task] as {key: (value, 'path:line')}."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from None
    parser = configparser.ConfigParser(interpolation=None, default_section="__defaults_unused__")
    try:
        parser.read_string(text, source=path)
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: expected a [section] header before key-value lines") from None
    except (configparser.DuplicateOptionError, configparser.DuplicateSectionError) as exc:
        raise ConfigError(f"{path}:{exc.lineno}: {exc}") from None
    except configparser.ParsingError as exc:
        lineno, line = exc.errors[0]
        raise ConfigError(f"{path}:{lineno}: cannot parse line {line.strip()!r}") from None
    lines = _key_lines(text)
    for section in parser.sections():
        if section not in TASKS:
            raise ConfigError(f"{path}:{lines.get((section, None), '?')}: unknown section [{section}]")
    if not parser.has_section(task):
        raise ConfigError(f"{path}: no [{task}] section")
    return {key: (value, f"{path}:{lines.get((task, key), '?')}") for key, value in parser.items(task)}


def _parse(key: str, raw: str, where: str):
    if key not in KEYS:
        raise ConfigError(f"{where}: unknown key '{key}'")
    parse, expected = KEYS[key]
    try:
        return parse(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: key '{key}' must be {expected}, got {raw!r}") from None


def build_config(task_name: str, args: argparse.Namespace) -> SweepConfig:
    task = TASKS[task_name]
    allowed = COMMON_KEYS | set(task.params) | task.extra_keys
    if task_name in ("figure1a", "figure1b"):
        allowed = COMMON_KEYS - {"sweep"}
    raw = read_config(args.config, task_name) if args.config else {}
    for key, flag in vars(args).items():
        if key in KEYS and flag is not None:
            raw[key] = (flag, f"--{DISPLAY.get(key, key)}")
    if args.log:
        raw["scale"] = ("log", "--log")
    values, where = {}, {}
    for key, (value, loc) in raw.items():
        if key not in KEYS:
            raise ConfigError(f"{loc}: unknown key '{key}'")
        if key not in allowed:
            raise ConfigError(f"{loc}: key '{key}' does not apply to task '{task_name}'")
        values[key] = _parse(key, str(value), loc)
        where[key] = loc

    cfg = SweepConfig(task=task_name, params=dict(task.params))
    for key in task.params:
        if key in values:
            cfg.params[key] = values[key]
    cfg.out = values.get("out")
    cfg.format = values.get("format", "csv")
    cfg.method = values.get("method", "transfer")
    cfg.jobs = values.get("jobs", 1)

    sweep = values.get("sweep")
    if sweep is not None:
        sweep = sweep.lower()
        if sweep not in task.sweepable:
            names = ", ".join(DISPLAY.get(s, s) for s in task.sweepable)
            raise ConfigError(f"{where['sweep']}: key 'sweep' must be one of {names} for task '{task_name}', got {sweep!r}")
    range_keys = [k for k in ("min", "max", "steps") if k in values]
    if task_name in ("figure1a", "figure1b"):
        sweep = task.sweepable[0] if range_keys else None
    if sweep is None and range_keys:
        raise ConfigError(f"{where[range_keys[0]]}: key '{range_keys[0]}' needs a 'sweep' parameter")
    if sweep is not None:
        for k in ("min", "max", "steps"):
            if k not in values:
                raise ConfigError(f"{k!r} is required when sweeping {DISPLAY.get(sweep, sweep)}")
        lo, hi, steps = values["min"], values["max"], values["steps"]
        if not lo < hi:
            raise ConfigError(f"{where['min']}: key 'min' must be below max ({lo} >= {hi})")
        if values.get("scale") == "log":
            if lo <= 0:
                raise ConfigError(f"{where['min']}: key 'min' must be positive for a log sweep, got {lo}")
            cfg.values = np.logspace(np.log10(lo), np.log10(hi), steps)
        else:
            cfg.values = np.linspace(lo, hi, steps)
        cfg.sweep = sweep
        _check_sweep_domain(sweep, cfg.values, where["min"])

    if task_name in ("ising-z", "ising-x"):
        n = cfg.params["n"]
        if n < (3 if task_name == "ising-x" else 2):
            raise ConfigError(f"{where.get('n', '--N')}: key 'N' must be at least {3 if task_name == 'ising-x' else 2}, got {n}")
    for key in ("h", "hprime"):
        if key in values:
            try:
                cfg.operators[key] = load_operator(values[key])
            except FileNotFoundError:
                raise ConfigError(f"{where[key]}: key '{DISPLAY[key]}': no such file {values[key]!r}") from None
            except (OperatorFileError, QFIError) as exc:
                raise ConfigError(f"{where[key]}: key '{DISPLAY[key]}': {exc}") from None
    if task_name == "dense":
        for key in ("h", "hprime"):
            if key not in cfg.operators:
                raise ConfigError(f"task 'dense' needs key '{DISPLAY[key]}' (an operator file)")
        if cfg.operators["h"].shape != cfg.operators["hprime"].shape:
            raise ConfigError(f"{where['hprime']}: key 'Hprime' has dimension {cfg.operators['hprime'].shape[0]}, H has {cfg.operators['h'].shape[0]}")
    return cfg


def _check_sweep_domain(sweep, values, where):
    parse, expected = KEYS[sweep]
    for v in (values[0], values[-1]):
        try:
            parse(repr(float(v)))
        except ValueError:
            raise ConfigError(f"{where}: swept '{DISPLAY.get(sweep, sweep)}' must be {expected}, range reaches {v!r}") from None


# ---------------------------------------------------------------- running


def run(cfg: SweepConfig) -> Table:
    """Evaluate the configured task; rows come back in sweep order."""
    task = TASKS[cfg.task]
    if cfg.task == "figure1a":
        table = figure1_datasets("a", J_values=cfg.values)
    elif cfg.task == "figure1b":
        table = figure1_datasets("b", beta_values=cfg.values)
    else:
        points = [dict(cfg.params)] if cfg.sweep is None else [dict(cfg.params, **{cfg.sweep: float(v)}) for v in cfg.values]
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(lambda P: task.row(cfg, P), points))
        table = Table(task.columns, [tuple(_plain(x) for x in row) for row in rows])
    check_bounds(table, task.bound_pairs)
    return table


def _plain(x):
    return int(x) if isinstance(x, (int, np.integer)) and not isinstance(x, bool) else float(x)


def check_bounds(table: Table, pairs) -> None:
    for value_col, bound_col in pairs:
        vi, bi = table.columns.index(value_col), table.columns.index(bound_col)
        for k, row in enumerate(table.rows):
            if row[vi] > row[bi] * (1 + BOUND_RTOL) + 1e-300:
                raise QFIError(f"row {k}: {value_col} = {row[vi]!r} exceeds {bound_col} = {row[bi]!r}")


def _format_value(x) -> str:
    return str(x) if isinstance(x, int) else "%.17g" % x


def render(table: Table, fmt: str) -> str:
    if fmt == "json":
        doc = {"columns": list(table.columns), "rows": [list(r) for r in table.rows]}
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_format_value(x) for x in row])
    return buf.getvalue()


def write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------- argparse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gibbsqfi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="task", required=True, metavar="task")
    for name, task in TASKS.items():
        p = sub.add_parser(name, help=task.help, description=task.help)
        _add_common(p)
    v = sub.add_parser("verify", help="run the oracle suites and report pass/fail counts")
    v.add_argument("--quick", action="store_true", help="smaller instance counts")
    return parser


def _add_common(p):
    p.add_argument("--config", help="INI file with a section named after the task")
    for flag, dest in [("--N", "n"), ("--J", "j"), ("--B", "b"), ("--beta", "beta"), ("--alpha", "alpha"), ("--delta", "delta")]:
        p.add_argument(flag, dest=dest)
    p.add_argument("--sweep", help="parameter to sweep")
    p.add_argument("--min", dest="min")
    p.add_argument("--max", dest="max")
    p.add_argument("--steps", dest="steps")
    p.add_argument("--log", action="store_true", help="logarithmic sweep spacing (same as scale = log)")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", dest="format", help="csv (default) or json")
    p.add_argument("--method", help="transfer (default) or dense, Ising tasks only")
    p.add_argument("--jobs", help="worker threads for independent rows")
    p.add_argument("--H", dest="h", help="operator file for H (dense task)")
    p.add_argument("--Hprime", dest="hprime", help="operator file for Hprime (dense and bounds tasks)")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.task == "verify":
        from .verify import run_all

        return run_all(quick=args.quick)
    try:
        cfg = build_config(args.task, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        table = run(cfg)
    except (QFIError, ValueError, FloatingPointError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    write_output(render(table, cfg.format), cfg.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
