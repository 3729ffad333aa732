"""Command-line front end: ``qlg run | dispersion | selftest``.

Every run writes into ``--out`` (a directory):

* ``manifest.json`` — config echo, library versions, derived constants.
* ``timeseries.csv`` — ``t, site, density, flux0, re_up, im_up, re_down, im_down``.
* ``errors.csv`` — ``t, l2_error_vs_analytic`` for comparison runs.
* experiment-specific extras (``kernel.csv``, ``selftest.json``,
  ``snapshot.bin``).

Floats are written with 17 significant digits and JSON keys are sorted, so
identical configurations produce byte-identical files.  Errors are reported
as a JSON object on stderr with a nonzero exit status.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from importlib import metadata
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .engine import write_snapshot
from .errors import ConfigError, QLGError
from .experiments import (
    EXPERIMENTS,
    TIMESERIES_COLUMNS,
    ExperimentResult,
    RunConfig,
    dispersion_rows,
    gate_algebra_report,
    run_experiment,
)

__all__ = ["main", "build_parser", "load_config_file", "emit_dispersion_table"]

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_ERROR = 2

# Flag name -> RunConfig field.
_FLAG_FIELDS = {
    "experiment": "experiment",
    "grid": "grid_points",
    "steps": "steps",
    "mass": "mass",
    "barrier_mass": "barrier_mass",
    "well_length": "well_length",
    "kappa": "kappa",
    "level": "level",
    "magnetization": "magnetization",
    "gamma": "gamma",
    "gamma_profile": "gamma_profile",
    "closure": "closure",
    "out": "output_path",
    "seed": "seed",
    "record_every": "record_every",
}


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _versions() -> dict[str, str]:
    out = {"numpy": np.__version__}
    for dist in ("artifact", "scipy", "scikit-learn"):
        try:
            out[dist] = metadata.version(dist)
        except metadata.PackageNotFoundError:  # pragma: no cover - dev checkouts
            out[dist] = "unknown"
    return out


def _json_default(obj: Any) -> Any:
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _dump_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default) + "\n"


def load_config_file(path: str | Path) -> dict[str, Any]:
    """Parse a ``key = value`` config file (``#`` starts a comment).

    Keys may use dashes or underscores and may name either a flag
    (``grid``, ``out``) or a config field (``grid_points``).
    """
    known = {f.name: f for f in fields(RunConfig)}
    out: dict[str, Any] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        key = _FLAG_FIELDS.get(key, key)
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _coerce(key, value)
    return out


_INT_FIELDS = {"grid_points", "steps", "record_every", "level", "magnetization", "seed"}
_FLOAT_FIELDS = {"mass", "barrier_mass", "well_length", "kappa", "gamma"}


def _coerce(key: str, value: str) -> Any:
    try:
        if key in _INT_FIELDS:
            return int(value)
        if key in _FLOAT_FIELDS:
            return float(value)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r}") from exc
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qlg", description="Quantum lattice gas Dirac simulations.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment and write CSV/JSON outputs")
    run.add_argument("--config", help="key = value config file (flags take precedence)")
    run.add_argument("--experiment", choices=EXPERIMENTS)
    run.add_argument("--grid", type=int, help="lattice size (sites)")
    run.add_argument("--steps", type=int, help="time steps (path length N for kernel)")
    run.add_argument("--record-every", type=int)
    run.add_argument("--mass", type=float)
    run.add_argument("--barrier-mass", type=float)
    run.add_argument("--well-length", type=float)
    run.add_argument("--kappa", type=float)
    run.add_argument("--level", type=int)
    run.add_argument("--magnetization", type=int, help="kernel net displacement M")
    run.add_argument("--gamma", type=float, help="uniform Lorentz factor (free, many_body)")
    run.add_argument("--gamma-profile", choices=("local", "unity"))
    run.add_argument("--closure", choices=("rest_energy", "relativistic"))
    run.add_argument("--out", help="output directory")
    run.add_argument("--seed", type=int)

    disp = sub.add_parser("dispersion", help="write the grid dispersion table")
    disp.add_argument("--mass", type=float, default=0.1)
    disp.add_argument("--ell", type=float, default=1.0)
    disp.add_argument("--tau", type=float, default=1.0)
    disp.add_argument("--samples", type=int, default=257)
    disp.add_argument("--out", default="-", help="CSV path, or '-' for stdout")

    st = sub.add_parser("selftest", help="run the gate-algebra self-test and print a JSON report")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--out", help="optional directory for selftest.json")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    values: dict[str, Any] = {}
    if args.config:
        values.update(load_config_file(args.config))
    for flag, name in _FLAG_FIELDS.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[name] = v
    return RunConfig(**values)


def _write_timeseries(path: Path, series: list[tuple[int, np.ndarray]]) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(TIMESERIES_COLUMNS) + "\n")
        for t, arr in series:
            up, down = arr[:, 0], arr[:, 1]
            up2, down2 = np.abs(up) ** 2, np.abs(down) ** 2
            block = np.column_stack(
                [up2 + down2, up2 - down2, up.real, up.imag, down.real, down.imag]
            )
            for site, row in enumerate(block):
                fh.write(f"{t},{site}," + ",".join(_fmt(x) for x in row) + "\n")


def _write_table(path: Path, header: Sequence[str], rows: list[tuple[Any, ...]]) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(x) if isinstance(x, (int, np.integer)) else _fmt(x) for x in row) + "\n")


def _write_outputs(cfg: RunConfig, result: ExperimentResult) -> list[str]:
    out = Path(cfg.output_path)
    out.mkdir(parents=True, exist_ok=True)
    written: list[str] = []
    if result.timeseries:
        _write_timeseries(out / "timeseries.csv", result.timeseries)
        written.append("timeseries.csv")
    if result.errors is not None:
        _write_table(out / "errors.csv", ("t", "l2_error_vs_analytic"), result.errors)
        written.append("errors.csv")
    for name, (header, rows) in sorted(result.tables.items()):
        _write_table(out / name, header, rows)
        written.append(name)
    for name, report in sorted(result.reports.items()):
        (out / name).write_text(_dump_json(report), encoding="utf-8")
        written.append(name)
    if result.snapshot is not None:
        state, n_sites, step = result.snapshot
        write_snapshot(out / "snapshot.bin", state, n_sites, step)
        written.append("snapshot.bin")
    manifest = {
        "config": cfg.echo(),
        "versions": _versions(),
        "derived": result.derived,
        "outputs": written,
        "status": "ok" if result.ok else "check_failed",
    }
    (out / "manifest.json").write_text(_dump_json(manifest), encoding="utf-8")
    return written


def emit_dispersion_table(m: float, ell: float = 1.0, tau: float = 1.0, samples: int = 257) -> str:
    """CSV text with columns ``k, p_grid, m_grid, E_grid, E_continuum``."""
    lines = ["k,p_grid,m_grid,E_grid,E_continuum"]
    lines += [",".join(_fmt(x) for x in row) for row in dispersion_rows(m, ell, tau, samples)]
    return "\n".join(lines) + "\n"


def _error(exc: BaseException) -> int:
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True) + "\n")
    return EXIT_ERROR


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage
        return int(exc.code or 0) and EXIT_ERROR
    try:
        if args.command == "run":
            cfg = _config_from_args(args).resolved()
            result = run_experiment(cfg)
            _write_outputs(cfg, result)
            if cfg.experiment == "gates_selftest":
                sys.stdout.write(_dump_json(result.reports["selftest.json"]))
            return EXIT_OK if result.ok else EXIT_FAILED_CHECK
        if args.command == "dispersion":
            text = emit_dispersion_table(args.mass, args.ell, args.tau, args.samples)
            if args.out == "-":
                sys.stdout.write(text)
            else:
                Path(args.out).write_text(text, encoding="utf-8")
            return EXIT_OK
        report = gate_algebra_report(args.seed)
        ok = all(v < 1e-12 for v in report.values())
        payload = {"residuals": report, "passed": ok}
        if args.out:
            Path(args.out).mkdir(parents=True, exist_ok=True)
            (Path(args.out) / "selftest.json").write_text(_dump_json(payload), encoding="utf-8")
        sys.stdout.write(_dump_json(payload))
        return EXIT_OK if ok else EXIT_FAILED_CHECK
    except (QLGError, ValueError, OSError) as exc:
        return _error(exc)


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
