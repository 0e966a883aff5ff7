"""Command-line front end.

Subcommands
-----------
``design``
    Run one scenario from a TOML config file or a bundled preset and write
    ``waveform.csv``, ``spectrum.csv`` and ``result.json`` to the output
    directory.
``batch``
    Run several presets (possibly concurrently; the ``PWMLP_BATCH_THREADS``
    environment variable sets the worker count) and write ``summary.csv``.
``selftest``
    Cross-check the fast paths against the exhaustive oracles at small
    sizes.

Exit codes: 0 success, 2 infeasible targets, 3 configuration error,
4 numerical breakdown.  Failures print one machine-parseable line to
stderr: ``pwmlp: error=<category>: <detail>``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .config import PRESETS, RunConfig, load_config, preset
from .design import design
from .exceptions import (
    ConfigError,
    InfeasibleTargets,
    PwmlpError,
    SolverError,
    ValidationError,
)
from .model import DesignResult

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_CONFIG = 3
EXIT_NUMERICAL = 4


def _atomic_write(path: Path, text: str):
    """Write via a temporary file in the same directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _waveform_csv(cfg: RunConfig, result: DesignResult) -> str:
    x = result.waveform.samples
    n = x.size
    header = "index,time_fraction,value"
    if cfg.period is not None:
        header += ",time_seconds"
    lines = [header]
    for i in range(n):
        row = f"{i},{_fmt(i / n)},{_fmt(x[i])}"
        if cfg.period is not None:
            row += f",{_fmt(i / n * cfg.period)}"
        lines.append(row)
    return "\n".join(lines) + "\n"


def _spectrum_csv(result: DesignResult) -> str:
    lines = ["k,re,im,magnitude"]
    for j, coeff in enumerate(result.spectrum, start=1):
        lines.append(f"{j},{_fmt(coeff.real)},{_fmt(coeff.imag)},{_fmt(abs(coeff))}")
    return "\n".join(lines) + "\n"


def _result_json(cfg: RunConfig, result: DesignResult) -> str:
    prescribed = {}
    for k, h in zip(result.prescribed.harmonic_indices, result.prescribed.targets):
        measured = result.spectrum[int(k) - 1]
        prescribed[str(int(k))] = {
            "target_re": h.real,
            "target_im": h.imag,
            "measured_re": measured.real,
            "measured_im": measured.imag,
        }
    payload = {
        "config": cfg.as_dict(),
        "thd": result.thd,
        "lp_objective": result.lp_objective,
        "energy": result.energy,
        "prescribed_harmonics": prescribed,
        "certificate": result.certificate.as_dict(),
        "solver": {
            "status": "optimal",
            "iterations": result.iterations,
        },
        "version": __version__,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def run(cfg: RunConfig, out_dir=None, verbose: bool = False) -> DesignResult:
    """Execute one scenario and write its artifacts.

    Returns the :class:`DesignResult`; raises the pipeline's exceptions on
    failure (the CLI wrapper maps them to exit codes).
    """
    out = Path(out_dir) if out_dir is not None else Path(cfg.output_dir or ".")
    log = None
    if verbose or cfg.verbose:
        def log(iteration, phase, objective, infeasibility):
            print(
                f"[{cfg.name}] iteration={iteration} phase={phase} "
                f"objective={objective:.9g} infeasibility={infeasibility:.3g}",
                file=sys.stderr,
            )
    result = design(
        cfg.levels,
        cfg.harmonics,
        n_samples=cfg.n_samples,
        half_wave=cfg.half_wave,
        zero_dc=cfg.zero_dc,
        log=log,
    )
    _atomic_write(out / "waveform.csv", _waveform_csv(cfg, result))
    if cfg.emit_plot_data:
        _atomic_write(out / "spectrum.csv", _spectrum_csv(result))
    _atomic_write(out / "result.json", _result_json(cfg, result))
    return result


def run_batch(configs: list[RunConfig], out_dir, threads: int | None = None) -> tuple[str, int]:
    """Run scenarios (concurrently) and build the summary table.

    Returns ``(summary_csv_text, n_failures)``.  Each scenario writes its
    artifacts to ``<out_dir>/<name>/``; failures are recorded as rows with
    an error status instead of aborting the batch.
    """
    out = Path(out_dir)
    if threads is None:
        threads = int(os.environ.get("PWMLP_BATCH_THREADS", "0")) or min(
            len(configs) or 1, os.cpu_count() or 1
        )

    def one(cfg: RunConfig):
        started = time.perf_counter()
        try:
            result = run(cfg, out / cfg.name)
            elapsed = time.perf_counter() - started
            cert = result.certificate
            return (
                cfg.name,
                f"{cfg.name},{len(cfg.levels)},{_fmt(result.thd)},{_fmt(cert.residual_inf)},"
                f"{_fmt(cert.residual_bound)},{_fmt(cert.energy_gap)},{_fmt(cert.energy_gap_bound)},"
                f"{cert.integral_rows},{result.iterations},{elapsed:.2f},ok",
                None,
            )
        except PwmlpError as exc:
            elapsed = time.perf_counter() - started
            return (
                cfg.name,
                f"{cfg.name},{len(cfg.levels)},,,,,,,,{elapsed:.2f},error: {type(exc).__name__}",
                exc,
            )

    if threads > 1 and len(configs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, configs))
    else:
        rows = [one(cfg) for cfg in configs]

    header = (
        "scenario,m,thd,residual_inf,residual_bound,energy_gap,energy_gap_bound,"
        "integral_rows,iterations,wall_time_s,status"
    )
    by_name = {name: line for name, line, _ in rows}
    lines = [header] + [by_name[cfg.name] for cfg in configs]
    failures = sum(1 for _, _, exc in rows if exc is not None)
    text = "\n".join(lines) + "\n"
    _atomic_write(out / "summary.csv", text)
    return text, failures


def selftest() -> int:
    """Cross-check fast paths against the oracles at small sizes."""
    from . import oracle
    from .model import harmonic_spec, validate_level_set
    from .refine import delta_constant
    from .simplex import StandardLp, solve
    from .spectrum import full_spectrum

    failures = 0

    def check(name: str, ok: bool, detail: str = ""):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
        failures += 0 if ok else 1

    rng = np.random.default_rng(20480)

    levels = validate_level_set([-2.0, 0.0, 2.0])
    x = levels.values[rng.integers(0, 3, size=256)]
    err = np.abs(full_spectrum(x) - oracle.spectrum_direct(x)).max()
    check("spectrum fft vs direct summation (N=256)", err < 1e-10, f"max err {err:.2e}")

    closed = delta_constant(levels)
    grid = oracle.grid_delta(levels, step=1e-3)
    check("max-variance constant vs simplex grid", abs(closed - grid) < 2e-3,
          f"closed {closed} grid {grid}")

    agree = True
    for trial in range(20):
        q = rng.standard_normal((3, 6))
        z0 = np.abs(rng.standard_normal(6))
        # dual-feasible cost keeps the instance bounded below
        cost = q.T @ rng.standard_normal(3) + np.abs(rng.standard_normal(6))
        lp = StandardLp(cost=cost, columns=q, rhs=q @ z0)
        ours = solve(lp)
        reference = oracle.enumerate_vertices(lp)
        if reference is None or abs(ours.objective - reference) > 1e-8:
            agree = False
            break
    check("simplex vs exhaustive vertex enumeration (20 random LPs)", agree)

    spec = harmonic_spec(12, {1: 0.5 - 0.5j}, zero_dc=False)
    from .formulation import build_lp
    from .oracle import OracleBudget
    unit = validate_level_set([-1.0, 0.0, 1.0])
    _, best = oracle.brute_force_design(spec, unit, OracleBudget(residual_tol=0.2))
    lp_obj = solve(build_lp(spec, unit).lp).objective
    slack = 2 * 1 * 0.2 * 1.0  # 2 * r * residual_tol * max|level|
    check("relaxation lower-bounds exhaustive search (N=12)",
          lp_obj <= best + slack,
          f"lp {lp_obj:.6f} oracle {best:.6f}")

    print("selftest:", "ok" if failures == 0 else f"{failures} failure(s)")
    return EXIT_OK if failures == 0 else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pwmlp",
        description="Design multilevel PWM waveforms with prescribed harmonic content.",
    )
    parser.add_argument("--version", action="version", version=f"pwmlp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_design = sub.add_parser("design", help="run one scenario and write its artifacts")
    source = p_design.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", type=str, help="path to a TOML scenario file")
    source.add_argument("--preset", type=str, help=f"bundled preset ({', '.join(sorted(PRESETS))})")
    p_design.add_argument("--out", type=str, default=None, help="output directory (default: cwd)")
    p_design.add_argument("--verbose", action="store_true", help="stream solver iterations to stderr")

    p_batch = sub.add_parser("batch", help="run several presets and write summary.csv")
    p_batch.add_argument(
        "--presets",
        type=str,
        default="all",
        help="comma-separated preset names, or 'all'",
    )
    p_batch.add_argument("--out", type=str, default=".", help="output directory")

    sub.add_parser("selftest", help="run oracle cross-checks at small sizes")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "design":
            cfg = load_config(args.config) if args.config else preset(args.preset)
            result = run(cfg, args.out, verbose=args.verbose)
            print(f"{cfg.name}: thd={result.thd:.6f} objective={result.lp_objective:.9g} "
                  f"iterations={result.iterations}")
            return EXIT_OK
        if args.command == "batch":
            names = sorted(PRESETS) if args.presets == "all" else [
                s.strip() for s in args.presets.split(",") if s.strip()
            ]
            configs = [preset(name) for name in names]
            text, failures = run_batch(configs, args.out)
            print(text, end="")
            if failures:
                print(f"pwmlp: error=batch: {failures} scenario(s) failed", file=sys.stderr)
                return 1
            return EXIT_OK
        if args.command == "selftest":
            return selftest()
    except InfeasibleTargets as exc:
        print(f"pwmlp: error=infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConfigError, ValidationError) as exc:
        print(f"pwmlp: error=config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"pwmlp: error=numerical: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
