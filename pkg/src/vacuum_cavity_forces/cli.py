"""Command-line interface: scenario execution with CSV/JSON output.

Exit codes: 0 success, 2 configuration error, 3 numerical non-convergence.
Run summaries go to stderr; data goes to --out or stdout.  Output files are
deterministic: identical config and package version give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .cavity import CavityConfig, ResonanceSingularityError
from .config import (
    CHI_COLUMNS,
    FORCE_COLUMNS,
    NOISE_COLUMNS,
    RESPONSE_COLUMNS,
    ConfigError,
    Scenario,
    load_scenario,
    validate_output,
)
from .mirror import validate_mirror
from .numerics import QuadratureError, RealityViolationError
from .static_force import mean_casimir_force
from .fluctuations import noise_spectrum
from .susceptibility import (
    ResonanceDivergenceError,
    chi_spectrum,
    resonance_chi,
)
from .time_response import (
    Trajectory,
    extract_echoes,
    force_response,
    response_grid,
)

__all__ = ["main"]

_PAIRS = ((1, 1), (1, 2), (2, 1), (2, 2))

_NUMERICAL_ERRORS = (QuadratureError, ResonanceSingularityError,
                     ResonanceDivergenceError, RealityViolationError)


def _worker_count() -> int:
    raw = os.environ.get("VCF_THREADS", "").strip()
    if not raw:
        return 1
    try:
        count = int(raw)
    except ValueError as exc:
        raise ConfigError(f"VCF_THREADS must be an integer, got {raw!r}") from exc
    return max(count, 1)


def _pair_map(fn):
    """Evaluate fn over the four (i, j) pairs, optionally in parallel.

    Assembly order is fixed, so the output is deterministic regardless of
    the worker count.
    """
    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fn, _PAIRS))
    else:
        results = [fn(pair) for pair in _PAIRS]
    return dict(zip(_PAIRS, results))


def _spectrum_rows(grid, by_pair):
    rows = []
    for k, w in enumerate(grid):
        row = [float(w)]
        for pair in _PAIRS:
            v = by_pair[pair][k]
            row.extend([float(np.real(v)), float(np.imag(v))])
        rows.append(row)
    return rows


def _cmd_validate_mirror(scn: Scenario, args) -> dict:
    target = scn.raw.get("validate_mirror", {}).get("target", "m1")
    model = scn.cavity.m1 if target == "m1" else scn.cavity.m2
    report = validate_mirror(model, scn.frequency_grid(), scn.quadrature)
    return {
        "schema": "mirror-report-v1",
        "version": __version__,
        "target": target,
        "max_reality_residual": report.max_reality_residual,
        "max_unitarity_residual": report.max_unitarity_residual,
        "transparency_tail_norm": report.transparency_tail_norm,
        "causality_residual": report.causality_residual,
        "reality_pass": report.reality_pass,
        "unitarity_pass": report.unitarity_pass,
        "transparency_pass": report.transparency_pass,
        "causality_pass": report.causality_pass,
        "passed": report.passed,
    }


def _cmd_static_force(scn: Scenario, args) -> dict:
    res = mean_casimir_force(scn.cavity, scn.quadrature)
    scale = scn.force_scale
    return {
        "schema": "force-v1",
        "version": __version__,
        "columns": FORCE_COLUMNS,
        "rows": [[res.F1 * scale, res.F2 * scale, res.error_bound * scale]],
    }


def _cmd_noise_spectrum(scn: Scenario, args) -> dict:
    grid = scn.frequency_grid()
    by_pair = _pair_map(
        lambda pair: noise_spectrum(scn.cavity, pair[0], pair[1], grid,
                                    scn.quadrature).values)
    return {
        "schema": "noise-v1",
        "version": __version__,
        "columns": NOISE_COLUMNS,
        "rows": _spectrum_rows(grid, by_pair),
    }


def _chi_method(scn: Scenario, section: str, default: str) -> str:
    return scn.raw.get(section, {}).get("method", default)


def _cmd_susceptibility(scn: Scenario, args) -> dict:
    grid = scn.frequency_grid()
    method = _chi_method(scn, "susceptibility", "full")
    by_pair = _pair_map(
        lambda pair: chi_spectrum(scn.cavity, pair[0], pair[1], grid,
                                  scn.quadrature, method=method).values)
    return {
        "schema": "chi-v1",
        "version": __version__,
        "columns": CHI_COLUMNS,
        "rows": _spectrum_rows(grid, by_pair),
    }


def _cmd_time_response(scn: Scenario, args) -> dict:
    section = scn.raw.get("time_response", {})
    traj_spec = section.get("trajectory")
    if traj_spec is None:
        raise ConfigError("time-response requires a "
                          "'time_response.trajectory' section")
    grid = scn.time_grid()
    t = grid.times
    pulse = traj_spec["amplitude"] * np.exp(
        -0.5 * ((t - traj_spec["center"]) / traj_spec["width"]) ** 2)
    zero = np.zeros(grid.n)
    if traj_spec["mirror"] == 1:
        traj = Trajectory(grid, pulse, zero)
    else:
        traj = Trajectory(grid, zero, pulse)
    work = response_grid(grid, scn.cavity.q)
    method = section.get("method", "resonance_approx")
    chi = _pair_map(
        lambda pair: chi_spectrum(scn.cavity, pair[0], pair[1],
                                  work.frequencies, scn.quadrature,
                                  method=method))
    rec = force_response(traj, chi, scn.cavity)
    echo_count = section.get("echo_count", 5)
    echoes = []
    for component in (1, 2):
        for peak in extract_echoes(rec, scn.cavity.q, echo_count,
                                   component=component,
                                   t_center=traj_spec["center"]):
            echoes.append({
                "component": component,
                "k": peak.k,
                "delay": peak.delay,
                "amplitude": peak.amplitude * scn.force_scale,
                "absent": peak.absent,
            })
    scale = scn.force_scale
    rows = [[float(tk), float(f1 * scale), float(f2 * scale)]
            for tk, f1, f2 in zip(t, rec.dF1, rec.dF2)]
    return {
        "schema": "response-v1",
        "version": __version__,
        "columns": RESPONSE_COLUMNS,
        "rows": rows,
        "echoes": echoes,
    }


def _cmd_resonance_compare(scn: Scenario, args) -> dict:
    section = scn.raw.get("resonance_compare", {})
    indices = section.get("indices", [1, 2, 3, 4, 5])
    i, j = section.get("element", [1, 1])
    cav = scn.cavity
    entries = []
    for k in indices:
        w_star = k * np.pi / cav.q
        full = complex(chi_spectrum(cav, i, j, np.array([w_star]),
                                    scn.quadrature).values[0])
        r1_sq = float(np.abs(cav.m1.reflectivity(w_star)) ** 2)
        r2_sq = float(np.abs(cav.m2.reflectivity(w_star)) ** 2)
        approx = resonance_chi(r1_sq, r2_sq, cav.q, i, j, w_star,
                               hbar=cav.hbar)
        rel_dev = abs(full - approx) / max(abs(full), 1e-300)
        entries.append({
            "k": int(k),
            "omega_star": float(w_star),
            "chi_full": {"re": full.real, "im": full.imag},
            "chi_resonance": {"re": approx.real, "im": approx.imag},
            "rel_dev": float(rel_dev),
        })
    return {
        "schema": "resonance-v1",
        "version": __version__,
        "element": [i, j],
        "entries": entries,
    }


_COMMANDS = {
    "validate-mirror": (_cmd_validate_mirror, "json"),
    "static-force": (_cmd_static_force, "csv"),
    "noise-spectrum": (_cmd_noise_spectrum, "csv"),
    "susceptibility": (_cmd_susceptibility, "csv"),
    "time-response": (_cmd_time_response, "csv"),
    "resonance-compare": (_cmd_resonance_compare, "json"),
}

_JSON_ONLY = {"validate-mirror", "resonance-compare"}


def _render_csv(report: dict) -> str:
    lines = [f"# vacuum-cavity-forces v{__version__} schema={report['schema']}",
             ",".join(report["columns"])]
    for row in report["rows"]:
        lines.append(",".join("%.17g" % v for v in row))
    return "\r\n".join(lines) + "\r\n"


def _render_json(report: dict) -> str:
    validate_output(report)
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _mirror_label(model) -> str:
    return type(model).__name__


def _emit_figure(command: str, report: dict, out: Path) -> Path | None:
    from . import plots
    fig_path = out.with_suffix(".png")
    if command == "time-response":
        data = np.asarray(report["rows"], dtype=float)
        return plots.response_figure(data[:, 0], data[:, 1], data[:, 2],
                                     report["echoes"], fig_path, command)
    if "columns" in report and len(report["rows"]) > 1:
        return plots.spectrum_figure(report["columns"], report["rows"],
                                     fig_path, command)
    return None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vcf",
        description="Vacuum radiation forces of a two-mirror cavity")
    parser.add_argument("--version", action="version",
                        version=f"vacuum-cavity-forces {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True,
                       help="path to a JSON scenario config")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"],
                       help="output format (default depends on command)")
        p.add_argument("--figures", action="store_true",
                       help="also render a PNG figure next to --out")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler, default_format = _COMMANDS[args.command]
    fmt = args.format or default_format
    started = time.perf_counter()
    try:
        if fmt == "csv" and args.command in _JSON_ONLY:
            raise ConfigError(
                f"{args.command} emits a structured report; use --format json")
        if args.figures and not args.out:
            raise ConfigError("--figures requires --out")
        scenario = load_scenario(args.config)
        report = handler(scenario, args)
        payload = _render_csv(report) if fmt == "csv" else _render_json(report)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    if args.out:
        Path(args.out).write_bytes(payload.encode("utf-8"))
    else:
        sys.stdout.write(payload)
    fig_path = None
    if args.figures:
        fig_path = _emit_figure(args.command, report, Path(args.out))
    elapsed = time.perf_counter() - started
    cav = scenario.cavity
    summary = (f"{args.command}: q={cav.q:g} "
               f"m1={_mirror_label(cav.m1)} m2={_mirror_label(cav.m2)} "
               f"units={scenario.units} rel_tol={scenario.quadrature.rel_tol:g} "
               f"wall={elapsed:.3f}s")
    if args.out:
        summary += f" out={args.out}"
    if fig_path is not None:
        summary += f" figure={fig_path}"
    print(summary, file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
