"""Command-line front end.

    mrqubit simulate    --config run.json --out-dir out/
    mrqubit tepa-table  --config run.json --out-dir out/ [--measured]
    mrqubit address     --config run.json --out-dir out/
    mrqubit procedure   --config run.json --out-dir out/
    mrqubit circuit     --config run.json --out-dir out/

Exit status is 0 only when every request succeeded and every
validation passed.  Invalid configs exit with status 2 and a JSON error
object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .circuit import MultiQubitState, measure_probabilities, product_state, run_circuit
from .config import RunConfig, load_config
from .errors import ConfigurationError, MRQubitError, SelectivityError
from .platform import (
    TWO_PI,
    assign_sites,
    default_coils,
    frequency_separation,
    layout_to_dict,
    validate_selectivity,
)
from .relaxation import CpmgSequence, simulate_cpmg
from .tepa import GenerationResult, build_tepa_table, generate_qubits, measure_tepa_table

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _platform(cfg: RunConfig):
    sites = assign_sites(cfg.platform.n_qubits, cfg.platform.z_spacing_m, cfg.physics)
    coils = default_coils(sites, TWO_PI * cfg.platform.qcoil_bandwidth_hz)
    return sites, coils


def _sequence(cfg: RunConfig) -> CpmgSequence:
    return CpmgSequence(
        te=cfg.sequence.te_s,
        n_echoes=cfg.n_echoes,
        refocus_axis=cfg.sequence.refocus_axis,
        off_resonance=TWO_PI * cfg.sequence.off_resonance_hz,
    )


def _write_table(out: Path, stem: str, fmt: str, records, csv_text: str) -> Path:
    if fmt == "json":
        return io.atomic_write(out / f"{stem}.json", io.dumps(records))
    return io.atomic_write(out / f"{stem}.csv", csv_text)


def cmd_simulate(cfg: RunConfig, out: Path, fmt: str = "csv") -> int:
    sites, _ = _platform(cfg)
    requested = [r.site_id for r in cfg.requests] or [s.id for s in sites]
    known = {s.id for s in sites}
    seq = _sequence(cfg)
    files = []
    for sid in requested:
        if sid not in known:
            raise ConfigurationError(f"request names unknown site {sid}")
        train = simulate_cpmg(seq, cfg.physics)
        path = _write_table(out, f"echoes_site{sid}", fmt, io.echo_train_records(train), io.echo_train_csv(train))
        files.append(path.name)
    summary = {
        "echo_count": seq.n_echoes,
        "window_s": cfg.window,
        "te_s": seq.te,
        "off_resonance_hz": cfg.sequence.off_resonance_hz,
        "sites": requested,
        "files": files,
    }
    io.atomic_write(out / "simulate_summary.json", io.dumps(summary))
    return EXIT_OK


def cmd_tepa_table(cfg: RunConfig, out: Path, fmt: str = "csv", measured: bool = False) -> int:
    analytic = build_tepa_table(cfg.physics, cfg.sequence.te_s, cfg.table_window, cfg.model)
    summary = {"model": cfg.model.value, "rows": len(analytic), "source": "analytic", "te_s": cfg.sequence.te_s}
    table = analytic
    if measured:
        train = simulate_cpmg(_sequence(cfg), cfg.physics)
        table = measure_tepa_table(train, cfg.model, cfg.physics)
        summary["source"] = "measured"
        summary["max_abs_delta_beta"] = float(np.max(np.abs(table.betas - analytic.betas)))
    summary["monotone"] = table.is_monotone()
    _write_table(out, "tepa", fmt, io.tepa_records(table), io.tepa_csv(table))
    io.atomic_write(out / "tepa_summary.json", io.dumps(summary))
    return EXIT_OK


def cmd_address(cfg: RunConfig, out: Path, fmt: str = "csv") -> int:
    sites, coils = _platform(cfg)
    report = validate_selectivity(sites, coils)
    io.atomic_write(out / "layout.json", io.dumps(layout_to_dict(sites, coils)))
    body = report.to_dict()
    body["separation_hz"] = (
        frequency_separation(cfg.physics, cfg.platform.z_spacing_m) / TWO_PI if len(sites) > 1 else None
    )
    body["bandwidth_hz"] = cfg.platform.qcoil_bandwidth_hz
    io.atomic_write(out / "crosstalk.json", io.dumps(body))
    return EXIT_OK if report.passed else EXIT_FAIL


def _run_procedure(cfg: RunConfig) -> tuple[GenerationResult | None, dict]:
    sites, coils = _platform(cfg)
    main_bw = None if cfg.platform.main_bandwidth_hz is None else TWO_PI * cfg.platform.main_bandwidth_hz
    try:
        result = generate_qubits(
            cfg.requests,
            sites,
            coils,
            cfg.physics,
            cfg.sequence.te_s,
            cfg.table_window,
            model=cfg.model,
            tolerance=cfg.tolerance,
            refocus_axis=cfg.sequence.refocus_axis,
            main_bandwidth=main_bw,
        )
    except SelectivityError as exc:
        report = {
            "ok": False,
            "selectivity": exc.report.to_dict(),
            "requests": [
                {"site_id": r.site_id, "status": "error", "reason": "Q-coil selectivity check failed"}
                for r in cfg.requests
            ],
        }
        return None, report

    entries = {}
    for q in result.qubits:
        entries[q.site_id] = {
            "site_id": q.site_id,
            "status": "ok",
            "echo_index": q.gate.echo_index,
            "gate_time_s": q.gate.gate_time,
            "alpha": q.state.alpha.real,
            "beta": q.state.beta.real,
            "achieved_error": q.error,
            "refocus_pulses": len(q.schedule) - 1,
        }
    failures = list(result.failures)
    ordered = []
    for r in cfg.requests:
        if r.site_id in entries:
            ordered.append(entries.pop(r.site_id))
        else:
            f = failures.pop(0)
            ordered.append(
                {"site_id": f.site_id, "status": "error", "reason": f.reason, "achieved_error": f.error}
            )
    report = {
        "ok": result.ok,
        "model": result.table.model.value,
        "te_s": cfg.sequence.te_s,
        "window_s": cfg.table_window,
        "echo_count": len(result.table),
        "selectivity": result.selectivity.to_dict(),
        "requests": ordered,
        "refocus_counts": {str(k): v for k, v in result.refocus_counts.items()},
    }
    return result, report


def _circuit_probabilities(cfg: RunConfig, result: GenerationResult | None) -> dict[str, float] | None:
    circ = cfg.circuit
    if circ.prepare == "zero":
        n = len(cfg.requests) or cfg.platform.n_qubits
        state = MultiQubitState.zeros(n)
    else:
        if result is None or not result.ok or not result.qubits:
            return None
        state = product_state([q.state for q in result.qubits])
    return measure_probabilities(run_circuit(state, circ.ops))


def cmd_procedure(cfg: RunConfig, out: Path, fmt: str = "csv") -> int:
    result, report = _run_procedure(cfg)
    schedule = result.schedule if result is not None else []
    io.atomic_write(out / "schedule.json", io.dumps(io.schedule_records(schedule)))
    ok = report["ok"]
    if cfg.circuit is not None:
        probs = _circuit_probabilities(cfg, result)
        if probs is None:
            report["circuit"] = {"status": "skipped", "reason": "qubit generation did not succeed"}
            ok = False
        else:
            io.atomic_write(out / "probabilities.json", io.dumps(probs))
            report["circuit"] = {"status": "ok", "prepare": cfg.circuit.prepare, "file": "probabilities.json"}
    io.atomic_write(out / "generation.json", io.dumps(report))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_circuit(cfg: RunConfig, out: Path, fmt: str = "csv") -> int:
    if cfg.circuit is None:
        raise ConfigurationError("config has no circuit section")
    result = None
    if cfg.circuit.prepare == "generated":
        result, _ = _run_procedure(cfg)
    probs = _circuit_probabilities(cfg, result)
    if probs is None:
        _error("GenerationError", "qubit generation did not succeed; run `procedure` for details")
        return EXIT_FAIL
    io.atomic_write(out / "probabilities.json", io.dumps(probs))
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "tepa-table": cmd_tepa_table,
    "address": cmd_address,
    "procedure": cmd_procedure,
    "circuit": cmd_circuit,
}


def _error(kind: str, message: str) -> None:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON run configuration")
    common.add_argument("--out-dir", default=".", help="directory for output files")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="table output format")

    parser = argparse.ArgumentParser(prog="mrqubit", description="MR-qubit generation simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="CPMG echo trains per site")
    tp = sub.add_parser("tepa-table", parents=[common], help="TEPA conversion table")
    tp.add_argument("--measured", action="store_true", help="build the table from a simulated echo train")
    sub.add_parser("address", parents=[common], help="site/coil layout and crosstalk check")
    sub.add_parser("procedure", parents=[common], help="full qubit generation procedure")
    sub.add_parser("circuit", parents=[common], help="run the configured circuit")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        out = Path(args.out_dir)
        kwargs = {"measured": args.measured} if args.command == "tepa-table" else {}
        return COMMANDS[args.command](cfg, out, args.format, **kwargs)
    except ConfigurationError as exc:
        _error("ConfigurationError", str(exc))
        return EXIT_CONFIG
    except MRQubitError as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
