"""Run configuration loaded from a JSON file.

Every section and key is optional; missing values fall back to the
defaults below (3 T proton bar, 10 mT/m gradient, T1 = 4 s, T2 = 2 s,
TE = 20 ms, window = 5 T1).  Unknown keys are rejected.  Human-facing
units are Hz and seconds; angular units are derived on load.

Relaxation times may be given as ``null`` or ``"inf"`` to switch that
channel off.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Any

from .circuit import GateOp
from .errors import ConfigurationError, MRQubitError
from .hamiltonian import PROTON_GAMMA_HZ_PER_T, PhysicsConfig
from .relaxation import computation_window, echo_count
from .spin import RotationAxis
from .tepa import DEFAULT_TOLERANCE, GenerationRequest, TepaModel

TWO_PI = 2 * math.pi

_SECTIONS = {
    "physics": {"gamma_hz_per_t", "b0_t", "gz_t_per_m", "t1_s", "t2_s", "rho0"},
    "platform": {"n_qubits", "z_spacing_m", "qcoil_bandwidth_hz", "main_bandwidth_hz"},
    "sequence": {"te_s", "window_factor", "refocus_axis", "off_resonance_hz", "n_echoes"},
    "tepa": {"model", "tolerance"},
}
_TOP = set(_SECTIONS) | {"requests", "circuit", "seed"}
_REQUEST_KEYS = {"site_id", "alpha", "beta", "echo_index"}
_GATE_KEYS = {"gate", "targets", "theta"}
_CIRCUIT_KEYS = {"prepare", "ops"}


@dataclass(frozen=True)
class PlatformConfig:
    n_qubits: int = 3
    z_spacing_m: float = 1e-3
    qcoil_bandwidth_hz: float = 200.0
    main_bandwidth_hz: float | None = None


@dataclass(frozen=True)
class SequenceConfig:
    te_s: float = 0.02
    window_factor: float = 5.0
    refocus_axis: RotationAxis = RotationAxis.Y
    off_resonance_hz: float = 0.0
    n_echoes: int | None = None


@dataclass(frozen=True)
class CircuitConfig:
    ops: tuple[GateOp, ...]
    prepare: str = "generated"  # or "zero"


@dataclass(frozen=True)
class RunConfig:
    physics: PhysicsConfig = field(default_factory=PhysicsConfig)
    platform: PlatformConfig = field(default_factory=PlatformConfig)
    sequence: SequenceConfig = field(default_factory=SequenceConfig)
    model: TepaModel = TepaModel.T1_DECAY
    tolerance: float = DEFAULT_TOLERANCE
    requests: tuple[GenerationRequest, ...] = ()
    circuit: CircuitConfig | None = None
    seed: int = 0

    @property
    def window(self) -> float:
        return computation_window(self.physics.t1, self.sequence.window_factor)

    @property
    def n_echoes(self) -> int:
        if self.sequence.n_echoes is not None:
            return self.sequence.n_echoes
        return echo_count(self.window, self.sequence.te_s)

    @property
    def table_window(self) -> float:
        """Window actually covered by the echoes in use."""
        return self.n_echoes * self.sequence.te_s


def _check_keys(obj: Any, allowed: set[str], where: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigurationError(f"{where} must be a JSON object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigurationError(f"unknown key(s) in {where}: {', '.join(unknown)}")
    return obj


def _time(value: Any, name: str) -> float:
    if value is None or value == "inf":
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"{name} must be a number, null or \"inf\"")
    return float(value)


def _number(value: Any, name: str, positive: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigurationError(f"{name} must be a finite number")
    if positive and not value > 0:
        raise ConfigurationError(f"{name} must be > 0")
    return float(value)


def _integer(value: Any, name: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigurationError(f"{name} must be an integer >= {minimum}")
    return value


def parse_config(data: Any) -> RunConfig:
    data = _check_keys(data, _TOP, "config")
    try:
        return _parse(data)
    except ConfigurationError:
        raise
    except (MRQubitError, TypeError, ValueError) as exc:
        raise ConfigurationError(str(exc)) from exc


def _parse(data: dict) -> RunConfig:
    ph = _check_keys(data.get("physics", {}), _SECTIONS["physics"], "physics")
    physics = PhysicsConfig(
        gamma=TWO_PI * _number(ph.get("gamma_hz_per_t", PROTON_GAMMA_HZ_PER_T), "gamma_hz_per_t", True),
        b0=_number(ph.get("b0_t", 3.0), "b0_t", True),
        gz=_number(ph.get("gz_t_per_m", 10e-3), "gz_t_per_m"),
        t1=_time(ph.get("t1_s", 4.0), "t1_s"),
        t2=_time(ph.get("t2_s", 2.0), "t2_s"),
        rho0=_number(ph.get("rho0", 1.0), "rho0"),
    )

    pl = _check_keys(data.get("platform", {}), _SECTIONS["platform"], "platform")
    main_bw = pl.get("main_bandwidth_hz")
    platform = PlatformConfig(
        n_qubits=_integer(pl.get("n_qubits", 3), "n_qubits", 1),
        z_spacing_m=_number(pl.get("z_spacing_m", 1e-3), "z_spacing_m", True),
        qcoil_bandwidth_hz=_number(pl.get("qcoil_bandwidth_hz", 200.0), "qcoil_bandwidth_hz", True),
        main_bandwidth_hz=None if main_bw is None else _number(main_bw, "main_bandwidth_hz", True),
    )

    sq = _check_keys(data.get("sequence", {}), _SECTIONS["sequence"], "sequence")
    n_echoes = sq.get("n_echoes")
    sequence = SequenceConfig(
        te_s=_number(sq.get("te_s", 0.02), "te_s", True),
        window_factor=_number(sq.get("window_factor", 5.0), "window_factor", True),
        refocus_axis=RotationAxis.parse(sq.get("refocus_axis", "y")),
        off_resonance_hz=_number(sq.get("off_resonance_hz", 0.0), "off_resonance_hz"),
        n_echoes=None if n_echoes is None else _integer(n_echoes, "n_echoes", 1),
    )

    tp = _check_keys(data.get("tepa", {}), _SECTIONS["tepa"], "tepa")
    model = TepaModel.parse(tp.get("model", TepaModel.T1_DECAY.value))
    tolerance = _number(tp.get("tolerance", DEFAULT_TOLERANCE), "tolerance")

    raw_requests = data.get("requests", [])
    if not isinstance(raw_requests, list):
        raise ConfigurationError("requests must be a list")
    requests = []
    for k, r in enumerate(raw_requests):
        r = _check_keys(r, _REQUEST_KEYS, f"requests[{k}]")
        if "site_id" not in r:
            raise ConfigurationError(f"requests[{k}] needs a site_id")
        requests.append(
            GenerationRequest(
                site_id=_integer(r["site_id"], f"requests[{k}].site_id", 0),
                beta=r.get("beta"),
                alpha=r.get("alpha"),
                echo_index=r.get("echo_index"),
            )
        )

    circuit = None
    raw_circuit = data.get("circuit")
    if raw_circuit is not None:
        if isinstance(raw_circuit, list):
            raw_circuit = {"ops": raw_circuit}
        raw_circuit = _check_keys(raw_circuit, _CIRCUIT_KEYS, "circuit")
        prepare = raw_circuit.get("prepare", "generated")
        if prepare not in ("generated", "zero"):
            raise ConfigurationError("circuit.prepare must be \"generated\" or \"zero\"")
        ops = []
        for k, g in enumerate(raw_circuit.get("ops", [])):
            g = _check_keys(g, _GATE_KEYS, f"circuit.ops[{k}]")
            ops.append(GateOp(g.get("gate", ""), tuple(g.get("targets", ())), float(g.get("theta", 0.0))))
        circuit = CircuitConfig(tuple(ops), prepare)

    if platform.n_qubits > 1 and not physics.gz > 0:
        raise ConfigurationError(
            f"gz_t_per_m={physics.gz!r} leaves {platform.n_qubits} sites frequency-degenerate"
        )

    if math.isinf(physics.t1) and sequence.n_echoes is None:
        raise ConfigurationError("t1_s is infinite, so the 5*T1 window is unbounded; set sequence.n_echoes")

    seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigurationError("seed must be an integer")

    return RunConfig(physics, platform, sequence, model, tolerance, tuple(requests), circuit, seed)


def load_config(path: str | os.PathLike) -> RunConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(data)
