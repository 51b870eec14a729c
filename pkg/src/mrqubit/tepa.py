"""
tepa.py - Time-encoded probability amplitudes.
==============================================

Each echo i of a CPMG train, read out at t_i = i * TE, is assigned a
qubit state alpha_i|0> + beta_i|1> with real non-negative amplitudes.
beta follows a decaying envelope and alpha the complementary recovery,
alpha_i^2 + beta_i^2 = 1.  Three envelopes are available:

    T1Decay      beta^2 = exp(-t / T1)
    T2Decay      beta^2 = exp(-t / T2)
    CombinedEq2  beta^2 = S(t) / max S,  S = exp(-t/T2) (1 - exp(-t/T1))

Inverting the table (target beta -> nearest echo) gives the readout
gate time that produces a requested state.  ``generate_qubits`` runs the
whole generation procedure: gradient, shared 90 degree excitation,
per-site refocusing trains, gate lookup and state emission.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateTableError, DomainError, EmptyTableError, SelectivityError
from .hamiltonian import PhysicsConfig, PulseEvent, apply_main_rf, apply_qcoil_rf
from .platform import CoilSpec, QubitSite, SelectivityReport, validate_selectivity
from .relaxation import EchoTrain, echo_count
from .spin import RotationAxis, SpinState

DEFAULT_TOLERANCE = 0.01


class TepaModel(str, enum.Enum):
    T1_DECAY = "T1Decay"
    T2_DECAY = "T2Decay"
    COMBINED_EQ2 = "CombinedEq2"

    @classmethod
    def parse(cls, value: "TepaModel | str") -> "TepaModel":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise DomainError(f"unknown TEPA model {value!r}; expected one of {names}") from None


class TepaEntry(NamedTuple):
    echo_index: int
    time: float
    alpha: float
    beta: float


@dataclass(frozen=True)
class TepaTable:
    te: float
    model: TepaModel
    entries: tuple[TepaEntry, ...]

    def __post_init__(self):
        for e in self.entries:
            if abs(e.alpha**2 + e.beta**2 - 1.0) > 1e-12:
                raise DomainError(f"entry {e.echo_index} is not normalized")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def betas(self) -> np.ndarray:
        return np.array([e.beta for e in self.entries])

    @property
    def alphas(self) -> np.ndarray:
        return np.array([e.alpha for e in self.entries])

    def is_monotone(self) -> bool:
        """True when beta strictly falls and alpha strictly rises with echo index."""
        b, a = self.betas, self.alphas
        return bool(np.all(np.diff(b) < 0) and np.all(np.diff(a) > 0))

    def entry(self, echo_index: int) -> TepaEntry:
        if not 1 <= echo_index <= len(self.entries):
            raise DomainError(f"echo index {echo_index} outside table of {len(self.entries)} entries")
        return self.entries[echo_index - 1]


def _combined_peak(t1: float, t2: float) -> float:
    """Maximum over t of exp(-t/T2) (1 - exp(-t/T1))."""
    if math.isinf(t1):
        raise DegenerateTableError("CombinedEq2 envelope is identically zero for T1 = inf")
    if math.isinf(t2):
        return 1.0
    t_peak = t1 * math.log1p(t2 / t1)
    return math.exp(-t_peak / t2) * -math.expm1(-t_peak / t1)


def _entries_from_beta2(te: float, beta2: np.ndarray) -> tuple[TepaEntry, ...]:
    beta2 = np.clip(beta2, 0.0, 1.0)
    return tuple(
        TepaEntry(i, i * te, math.sqrt(1.0 - float(b2)), math.sqrt(float(b2)))
        for i, b2 in enumerate(beta2, start=1)
    )


def build_tepa_table(
    cfg: PhysicsConfig, te: float, window: float, model: TepaModel | str = TepaModel.T1_DECAY
) -> TepaTable:
    """Analytic table with one entry per echo inside ``window``."""
    model = TepaModel.parse(model)
    if not (te > 0):
        raise DomainError(f"te must be > 0, got {te!r}")
    if window < te:
        raise EmptyTableError(f"window {window!r} s is shorter than one echo spacing {te!r} s")
    n = echo_count(window, te)
    t = np.arange(1, n + 1) * te
    if model is TepaModel.T1_DECAY:
        beta2 = np.exp(-t / cfg.t1)
    elif model is TepaModel.T2_DECAY:
        beta2 = np.exp(-t / cfg.t2)
    else:
        beta2 = np.exp(-t / cfg.t2) * -np.expm1(-t / cfg.t1) / _combined_peak(cfg.t1, cfg.t2)
    return TepaTable(te, model, _entries_from_beta2(te, beta2))


def measure_tepa_table(
    train: EchoTrain,
    model: TepaModel | str = TepaModel.T1_DECAY,
    reference: PhysicsConfig | None = None,
) -> TepaTable:
    """Table read off a simulated echo train.

    The echo envelope decays with T2.  ``reference`` supplies the time
    constants used to renormalize it onto the model's envelope: the
    T1Decay model raises the normalized amplitude to T2/T1, CombinedEq2
    multiplies in the longitudinal recovery factor and divides by its
    peak.  T2Decay uses the amplitude as is and needs no reference.
    """
    model = TepaModel.parse(model)
    if len(train) == 0:
        raise EmptyTableError("echo train is empty")
    amp = np.clip(np.array(train.amplitudes, dtype=float), 0.0, 1.0)
    if not np.any(amp > 0):
        raise DegenerateTableError("echo train carries zero amplitude everywhere")
    if model is not TepaModel.T2_DECAY and reference is None:
        raise DomainError(f"model {model.value} needs a reference PhysicsConfig")

    with np.errstate(divide="ignore"):
        log_amp = np.log(amp)
    if model is TepaModel.T2_DECAY:
        beta2 = amp
    elif model is TepaModel.T1_DECAY:
        t1, t2 = reference.t1, reference.t2
        ratio = 1.0 if (math.isinf(t1) and math.isinf(t2)) else t2 / t1
        with np.errstate(invalid="ignore"):
            beta2 = np.where(log_amp == 0.0, 1.0, np.exp(log_amp * ratio))
    else:
        t = np.array(train.times)
        beta2 = amp * -np.expm1(-t / reference.t1) / _combined_peak(reference.t1, reference.t2)
    return TepaTable(train.te, model, _entries_from_beta2(train.te, beta2))


class GateLookup(NamedTuple):
    echo_index: int
    time: float
    error: float
    """|beta_i^2 - target^2| at the chosen entry."""


def lookup_gate_time(table: TepaTable, target_beta: float) -> GateLookup:
    """Echo whose beta^2 is closest to ``target_beta**2``; ties go to the earlier echo."""
    if len(table) == 0:
        raise EmptyTableError("cannot look up a gate time in an empty table")
    if not (0.0 <= target_beta <= 1.0):
        raise DomainError(f"target beta must lie in [0, 1], got {target_beta!r}")
    dist = np.abs(table.betas**2 - target_beta**2)
    k = int(np.argmin(dist))
    e = table.entries[k]
    return GateLookup(e.echo_index, e.time, float(dist[k]))


@dataclass(frozen=True)
class ReadoutGate:
    qubit_id: int
    gate_time: float
    echo_index: int


@dataclass(frozen=True)
class GenerationRequest:
    """Ask for a state on one site, either by amplitudes or by echo index."""

    site_id: int
    beta: float | None = None
    alpha: float | None = None
    echo_index: int | None = None

    def __post_init__(self):
        by_amp = self.beta is not None or self.alpha is not None
        if by_amp == (self.echo_index is not None):
            raise DomainError("request needs exactly one of an amplitude target or an echo_index")
        if self.echo_index is not None:
            if int(self.echo_index) != self.echo_index or self.echo_index < 1:
                raise DomainError(f"echo_index must be a positive integer, got {self.echo_index!r}")
            return
        alpha, beta = self.alpha, self.beta
        if beta is None:
            beta = math.sqrt(max(0.0, 1.0 - alpha**2))
        elif alpha is not None and abs(alpha**2 + beta**2 - 1.0) > 1e-9:
            raise DomainError(f"alpha^2 + beta^2 = {alpha**2 + beta**2!r}, expected 1")
        if not (0.0 <= beta <= 1.0) or (alpha is not None and not 0.0 <= alpha <= 1.0):
            raise DomainError("target amplitudes must lie in [0, 1]")
        object.__setattr__(self, "beta", float(beta))


@dataclass(frozen=True)
class GeneratedQubit:
    site_id: int
    state: SpinState
    gate: ReadoutGate
    error: float
    schedule: tuple[PulseEvent, ...]


@dataclass(frozen=True)
class RequestFailure:
    site_id: int
    reason: str
    error: float | None = None


@dataclass
class GenerationResult:
    qubits: list[GeneratedQubit]
    failures: list[RequestFailure]
    schedule: list[PulseEvent]
    table: TepaTable
    selectivity: SelectivityReport
    refocus_counts: dict[int, int] = field(default_factory=dict)
    """Refocusing pulses that actually rotated each site."""

    @property
    def ok(self) -> bool:
        return not self.failures and self.selectivity.passed


def main_coil_band(sites: Sequence[QubitSite]) -> tuple[float, float]:
    """(centre, bandwidth) of a main coil spanning n * separation."""
    freqs = sorted(s.center_frequency for s in sites)
    if len(freqs) < 2:
        return (freqs[0] if freqs else 0.0), math.inf
    spacing = (freqs[-1] - freqs[0]) / (len(freqs) - 1)
    return (freqs[0] + freqs[-1]) / 2, len(freqs) * spacing


def generate_qubits(
    requests: Sequence[GenerationRequest],
    sites: Sequence[QubitSite],
    coils: Sequence[CoilSpec],
    cfg: PhysicsConfig,
    te: float,
    window: float,
    model: TepaModel | str = TepaModel.T1_DECAY,
    tolerance: float = DEFAULT_TOLERANCE,
    refocus_axis: RotationAxis | str = RotationAxis.Y,
    main_bandwidth: float | None = None,
    table: TepaTable | None = None,
) -> GenerationResult:
    """Run the five generation steps for ``requests``.

    1. the gradient in ``cfg`` fixes every site's frequency,
    2. the main coil applies one 90 degree pulse about x to all sites,
    3. each requested site's Q-coil fires 180 degree pulses at
       TE/2 + k*TE, one per echo up to its gate,
    4. the gate time comes from the TEPA table,
    5. the tabulated (alpha, beta) is emitted as that site's state.

    Unreachable targets become entries in ``failures``; a layout with
    Q-coil crosstalk raises :class:`SelectivityError` before anything
    runs.
    """
    report = validate_selectivity(sites, coils)
    if not report.passed:
        raise SelectivityError(report)
    refocus_axis = RotationAxis.parse(refocus_axis)
    if table is None:
        table = build_tepa_table(cfg, te, window, model)
    coil_by_site = {c.site_id: c for c in coils}
    site_ids = {s.id for s in sites}

    center, band = main_coil_band(sites)
    if main_bandwidth is not None:
        band = main_bandwidth
    main_pulse = PulseEvent(0.0, math.pi / 2, RotationAxis.X, center, None)

    qubits: list[GeneratedQubit] = []
    failures: list[RequestFailure] = []
    qcoil_pulses: list[PulseEvent] = []
    seen: set[int] = set()
    for req in requests:
        sid = req.site_id
        if sid not in site_ids or sid not in coil_by_site:
            failures.append(RequestFailure(sid, f"no site/Q-coil with id {sid}"))
            continue
        if sid in seen:
            failures.append(RequestFailure(sid, f"site {sid} requested more than once"))
            continue
        seen.add(sid)

        if req.echo_index is not None:
            if req.echo_index > len(table):
                failures.append(
                    RequestFailure(sid, f"echo_index {req.echo_index} beyond the {len(table)}-echo window")
                )
                continue
            idx, err = req.echo_index, 0.0
        else:
            hit = lookup_gate_time(table, req.beta)
            if hit.error > tolerance:
                failures.append(
                    RequestFailure(
                        sid, f"target beta {req.beta:.6g} unreachable within tolerance {tolerance:g}", hit.error
                    )
                )
                continue
            idx, err = hit.echo_index, hit.error

        entry = table.entry(idx)
        coil = coil_by_site[sid]
        pulses = tuple(
            PulseEvent(te / 2 + k * te, math.pi, refocus_axis, coil.carrier, sid) for k in range(idx)
        )
        qcoil_pulses.extend(pulses)
        qubits.append(
            GeneratedQubit(
                sid,
                SpinState(entry.alpha, entry.beta),
                ReadoutGate(sid, entry.time, idx),
                err,
                (main_pulse,) + pulses,
            )
        )

    qcoil_pulses.sort(key=lambda p: (p.start_time, p.coil))
    schedule = [main_pulse] + qcoil_pulses
    counts = _replay(schedule, sites, coil_by_site, band)
    return GenerationResult(qubits, failures, schedule, table, report, counts)


def _replay(schedule, sites, coil_by_site, main_band) -> dict[int, int]:
    """Drive every site through the schedule and count the refocusing hits."""
    freqs = [s.center_frequency for s in sites]
    states = [SpinState.ground() for _ in sites]
    counts = {s.id: 0 for s in sites}
    for pulse in schedule:
        pairs = list(zip(states, freqs))
        if pulse.is_main:
            new = apply_main_rf(pairs, main_band, pulse.carrier_frequency, pulse.flip_angle, pulse.axis)
        else:
            new = apply_qcoil_rf(pairs, pulse, coil_by_site[pulse.coil].bandwidth)
            for site, before, after in zip(sites, states, new):
                if after is not before:
                    counts[site.id] += 1
        states = new
    return counts
