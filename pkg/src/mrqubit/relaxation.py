"""
relaxation.py - Bloch relaxation and CPMG echo trains.
======================================================

Relaxation acts on the Bloch vector component-wise:

    Mx, My  ->  Mx, My * exp(-t / T2)
    Mz      ->  1 + (Mz - 1) * exp(-t / T1)        (M0 normalized to 1)

A CPMG train is a 90 degree excitation at t = 0 followed by 180 degree
refocusing pulses at TE/2 + k*TE.  Echoes are sampled at i*TE as the
transverse magnitude.  Between pulses the exact operators (precession
plus relaxation, which commute) are applied, so the engine is
event-driven rather than time-stepped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import DomainError
from .hamiltonian import PhysicsConfig
from .spin import EQUILIBRIUM, BlochVector, RotationAxis, rotate_bloch

# floor(window / te) is taken with this slack so that e.g. 20 s / 20 ms
# gives 1000 even when the quotient rounds just below an integer
_FLOOR_SLACK = 1e-9


def signal_equation(rho0: float, t: float, t1: float, t2: float) -> float:
    """Spin-density signal rho0 * exp(-t/T2) * (1 - exp(-t/T1))."""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t!r}")
    if not (t1 > 0 and t2 > 0):
        raise DomainError("t1 and t2 must be > 0")
    if math.isinf(t):
        return 0.0 if math.isfinite(t2) else rho0 * (0.0 if math.isinf(t1) else 1.0)
    return rho0 * math.exp(-t / t2) * -math.expm1(-t / t1)


def relax(m: BlochVector, duration: float, cfg: PhysicsConfig) -> BlochVector:
    if not (duration >= 0.0):
        raise DomainError(f"duration must be >= 0, got {duration!r}")
    if duration == 0.0:
        return m
    e2 = math.exp(-duration / cfg.t2)
    e1 = math.exp(-duration / cfg.t1)
    return BlochVector(m.mx * e2, m.my * e2, 1.0 + (m.mz - 1.0) * e1)


def computation_window(t1: float, factor: float = 5.0) -> float:
    """Useful computation time, ``factor * T1``."""
    if not (t1 > 0):
        raise DomainError(f"t1 must be > 0, got {t1!r}")
    return factor * t1


def echo_count(window: float, te: float) -> int:
    if not (window > 0 and te > 0):
        raise DomainError("window and te must both be > 0")
    if math.isinf(window / te):
        raise DomainError("an unbounded window holds unboundedly many echoes")
    return int(math.floor(window / te + _FLOOR_SLACK))


@dataclass(frozen=True)
class CpmgSequence:
    te: float
    n_echoes: int
    excitation_axis: RotationAxis = RotationAxis.X
    refocus_axis: RotationAxis = RotationAxis.Y
    off_resonance: float = 0.0

    def __post_init__(self):
        if not (self.te > 0 and math.isfinite(self.te)):
            raise DomainError(f"te must be a positive finite time, got {self.te!r}")
        if int(self.n_echoes) != self.n_echoes or self.n_echoes < 1:
            raise DomainError(f"n_echoes must be a positive integer, got {self.n_echoes!r}")
        if not math.isfinite(self.off_resonance):
            raise DomainError("off_resonance must be finite")
        object.__setattr__(self, "n_echoes", int(self.n_echoes))
        object.__setattr__(self, "excitation_axis", RotationAxis.parse(self.excitation_axis))
        object.__setattr__(self, "refocus_axis", RotationAxis.parse(self.refocus_axis))

    def refocus_times(self) -> list[float]:
        return [self.te / 2 + k * self.te for k in range(self.n_echoes)]

    def echo_times(self) -> list[float]:
        return [i * self.te for i in range(1, self.n_echoes + 1)]


class EchoSample(NamedTuple):
    echo_index: int
    time: float
    amplitude: float


@dataclass(frozen=True)
class EchoTrain:
    te: float
    entries: tuple[EchoSample, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def amplitudes(self) -> list[float]:
        return [e.amplitude for e in self.entries]

    @property
    def times(self) -> list[float]:
        return [e.time for e in self.entries]


def simulate_cpmg(seq: CpmgSequence, cfg: PhysicsConfig) -> EchoTrain:
    """Run a CPMG train from equilibrium and sample every echo.

    >>> seq = CpmgSequence(te=0.02, n_echoes=3, off_resonance=300.0)
    >>> cfg = PhysicsConfig(t1=math.inf, t2=math.inf)
    >>> [round(a, 12) for a in simulate_cpmg(seq, cfg).amplitudes]
    [1.0, 1.0, 1.0]
    """
    half = seq.te / 2
    phase = seq.off_resonance * half
    m = rotate_bloch(EQUILIBRIUM, seq.excitation_axis, math.pi / 2)
    samples = []
    for i in range(1, seq.n_echoes + 1):
        m = relax(rotate_bloch(m, RotationAxis.Z, phase), half, cfg)
        m = rotate_bloch(m, seq.refocus_axis, math.pi)
        m = relax(rotate_bloch(m, RotationAxis.Z, phase), half, cfg)
        samples.append(EchoSample(i, i * seq.te, m.transverse))
    return EchoTrain(seq.te, tuple(samples))
