"""
hamiltonian.py - Free precession and hard RF pulses.
====================================================

The static field plus the z-gradient fixes a Larmor frequency per
position, ``omega(z) = gamma * (B0 + Gz * z)``.  States are stored in
each site's own rotating frame, so free evolution only matters when an
explicit off-resonance is supplied.

RF pulses are instantaneous rotations specified by flip angle alone
(the product of drive strength and pulse length), so hbar never shows
up numerically.  Coil frequency response is a top-hat: a site is
rotated iff its frequency sits within +/- bandwidth/2 of the carrier.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

from .errors import ConfigurationError, DomainError
from .spin import RotationAxis, SpinState, rotate

#: gamma / 2pi for 1H, Hz/T
PROTON_GAMMA_HZ_PER_T = 42.577e6


@dataclass(frozen=True)
class PhysicsConfig:
    """Field, gradient and relaxation parameters.

    ``gamma`` is in rad/s/T.  ``t1``/``t2`` may be ``math.inf`` to switch
    the corresponding relaxation channel off.
    """

    gamma: float = 2 * math.pi * PROTON_GAMMA_HZ_PER_T
    b0: float = 3.0
    gz: float = 10e-3
    t1: float = 4.0
    t2: float = 2.0
    rho0: float = 1.0

    def __post_init__(self):
        for name in ("gamma", "b0", "t1", "t2"):
            value = getattr(self, name)
            if not (value > 0):
                raise ConfigurationError(f"{name} must be > 0, got {value!r}")
        if not math.isfinite(self.gamma) or not math.isfinite(self.b0):
            raise ConfigurationError("gamma and b0 must be finite")
        if not math.isfinite(self.gz):
            raise ConfigurationError(f"gz must be finite, got {self.gz!r}")
        if self.rho0 < 0:
            raise ConfigurationError(f"rho0 must be >= 0, got {self.rho0!r}")
        if self.t2 > self.t1:
            warnings.warn(
                f"t2 ({self.t2}) exceeds t1 ({self.t1}); water typically has t2 ~ t1/2",
                stacklevel=3,
            )


@dataclass(frozen=True)
class PulseEvent:
    """One hard pulse.  ``coil`` is ``None`` for the main coil, else a site id."""

    start_time: float
    flip_angle: float
    axis: RotationAxis
    carrier_frequency: float
    coil: int | None = None

    def __post_init__(self):
        if not (0.0 < self.flip_angle <= 2 * math.pi):
            raise DomainError(f"flip angle must lie in (0, 2pi], got {self.flip_angle!r}")
        if not (self.start_time >= 0.0):
            raise DomainError(f"pulse start time must be >= 0, got {self.start_time!r}")
        object.__setattr__(self, "axis", RotationAxis.parse(self.axis))

    @property
    def is_main(self) -> bool:
        return self.coil is None

    @property
    def coil_label(self) -> str:
        return "main" if self.coil is None else f"qcoil:{self.coil}"


def larmor_frequency(cfg: PhysicsConfig, z: float) -> float:
    """Angular Larmor frequency (rad/s) at position ``z`` (m)."""
    return cfg.gamma * (cfg.b0 + cfg.gz * z)


def free_evolve(state: SpinState, duration: float, omega: float) -> SpinState:
    """Precess about z by ``omega * duration``."""
    if not (duration >= 0.0):
        raise DomainError(f"duration must be >= 0, got {duration!r}")
    return rotate(state, RotationAxis.Z, omega * duration)


def in_band(frequency: float, center: float, bandwidth: float) -> bool:
    """Top-hat coil response."""
    return abs(frequency - center) <= bandwidth / 2


def apply_main_rf(
    states: Sequence[tuple[SpinState, float]],
    coil_bandwidth: float,
    coil_center: float,
    flip_angle: float,
    axis: RotationAxis | str = RotationAxis.X,
) -> list[SpinState]:
    """Broadband excitation of every in-band site."""
    if flip_angle == 0.0:
        return [s for s, _ in states]
    return [
        rotate(s, axis, flip_angle) if in_band(f, coil_center, coil_bandwidth) else s
        for s, f in states
    ]


def apply_qcoil_rf(
    states: Sequence[tuple[SpinState, float]],
    pulse: PulseEvent,
    qcoil_bandwidth: float,
) -> list[SpinState]:
    """Frequency-selective pulse from one Q-coil.

    Sites outside the band are returned as the very same objects.
    """
    return [
        rotate(s, pulse.axis, pulse.flip_angle)
        if in_band(f, pulse.carrier_frequency, qcoil_bandwidth)
        else s
        for s, f in states
    ]
