"""
spin.py - Two-level spin states, Bloch vectors and exact rotations.
===================================================================

A single effective MR-qubit is the pair of probability amplitudes
(alpha, beta) on the |0> / |1> basis.  Every RF pulse and every stretch
of free precession is a rotation

    R_axis(theta) = exp(-i * theta * sigma_axis / 2)

applied to that pair.  Relaxation is not unitary, so it works on the
Bloch vector (Mx, My, Mz) instead; ``rotate_bloch`` is the SO(3) image
of ``rotate`` so both representations stay in step.

Global phase carries no meaning here.  Compare states through their
Bloch vectors or amplitude magnitudes.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import DomainError

#: Tolerance used when validating user-constructed states.
NORM_TOL = 1e-9


class RotationAxis(str, enum.Enum):
    X = "x"
    Y = "y"
    Z = "z"

    @classmethod
    def parse(cls, value: "RotationAxis | str") -> "RotationAxis":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown rotation axis {value!r}; expected x, y or z") from None


@dataclass(frozen=True)
class SpinState:
    """Amplitudes of alpha|0> + beta|1>."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        if not (cmath.isfinite(a) and cmath.isfinite(b)):
            raise DomainError("spin amplitudes must be finite")
        norm2 = abs(a) ** 2 + abs(b) ** 2
        if abs(norm2 - 1.0) > NORM_TOL:
            raise DomainError(f"spin state not normalized: |alpha|^2 + |beta|^2 = {norm2!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def ground(cls) -> "SpinState":
        return cls(1.0, 0.0)

    @classmethod
    def excited(cls) -> "SpinState":
        return cls(0.0, 1.0)

    @property
    def norm2(self) -> float:
        return abs(self.alpha) ** 2 + abs(self.beta) ** 2


@dataclass(frozen=True)
class BlochVector:
    """Magnetization in units of the equilibrium value M0."""

    mx: float
    my: float
    mz: float

    @property
    def norm(self) -> float:
        return math.sqrt(self.mx * self.mx + self.my * self.my + self.mz * self.mz)

    @property
    def transverse(self) -> float:
        return math.hypot(self.mx, self.my)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.mx, self.my, self.mz)


EQUILIBRIUM = BlochVector(0.0, 0.0, 1.0)


def _check_angle(angle: float) -> float:
    angle = float(angle)
    if not math.isfinite(angle):
        raise DomainError(f"rotation angle must be finite, got {angle!r}")
    return angle


def rotate(state: SpinState, axis: RotationAxis | str, angle: float) -> SpinState:
    """Apply exp(-i * angle * sigma_axis / 2) to ``state``.

    On the Bloch sphere this is a right-handed rotation by ``angle``
    about ``axis``, so ``rotate(|0>, "x", pi/2)`` lands on -y.
    """
    angle = _check_angle(angle)
    axis = RotationAxis.parse(axis)
    if angle == 0.0:
        return state
    c = math.cos(angle / 2)
    s = math.sin(angle / 2)
    a, b = state.alpha, state.beta
    if axis is RotationAxis.X:
        na, nb = c * a - 1j * s * b, -1j * s * a + c * b
    elif axis is RotationAxis.Y:
        na, nb = c * a - s * b, s * a + c * b
    else:
        phase = complex(c, -s)
        na, nb = phase * a, phase.conjugate() * b
    return SpinState(na, nb)


def rotate_bloch(m: BlochVector, axis: RotationAxis | str, angle: float) -> BlochVector:
    """Rotate a Bloch vector right-handedly by ``angle`` about ``axis``."""
    angle = _check_angle(angle)
    axis = RotationAxis.parse(axis)
    if angle == 0.0:
        return m
    c, s = math.cos(angle), math.sin(angle)
    x, y, z = m.mx, m.my, m.mz
    if axis is RotationAxis.X:
        return BlochVector(x, c * y - s * z, s * y + c * z)
    if axis is RotationAxis.Y:
        return BlochVector(c * x + s * z, y, -s * x + c * z)
    return BlochVector(c * x - s * y, s * x + c * y, z)


def to_bloch(state: SpinState) -> BlochVector:
    """Map amplitudes to (2 Re(a*b), 2 Im(a*b), |a|^2 - |b|^2)."""
    cross = state.alpha.conjugate() * state.beta
    return BlochVector(
        2.0 * cross.real,
        2.0 * cross.imag,
        abs(state.alpha) ** 2 - abs(state.beta) ** 2,
    )


def probability_amplitudes(state: SpinState) -> tuple[float, float]:
    return abs(state.alpha), abs(state.beta)
