"""
circuit.py - Dense state-vector register fed by generated MR-qubits.
====================================================================

Amplitudes are stored in binary order with qubit 0 least significant:
index = sum_k q_k * 2**k.  Basis labels are written most significant
qubit first, so "10" means q1 = 1, q0 = 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError, DomainError
from .spin import SpinState

MAX_QUBITS = 12


class GateKind(str, enum.Enum):
    X = "X"
    Y = "Y"
    Z = "Z"
    H = "H"
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    CNOT = "CNOT"


_FIXED = {
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
}
_PARAMETRIC = (GateKind.RX, GateKind.RY, GateKind.RZ)


def _rotation(kind: GateKind, theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    if kind is GateKind.RX:
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind is GateKind.RY:
        return np.array([[c, -s], [s, c]], dtype=complex)
    return np.array([[complex(c, -s), 0], [0, complex(c, s)]], dtype=complex)


@dataclass(frozen=True)
class GateOp:
    """A gate on ``targets``.  CNOT takes ``(control, target)``."""

    kind: GateKind
    targets: tuple[int, ...]
    theta: float = 0.0

    def __post_init__(self):
        try:
            kind = GateKind(self.kind.upper() if isinstance(self.kind, str) else self.kind)
        except ValueError:
            raise DomainError(f"unknown gate {self.kind!r}") from None
        targets = tuple(int(t) for t in self.targets)
        arity = 2 if kind is GateKind.CNOT else 1
        if len(targets) != arity:
            raise DomainError(f"{kind.value} takes {arity} target(s), got {targets}")
        if len(set(targets)) != len(targets):
            raise DomainError(f"{kind.value} targets must be distinct, got {targets}")
        if not math.isfinite(self.theta):
            raise DomainError("gate angle must be finite")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "targets", targets)

    def matrix(self) -> np.ndarray:
        """2x2 unitary for single-qubit kinds."""
        if self.kind in _PARAMETRIC:
            return _rotation(self.kind, self.theta)
        if self.kind is GateKind.CNOT:
            raise DomainError("CNOT has no single-qubit matrix")
        return _FIXED[self.kind]

    def inverse(self) -> "GateOp":
        if self.kind in _PARAMETRIC:
            return GateOp(self.kind, self.targets, -self.theta)
        return self


@dataclass(frozen=True, eq=False)
class MultiQubitState:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise CapacityError(f"register size must be 1..{MAX_QUBITS}, got {self.n}")
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2**self.n:
            raise DomainError(f"expected {2**self.n} amplitudes, got {amps.size}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zeros(cls, n: int) -> "MultiQubitState":
        amps = np.zeros(2**n, dtype=complex)
        amps[0] = 1.0
        return cls(n, amps)

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


def product_state(states: Sequence[SpinState]) -> MultiQubitState:
    """Tensor product with ``states[k]`` as qubit k."""
    n = len(states)
    if not 1 <= n <= MAX_QUBITS:
        raise CapacityError(f"register size must be 1..{MAX_QUBITS}, got {n}")
    amps = np.ones(1, dtype=complex)
    for s in states:
        # later qubits are more significant, so they go on the left
        amps = np.kron(np.array([s.alpha, s.beta], dtype=complex), amps)
    return MultiQubitState(n, amps)


def _axis(n: int, qubit: int) -> int:
    # C-order reshape to [2]*n puts the most significant qubit on axis 0
    return n - 1 - qubit


def apply_gate(state: MultiQubitState, op: GateOp) -> MultiQubitState:
    n = state.n
    for t in op.targets:
        if not 0 <= t < n:
            raise DomainError(f"qubit index {t} out of range for a {n}-qubit register")
    psi = state.amplitudes.reshape([2] * n)
    if op.kind is GateKind.CNOT:
        control, target = (_axis(n, q) for q in op.targets)
        out = psi.copy()
        sel = [slice(None)] * n
        sel[control] = 1
        sel = tuple(sel)
        out[sel] = np.flip(psi[sel], axis=target - (target > control))
    else:
        ax = _axis(n, op.targets[0])
        out = np.moveaxis(np.tensordot(op.matrix(), psi, axes=([1], [ax])), 0, ax)
    return MultiQubitState(n, out.reshape(-1))


def run_circuit(state: MultiQubitState, ops: Sequence[GateOp]) -> MultiQubitState:
    for op in ops:
        state = apply_gate(state, op)
    return state


def measure_probabilities(state: MultiQubitState) -> dict[str, float]:
    """Exact outcome probabilities keyed by MSB-first bitstrings."""
    probs = np.abs(state.amplitudes) ** 2
    return {format(i, f"0{state.n}b"): float(p) for i, p in enumerate(probs)}
