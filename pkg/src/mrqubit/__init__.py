"""Deterministic spin-dynamics simulator for gradient-addressed MR-qubits.

Spin states and rotations live in :mod:`mrqubit.spin`, precession and RF
pulses in :mod:`mrqubit.hamiltonian`, relaxation and CPMG echo trains in
:mod:`mrqubit.relaxation`, site/coil addressing in
:mod:`mrqubit.platform`, time-encoded amplitude tables and the qubit
generation procedure in :mod:`mrqubit.tepa`, and the state-vector
register in :mod:`mrqubit.circuit`.
"""

from .circuit import GateKind, GateOp, MultiQubitState, apply_gate, measure_probabilities, product_state
from .errors import (
    CapacityError,
    ConfigurationError,
    DegenerateTableError,
    DomainError,
    EmptyTableError,
    MRQubitError,
    SelectivityError,
)
from .hamiltonian import (
    PhysicsConfig,
    PulseEvent,
    apply_main_rf,
    apply_qcoil_rf,
    free_evolve,
    larmor_frequency,
)
from .platform import (
    CoilSpec,
    QubitSite,
    SelectivityReport,
    assign_sites,
    crosstalk_matrix,
    default_coils,
    validate_selectivity,
)
from .relaxation import (
    CpmgSequence,
    EchoTrain,
    computation_window,
    echo_count,
    relax,
    signal_equation,
    simulate_cpmg,
)
from .spin import BlochVector, RotationAxis, SpinState, probability_amplitudes, rotate, rotate_bloch, to_bloch
from .tepa import (
    GenerationRequest,
    ReadoutGate,
    TepaModel,
    TepaTable,
    build_tepa_table,
    generate_qubits,
    lookup_gate_time,
    measure_tepa_table,
)

__version__ = "0.1.0"
