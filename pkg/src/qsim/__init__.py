"""qsim: a small-register quantum circuit simulator.

Parses a line-oriented text circuit format, validates circuits against a
device model (gate set, CNOT-target restriction, per-qubit noise rates),
and executes them on an ideal statevector engine or a noisy
density-matrix engine with per-gate-slot amplitude damping and optional
dephasing. Ships teleportation and idle-decay demo protocols and a CLI.
"""

from .circuit import (
    BlochMeasure,
    Circuit,
    Cnot,
    DeviceModel,
    Gate1,
    MeasureZ,
    QubitNoise,
    Violation,
    ViolationCode,
    default_device,
    format_circuit,
    load_device,
    parse,
    retarget_cnots,
    validate,
)
from .engine import evolve_pure, run
from .errors import (
    CapacityError,
    DeviceError,
    ParseError,
    QsimError,
    UntranspilableError,
    ValidationError,
)
from .gates import GateKind, cnot_matrix, is_clifford, matrix_of
from .measure import (
    BlochVector,
    Histogram,
    bloch_measure,
    histogram_json_fields,
    probabilities,
    sample,
)
from .noise import (
    KrausChannel,
    NoiseConfig,
    amplitude_damping,
    apply_channel,
    dephasing,
    evolve_noisy,
)
from .protocols import (
    BellIndex,
    BranchReport,
    InputState1Q,
    SweepResult,
    TeleportResult,
    bell_state,
    build_teleport_circuit,
    circuit_correction_table,
    correction_for,
    decoherence_sweep,
    run_teleport,
    teleport_algebraic,
)
from .states import (
    DensityMatrix,
    PureState,
    TwoQubitState,
    apply_1q,
    apply_cnot,
    is_separable,
    partial_trace_to_1q,
    reduced_density_1q,
    zero_density,
    zero_state,
)

__version__ = "0.1.0"

__all__ = [
    "BellIndex",
    "BlochMeasure",
    "BlochVector",
    "BranchReport",
    "CapacityError",
    "Circuit",
    "Cnot",
    "DensityMatrix",
    "DeviceError",
    "DeviceModel",
    "Gate1",
    "GateKind",
    "Histogram",
    "InputState1Q",
    "KrausChannel",
    "MeasureZ",
    "NoiseConfig",
    "ParseError",
    "PureState",
    "QsimError",
    "QubitNoise",
    "SweepResult",
    "TeleportResult",
    "TwoQubitState",
    "UntranspilableError",
    "ValidationError",
    "Violation",
    "ViolationCode",
    "amplitude_damping",
    "apply_1q",
    "apply_channel",
    "apply_cnot",
    "bell_state",
    "bloch_measure",
    "build_teleport_circuit",
    "circuit_correction_table",
    "cnot_matrix",
    "correction_for",
    "decoherence_sweep",
    "default_device",
    "dephasing",
    "evolve_noisy",
    "evolve_pure",
    "format_circuit",
    "histogram_json_fields",
    "is_clifford",
    "is_separable",
    "load_device",
    "matrix_of",
    "parse",
    "partial_trace_to_1q",
    "probabilities",
    "reduced_density_1q",
    "retarget_cnots",
    "run",
    "run_teleport",
    "sample",
    "teleport_algebraic",
    "validate",
    "zero_density",
    "zero_state",
]
