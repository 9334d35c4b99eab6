"""Circuit execution front door: ideal (statevector) and real (noisy) engines."""

from __future__ import annotations

from .circuit import Circuit, Cnot, DeviceModel, Gate1, default_device, structural_violations
from .errors import CapacityError, ValidationError
from .gates import matrix_of
from .noise import NoiseConfig, evolve_noisy
from .states import MAX_PURE_QUBITS, DensityMatrix, PureState, apply_1q, apply_cnot, zero_state

PROCESSORS = ("ideal", "real")


def evolve_pure(circuit: Circuit, initial: PureState | None = None) -> PureState:
    """Run a circuit on the ideal statevector engine.

    Returns the pre-measurement state; measurement markers are inert.
    The ideal engine enforces only structural validity (wire bounds,
    terminal measurement), not device constraints.

    Args:
        circuit: instructions to execute.
        initial: starting state (copied, not mutated); |0...0> if omitted.
    """
    problems = structural_violations(circuit)
    if problems:
        raise ValidationError(problems)
    n = circuit.num_qubits
    if n > MAX_PURE_QUBITS:
        raise CapacityError(f"statevector engine supports at most {MAX_PURE_QUBITS} qubits")
    if initial is None:
        state = zero_state(n)
    else:
        if initial.num_qubits != n:
            raise ValueError(
                f"initial state has {initial.num_qubits} qubits, circuit has {n}"
            )
        state = initial.copy()
    for instr in circuit.instrs:
        if isinstance(instr, Gate1):
            apply_1q(state, matrix_of(instr.kind), instr.qubit)
        elif isinstance(instr, Cnot):
            apply_cnot(state, instr.control, instr.target)
    return state


def run(
    circuit: Circuit,
    processor: str = "ideal",
    device: DeviceModel | None = None,
    noise: NoiseConfig | None = None,
) -> PureState | DensityMatrix:
    """Execute a circuit on the chosen processor.

    "ideal" evolves a pure state with no device constraints; "real"
    validates against the device (defaulting to the packaged one) and
    evolves a density matrix under its noise rates.
    """
    if processor == "ideal":
        return evolve_pure(circuit)
    if processor == "real":
        return evolve_noisy(circuit, device or default_device(), config=noise)
    raise ValueError(f"processor must be one of {PROCESSORS}, got {processor!r}")
