"""Kraus-channel noise model for the "real processor".

The noisy engine evolves a density matrix and, after every gate
instruction, applies one decoherence slot to every wire of the register,
idle wires included: amplitude damping (relaxation toward |0>) plus
optional dephasing, with per-qubit rates taken from the device model.
Identity gates therefore act as timed idle slots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Cnot, DeviceModel, Gate1, ViolationCode, validate
from .errors import CapacityError, ValidationError
from .gates import matrix_of
from .states import (
    MAX_DENSITY_QUBITS,
    DensityMatrix,
    _apply_mat_density,
    _check_qubit,
    apply_cnot,
    zero_density,
)

COMPLETENESS_ATOL = 1e-10


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A trace-preserving single-qubit channel given by its Kraus operators."""

    ops: tuple[np.ndarray, ...]

    def __post_init__(self):
        acc = np.zeros((2, 2), dtype=complex)
        for k in self.ops:
            if k.shape != (2, 2):
                raise ValueError("Kraus operators must be 2x2")
            acc += k.conj().T @ k
        if not np.allclose(acc, np.eye(2), atol=COMPLETENESS_ATOL):
            raise ValueError("Kraus operators do not satisfy sum K†K = I")

    @classmethod
    def identity(cls) -> "KrausChannel":
        return cls((np.eye(2, dtype=complex),))


def amplitude_damping(gamma: float) -> KrausChannel:
    """Relaxation channel whose fixed point is |0><0|.

    K0 = [[1, 0], [0, sqrt(1-g)]],  K1 = [[0, sqrt(g)], [0, 0]]

    One application scales the excited population by (1-g) and the
    coherences by sqrt(1-g); iterating it drives any state to |0>.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma={gamma} outside [0, 1]")
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=complex)
    k1 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return KrausChannel((k0, k1))


def dephasing(lam: float) -> KrausChannel:
    """Pure dephasing channel: populations kept, coherences scaled by (1-2l).

    K0 = sqrt(1-l) I,  K1 = sqrt(l) Z
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda={lam} outside [0, 1]")
    k0 = math.sqrt(1.0 - lam) * np.eye(2, dtype=complex)
    k1 = math.sqrt(lam) * np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
    return KrausChannel((k0, k1))


def apply_channel(rho: DensityMatrix, channel: KrausChannel, q: int) -> DensityMatrix:
    """rho <- sum_i K_i rho K_i† on wire q, in place; returns rho."""
    _check_qubit(rho.num_qubits, q)
    acc = np.zeros_like(rho.mat)
    for k in channel.ops:
        term = rho.mat.copy()
        _apply_mat_density(term, k, rho.num_qubits, q)
        acc += term
    rho.mat[...] = acc
    return rho


@dataclass(frozen=True)
class NoiseConfig:
    """Per-qubit per-slot rates, plus an overall on/off switch."""

    gamma_relax: tuple[float, ...]
    gamma_phase: tuple[float, ...]
    enabled: bool = True

    def __post_init__(self):
        for rate in (*self.gamma_relax, *self.gamma_phase):
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"noise rate {rate} outside [0, 1]")

    @classmethod
    def from_device(cls, device: DeviceModel, enabled: bool = True) -> "NoiseConfig":
        return cls(
            gamma_relax=tuple(q.gamma_relax for q in device.qubits),
            gamma_phase=tuple(q.gamma_phase for q in device.qubits),
            enabled=enabled,
        )

    def slot_channels(self, num_qubits: int) -> list[list[KrausChannel]]:
        """Channels applied to each wire per gate slot (zero-rate ones omitted)."""
        if not self.enabled:
            return [[] for _ in range(num_qubits)]
        per_wire = []
        for q in range(num_qubits):
            channels = []
            if self.gamma_relax[q] > 0.0:
                channels.append(amplitude_damping(self.gamma_relax[q]))
            if self.gamma_phase[q] > 0.0:
                channels.append(dephasing(self.gamma_phase[q]))
            per_wire.append(channels)
        return per_wire


def evolve_noisy(
    circuit: Circuit,
    device: DeviceModel,
    config: NoiseConfig | None = None,
) -> DensityMatrix:
    """Run a circuit on the noisy density-matrix engine.

    Starts from |0...0><0...0|; each gate instruction applies its unitary
    followed by one decoherence slot on every wire. Measurement markers
    carry no slot, and the returned state is the pre-measurement density
    matrix. Rejects circuits that do not validate on the device (a
    missing measurement alone does not block state evolution).

    Args:
        circuit: instructions to execute.
        device: supplies per-qubit rates and CNOT constraints.
        config: overrides the device rates (e.g. enabled=False for the
            ideal limit); defaults to the device's own rates.
    """
    problems = [
        v for v in validate(circuit, device)
        if v.code is not ViolationCode.NO_MEASUREMENT
    ]
    if problems:
        raise ValidationError(problems)
    n = circuit.num_qubits
    if n > MAX_DENSITY_QUBITS:
        raise CapacityError(
            f"density engine supports at most {MAX_DENSITY_QUBITS} qubits"
        )
    if config is None:
        config = NoiseConfig.from_device(device)
    slot = config.slot_channels(n)

    rho = zero_density(n)
    for instr in circuit.instrs:
        if isinstance(instr, Gate1):
            _apply_mat_density(rho.mat, matrix_of(instr.kind), n, instr.qubit)
        elif isinstance(instr, Cnot):
            apply_cnot(rho, instr.control, instr.target)
        else:
            continue  # measurement markers: no unitary, no slot
        for q in range(n):
            for channel in slot[q]:
                apply_channel(rho, channel, q)
    return rho
