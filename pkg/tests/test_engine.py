"""Engine dispatch and structural gating of the ideal path."""

import numpy as np
import pytest

from qsim.circuit import default_device, parse
from qsim.engine import evolve_pure, run
from qsim.errors import CapacityError, ValidationError
from qsim.states import DensityMatrix, PureState

from oracles import random_pure_vec

BELL_TEXT = "qubits 2\nh q0\ncx q0 q1\nmeasure q0\nmeasure q1\n"


def test_measurement_markers_are_inert():
    with_meas = evolve_pure(parse(BELL_TEXT))
    without = evolve_pure(parse("qubits 2\nh q0\ncx q0 q1\n"))
    np.testing.assert_allclose(with_meas.amps, without.amps, atol=1e-15)


def test_gate_after_measure_is_refused():
    with pytest.raises(ValidationError):
        evolve_pure(parse("qubits 1\nmeasure q0\nx q0\n"))


def test_ideal_engine_ignores_device_constraints():
    # cx targeting q1 is illegal on the packaged device but fine ideally
    state = run(parse(BELL_TEXT), processor="ideal")
    assert isinstance(state, PureState)
    np.testing.assert_allclose(np.abs(state.amps) ** 2, [0.5, 0, 0, 0.5], atol=1e-12)


def test_real_engine_returns_density_matrix():
    circuit = parse("qubits 3\nh q0\ncx q0 q2\nmeasure q0\nmeasure q2\n")
    state = run(circuit, processor="real", device=default_device())
    assert isinstance(state, DensityMatrix)
    assert state.trace() == pytest.approx(1.0, abs=1e-10)


def test_unknown_processor_rejected():
    with pytest.raises(ValueError, match="processor"):
        run(parse(BELL_TEXT), processor="warp")


def test_custom_initial_state_is_not_mutated():
    rng = np.random.default_rng(41)
    vec = random_pure_vec(rng, 2)
    initial = PureState(2, vec.copy())
    evolve_pure(parse(BELL_TEXT), initial=initial)
    np.testing.assert_allclose(initial.amps, vec, atol=0)


def test_initial_state_size_must_match():
    with pytest.raises(ValueError, match="initial state"):
        evolve_pure(parse(BELL_TEXT), initial=PureState(1, np.array([1, 0])))


def test_sixteen_qubit_register_runs():
    state = evolve_pure(parse("qubits 16\nh q15\nmeasure q15\n"))
    assert state.amps.size == 1 << 16
    assert state.norm() == pytest.approx(1.0, abs=1e-10)


def test_density_capacity_cap():
    text = "qubits 11\n" + "".join(f"id q{i}\n" for i in range(11)) + "measure q0\n"
    from qsim.circuit import DeviceModel, QubitNoise

    wide = DeviceModel("wide", 11, frozenset({2}), 1e-7,
                       tuple(QubitNoise(0.0, 0.0) for _ in range(11)))
    with pytest.raises(CapacityError):
        run(parse(text), processor="real", device=wide)
