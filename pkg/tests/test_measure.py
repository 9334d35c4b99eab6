"""Born probabilities, shot sampling, and Bloch tomography."""

import math

import numpy as np
import pytest

from qsim.engine import evolve_pure
from qsim.circuit import parse
from qsim.gates import GateKind, matrix_of
from qsim.measure import (
    RNG_ALGORITHM,
    bloch_measure,
    histogram_json_fields,
    probabilities,
    sample,
)
from qsim.states import DensityMatrix, PureState, apply_1q, apply_cnot, zero_state

from oracles import marginal_brute_force, random_density_mat, random_pure_vec

H = matrix_of(GateKind.H)


def plus_state():
    return apply_1q(zero_state(1), H, 0)


def minus_state():
    s = apply_1q(zero_state(1), matrix_of(GateKind.X), 0)
    return apply_1q(s, H, 0)


def bell_state_2q():
    return apply_cnot(apply_1q(zero_state(2), H, 0), 0, 1)


class TestProbabilities:
    def test_plus_is_fifty_fifty(self):
        probs = probabilities(plus_state(), [0])
        assert probs["0"] == pytest.approx(0.5, abs=1e-12)
        assert probs["1"] == pytest.approx(0.5, abs=1e-12)

    def test_teleported_one_distribution(self):
        # pre-measurement state (|001> + |010> - |101> - |110>)/2
        amps = np.zeros(8, dtype=complex)
        amps[[1, 2]] = 0.5
        amps[[5, 6]] = -0.5
        probs = probabilities(PureState(3, amps), [0, 1, 2])
        assert probs == pytest.approx(
            {"001": 0.25, "010": 0.25, "101": 0.25, "110": 0.25}, abs=1e-12)

    def test_marginal_matches_brute_force_accumulation(self):
        rng = np.random.default_rng(51)
        for _ in range(40):
            n = int(rng.integers(1, 4))
            k = int(rng.integers(1, n + 1))
            measured = sorted(rng.choice(n, size=k, replace=False).tolist())
            vec = random_pure_vec(rng, n)
            expected = marginal_brute_force(np.abs(vec) ** 2, n, measured)
            got = probabilities(PureState(n, vec), measured)
            for key, p in expected.items():
                assert got.get(key, 0.0) == pytest.approx(p, abs=1e-12)

    def test_density_diagonal_marginals(self):
        rng = np.random.default_rng(52)
        rho = random_density_mat(rng, 3)
        expected = marginal_brute_force(np.real(np.diag(rho)), 3, [1])
        got = probabilities(DensityMatrix(3, rho), [1])
        for key, p in expected.items():
            assert got.get(key, 0.0) == pytest.approx(p, abs=1e-12)

    def test_sums_to_one_on_random_subsets(self):
        rng = np.random.default_rng(53)
        for _ in range(30):
            n = int(rng.integers(1, 5))
            k = int(rng.integers(1, n + 1))
            measured = rng.choice(n, size=k, replace=False).tolist()
            probs = probabilities(PureState(n, random_pure_vec(rng, n)), measured)
            assert sum(probs.values()) == pytest.approx(1.0, abs=1e-10)

    def test_bad_qubit_lists(self):
        s = bell_state_2q()
        with pytest.raises(ValueError, match="empty"):
            probabilities(s, [])
        with pytest.raises(ValueError, match="duplicates"):
            probabilities(s, [0, 0])
        with pytest.raises(ValueError, match="out of range"):
            probabilities(s, [2])

    def test_key_order_is_ascending_qubit_index(self):
        # |01>: q0=0, q1=1 -> key "01" regardless of the order passed in
        amps = np.zeros(4, dtype=complex)
        amps[1] = 1.0
        s = PureState(2, amps)
        assert probabilities(s, [1, 0]) == pytest.approx({"01": 1.0})


class TestSample:
    def test_deterministic_state(self):
        s = apply_1q(zero_state(1), matrix_of(GateKind.X), 0)
        hist = sample(s, [0], 100, seed=1)
        assert hist.counts == {"1": 100}
        assert hist.shots == 100
        assert hist.rng == RNG_ALGORITHM

    def test_same_seed_reproduces_identical_counts(self):
        s = bell_state_2q()
        a = sample(s, [0, 1], 4096, seed=99)
        b = sample(s, [0, 1], 4096, seed=99)
        assert a == b

    def test_different_seeds_differ(self):
        s = bell_state_2q()
        assert sample(s, [0, 1], 4096, seed=1) != sample(s, [0, 1], 4096, seed=2)

    def test_plus_counts_within_three_sigma(self):
        # binomial: sigma = sqrt(8192 * 0.25) ~ 45.25, 3 sigma ~ 136
        hist = sample(plus_state(), [0], 8192, seed=7)
        for key in ("0", "1"):
            assert abs(hist.counts[key] - 4096) <= 136

    def test_empirical_frequencies_within_four_sigma(self):
        # fixed-seed determinism is the flakiness budget here: the 4-sigma
        # band fails a fair draw ~1 time in 16000 per key, and this seed
        # is checked in
        rng = np.random.default_rng(54)
        vec = random_pure_vec(rng, 3)
        state = PureState(3, vec)
        shots = 65536
        hist = sample(state, [0, 1, 2], shots, seed=55)
        for key, p in probabilities(state, [0, 1, 2]).items():
            sigma = math.sqrt(p * (1 - p) / shots)
            assert abs(hist.counts.get(key, 0) / shots - p) <= 4 * sigma

    def test_counts_sum_to_shots(self):
        hist = sample(bell_state_2q(), [0, 1], 12345, seed=3)
        assert sum(hist.counts.values()) == 12345

    def test_zero_shots_rejected(self):
        with pytest.raises(ValueError, match="shots"):
            sample(plus_state(), [0], 0, seed=0)

    def test_histogram_json_schema(self):
        state = bell_state_2q()
        probs = probabilities(state, [0, 1])
        hist = sample(state, [0, 1], 256, seed=8)
        fields = histogram_json_fields(probs, hist)
        assert list(fields) == ["shots", "seed", "rng", "counts", "probabilities"]
        assert fields["shots"] == 256 and fields["seed"] == 8
        assert fields["rng"] == RNG_ALGORITHM
        assert sum(fields["counts"].values()) == 256
        exact = histogram_json_fields(probs)
        assert exact["shots"] == 0
        assert exact["seed"] is None and exact["rng"] is None
        assert exact["counts"] == {}
        assert exact["probabilities"]["00"] == pytest.approx(0.5, abs=1e-12)


class TestBlochMeasure:
    def test_north_pole(self):
        b = bloch_measure(zero_state(1), 0)
        assert (b.x, b.y, b.z) == pytest.approx((0, 0, 1), abs=1e-12)
        assert b.theta == pytest.approx(0.0, abs=1e-9)
        assert b.phi == 0.0

    def test_plus_points_along_x(self):
        b = bloch_measure(plus_state(), 0)
        assert (b.x, b.y, b.z) == pytest.approx((1, 0, 0), abs=1e-9)
        assert b.theta == pytest.approx(math.pi / 2, abs=1e-9)
        assert b.phi == pytest.approx(0.0, abs=1e-9)

    def test_circular_state_points_along_y(self):
        s = apply_1q(plus_state(), matrix_of(GateKind.S), 0)  # (|0> + i|1>)/sqrt(2)
        b = bloch_measure(s, 0)
        assert (b.x, b.y, b.z) == pytest.approx((0, 1, 0), abs=1e-9)
        assert b.phi == pytest.approx(math.pi / 2, abs=1e-9)

    def test_entangled_half_has_no_direction(self):
        b = bloch_measure(bell_state_2q(), 0)
        assert b.purity_norm <= 1e-9
        assert (b.x, b.y, b.z) == pytest.approx((0, 0, 0), abs=1e-9)

    def test_pure_states_live_on_the_sphere(self):
        rng = np.random.default_rng(56)
        for _ in range(50):
            s = PureState(1, random_pure_vec(rng, 1))
            b = bloch_measure(s, 0)
            assert b.purity_norm == pytest.approx(1.0, abs=1e-9)
            # direction angles reproduce the vector
            assert b.x == pytest.approx(math.sin(b.theta) * math.cos(b.phi), abs=1e-9)
            assert b.y == pytest.approx(math.sin(b.theta) * math.sin(b.phi), abs=1e-9)
            assert b.z == pytest.approx(math.cos(b.theta), abs=1e-9)

    def test_plus_minus_distinguished_by_tomography_not_probabilities(self):
        plus, minus = plus_state(), minus_state()
        assert probabilities(plus, [0]) == pytest.approx(probabilities(minus, [0]),
                                                         abs=1e-12)
        assert bloch_measure(plus, 0).x == pytest.approx(1.0, abs=1e-9)
        assert bloch_measure(minus, 0).x == pytest.approx(-1.0, abs=1e-9)

    def test_mixed_state_reports_direction_with_shrunk_radius(self):
        rho = DensityMatrix(1, np.array([[0.8, 0.1], [0.1, 0.2]], dtype=complex))
        b = bloch_measure(rho, 0)
        assert b.purity_norm == pytest.approx(math.sqrt(0.2 ** 2 + 0.6 ** 2), abs=1e-12)
        assert b.z / b.purity_norm == pytest.approx(math.cos(b.theta), abs=1e-12)

    def test_works_through_the_engine(self):
        state = evolve_pure(parse("qubits 2\nh q0\nbloch q0\nmeasure q1\n"))
        assert bloch_measure(state, 0).x == pytest.approx(1.0, abs=1e-9)
