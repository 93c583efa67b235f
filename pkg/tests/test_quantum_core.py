import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hardy_w.quantum_core import (
    MINUS,
    PLUS,
    Amplitudes,
    MeasurementSetting,
    ProbabilityRangeError,
    StateVector,
    ValidationError,
    build_ghz_state,
    build_w_state,
    clamp_probability,
    eigenstate,
    factorized_probability,
    joint_probability_statevector,
    lhv_paradox_check,
    outcome_patterns,
    quadratic_form_parts,
    quadratic_form_probability,
)

angles = st.floats(0.0, math.pi / 2)
phases = st.floats(0.0, 2 * math.pi, exclude_max=True)
settings_st = st.builds(MeasurementSetting, angles, phases)


@st.composite
def amplitudes(draw, n_min=2, n_max=6):
    n = draw(st.integers(n_min, n_max))
    raw = np.array(draw(st.lists(st.floats(0.05, 1.0), min_size=n, max_size=n)))
    return Amplitudes(tuple(raw / np.linalg.norm(raw)))


def test_w3_support_and_values():
    state = build_w_state(Amplitudes.uniform(3))
    nz = np.flatnonzero(np.abs(state.amps) > 0)
    assert sorted(nz) == sorted([0b100, 0b010, 0b001])
    assert np.allclose(state.amps[nz], 1 / math.sqrt(3), atol=1e-15)


def test_w2_is_symmetric_bell_state():
    state = build_w_state(Amplitudes((1 / math.sqrt(2), 1 / math.sqrt(2))))
    assert np.allclose(state.amps, [0, 1 / math.sqrt(2), 1 / math.sqrt(2), 0])


def test_single_amplitude_rejected():
    with pytest.raises(ValidationError):
        Amplitudes((1.0,))


def test_printed_generalized_amplitudes_are_renormalized():
    a = Amplitudes((0.448473, 0.632011, 0.632008))
    assert abs(sum(v * v for v in a.values) - 1.0) < 1e-15
    assert np.allclose(a.values, (0.448473, 0.632011, 0.632008), atol=1e-6)


@pytest.mark.parametrize("vals", [(0.5, 0.5), (1.0, -0.0001), (0.6, 0.8, 0.0), (math.nan, 1.0)])
def test_bad_amplitudes_rejected(vals):
    with pytest.raises(ValidationError):
        Amplitudes(vals)


@pytest.mark.parametrize("n", [2, 3, 10])
def test_ghz(n):
    state = build_ghz_state(n)
    assert state.amps.shape == (2**n,)
    assert np.count_nonzero(state.amps) == 2
    assert state.amps[0] == state.amps[-1] == pytest.approx(1 / math.sqrt(2))


@pytest.mark.parametrize("n", [1, 21])
def test_ghz_range(n):
    with pytest.raises(ValidationError):
        build_ghz_state(n)


def test_eigenstate_examples():
    assert np.allclose(eigenstate(MeasurementSetting(0, 0), PLUS), [1, 0])
    assert np.allclose(eigenstate(MeasurementSetting(math.pi / 4, 0), MINUS), [1 / math.sqrt(2), -1 / math.sqrt(2)])
    assert np.allclose(eigenstate(MeasurementSetting(math.pi / 2, math.pi), PLUS), [0, -1], atol=1e-15)


def test_eigenstate_rejects_bad_outcome():
    with pytest.raises(ValidationError):
        eigenstate(MeasurementSetting(0, 0), 0)


@given(settings_st)
def test_eigenstates_orthonormal(s):
    p, m = eigenstate(s, PLUS), eigenstate(s, MINUS)
    assert abs(np.vdot(p, p) - 1) < 1e-14
    assert abs(np.vdot(m, m) - 1) < 1e-14
    assert abs(np.vdot(p, m)) < 1e-14


def test_joint_probability_examples():
    w3 = build_w_state(Amplitudes.uniform(3))
    z = MeasurementSetting(0.0, 0.0)
    assert joint_probability_statevector(w3, [z] * 3, [PLUS] * 3) == 0.0
    # qubit 1 in |1>, qubits 2 and 3 in |0>: picks out a_1^2 under the MSB convention
    a = Amplitudes((0.3, 0.4, math.sqrt(1 - 0.25)))
    p = joint_probability_statevector(build_w_state(a), [z] * 3, [MINUS, PLUS, PLUS])
    assert p == pytest.approx(0.09, abs=1e-15)
    ghz = build_ghz_state(3)
    h = MeasurementSetting(math.pi / 4, 0.0)
    assert joint_probability_statevector(ghz, [h] * 3, [PLUS] * 3) == pytest.approx(0.25, abs=1e-15)


def test_joint_probability_length_mismatch():
    with pytest.raises(ValidationError):
        joint_probability_statevector(build_ghz_state(3), [MeasurementSetting(0, 0)] * 2, [PLUS] * 3)


@given(st.integers(2, 5).flatmap(lambda n: st.tuples(st.just(n), st.lists(settings_st, min_size=n, max_size=n))))
def test_completeness(case):
    n, settings = case
    state = build_ghz_state(n)
    total = sum(joint_probability_statevector(state, settings, list(o)) for o in outcome_patterns(n))
    assert abs(total - 1.0) < 1e-9


@given(amplitudes(3, 3), st.lists(settings_st, min_size=3, max_size=3), st.lists(st.sampled_from([PLUS, MINUS]), min_size=3, max_size=3))
def test_quadratic_form_matches_oracle(a, settings, outcomes):
    exact = joint_probability_statevector(build_w_state(a), settings, outcomes)
    assert abs(quadratic_form_probability(a, settings, outcomes) - exact) < 1e-10
    assert abs(factorized_probability(a, settings, outcomes) - exact) < 1e-10


@given(st.lists(phases, min_size=3, max_size=3))
def test_q_factorizes(thetas):
    settings = [MeasurementSetting(0.3, t) for t in thetas]
    Q, _, B = quadratic_form_parts(Amplitudes.uniform(3), settings, [PLUS] * 3)
    assert np.max(np.abs(Q - B.T @ B)) <= 1e-12
    assert np.min(np.linalg.eigvalsh(Q)) > -1e-12


def test_quadratic_form_zero_and_equal_phase_cases():
    a = Amplitudes.uniform(3)
    zero = [MeasurementSetting(0.0, t) for t in (0.1, 2.0, 4.0)]
    assert quadratic_form_probability(a, zero, [PLUS] * 3) == 0.0
    same = [MeasurementSetting(p, 1.1) for p in (0.2, 0.5, 0.9)]
    Q, avec, _ = quadratic_form_parts(a, same, [PLUS] * 3)
    assert np.allclose(Q, 1.0)
    assert np.linalg.matrix_rank(Q) == 1
    assert quadratic_form_probability(a, same, [PLUS] * 3) == pytest.approx(avec.sum() ** 2, abs=1e-15)


def test_quadratic_form_requires_three_qubits():
    with pytest.raises(ValidationError):
        quadratic_form_probability(Amplitudes.uniform(4), [MeasurementSetting(0, 0)] * 4, [PLUS] * 4)


def test_clamp():
    assert clamp_probability(-5e-13) == 0.0
    assert clamp_probability(1 + 5e-13) == 1.0
    assert clamp_probability(0.3) == 0.3
    with pytest.raises(ProbabilityRangeError):
        clamp_probability(-1e-9)
    with pytest.raises(ProbabilityRangeError):
        clamp_probability(1.01)


def test_statevector_json_roundtrip_and_norm():
    s = build_ghz_state(3)
    back = StateVector.from_json(s.to_json())
    assert np.array_equal(back.amps, s.amps)
    with pytest.raises(ValidationError):
        StateVector(1, np.array([1.0, 1.0]))


@pytest.mark.parametrize("n", range(2, 11))
def test_lhv_paradox(n):
    report = lhv_paradox_check(n)
    assert report.strategies_total == 4**n
    assert report.paradox_confirmed
    assert report.max_target_probability == 0.0


def test_lhv_without_last_constraint():
    report = lhv_paradox_check(3, drop_last_constraint=True)
    assert report.max_target_probability == 1.0
    assert not report.paradox_confirmed


def test_lhv_two_party_count():
    # by hand over the U outcomes: (+,+) admits no D choice, (+,-) and (-,+) one each,
    # (-,-) every D pair except (-,-)
    assert lhv_paradox_check(2).strategies_satisfying_constraints == 5


@pytest.mark.parametrize("n", [1, 11])
def test_lhv_range(n):
    with pytest.raises(ValidationError):
        lhv_paradox_check(n)
