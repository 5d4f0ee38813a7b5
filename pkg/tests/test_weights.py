import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opstat.errors import ManualMismatch, MissingOutcome, OperationSumViolation, ValueOutOfRange
from opstat.ftt import canonical_states, combined_memory_manual
from opstat.manual import is_event, validate_manual
from opstat.weights import (
    UnsupportedDimension,
    WeightFunction,
    common_zero_set,
    event_probability,
    is_superposition,
    sum_violations,
    validate_weight,
    weight_space_dof,
)

# gist-only column, filled in by hand with complements
OMEGA_G = {
    "T_T": 1, "T'_T": 0, "R_T": 1, "R'_T": 0, "U_T": 0, "U'_T": 1,
    "T_R": 1, "T'_R": 0, "R_R": 1, "R'_R": 0, "U_R": 0, "U'_R": 1,
    "T_U": 0, "T'_U": 1, "R_U": 0, "R'_U": 1, "U_U": 1, "U'_U": 0,
}  # fmt: skip


def test_gist_column_valid(nine):
    w = validate_weight(nine, OMEGA_G)
    assert w["R_T"] == 1.0


def test_uniform_on_triangles(tru3):
    w = validate_weight(tru3, {x: 1 / 3 for x in tru3.outcomes})
    assert all(v == pytest.approx(1 / 3) for v in w.values.values())


def test_gist_on_combined_manual_violates():
    m = combined_memory_manual()
    with pytest.raises(OperationSumViolation) as info:
        validate_weight(m, OMEGA_G)
    assert info.value.sum == 2.0
    assert set(info.value.outcomes) == {"T_T", "R_T", "U_T"}
    sums = [v.sum for v in sum_violations(m, OMEGA_G)]
    assert sums == [2.0, 2.0]


def test_missing_outcome(tru3):
    values = {x: 1 / 3 for x in tru3.outcomes}
    del values["U_U"]
    with pytest.raises(MissingOutcome):
        validate_weight(tru3, values)


@pytest.mark.parametrize("bad", [-0.1, 1.5, math.nan])
def test_out_of_range(triangle, bad):
    with pytest.raises(ValueOutOfRange):
        validate_weight(triangle, {"T_T": bad, "R_T": 0.5, "U_T": 0.5})


def test_sum_tolerance(triangle):
    validate_weight(triangle, {"T_T": 0.5, "R_T": 0.25, "U_T": 0.25 + 5e-10})
    with pytest.raises(OperationSumViolation) as info:
        validate_weight(triangle, {"T_T": 0.5, "R_T": 0.25, "U_T": 0.25 + 5e-9})
    assert info.value.op_index == 0
    assert info.value.to_dict()["sum"] == pytest.approx(1 + 5e-9)


class TestDof:
    def test_nine(self, nine):
        assert weight_space_dof(nine) == 9

    def test_triangles(self, tru3):
        assert weight_space_dof(tru3) == 3 * (3 - 1)

    def test_connected(self):
        out = weight_space_dof(validate_manual([["a", "b"], ["b", "c"]]))
        assert isinstance(out, UnsupportedDimension)
        assert out.shared_outcomes == ("b",)


class TestSuperposition:
    def test_perfect_is_superposition_of_none_and_gist(self, nine):
        s = canonical_states()
        gens = [s["omega_0"], s["omega_g"]]
        assert common_zero_set(nine, gens) == {"T_U", "R_U", "U'_U"}
        assert is_superposition(nine, s["omega_p"], gens)

    def test_common_zero_set_by_enumeration(self, nine):
        s = canonical_states()
        zeros = {x for x in nine.outcomes if s["omega_0"][x] == 0 and s["omega_g"][x] == 0}
        assert zeros == {"T_U", "R_U", "U'_U"}

    def test_reflexive(self, nine):
        for w in canonical_states().values():
            assert is_superposition(nine, w, [w])

    def test_point_weight(self, nine):
        values = {x: 0.0 for x in nine.outcomes}
        for op in nine.operations:
            values[op[0]] = 1.0
        point = validate_weight(nine, values)
        assert point["T_T"] == 1.0
        omega_0 = canonical_states()["omega_0"]
        assert omega_0["T_T"] == 0
        assert not is_superposition(nine, point, [omega_0])

    def test_mismatch(self, nine, tru3):
        w = canonical_states()["omega_p"]
        other = validate_weight(tru3, {x: 1 / 3 for x in tru3.outcomes})
        with pytest.raises(ManualMismatch):
            is_superposition(nine, w, [other])

    def test_any_unrelated_aware_weight(self, nine, rng):
        # anything that calls unrelated distractors unrelated is a superposition
        s = canonical_states()
        for _ in range(50):
            values = {}
            for op in nine.operations:
                p = rng.random()
                values[op[0]], values[op[1]] = p, 1 - p
            values.update({"T_U": 0.0, "T'_U": 1.0, "R_U": 0.0, "R'_U": 1.0, "U_U": 1.0, "U'_U": 0.0})
            w = validate_weight(nine, values)
            assert is_superposition(nine, w, [s["omega_0"], s["omega_g"]])


def _random_dichotomy_weight(manual, rng, zero_prob=0.4):
    values = {}
    for op in manual.operations:
        r = rng.random()
        p = 0.0 if r < zero_prob / 2 else 1.0 if r < zero_prob else rng.random()
        values[op[0]], values[op[1]] = p, 1 - p
    return validate_weight(manual, values)


def test_superposition_monotone_in_generators(nine, rng):
    for _ in range(200):
        gens = [_random_dichotomy_weight(nine, rng) for _ in range(4)]
        omega = _random_dichotomy_weight(nine, rng)
        k = int(rng.integers(0, 4))
        smaller = gens[:k]
        if is_superposition(nine, omega, smaller):
            assert is_superposition(nine, omega, gens)


def test_no_generators_means_nothing_qualifies(nine):
    assert not is_superposition(nine, canonical_states()["omega_p"], [])


class TestEventProbability:
    def test_gist_event(self, nine):
        w = validate_weight(nine, OMEGA_G)
        assert event_probability(w, is_event(nine, {"R_T"})) == 1.0

    def test_gist_packed_event(self):
        # {R_T, U_T} is an event only once TRU is in the manual, where the gist
        # values are not a weight function; the sum itself is still defined
        m = combined_memory_manual()
        w = WeightFunction(OMEGA_G, m)
        assert event_probability(w, is_event(m, {"R_T", "U_T"})) == 1.0

    def test_empty(self, nine):
        w = validate_weight(nine, OMEGA_G)
        assert event_probability(w, is_event(nine, set())) == 0.0

    def test_perfect_memory_event(self):
        m = combined_memory_manual()
        w = validate_weight(m, canonical_states()["omega_p"].values)
        assert event_probability(w, is_event(m, {"R_T", "U_T"})) == 0.0


@settings(max_examples=100)
@given(st.lists(st.floats(0.01, 1.0), min_size=2, max_size=6), st.data())
def test_additivity_and_normalization(raw, data):
    names = [f"o{i}" for i in range(len(raw))]
    total = sum(raw)
    m = validate_manual([names])
    w = validate_weight(m, {n: r / total for n, r in zip(names, raw)})
    assert abs(sum(w.values.values()) - 1) <= 1e-9
    split = data.draw(st.integers(0, len(names)))
    a, b = is_event(m, names[:split]), is_event(m, names[split:])
    assert abs(event_probability(w, a) + event_probability(w, b) - 1) <= 1e-12
    assert abs(
        event_probability(w, is_event(m, names)) - (event_probability(w, a) + event_probability(w, b))
    ) <= 1e-12
