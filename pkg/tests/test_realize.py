"""Quantum realization of empirical tables, exact and float paths."""

import math
from fractions import Fraction

import numpy as np
import pytest

from contextuality import (
    Assignment,
    EmpiricalModel,
    EquatorialMeasurement,
    FloatDistribution,
    FloatEmpiricalModel,
    MeasurementScenario,
    NonCommutingContextError,
    ParseError,
    PauliOperator,
    SizeLimitError,
    StateVector,
    ValidationError,
    basis_state,
    bell_phi_plus,
    born_distribution,
    born_distribution_equatorial,
    born_distribution_exact,
    canonical_state,
    check_no_signaling,
    context_eigenstate,
    equatorial_from_dict,
    ghz,
    load_equatorial,
    load_state,
    parse_angle,
    plus,
    realize_model,
    realize_model_exact,
    state_from_dict,
    state_to_dict,
)
from contextuality.corpus import (
    mermin_square_bell_model,
    mermin_square_scenario,
    xy322_ghz_model,
    xy322_plus_model,
    xy322_scenario,
)


def test_ghz_pauli_realization_matches_table():
    model = realize_model(ghz(3), xy322_scenario())
    assert isinstance(model, EmpiricalModel)
    assert model == xy322_ghz_model()


def test_ghz_equatorial_angles_match_pauli():
    # X is the equatorial angle 0 and Y the angle pi/2, party by party
    angles = {"XII": (0, 0.0), "YII": (0, math.pi / 2),
              "IXI": (1, 0.0), "IYI": (1, math.pi / 2),
              "IIX": (2, 0.0), "IIY": (2, math.pi / 2)}
    measurements = {lab: EquatorialMeasurement(p, a)
                    for lab, (p, a) in angles.items()}
    model = realize_model(ghz(3), xy322_scenario(), measurements=measurements)
    assert isinstance(model, EmpiricalModel)
    assert model == xy322_ghz_model()


def test_bell_square_realization_matches_table():
    model = realize_model(bell_phi_plus(), mermin_square_scenario())
    assert isinstance(model, EmpiricalModel)
    assert model == mermin_square_bell_model()


def test_plus_state_truth_is_not_the_flat_table():
    # X fixes |+>, so the all-X context is deterministic, not uniform
    model = realize_model(plus(3), xy322_scenario())
    assert isinstance(model, EmpiricalModel)
    ctx = next(c for c in model.scenario.contexts
               if c.members == ("IIX", "IXI", "XII"))
    row = model.rows[ctx]
    zero = Assignment(ctx.members, (0, 0, 0))
    assert row.weights[zero] == 1
    assert check_no_signaling(model) == []
    assert model != xy322_plus_model()


def test_exact_path_agrees_with_float_path():
    ghz_amps = [(1, 0)] + [(0, 0)] * 6 + [(1, 0)]
    assert realize_model_exact(ghz_amps, xy322_scenario()) == realize_model(
        ghz(3), xy322_scenario())
    bell_amps = [(1, 0), (0, 0), (0, 0), (1, 0)]
    assert realize_model_exact(bell_amps, mermin_square_scenario()) == realize_model(
        bell_phi_plus(), mermin_square_scenario())


def test_probability_far_from_small_rationals_is_float_tagged():
    # 1/3 + 1e-8 has no fraction with denominator <= 65536 within 1e-9
    p = Fraction(1, 3) + Fraction(1, 10 ** 8)
    psi = StateVector(1, [math.sqrt(p), math.sqrt(1 - p)])
    row = born_distribution(psi, [PauliOperator.from_string("Z")])
    assert isinstance(row, FloatDistribution)
    assert row.residual > 1e-9
    assert abs(sum(row.weights.values()) - 1.0) < 1e-9

    scenario = MeasurementScenario(["Z"], [["Z"]])
    model = realize_model(psi, scenario)
    assert isinstance(model, FloatEmpiricalModel)

    angle = math.acos(2 * float(p) - 1)
    eq_row = born_distribution_equatorial(
        plus(1), [EquatorialMeasurement(0, angle)], labels=["m"])
    assert isinstance(eq_row, FloatDistribution)


def test_dyadic_equatorial_rows_are_exact():
    row = born_distribution_equatorial(
        plus(1), [EquatorialMeasurement(0, math.pi / 2)], labels=["m"])
    assert not isinstance(row, FloatDistribution)
    half = Fraction(1, 2)
    assert set(row.weights.values()) == {half}


def test_canonical_state_names():
    assert np.allclose(canonical_state("bell_phi_plus").amplitudes,
                       bell_phi_plus().amplitudes)
    g = canonical_state("ghz3")
    assert g.num_qubits == 3
    assert np.allclose(g.amplitudes[[0, 7]], 1 / math.sqrt(2))
    p = canonical_state("plus2")
    assert np.allclose(p.amplitudes, 0.5)
    b = canonical_state("basis2")
    assert b.amplitudes[0] == 1
    assert np.allclose(b.amplitudes[1:], 0)
    with pytest.raises(ParseError):
        canonical_state("w3")
    with pytest.raises(ParseError):
        canonical_state("ghz")


def test_state_vector_validation():
    with pytest.raises(SizeLimitError):
        StateVector(11, [0.0])
    with pytest.raises(SizeLimitError):
        StateVector(0, [1.0])
    with pytest.raises(ValidationError):
        StateVector(2, [1.0, 0.0])
    with pytest.raises(ValidationError):
        StateVector(1, [1.0, 1.0])
    with pytest.raises(ValidationError):
        basis_state(2, index=7)


def test_born_distribution_validation():
    psi = bell_phi_plus()
    with pytest.raises(ValidationError):
        born_distribution(psi, [PauliOperator.from_string("X")])
    with pytest.raises(ValidationError):
        # iX is not Hermitian
        born_distribution(psi, [PauliOperator(2, 1, 0b01, 0)])
    with pytest.raises(NonCommutingContextError):
        born_distribution(psi, [PauliOperator.from_string(t)
                                for t in ("XI", "ZI")])


def test_realize_model_validation():
    psi = bell_phi_plus()
    ternary = MeasurementScenario(["XX"], [["XX"]], outcomes=(0, 1, 2),
                                  ring="none")
    with pytest.raises(ValidationError):
        realize_model(psi, ternary)
    scenario = MeasurementScenario(["a", "b"], [["a", "b"]])
    with pytest.raises(ValidationError):
        realize_model(psi, scenario, measurements={"a": PauliOperator.from_string("XI")})
    mixed = {"a": PauliOperator.from_string("XI"),
             "b": EquatorialMeasurement(1, 0.0)}
    with pytest.raises(ValidationError):
        realize_model(psi, scenario, measurements=mixed)


def test_equatorial_validation():
    psi = bell_phi_plus()
    with pytest.raises(ValidationError):
        born_distribution_equatorial(
            psi, [EquatorialMeasurement(0, 0.0), EquatorialMeasurement(0, 1.0)])
    with pytest.raises(ValidationError):
        born_distribution_equatorial(psi, [EquatorialMeasurement(2, 0.0)])
    with pytest.raises(ValidationError):
        born_distribution_equatorial(
            psi, [EquatorialMeasurement(0, 0.0)], labels=["m", "m2"])


def test_context_eigenstate_bell_pair():
    ops = [PauliOperator.from_string(t) for t in ("XX", "ZZ")]
    vec = context_eigenstate(ops)
    half = Fraction(1, 2)
    assert vec == [(half, 0), (0, 0), (0, 0), (half, 0)]
    row = born_distribution_exact(vec, ops)
    pinned = Assignment(row.context.members, (0, 0))
    assert row.weights[pinned] == 1

    flipped = context_eigenstate(ops, signs=(1, 0))
    row = born_distribution_exact(flipped, ops)
    assert row.weights[Assignment(row.context.members, (1, 0))] == 1


def test_context_eigenstate_empty_and_errors():
    xx = PauliOperator.from_string("XX")
    assert context_eigenstate([xx, xx.negate()]) is None
    with pytest.raises(ValidationError):
        context_eigenstate([xx], signs=(0, 1))
    with pytest.raises(NonCommutingContextError):
        context_eigenstate([PauliOperator.from_string("XI"),
                            PauliOperator.from_string("ZI")])
    with pytest.raises(ValidationError):
        context_eigenstate([])


def test_every_context_eigenstate_reproduces_its_signs():
    square = mermin_square_scenario()
    for ctx in square.contexts:
        ops = [PauliOperator.from_string(m) for m in ctx.members]
        for signs in ((0, 0, 0), (1, 1, 0), (0, 1, 1)):
            vec = context_eigenstate(ops, signs=signs)
            if vec is None:
                continue
            row = born_distribution_exact(vec, ops, labels=ctx.members)
            assert row.weights[Assignment(ctx.members, signs)] == 1


def test_parse_angle_forms():
    assert parse_angle("0") == 0.0
    assert parse_angle("pi") == pytest.approx(math.pi)
    assert parse_angle("pi/3") == pytest.approx(math.pi / 3)
    assert parse_angle("-pi/2") == pytest.approx(-math.pi / 2)
    assert parse_angle("2*pi/3") == pytest.approx(2 * math.pi / 3)
    assert parse_angle("0.25") == 0.25
    assert parse_angle(2) == 2.0
    for bad in ("pie", "", None, "pi/"):
        with pytest.raises(ParseError):
            parse_angle(bad)


def test_state_json_round_trip():
    for psi in (ghz(3), bell_phi_plus()):
        back = state_from_dict(state_to_dict(psi))
        assert back.num_qubits == psi.num_qubits
        assert np.allclose(back.amplitudes, psi.amplitudes)
    fractional = state_from_dict(
        {"n": 1, "amplitudes": [["3/5", "0"], ["0", "4/5"]]})
    assert fractional.amplitudes[1] == pytest.approx(0.8j)
    for bad in ({"n": 1}, {"n": "1", "amplitudes": []},
                {"n": 1, "amplitudes": [[0.6, 0.0], [0.8]]},
                {"n": 1, "amplitudes": [["x", 0], [0, 0]]}, []):
        with pytest.raises(ParseError):
            state_from_dict(bad)


def test_equatorial_json_round_trip(tmp_path):
    data = {"A": {"party": 0, "angle": "pi/2"}, "B": {"party": 1, "angle": 0}}
    parsed = equatorial_from_dict(data)
    assert parsed["A"] == EquatorialMeasurement(0, math.pi / 2)
    assert parsed["B"] == EquatorialMeasurement(1, 0.0)
    for bad in ([], {"A": {"party": 0}}, {"A": 3}):
        with pytest.raises(ParseError):
            equatorial_from_dict(bad)

    path = tmp_path / "eq.json"
    path.write_text('{"A": {"party": 0, "angle": "pi/2"}}')
    assert load_equatorial(str(path))["A"].angle == pytest.approx(math.pi / 2)


def test_load_state_file(tmp_path):
    path = tmp_path / "state.json"
    import json
    path.write_text(json.dumps(state_to_dict(ghz(2))))
    assert np.allclose(load_state(str(path)).amplitudes, ghz(2).amplitudes)
