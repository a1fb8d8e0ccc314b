import json

import pytest

from contextuality import (
    Assignment,
    Context,
    LinearEquation,
    LinearTheory,
    MeasurementScenario,
    SizeLimitError,
    ValidationError,
    is_avn,
    is_consistent,
    satisfies,
    theory_from_dict,
    theory_of_supports,
    theory_to_dict,
)
from contextuality.corpus import (
    mermin_square_possibilistic,
    mermin_square_scenario,
    pr_box,
    xy322_ghz_model,
    xz222_model,
)


def tiny_scenario():
    return MeasurementScenario(["x", "y", "z"], [["x", "y"], ["y", "z"]], [0, 1])


def eq(scenario, members, coefs, const):
    return LinearEquation(Context(members), coefs, const)


def test_equation_render_and_satisfies():
    e = eq(None, ["x", "y"], (1, 1), 0)
    assert e.render() == "s(x) + s(y) = 0"
    assert satisfies(Assignment(["x", "y"], [0, 0]), e)
    assert satisfies(Assignment(["x", "y"], [1, 1]), e)
    assert not satisfies(Assignment(["x", "y"], [1, 0]), e)
    zero = eq(None, ["x", "y"], (0, 0), 1)
    assert zero.render() == "0 = 1"


def test_theory_reduces_per_context():
    sc = tiny_scenario()
    a = eq(sc, ["x", "y"], (1, 0), 0)
    b = eq(sc, ["x", "y"], (1, 1), 1)
    c = eq(sc, ["x", "y"], (0, 1), 1)  # dependent: a + b
    t1 = LinearTheory(sc, [a, b])
    t2 = LinearTheory(sc, [a, b, c])
    assert t1 == t2
    assert len(t1.context_basis(Context(["x", "y"]))) == 2


def test_theory_detects_contradiction_within_context():
    sc = tiny_scenario()
    a = eq(sc, ["x", "y"], (1, 1), 0)
    b = eq(sc, ["x", "y"], (1, 1), 1)
    t = LinearTheory(sc, [a, b])
    res = is_consistent(t)
    assert not res
    assert res.certificate is not None


def test_span_and_implies():
    sc = tiny_scenario()
    a = eq(sc, ["x", "y"], (1, 0), 1)
    b = eq(sc, ["x", "y"], (0, 1), 1)
    t = LinearTheory(sc, [a, b])
    span = t.span(Context(["x", "y"]))
    rendered = {e.render() for e in span}
    assert "s(x) + s(y) = 0" in rendered
    assert t.implies(eq(sc, ["x", "y"], (1, 1), 0))
    assert not t.implies(eq(sc, ["x", "y"], (1, 1), 1))


def test_span_refuses_oversized_context():
    labels = [f"m{i}" for i in range(20)]
    sc = MeasurementScenario(labels, [labels], [0, 1])
    t = LinearTheory(sc, [eq(sc, labels, tuple([1] + [0] * 19), 0)])
    with pytest.raises(SizeLimitError):
        t.span(Context(labels))


def test_theory_requires_z2_ring():
    sc = MeasurementScenario(["x"], [["x"]], [0, 1], ring="none")
    with pytest.raises(ValidationError):
        LinearTheory(sc, [])


def test_theory_of_supports_square():
    # the Bell-state supports imply every operator parity relation, plus
    # state-dependent facts such as s(XX) = 0 from the deterministic row
    t = theory_of_supports(mermin_square_possibilistic())
    sc = t.scenario
    parity = [
        (["IX", "XI", "XX"], (1, 1, 1), 0),
        (["IX", "ZI", "ZX"], (1, 1, 1), 0),
        (["IZ", "XI", "XZ"], (1, 1, 1), 0),
        (["IZ", "ZI", "ZZ"], (1, 1, 1), 0),
        (["XX", "YY", "ZZ"], (1, 1, 1), 1),
        (["XZ", "YY", "ZX"], (1, 1, 1), 0),
    ]
    for members, coefs, const in parity:
        assert t.implies(eq(sc, members, coefs, const))
    assert t.implies(eq(sc, ["XX", "YY", "ZZ"], (1, 0, 0), 0))
    res = is_consistent(t)
    assert not res.consistent
    # the certificate's equations cancel coefficient-wise and sum constants to 1
    assert res.certificate
    consts = sum(e.constant for e in res.certificate) % 2
    assert consts == 1


def test_consistent_theory_returns_witness():
    t = theory_of_supports(xz222_model())
    res = is_consistent(t)
    assert res.consistent
    for e in t.equations:
        assert satisfies(res.assignment.restrict(e.context.members), e)


def test_is_avn_verdicts():
    assert is_avn(pr_box())
    assert is_avn(xy322_ghz_model())
    assert not is_avn(xz222_model())


def test_theory_json_round_trip():
    t = theory_of_supports(mermin_square_possibilistic())
    data = json.loads(json.dumps(theory_to_dict(t)))
    assert theory_from_dict(data) == t


def test_ghz_support_theory_is_avn_with_certificate():
    t = theory_of_supports(xy322_ghz_model())
    res = is_consistent(t)
    assert not res.consistent
    masks = {}
    for e in res.certificate:
        for m, c in zip(e.context.members, e.coefficients):
            if c:
                masks[m] = masks.get(m, 0) ^ 1
    assert not any(masks.values())
    assert sum(e.constant for e in res.certificate) % 2 == 1


def test_scenario_accessor():
    assert theory_of_supports(mermin_square_possibilistic()).scenario == mermin_square_scenario()
