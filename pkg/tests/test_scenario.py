import json

import pytest

from contextuality import (
    Assignment,
    Context,
    MeasurementScenario,
    ParseError,
    ValidationError,
    enumerate_assignments,
    scenario_from_dict,
    scenario_to_dict,
    validate_scenario,
)
from contextuality.scenario import parse_assignment


def chsh():
    return MeasurementScenario(
        ["a1", "a2", "b1", "b2"],
        [["a1", "b1"], ["a1", "b2"], ["a2", "b1"], ["a2", "b2"]],
        [0, 1],
    )


def test_context_is_canonical():
    c = Context(["b", "a", "b"])
    assert c.members == ("a", "b")
    assert c.key() == "a,b"
    assert len(c) == 2
    assert Context(["a", "b"]) == Context(["b", "a"])


def test_context_ordering_and_subset():
    assert Context(["a"]) < Context(["a", "b"])
    assert Context(["a"]).issubset(Context(["a", "b"]))
    assert not Context(["a", "c"]).issubset(Context(["a", "b"]))


def test_assignment_aligns_to_sorted_labels():
    s = Assignment(["b", "a"], [1, 0])
    assert s.labels == ("a", "b")
    assert s.values == (0, 1)
    assert s["a"] == 0 and s["b"] == 1
    assert s.to_string() == "01"
    assert s.as_dict() == {"a": 0, "b": 1}


def test_assignment_restrict_and_extends():
    s = Assignment(["a", "b", "c"], [1, 0, 1])
    r = s.restrict(["c", "a"])
    assert r.labels == ("a", "c")
    assert r.values == (1, 1)
    assert s.extends(r)
    assert not s.extends(Assignment(["a"], [0]))


def test_assignment_rejects_unknown_label():
    s = Assignment(["a"], [0])
    with pytest.raises(KeyError):
        s["b"]


def test_scenario_canonicalizes():
    sc = chsh()
    assert sc.measurements == ("a1", "a2", "b1", "b2")
    assert sc.contexts[0].members == ("a1", "b1")
    assert sc.outcomes == (0, 1)
    assert sc.ring == "Z2"


def test_scenario_rejects_bad_outcomes():
    with pytest.raises(ValidationError):
        MeasurementScenario(["a"], [["a"]], [0])
    with pytest.raises(ValidationError):
        MeasurementScenario(["a"], [["a"]], [1, 2])
    with pytest.raises(ValidationError):
        MeasurementScenario(["a"], [["a"]], [0, 1, 2], ring="Z2")


def test_scenario_rejects_undeclared_labels():
    with pytest.raises(ValidationError):
        MeasurementScenario(["a"], [["a", "b"]], [0, 1])


def test_validate_reports_covering_and_antichain():
    sc = MeasurementScenario(["a", "b", "c"], [["a"], ["a", "b"]], [0, 1])
    kinds = sorted(v.kind for v in validate_scenario(sc))
    assert kinds == ["antichain", "covering"]
    assert validate_scenario(chsh()) == []


def test_enumerate_assignments_order():
    ctx = Context(["y", "x"])
    strings = [s.to_string() for s in enumerate_assignments(ctx, (0, 1))]
    assert strings == ["00", "01", "10", "11"]


def test_json_round_trip():
    sc = chsh()
    data = scenario_to_dict(sc)
    assert scenario_from_dict(json.loads(json.dumps(data))) == sc


def test_from_dict_rejects_garbage():
    with pytest.raises(ParseError):
        scenario_from_dict([])
    with pytest.raises(ParseError):
        scenario_from_dict({"measurements": ["a"]})
    with pytest.raises(ParseError):
        scenario_from_dict({"measurements": "a", "contexts": []})


def test_parse_assignment():
    ctx = Context(["a", "b"])
    s = parse_assignment("10", ctx, (0, 1))
    assert s["a"] == 1 and s["b"] == 0
    with pytest.raises(ParseError):
        parse_assignment("1", ctx, (0, 1))
    with pytest.raises(ParseError):
        parse_assignment("1x", ctx, (0, 1))
    with pytest.raises(ParseError):
        parse_assignment("12", ctx, (0, 1))
