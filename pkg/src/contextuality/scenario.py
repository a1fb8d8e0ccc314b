"""Measurement scenarios: label sets, covers of contexts, and assignments.

A scenario is a triple of measurement labels, a cover of contexts (the
maximal jointly-measurable subsets), and a shared outcome set 0..k-1.
Labels are plain strings ordered lexicographically; that order fixes the
canonical form of contexts, assignments, and every enumeration in the
package. Scenarios whose outcomes carry Z2 (sum mod 2) structure set
``ring="Z2"``, which the parity-equation machinery requires.

Construction canonicalizes (sorts, deduplicates) but does not repair:
covering and anti-chain violations are reported by ``validate_scenario``
as data, not silently fixed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping

from .errors import ParseError, ValidationError

Label = str
Outcome = int

RINGS = ("Z2", "none")


@dataclass(frozen=True, order=True)
class Context:
    """A jointly measurable set of labels, kept sorted and deduplicated."""

    members: tuple[Label, ...]

    def __init__(self, members: Iterable[Label]):
        canon = tuple(sorted(set(members)))
        if not canon:
            raise ValidationError("context must contain at least one measurement")
        if any(not isinstance(m, str) or not m for m in canon):
            raise ValidationError("measurement labels must be nonempty strings")
        object.__setattr__(self, "members", canon)

    def __iter__(self) -> Iterator[Label]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, label: object) -> bool:
        return label in self.members

    def issubset(self, other: "Context") -> bool:
        return set(self.members) <= set(other.members)

    def intersection(self, other: "Context") -> tuple[Label, ...]:
        return tuple(m for m in self.members if m in other.members)

    def key(self) -> str:
        """Serialization key, e.g. ``"a1,b1"``."""
        return ",".join(self.members)

    def __str__(self) -> str:
        return "{" + ", ".join(self.members) + "}"


@dataclass(frozen=True, order=True)
class Assignment:
    """An outcome for each label of some subset, in label order.

    Hashable, so assignments serve as distribution keys and section
    elements. ``values[i]`` is the outcome of ``labels[i]``.
    """

    labels: tuple[Label, ...]
    values: tuple[Outcome, ...]

    def __init__(self, labels: Iterable[Label], values: Iterable[Outcome]):
        pairs = sorted(zip(labels, values))
        labs = tuple(p[0] for p in pairs)
        vals = tuple(p[1] for p in pairs)
        if len(set(labs)) != len(labs):
            raise ValidationError(f"duplicate labels in assignment: {labs}")
        if any(not isinstance(v, int) or v < 0 for v in vals):
            raise ValidationError(f"outcomes must be nonnegative integers: {vals}")
        object.__setattr__(self, "labels", labs)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_mapping(cls, mapping: Mapping[Label, Outcome]) -> "Assignment":
        return cls(tuple(mapping.keys()), tuple(mapping.values()))

    def __getitem__(self, label: Label) -> Outcome:
        try:
            return self.values[self.labels.index(label)]
        except ValueError:
            raise KeyError(label) from None

    def as_dict(self) -> dict[Label, Outcome]:
        return dict(zip(self.labels, self.values))

    def restrict(self, labels: Iterable[Label]) -> "Assignment":
        """Project onto a subset of this assignment's labels."""
        keep = set(labels)
        missing = keep - set(self.labels)
        if missing:
            raise ValidationError(f"cannot restrict to absent labels: {sorted(missing)}")
        pairs = [(l, v) for l, v in zip(self.labels, self.values) if l in keep]
        return Assignment(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    def extends(self, other: "Assignment") -> bool:
        """True when this assignment agrees with ``other`` on all its labels."""
        mine = self.as_dict()
        return all(l in mine and mine[l] == v for l, v in zip(other.labels, other.values))

    def to_string(self) -> str:
        """Outcome digits in label order, e.g. ``"011"``."""
        return "".join(str(v) for v in self.values)

    def __str__(self) -> str:
        return self.to_string()


@dataclass(frozen=True)
class MeasurementScenario:
    """Labels, cover, outcomes, and optional Z2 ring flag."""

    measurements: tuple[Label, ...]
    contexts: tuple[Context, ...]
    outcomes: tuple[Outcome, ...]
    ring: str = "Z2"

    def __init__(
        self,
        measurements: Iterable[Label],
        contexts: Iterable[Context | Iterable[Label]],
        outcomes: Iterable[Outcome] = (0, 1),
        ring: str = "Z2",
    ):
        meas = tuple(sorted(set(measurements)))
        if any(not isinstance(m, str) or not m for m in meas):
            raise ValidationError("measurement labels must be nonempty strings")
        ctxs = tuple(sorted(set(
            c if isinstance(c, Context) else Context(c) for c in contexts)))
        outs = tuple(outcomes)
        if outs != tuple(range(len(outs))) or len(outs) < 2:
            raise ValidationError(f"outcomes must be 0..k-1 with k >= 2, got {outs}")
        if ring not in RINGS:
            raise ValidationError(f"ring must be one of {RINGS}, got {ring!r}")
        if ring == "Z2" and outs != (0, 1):
            raise ValidationError("ring Z2 requires outcomes (0, 1)")
        for c in ctxs:
            stray = set(c.members) - set(meas)
            if stray:
                raise ValidationError(
                    f"context {c} uses undeclared measurements {sorted(stray)}")
        object.__setattr__(self, "measurements", meas)
        object.__setattr__(self, "contexts", ctxs)
        object.__setattr__(self, "outcomes", outs)
        object.__setattr__(self, "ring", ring)

    def assignments(self, labels: Iterable[Label] | Context | None = None) -> tuple[Assignment, ...]:
        """All assignments on the given labels (default: every measurement)."""
        labs = self.measurements if labels is None else tuple(labels)
        return enumerate_assignments(labs, self.outcomes)

    def context_sized(self) -> int:
        return len(self.contexts)


@dataclass(frozen=True)
class ScenarioViolation:
    """One covering or anti-chain failure, reported as data."""

    kind: str  # "covering" or "antichain"
    items: tuple

    def __str__(self) -> str:
        if self.kind == "covering":
            return f"measurement {self.items[0]!r} belongs to no context"
        a, b = self.items
        return f"context {a} is contained in context {b}"


def enumerate_assignments(labels: Iterable[Label], outcomes: Iterable[Outcome]) -> tuple[Assignment, ...]:
    """All assignments on ``labels`` in lexicographic outcome order under label order."""
    labs = tuple(sorted(set(labels)))
    outs = tuple(outcomes)
    return tuple(Assignment(labs, vals) for vals in product(outs, repeat=len(labs)))


def validate_scenario(scenario: MeasurementScenario) -> list[ScenarioViolation]:
    """Report every covering failure and every anti-chain failure.

    An empty list means the cover is a covering anti-chain. Nothing is
    repaired; duplicate contexts are already impossible after
    canonicalization.
    """
    violations: list[ScenarioViolation] = []
    covered = set()
    for c in scenario.contexts:
        covered.update(c.members)
    for m in scenario.measurements:
        if m not in covered:
            violations.append(ScenarioViolation("covering", (m,)))
    for a in scenario.contexts:
        for b in scenario.contexts:
            if a is not b and a.issubset(b):
                violations.append(ScenarioViolation("antichain", (a, b)))
    return violations


# ----------------------------------------------------------------- JSON form

def scenario_to_dict(scenario: MeasurementScenario) -> dict:
    return {
        "measurements": list(scenario.measurements),
        "outcomes": list(scenario.outcomes),
        "ring": scenario.ring,
        "contexts": [list(c.members) for c in scenario.contexts],
    }


def scenario_from_dict(data: object) -> MeasurementScenario:
    if not isinstance(data, dict):
        raise ParseError("scenario must be a JSON object")
    try:
        measurements = data["measurements"]
        contexts = data["contexts"]
    except KeyError as exc:
        raise ParseError(f"scenario object missing key {exc}") from None
    outcomes = data.get("outcomes", [0, 1])
    ring = data.get("ring", "Z2")
    if not isinstance(measurements, list) or not isinstance(contexts, list):
        raise ParseError("scenario measurements and contexts must be lists")
    if not all(isinstance(c, list) for c in contexts):
        raise ParseError("each context must be a list of labels")
    return MeasurementScenario(measurements, contexts, outcomes, ring)


def load_scenario(path: str) -> MeasurementScenario:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from None
    return scenario_from_dict(data)


def parse_assignment(outcome_string: str, context: Context, outcomes: tuple[Outcome, ...]) -> Assignment:
    """Decode an outcome digit string keyed to a context's label order."""
    if len(outcome_string) != len(context):
        raise ParseError(
            f"outcome string {outcome_string!r} has {len(outcome_string)} digits "
            f"for context {context} of size {len(context)}")
    try:
        vals = tuple(int(ch) for ch in outcome_string)
    except ValueError:
        raise ParseError(f"outcome string {outcome_string!r} has non-digit characters") from None
    if any(v not in outcomes for v in vals):
        raise ParseError(f"outcome string {outcome_string!r} uses outcomes outside {outcomes}")
    return Assignment(context.members, vals)
