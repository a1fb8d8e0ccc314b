"""Realizing empirical models from quantum states by the Born rule.

Dense statevector simulation for up to 10 qubits. A context of commuting
Hermitian Paulis (or of single-qubit equatorial observables) is measured
by sequential eigenprojections; eigenvalue +1 records outcome 0 and -1
records outcome 1.

Probabilities are computed in floating point and then snapped to the
nearest rational with denominator at most 2^16. If any weight sits
further than 1e-9 from such a rational, exactification is refused and a
float-tagged distribution is returned instead; float-tagged rows never
enter the exact analysis stack. A separate all-rational Born path takes
states with rational real and imaginary parts (not necessarily
normalized) and yields exact distributions directly; random rational
states keep the contextual-fraction bridge exactly decidable.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .empirical import ContextDistribution, EmpiricalModel
from .errors import (
    NonCommutingContextError,
    ParseError,
    SizeLimitError,
    ValidationError,
)
from .pauli import PauliOperator
from .scenario import Assignment, Context, Label, MeasurementScenario

QUBIT_LIMIT = 10
MAX_DENOMINATOR = 1 << 16
RESIDUAL_TOLERANCE = 1e-9
NORM_TOLERANCE = 1e-9


class StateVector:
    """A unit vector on n qubits, qubit 0 as the most significant index bit."""

    def __init__(self, num_qubits: int, amplitudes: Sequence[complex]):
        if num_qubits < 1 or num_qubits > QUBIT_LIMIT:
            raise SizeLimitError(f"statevectors support 1..{QUBIT_LIMIT} qubits")
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if amps.size != 1 << num_qubits:
            raise ValidationError(
                f"{amps.size} amplitudes for {num_qubits} qubits")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValidationError(f"state norm {norm} is not 1")
        self.num_qubits = num_qubits
        self.amplitudes = amps / norm
        self.amplitudes.setflags(write=False)

    def __repr__(self) -> str:
        return f"StateVector(num_qubits={self.num_qubits})"


def ghz(num_qubits: int) -> StateVector:
    amps = np.zeros(1 << num_qubits, dtype=complex)
    amps[0] = amps[-1] = 1 / math.sqrt(2)
    return StateVector(num_qubits, amps)


def plus(num_qubits: int) -> StateVector:
    dim = 1 << num_qubits
    return StateVector(num_qubits, np.full(dim, 1 / math.sqrt(dim), dtype=complex))


def basis_state(num_qubits: int, index: int = 0) -> StateVector:
    if num_qubits < 1 or num_qubits > QUBIT_LIMIT:
        raise SizeLimitError(f"statevectors support 1..{QUBIT_LIMIT} qubits")
    if index < 0 or index >= 1 << num_qubits:
        raise ValidationError(f"basis index {index} outside {num_qubits} qubits")
    amps = np.zeros(1 << num_qubits, dtype=complex)
    amps[index] = 1.0
    return StateVector(num_qubits, amps)


def bell_phi_plus() -> StateVector:
    return ghz(2)


_STATE_PATTERN = re.compile(r"^(ghz|plus|basis)(\d+)$")


def canonical_state(name: str) -> StateVector:
    """Named states: ``bell_phi_plus``, ``ghzN``, ``plusN``, ``basisN``."""
    if name == "bell_phi_plus":
        return bell_phi_plus()
    m = _STATE_PATTERN.match(name)
    if not m:
        raise ParseError(f"unknown state name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    if kind == "ghz":
        return ghz(n)
    if kind == "plus":
        return plus(n)
    return basis_state(n)


@dataclass(frozen=True)
class EquatorialMeasurement:
    """cos(angle) X + sin(angle) Y on one party's qubit."""

    party: int
    angle: float


@dataclass(frozen=True)
class FloatDistribution:
    """A context row that refused exactification; carries its residual."""

    context: Context
    weights: Mapping[Assignment, float]
    residual: float

    exact = False


@dataclass(frozen=True)
class FloatEmpiricalModel:
    """A realized model with at least one float-tagged row."""

    scenario: MeasurementScenario
    rows: Mapping[Context, ContextDistribution | FloatDistribution]

    exact = False


def _index_mask(op_mask: int, num_qubits: int) -> int:
    """Qubit-bit mask to basis-index mask (qubit 0 = leftmost = MSB)."""
    out = 0
    for j in range(num_qubits):
        if (op_mask >> j) & 1:
            out |= 1 << (num_qubits - 1 - j)
    return out


def _apply_pauli(op: PauliOperator, amps: np.ndarray) -> np.ndarray:
    n = op.num_qubits
    xm = _index_mask(op.x, n)
    zm = _index_mask(op.z, n)
    idx = np.arange(amps.size)
    signs = np.array([1 - 2 * (bin(i & zm).count("1") & 1) for i in range(amps.size)])
    out = np.zeros_like(amps)
    out[idx ^ xm] = (1j ** op.phase) * signs * amps
    return out


def _sorted_context(ops: Sequence[PauliOperator],
                    labels: Sequence[Label] | None) -> tuple[Context, list]:
    labs = [str(op) for op in ops] if labels is None else list(labels)
    if len(labs) != len(ops) or len(set(labs)) != len(labs):
        raise ValidationError("labels must be distinct and match the observables")
    pairs = sorted(zip(labs, ops))
    return Context(labs), [p[1] for p in pairs]


def _exactify(context: Context, outcomes, float_weights: dict[Assignment, float]):
    total = sum(float_weights.values())
    if abs(total - 1.0) > 1e-9:
        raise ValidationError(f"probabilities sum to {total}")
    snapped = {}
    residual = 0.0
    for s, p in float_weights.items():
        q = Fraction(p).limit_denominator(MAX_DENOMINATOR)
        residual = max(residual, abs(p - float(q)))
        snapped[s] = q
    if residual > RESIDUAL_TOLERANCE:
        return FloatDistribution(context, float_weights, residual)
    scale = sum(snapped.values())
    if scale != 1:
        snapped = {s: q / scale for s, q in snapped.items()}
    return ContextDistribution(context, outcomes, snapped)


def born_distribution(psi: StateVector, ops: Sequence[PauliOperator],
                      labels: Sequence[Label] | None = None):
    """Joint eigenprojection probabilities for a commuting Pauli context.

    Returns an exact ContextDistribution, or a FloatDistribution when the
    probabilities are not close to small rationals.
    """
    for op in ops:
        if op.num_qubits != psi.num_qubits:
            raise ValidationError(f"{op} does not act on {psi.num_qubits} qubits")
        if not op.is_hermitian():
            raise ValidationError(f"{op} is not an observable")
    for i, a in enumerate(ops):
        for b in ops[i + 1:]:
            if not a.commutes(b):
                raise NonCommutingContextError(f"{a} and {b} do not commute")
    context, ordered = _sorted_context(ops, labels)
    branches: list[tuple[tuple[int, ...], np.ndarray]] = [((), psi.amplitudes)]
    for op in ordered:
        applied = {}
        nxt = []
        for outs, vec in branches:
            pv = _apply_pauli(op, vec)
            for o in (0, 1):
                half = (vec + (1 - 2 * o) * pv) / 2
                nxt.append((outs + (o,), half))
        branches = nxt
    weights = {Assignment(context.members, outs): float(np.vdot(vec, vec).real)
               for outs, vec in branches}
    return _exactify(context, (0, 1), weights)


def born_distribution_equatorial(psi: StateVector,
                                 measurements: Sequence[EquatorialMeasurement],
                                 labels: Sequence[Label] | None = None):
    """Joint distribution of one equatorial observable per listed party."""
    parties = [m.party for m in measurements]
    if len(set(parties)) != len(parties):
        raise ValidationError("one equatorial measurement per party")
    if any(p < 0 or p >= psi.num_qubits for p in parties):
        raise ValidationError("party index outside the state")
    labs = [f"m{m.party}" for m in measurements] if labels is None else list(labels)
    if len(labs) != len(measurements) or len(set(labs)) != len(labs):
        raise ValidationError("labels must be distinct and match the measurements")
    pairs = sorted(zip(labs, measurements))
    context = Context(labs)
    ordered = [p[1] for p in pairs]

    def project(vec: np.ndarray, m: EquatorialMeasurement, o: int) -> np.ndarray:
        s = 1 - 2 * o
        proj = 0.5 * np.array([
            [1, s * np.exp(-1j * m.angle)],
            [s * np.exp(1j * m.angle), 1],
        ])
        shaped = vec.reshape([2] * psi.num_qubits)
        moved = np.tensordot(proj, shaped, axes=([1], [m.party]))
        return np.moveaxis(moved, 0, m.party).reshape(-1)

    branches: list[tuple[tuple[int, ...], np.ndarray]] = [((), psi.amplitudes)]
    for m in ordered:
        branches = [(outs + (o,), project(vec, m, o))
                    for outs, vec in branches for o in (0, 1)]
    weights = {Assignment(context.members, outs): float(np.vdot(vec, vec).real)
               for outs, vec in branches}
    return _exactify(context, (0, 1), weights)


def realize_model(psi: StateVector, scenario: MeasurementScenario,
                  measurements: Mapping[Label, PauliOperator | EquatorialMeasurement]
                  | None = None):
    """Measure every context of a scenario on one state.

    Labels are interpreted as Pauli strings unless a measurement mapping
    is given. Returns an EmpiricalModel when all rows exactify, otherwise
    a FloatEmpiricalModel.
    """
    if scenario.outcomes != (0, 1):
        raise ValidationError("realization targets two-outcome scenarios")

    def interpret(label: Label):
        if measurements is not None:
            try:
                return measurements[label]
            except KeyError:
                raise ValidationError(f"no measurement assigned to label {label!r}") from None
        return PauliOperator.from_string(label)

    rows: dict[Context, ContextDistribution | FloatDistribution] = {}
    all_exact = True
    for ctx in scenario.contexts:
        ms = [interpret(m) for m in ctx.members]
        if all(isinstance(m, PauliOperator) for m in ms):
            row = born_distribution(psi, ms, labels=ctx.members)
        elif all(isinstance(m, EquatorialMeasurement) for m in ms):
            row = born_distribution_equatorial(psi, ms, labels=ctx.members)
        else:
            raise ValidationError(f"context {ctx} mixes Pauli and equatorial measurements")
        rows[ctx] = row
        all_exact = all_exact and not isinstance(row, FloatDistribution)
    if all_exact:
        return EmpiricalModel(scenario, rows)
    return FloatEmpiricalModel(scenario, rows)


# ------------------------------------------------------ exact rational path

RationalAmplitude = tuple[Fraction, Fraction]


def _rational_apply(op: PauliOperator, vec: list[RationalAmplitude]) -> list[RationalAmplitude]:
    n = op.num_qubits
    xm = _index_mask(op.x, n)
    zm = _index_mask(op.z, n)
    out: list[RationalAmplitude] = [(Fraction(0), Fraction(0))] * len(vec)
    for i, (re, im) in enumerate(vec):
        for _ in range(op.phase):
            re, im = -im, re
        if bin(i & zm).count("1") & 1:
            re, im = -re, -im
        out[i ^ xm] = (re, im)
    return out


def born_distribution_exact(amplitudes: Sequence[RationalAmplitude],
                            ops: Sequence[PauliOperator],
                            labels: Sequence[Label] | None = None) -> ContextDistribution:
    """All-rational Born rule; amplitudes need not be normalized."""
    if not ops:
        raise ValidationError("empty context")
    n = ops[0].num_qubits
    vec = [(Fraction(re), Fraction(im)) for re, im in amplitudes]
    if len(vec) != 1 << n:
        raise ValidationError(f"{len(vec)} amplitudes for {n} qubits")
    norm = sum(re * re + im * im for re, im in vec)
    if norm == 0:
        raise ValidationError("zero state")
    for op in ops:
        if op.num_qubits != n:
            raise ValidationError("operators on mismatched qubit counts")
        if not op.is_hermitian():
            raise ValidationError(f"{op} is not an observable")
    for i, a in enumerate(ops):
        for b in ops[i + 1:]:
            if not a.commutes(b):
                raise NonCommutingContextError(f"{a} and {b} do not commute")
    context, ordered = _sorted_context(ops, labels)
    branches: list[tuple[tuple[int, ...], list[RationalAmplitude]]] = [((), vec)]
    for op in ordered:
        nxt = []
        for outs, v in branches:
            pv = _rational_apply(op, v)
            for o in (0, 1):
                sign = 1 - 2 * o
                half = [((re + sign * pre) / 2, (im + sign * pim) / 2)
                        for (re, im), (pre, pim) in zip(v, pv)]
                nxt.append((outs + (o,), half))
        branches = nxt
    weights = {}
    for outs, v in branches:
        prob = sum(re * re + im * im for re, im in v) / norm
        weights[Assignment(context.members, outs)] = prob
    return ContextDistribution(context, (0, 1), weights)


def realize_model_exact(amplitudes: Sequence[RationalAmplitude],
                        scenario: MeasurementScenario) -> EmpiricalModel:
    """Exact realization of a Pauli-labeled scenario from rational amplitudes."""
    rows = {}
    for ctx in scenario.contexts:
        ops = [PauliOperator.from_string(m) for m in ctx.members]
        rows[ctx] = born_distribution_exact(amplitudes, ops, labels=ctx.members)
    return EmpiricalModel(scenario, rows)


def context_eigenstate(ops: Sequence[PauliOperator],
                       signs: Sequence[int] | None = None
                       ) -> list[RationalAmplitude] | None:
    """A joint eigenstate of commuting observables, with rational amplitudes.

    ``signs[i] = 0`` asks for the +1 eigenspace of ``ops[i]`` and 1 for the
    -1 eigenspace. Returns an unnormalized amplitude vector, or None when
    the requested joint eigenspace is empty.
    """
    if not ops:
        raise ValidationError("empty context")
    n = ops[0].num_qubits
    if signs is None:
        signs = [0] * len(ops)
    if len(signs) != len(ops):
        raise ValidationError("one sign per observable")
    for i, a in enumerate(ops):
        if a.num_qubits != n:
            raise ValidationError("operators on mismatched qubit counts")
        if not a.is_hermitian():
            raise ValidationError(f"{a} is not an observable")
        for b in ops[i + 1:]:
            if not a.commutes(b):
                raise NonCommutingContextError(f"{a} and {b} do not commute")
    dim = 1 << n
    for k in range(dim):
        vec: list[RationalAmplitude] = [(Fraction(0), Fraction(0))] * dim
        vec[k] = (Fraction(1), Fraction(0))
        for op, s in zip(ops, signs):
            pv = _rational_apply(op, vec)
            flip = 1 - 2 * (s & 1)
            vec = [((re + flip * pre) / 2, (im + flip * pim) / 2)
                   for (re, im), (pre, pim) in zip(vec, pv)]
        if any(re or im for re, im in vec):
            return vec
    return None


# ----------------------------------------------------------------- JSON form

def _parse_component(value: object) -> float:
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value)) if "/" in value else float(value)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"malformed amplitude component {value!r}") from None
    raise ParseError(f"malformed amplitude component {value!r}")


def state_from_dict(data: object) -> StateVector:
    if not isinstance(data, dict) or "n" not in data or "amplitudes" not in data:
        raise ParseError("state object needs 'n' and 'amplitudes'")
    n = data["n"]
    raw = data["amplitudes"]
    if not isinstance(n, int) or not isinstance(raw, list):
        raise ParseError("state 'n' must be an int and 'amplitudes' a list")
    amps = []
    for item in raw:
        if not isinstance(item, list) or len(item) != 2:
            raise ParseError("each amplitude must be a [re, im] pair")
        amps.append(complex(_parse_component(item[0]), _parse_component(item[1])))
    return StateVector(n, amps)


def state_to_dict(psi: StateVector) -> dict:
    return {
        "n": psi.num_qubits,
        "amplitudes": [[repr(float(a.real)), repr(float(a.imag))]
                       for a in psi.amplitudes],
    }


def load_state(path: str) -> StateVector:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from None
    return state_from_dict(data)


_ANGLE_PATTERN = re.compile(r"^([+-]?\d*\.?\d*)\*?pi(?:/(\d*\.?\d+))?$")


def parse_angle(text: object) -> float:
    """Angles as decimals or multiples of pi: ``"0"``, ``"pi/3"``, ``"2*pi/3"``."""
    if isinstance(text, (int, float)):
        return float(text)
    if not isinstance(text, str):
        raise ParseError(f"malformed angle {text!r}")
    body = text.strip().replace(" ", "")
    m = _ANGLE_PATTERN.match(body)
    if m:
        coef_text = m.group(1)
        coef = 1.0 if coef_text in ("", "+") else -1.0 if coef_text == "-" else float(coef_text)
        denom = float(m.group(2)) if m.group(2) else 1.0
        return coef * math.pi / denom
    try:
        return float(body)
    except ValueError:
        raise ParseError(f"malformed angle {text!r}") from None


def equatorial_from_dict(data: object) -> dict[Label, EquatorialMeasurement]:
    """Measurement map {label: {"party": int, "angle": str|num}}."""
    if not isinstance(data, dict):
        raise ParseError("equatorial map must be a JSON object")
    out = {}
    for label, item in data.items():
        if not isinstance(item, dict) or "party" not in item or "angle" not in item:
            raise ParseError(f"equatorial entry {label!r} needs 'party' and 'angle'")
        out[label] = EquatorialMeasurement(int(item["party"]), parse_angle(item["angle"]))
    return out


def load_equatorial(path: str) -> dict[Label, EquatorialMeasurement]:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from None
    return equatorial_from_dict(data)
