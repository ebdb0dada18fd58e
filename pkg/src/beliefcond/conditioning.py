"""Mass assignments and the four revision rules.

Quantitative rules (``scr_condition``, ``bcr17_condition``) work on exact
:class:`fractions.Fraction` masses.  Qualitative rules (``qbcr1_condition``,
``qbcr2_condition``) move linguistic labels with saturating label addition.

Every rule sends the mass of a focal element ``Y`` that is not inside the
event ``A`` to ``Y & A`` when that is nonempty: since propositions are closed
under intersection, ``Y & A`` is the unique largest part of ``A`` contained
in ``Y``.  The rules differ in what happens to mass lying entirely outside
``A``.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    ImpossibleProblemError,
    ModelMismatchError,
    TotalConflictError,
    ValidationError,
)
from .labels import Label, LabelScale, label_sum
from .lattice import Model, Proposition, render

log = logging.getLogger(__name__)


def to_fraction(value) -> Fraction:
    """Exact conversion; floats go through their shortest decimal repr."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise ValidationError(f"not a number: {value!r}") from None
    raise ValidationError(f"unsupported mass value {value!r}")


def _items(source):
    if source is None:
        return []
    if isinstance(source, Mapping):
        return list(source.items())
    return list(source)


def _check_model(prop, model):
    if not isinstance(prop, Proposition):
        raise TypeError(f"focal elements must be Propositions, got {type(prop).__name__}")
    if prop.model is not model and prop.model != model:
        raise ModelMismatchError("focal element belongs to another model")


class BBA(Mapping):
    """Quantitative mass assignment; repeated keys accumulate, zero masses are dropped."""

    def __init__(self, model: Model, masses=None):
        self.model = model
        acc = defaultdict(Fraction)
        for prop, value in _items(masses):
            _check_model(prop, model)
            value = to_fraction(value)
            if value < 0:
                raise ValidationError(f"negative mass {value} on {render(prop)}")
            if prop.is_empty and value:
                raise ValidationError("mass assigned to a proposition that is empty under the model")
            acc[prop] += value
        self._masses = {p: v for p, v in acc.items() if v}

    def __getitem__(self, prop):
        return self._masses.get(prop, Fraction(0))

    def __contains__(self, prop):
        return prop in self._masses

    def __iter__(self):
        return iter(self._masses)

    def __len__(self):
        return len(self._masses)

    def __eq__(self, other):
        if isinstance(other, BBA):
            return self.model == other.model and self._masses == other._masses
        return NotImplemented

    def __repr__(self):
        body = ", ".join(f"{render(p)}: {v}" for p, v in self.sorted_items())
        return f"BBA({{{body}}})"

    @property
    def total(self) -> Fraction:
        return sum(self._masses.values(), Fraction(0))

    def sorted_items(self):
        return sorted(self._masses.items(), key=lambda kv: (render(kv[0]), kv[0].regions))

    @classmethod
    def point(cls, prop: Proposition) -> BBA:
        return cls(prop.model, {prop: 1})


class QBBA(Mapping):
    """Qualitative mass assignment; unlisted propositions carry ``L0``.

    Repeated keys are combined with label addition.
    """

    def __init__(self, model: Model, scale: LabelScale, masses=None):
        self.model = model
        self.scale = scale
        acc = {}
        for prop, label in _items(masses):
            _check_model(prop, model)
            if isinstance(label, int):
                label = Label(label, scale)
            if label.scale != scale:
                raise ValidationError(f"label {label} is not on scale {scale.max_index}")
            if prop.is_empty and label.index:
                raise ValidationError("mass assigned to a proposition that is empty under the model")
            acc[prop] = acc[prop] + label if prop in acc else label
        self._masses = {p: v for p, v in acc.items() if v.index}

    def __getitem__(self, prop):
        return self._masses.get(prop, self.scale.bottom)

    def __contains__(self, prop):
        return prop in self._masses

    def __iter__(self):
        return iter(self._masses)

    def __len__(self):
        return len(self._masses)

    def __eq__(self, other):
        if isinstance(other, QBBA):
            return (self.model == other.model and self.scale == other.scale
                    and self._masses == other._masses)
        return NotImplemented

    def __repr__(self):
        body = ", ".join(f"{render(p)}: {v}" for p, v in self.sorted_items())
        return f"QBBA({{{body}}})"

    def sorted_items(self):
        return sorted(self._masses.items(), key=lambda kv: (render(kv[0]), kv[0].regions))

    @property
    def raw_index_sum(self) -> int:
        return sum(label.index for label in self._masses.values())


@dataclass(frozen=True)
class QuasiNormStatus:
    clamped_sum: Label
    raw_index_sum: int
    exact: bool
    clamped_ok: bool

    def describe(self) -> str:
        top = self.clamped_sum.scale.max_index
        if self.exact:
            return f"exact ({self.raw_index_sum}/{top})"
        if self.clamped_ok:
            return f"clamped (raw {self.raw_index_sum}/{top})"
        return f"no (raw {self.raw_index_sum}/{top})"


def quasi_norm_status(qm: QBBA) -> QuasiNormStatus:
    labels = list(qm.values())
    if labels:
        total = label_sum(labels)
        clamped, raw = total.label, total.raw_index_sum
    else:
        clamped, raw = qm.scale.bottom, 0
    top = qm.scale.max_index
    return QuasiNormStatus(clamped, raw, raw == top, clamped.index == top)


@dataclass
class Diagnostics:
    ok: bool = True
    messages: list = field(default_factory=list)


def validate_bba(m: BBA) -> Diagnostics:
    """Raise :class:`ValidationError` unless ``m`` is a normalized assignment."""
    if not len(m):
        raise ValidationError("mass assignment has no focal element")
    total = m.total
    if total != 1:
        raise ValidationError(f"masses sum to {total}, expected 1")
    return Diagnostics(True, [f"sum: {total}"])


def validate_qbba(qm: QBBA) -> Diagnostics:
    if not len(qm):
        raise ValidationError("qualitative mass assignment has no focal element")
    status = quasi_norm_status(qm)
    diag = Diagnostics(True, [f"quasi-normalized: {status.describe()}"])
    if not status.exact:
        diag.messages.append("warning: prior is not exactly quasi-normalized")
    return diag


def _require_event(event: Proposition, model: Model) -> None:
    _check_model(event, model)
    if event.is_empty:
        raise ImpossibleProblemError("conditioning event is empty under model")


# -- quantitative -------------------------------------------------------------

def dempster_combine(m1: BBA, m2: BBA) -> tuple:
    """Dempster's rule; returns ``(combined, conflict)``."""
    if m1.model != m2.model:
        raise ModelMismatchError("cannot combine assignments over different models")
    joint = defaultdict(Fraction)
    conflict = Fraction(0)
    for y, a in m1.items():
        for z, b in m2.items():
            x = y & z
            if x.is_empty:
                conflict += a * b
            else:
                joint[x] += a * b
    if conflict == 1 or not joint:
        raise TotalConflictError("sources are in total conflict (K = 1)")
    scale = 1 - conflict
    return BBA(m1.model, {x: v / scale for x, v in joint.items()}), conflict


def scr_condition(m: BBA, event: Proposition) -> BBA:
    """Condition by Dempster-combining with a point mass on the event."""
    _require_event(event, m.model)
    return dempster_combine(m, BBA.point(event))[0]


def bcr17_condition(m: BBA, event: Proposition) -> BBA:
    """Redistribute mass outside the event proportionally onto its focal parts.

    For a focal ``W`` not inside the event: if focal parts of the event lie in
    ``W`` they share ``m(W)`` in proportion to their masses; otherwise
    ``m(W)`` goes to ``W & event``; if that is empty too, it joins a pool
    shared by all focal parts of the event in proportion to their masses.
    With no prior mass inside the event the result is a point mass on it.
    """
    _require_event(event, m.model)
    inside = {x: v for x, v in m.items() if x <= event}
    inside_total = sum(inside.values(), Fraction(0))
    if inside_total == 0:
        return BBA.point(event)

    out = defaultdict(Fraction, inside)
    pool = Fraction(0)
    for w, v in m.items():
        if w in inside:
            continue
        parts = [x for x in inside if x <= w]
        share_base = sum((inside[x] for x in parts), Fraction(0))
        if share_base:
            for x in parts:
                out[x] += v * inside[x] / share_base
            continue
        target = w & event
        if target:
            out[target] += v
        else:
            pool += v
    if pool:
        for x, v in inside.items():
            out[x] += pool * v / inside_total
    return BBA(m.model, out)


# -- qualitative ------------------------------------------------------------

@dataclass
class QualitativeTrace:
    """What a qualitative rule did besides computing the posterior."""

    focal_parts: int = 0
    split_transfers: list = field(default_factory=list)
    fallback_to_event: list = field(default_factory=list)
    leaked_index: int = 0
    notes: list = field(default_factory=list)


def _add(out: dict, prop: Proposition, label: Label) -> None:
    out[prop] = out[prop] + label if prop in out else label


def qbcr1_condition(qm: QBBA, event: Proposition, trace: QualitativeTrace | None = None) -> QBBA:
    """Prudent rule: mass with no part inside the event falls back to the event itself."""
    _require_event(event, qm.model)
    out = {}
    for y, label in qm.items():
        if y <= event:
            _add(out, y, label)
            continue
        target = y & event
        if target:
            _add(out, target, label)
        else:
            _add(out, event, label)
            if trace is not None:
                trace.fallback_to_event.append(y)
    return QBBA(qm.model, qm.scale, out)


def qbcr2_condition(qm: QBBA, event: Proposition, trace: QualitativeTrace | None = None) -> QBBA:
    """Uniform rule: mass with no part inside the event is split evenly.

    The split goes to the prior focal elements contained in the event, each
    receiving ``label // count``; the event itself receives the mass only
    when no such focal element exists.
    """
    _require_event(event, qm.model)
    if trace is None:
        trace = QualitativeTrace()
    focal_parts = [z for z in qm if z <= event]
    count = len(focal_parts)
    trace.focal_parts = count

    out = {}
    for y, label in qm.items():
        if y <= event:
            _add(out, y, label)
            continue
        target = y & event
        if target:
            _add(out, target, label)
        elif count:
            share = label // count
            for z in focal_parts:
                _add(out, z, share)
            trace.split_transfers.append(y)
            trace.leaked_index += label.index - share.index * count
        else:
            _add(out, event, label)
            trace.fallback_to_event.append(y)

    if trace.leaked_index:
        trace.notes.append(
            f"floor division lost {trace.leaked_index} label step(s) over "
            f"{len(trace.split_transfers)} split transfer(s)")
    if trace.split_transfers and event in qm:
        trace.notes.append("event itself is a prior focal element and received a uniform share")
    return QBBA(qm.model, qm.scale, out)


RULES = ("scr", "bcr17", "qbcr1", "qbcr2")
QUANTITATIVE_RULES = ("scr", "bcr17")
QUALITATIVE_RULES = ("qbcr1", "qbcr2")


@dataclass
class Revision:
    rule: str
    prior: object
    event: Proposition
    posterior: object
    notes: list = field(default_factory=list)


def condition(rule: str, prior, event: Proposition) -> Revision:
    """Validate ``prior`` and apply the named rule."""
    rule = rule.lower()
    if rule not in RULES:
        raise ValidationError(f"unknown rule {rule!r}; expected one of {', '.join(RULES)}")
    if rule in QUANTITATIVE_RULES:
        if not isinstance(prior, BBA):
            raise ValidationError(f"rule {rule} needs a quantitative mass assignment")
        validate_bba(prior)
        _require_event(event, prior.model)
        fn = scr_condition if rule == "scr" else bcr17_condition
        return Revision(rule, prior, event, fn(prior, event))

    if not isinstance(prior, QBBA):
        raise ValidationError(f"rule {rule} needs a qualitative mass assignment")
    diag = validate_qbba(prior)
    _require_event(event, prior.model)
    notes = [m for m in diag.messages if m.startswith("warning")]
    for message in notes:
        log.warning(message)
    trace = QualitativeTrace()
    fn = qbcr1_condition if rule == "qbcr1" else qbcr2_condition
    posterior = fn(prior, event, trace)
    notes.extend(trace.notes)
    return Revision(rule, prior, event, posterior, notes)
