"""Line-oriented scenario files.

Example::

    # comments start with '#'
    frame: A B C D
    labels: 6
    mode: hyper
    model: empty: A&C, A&D, B&C
    qmass:
      A = L1
      C = L1
      D = L4
    condition: A|B
    rule: qbcr1

``model`` is ``free``, ``shafer`` or ``empty:`` followed by comma separated
expressions whose regions are declared empty; further expressions may follow
on indented continuation lines.  ``mass:`` blocks hold ``expr = value`` rows
with rationals (``13/40``) or decimals (``0.325``); ``qmass:`` rows hold
labels (``L4``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .conditioning import (
    BBA,
    QBBA,
    QUALITATIVE_RULES,
    QUANTITATIVE_RULES,
    RULES,
    to_fraction,
)
from .errors import BeliefError, DomainError, ExpressionSyntaxError, ValidationError
from .labels import LabelScale
from .lattice import Expression, Frame, Mode, Model, canonicalize, parse_expression

_KEYS = ("frame", "labels", "mode", "model", "qmass", "mass", "condition", "rule")
_HEADER_RE = re.compile(r"^([a-z]+)\s*:\s*(.*)$")


class ScenarioError(ValidationError):
    def __init__(self, message, source="<string>", line=None, offset=None):
        where = source
        if line is not None:
            where += f":{line}"
            if offset is not None:
                where += f":{offset + 1}"
        super().__init__(f"{where}: {message}")
        self.source = source
        self.line = line
        self.offset = offset


@dataclass
class Scenario:
    source: str
    frame: Frame
    model: Model
    scale: LabelScale | None = None
    prior: BBA | QBBA | None = None
    condition: Expression | None = None
    rule: str | None = None
    duplicates: list = field(default_factory=list)

    @property
    def mode(self) -> Mode:
        return self.model.mode

    @property
    def qualitative(self) -> bool:
        return isinstance(self.prior, QBBA)

    def event(self):
        if self.condition is None:
            raise ScenarioError("scenario has no 'condition:'", self.source)
        return canonicalize(self.condition, self.model)


@dataclass
class _Entry:
    value: str
    line: int
    column: int


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    headers = {}
    blocks = {"model": [], "qmass": [], "mass": []}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        indented = line[0].isspace()
        match = _HEADER_RE.match(line.strip()) if not indented else None
        if match and match.group(1) in _KEYS:
            key, rest = match.group(1), match.group(2)
            if key in headers:
                raise ScenarioError(f"duplicate '{key}:'", source, lineno)
            column = line.index(rest) if rest else len(line)
            headers[key] = _Entry(rest, lineno, column)
            current = key if key in blocks else None
            if key in ("qmass", "mass") and rest:
                blocks[key].append(_Entry(rest, lineno, column))
            continue
        if match and not indented:
            raise ScenarioError(f"unknown key '{match.group(1)}'", source, lineno)
        if current is None:
            raise ScenarioError(f"unexpected line {line.strip()!r}", source, lineno)
        stripped = line.strip()
        blocks[current].append(_Entry(stripped, lineno, line.index(stripped)))

    def need(key):
        if key not in headers:
            raise ScenarioError(f"missing '{key}:'", source)
        return headers[key]

    def expr(entry, text=None, column=None):
        text = entry.value if text is None else text
        column = entry.column if column is None else column
        try:
            return parse_expression(text, frame)
        except ExpressionSyntaxError as exc:
            raise ScenarioError(str(exc).rsplit(" at offset", 1)[0],
                                source, entry.line, column + exc.offset) from None

    entry = need("frame")
    try:
        frame = Frame(entry.value.split())
    except DomainError as exc:
        raise ScenarioError(str(exc), source, entry.line) from None

    mode = Mode.HYPER
    if "mode" in headers:
        entry = headers["mode"]
        try:
            mode = Mode(entry.value.strip())
        except ValueError:
            raise ScenarioError(f"mode must be 'hyper' or 'super', got {entry.value!r}",
                                source, entry.line) from None

    model = _parse_model(headers.get("model"), blocks["model"], frame, mode, source, expr)

    scale = None
    if "labels" in headers:
        entry = headers["labels"]
        try:
            scale = LabelScale(int(entry.value))
        except (ValueError, DomainError):
            raise ScenarioError(f"'labels:' needs an integer >= 1, got {entry.value!r}",
                                source, entry.line) from None

    scenario = Scenario(source, frame, model, scale)

    if "qmass" in headers and "mass" in headers:
        raise ScenarioError("give either 'qmass:' or 'mass:', not both", source,
                            headers["mass"].line)
    if "qmass" in headers:
        if scale is None:
            raise ScenarioError("'qmass:' needs a 'labels:' scale", source, headers["qmass"].line)
        rows = _parse_rows(blocks["qmass"], model, source, expr, scenario)
        items = []
        for prop, value, row in rows:
            try:
                items.append((prop, scale.parse(value)))
            except DomainError as exc:
                raise ScenarioError(str(exc), source, row.line) from None
        scenario.prior = _build(lambda: QBBA(model, scale, items), source, headers["qmass"].line)
    elif "mass" in headers:
        rows = _parse_rows(blocks["mass"], model, source, expr, scenario)
        items = []
        for prop, value, row in rows:
            try:
                items.append((prop, to_fraction(value)))
            except ValidationError as exc:
                raise ScenarioError(str(exc), source, row.line) from None
        scenario.prior = _build(lambda: BBA(model, items), source, headers["mass"].line)

    if "condition" in headers:
        entry = headers["condition"]
        parsed = expr(entry)
        if mode is Mode.HYPER and parsed.has_complement:
            raise ScenarioError("complement is not allowed in hyper mode", source, entry.line)
        scenario.condition = parsed

    if "rule" in headers:
        entry = headers["rule"]
        rule = entry.value.strip().lower()
        if rule not in RULES:
            raise ScenarioError(f"unknown rule {rule!r}", source, entry.line)
        if rule in QUANTITATIVE_RULES and isinstance(scenario.prior, QBBA):
            raise ScenarioError(f"rule {rule} needs a 'mass:' block", source, entry.line)
        if rule in QUALITATIVE_RULES and isinstance(scenario.prior, BBA):
            raise ScenarioError(f"rule {rule} needs a 'qmass:' block", source, entry.line)
        scenario.rule = rule
    return scenario


def _build(factory, source, line):
    try:
        return factory()
    except BeliefError as exc:
        raise ScenarioError(str(exc), source, line) from None


def _parse_model(header, continuation, frame, mode, source, expr):
    if header is None:
        return Model.free(frame, mode)
    value = header.value.strip()
    if value == "free" and not continuation:
        return Model.free(frame, mode)
    if value == "shafer" and not continuation:
        return Model.shafer(frame, mode)
    if not value.startswith("empty"):
        raise ScenarioError(f"model must be 'free', 'shafer' or 'empty: ...', got {value!r}",
                            source, header.line)
    rest = value[len("empty"):].lstrip()
    if not rest.startswith(":"):
        raise ScenarioError("expected 'empty:'", source, header.line)
    first = _Entry(rest[1:], header.line, header.column + value.index(":") + 1)
    expressions = []
    for entry in [first, *continuation]:
        start = 0
        for piece in entry.value.split(","):
            if piece.strip():
                offset = start + len(piece) - len(piece.lstrip())
                expressions.append(expr(entry, piece.strip(), entry.column + offset))
            start += len(piece) + 1
    try:
        return Model.from_constraints(frame, expressions, mode)
    except DomainError as exc:
        raise ScenarioError(str(exc), source, header.line) from None


def _parse_rows(rows, model, source, expr, scenario):
    out = []
    seen = {}
    for row in rows:
        if "=" not in row.value:
            raise ScenarioError("expected 'expression = value'", source, row.line)
        left, value = row.value.rsplit("=", 1)
        parsed = expr(row, left.strip(), row.column)
        if model.mode is Mode.HYPER and parsed.has_complement:
            raise ScenarioError("complement is not allowed in hyper mode", source, row.line)
        prop = canonicalize(parsed, model)
        if prop.is_empty:
            raise ScenarioError(f"'{left.strip()}' is empty under the model", source, row.line)
        if prop in seen:
            scenario.duplicates.append((seen[prop], left.strip()))
        else:
            seen[prop] = left.strip()
        out.append((prop, value.strip(), row))
    if not out:
        raise ScenarioError("mass block is empty", source)
    return out


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read file: {exc.strerror}", str(path)) from None
    return parse_scenario(text, str(path))
